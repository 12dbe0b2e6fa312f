"""Built-in invariant sweep, runnable from the CLI.

Every check here re-derives its expectation independently of the code
under test: transforms are compared against the naive double-sum
oracles, bases against direct Gram and reconstruction arithmetic, banks
against freshly computed statistics. A correct build passes everything;
any failure is reported as a result line, not an exception.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .initializers import InitSpec, initialize
from .orthobasis import _jacobi_eigh_stack, _symmetrize_stack
from .spectral import (
    hermitian_extend_1d,
    hermitian_extend_2d,
    irfft1,
    irfft2,
    naive_forward_1d,
    naive_forward_2d,
    naive_inverse_2d,
    rfft1,
    rfft2,
)
from .tensors import RealTensor
from .spectral import circular_convolve_2d
from .verify import analyze, determinism_hash

__all__ = ["SelftestResult", "run_selftest"]

_ORTHO_SHAPES = ((16, 4, 3, 3), (8, 8, 5, 5), (4, 32, 3, 3))


@dataclass(frozen=True)
class SelftestResult:
    name: str
    ok: bool
    cases: int
    seconds: float
    detail: str = ""

    def to_line(self) -> str:
        status = "ok" if self.ok else "FAIL"
        line = f"{status} {self.name} ({self.cases} cases, {self.seconds:.2f}s)"
        return line + (f": {self.detail}" if self.detail else "")


def _check_round_trip(rng, n_cases):
    worst = 0.0
    two_d = int(n_cases * 0.6)
    for _ in range(two_d):
        m, n = rng.integers(1, 17, size=2)
        a = rng.standard_normal((m, n))
        worst = max(worst, float(np.max(np.abs(irfft2(rfft2(a), (m, n)) - a))))
    for _ in range(n_cases - two_d):
        n = int(rng.integers(1, 17))
        a = rng.standard_normal(n)
        worst = max(worst, float(np.max(np.abs(irfft1(rfft1(a), n) - a))))
    return worst <= 1e-10, n_cases, f"max round-trip error {worst:.3e}"


def _check_naive_oracle(rng, n_cases):
    worst = 0.0
    half = n_cases // 2
    for _ in range(half):
        m, n = rng.integers(1, 17, size=2)
        a = rng.standard_normal((m, n))
        worst = max(worst, float(np.max(np.abs(rfft2(a) - naive_forward_2d(a)))))
        A = rng.standard_normal((m, n // 2 + 1)) + 1j * rng.standard_normal((m, n // 2 + 1))
        ours = irfft2(A, (m, n))
        ref = naive_inverse_2d(hermitian_extend_2d(A, (m, n))).real
        worst = max(worst, float(np.max(np.abs(ours - ref))))
    for _ in range(n_cases - half):
        n = int(rng.integers(1, 17))
        a = rng.standard_normal(n)
        worst = max(worst, float(np.max(np.abs(rfft1(a) - naive_forward_1d(a)))))
    return worst <= 1e-10, n_cases, f"max oracle deviation {worst:.3e}"


def _check_convolution_theorem(rng, n_cases):
    worst = 0.0
    for _ in range(n_cases):
        m, n = rng.integers(1, 17, size=2)
        f = rng.standard_normal((m, n))
        x = rng.standard_normal((m, n))
        lhs = rfft2(circular_convolve_2d(RealTensor(f), RealTensor(x)).data)
        rhs = rfft2(f) * rfft2(x)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst <= 1e-9, n_cases, f"max duality deviation {worst:.3e}"


def _check_basis_bound(rng, n_cases):
    worst_entry = 0.0
    worst_recon = 0.0
    worst_orth = 0.0
    sizes = list(range(2, 17))
    per = max(1, -(-n_cases // len(sizes)))
    total = 0
    for n in sizes:
        gauss = rng.standard_normal((per, n, n))
        S = _symmetrize_stack(gauss)
        Q, lam = _jacobi_eigh_stack(S)
        total += per
        worst_entry = max(worst_entry, float(np.max(np.abs(Q))))
        recon = np.einsum("bij,bj,bkj->bik", Q, lam, Q)
        scale = np.linalg.norm(S, axis=(1, 2))
        worst_recon = max(
            worst_recon, float(np.max(np.max(np.abs(recon - S), axis=(1, 2)) / scale))
        )
        gram = np.einsum("bji,bjk->bik", Q, Q) - np.eye(n)
        worst_orth = max(worst_orth, float(np.max(np.abs(gram))))
    ok = worst_entry <= 1.0 + 1e-12 and worst_recon <= 1e-9 and worst_orth <= 1e-10
    detail = (
        f"max |Q| {worst_entry:.12f}, recon {worst_recon:.3e}, orthogonality {worst_orth:.3e}"
    )
    return ok, total, detail


def _check_magnitude_bound(rng, n_cases):
    shapes = ((1, 1), (2, 2), (3, 3), (4, 4), (5, 5), (3, 5), (8, 8), (16, 16))
    per = max(1, n_cases // len(shapes))
    worst = -np.inf
    total = 0
    for m, n in shapes:
        L = n // 2 + 1
        A = rng.standard_normal((per, m, L)) + 1j * rng.standard_normal((per, m, L))
        w = irfft2(A, (m, n))
        bound = np.sum(np.abs(hermitian_extend_2d(A, (m, n))), axis=(1, 2)) / (m * n)
        excess = np.max(np.abs(w), axis=(1, 2)) - bound
        worst = max(worst, float(np.max(excess)))
        total += per
    for shape in _ORTHO_SHAPES:
        bank = initialize(InitSpec(shape=shape, scheme="cai", eps_std=0.0, scale=False, seed=7))
        margin = analyze(bank).bound_margin
        worst = max(worst, -margin)
        total += 1
    return worst <= 1e-12, total, f"max bound excess {worst:.3e}"


def _check_orthogonality(rng, n_cases):
    worst = 0.0
    for shape in _ORTHO_SHAPES:
        bank = initialize(InitSpec(shape=shape, scheme="cai", eps_std=0.0, seed=11))
        worst = max(worst, analyze(bank).spectral_gram_residual)
    return worst < 1e-8, len(_ORTHO_SHAPES), f"max Gram residual {worst:.3e}"


def _check_variance(rng, n_cases):
    worst_exact = 0.0
    for shape in ((16, 4, 3, 3), (8, 8, 5, 5), (32, 16, 9)):
        spec = InitSpec(shape=shape, scheme="cai", seed=3)
        report = analyze(initialize(spec), spectral=False)
        worst_exact = max(worst_exact, abs(report.variance / report.variance_target - 1.0))
    worst_iid = 0.0
    for scheme in ("he_normal", "he_uniform", "glorot_normal"):
        spec = InitSpec(shape=(64, 64, 16, 16), scheme=scheme, seed=5)
        report = analyze(initialize(spec), spectral=False)
        worst_iid = max(worst_iid, abs(report.variance / report.variance_target - 1.0))
    ok = worst_exact <= 1e-9 and worst_iid <= 0.01
    return ok, 6, f"scaled dev {worst_exact:.3e}, i.i.d. dev {worst_iid:.4f}"


def _check_determinism(rng, n_cases):
    specs = [
        InitSpec(shape=(4, 3, 3, 3), scheme="cai", seed=9),
        InitSpec(shape=(4, 3, 5), scheme="cai", seed=9),
        InitSpec(shape=(4, 3, 3, 3), scheme="he_normal", seed=9),
        InitSpec(shape=(4, 3, 3, 3), scheme="he_uniform", seed=9),
        InitSpec(shape=(4, 3, 3, 3), scheme="glorot_normal", seed=9),
        InitSpec(shape=(4, 3, 3, 3), scheme="orthogonal", seed=9),
        InitSpec(shape=(4, 3, 3, 3), scheme="uniform", seed=9),
        InitSpec(shape=(4, 3, 3, 3), scheme="normal", seed=9),
    ]
    for spec in specs:
        a = initialize(spec)
        b = initialize(spec)
        if not np.array_equal(a.weights.data, b.weights.data):
            return False, len(specs), f"{spec.scheme} reruns differ bitwise"
        if determinism_hash(a) != determinism_hash(b):
            return False, len(specs), f"{spec.scheme} hash mismatch"
    return True, len(specs), "all schemes bit-identical on rerun"


_CHECKS = (
    ("round-trip", _check_round_trip, 500),
    ("naive-oracle", _check_naive_oracle, 200),
    ("convolution-theorem", _check_convolution_theorem, 200),
    ("basis-entry-bound", _check_basis_bound, 1000),
    ("magnitude-bound", _check_magnitude_bound, 10_000),
    ("spectral-orthogonality", _check_orthogonality, 3),
    ("variance-contract", _check_variance, 6),
    ("determinism", _check_determinism, 8),
)


def run_selftest(seed: int = 2024, fast: bool = False) -> list[SelftestResult]:
    """Run every invariant sweep; fast mode cuts case counts tenfold."""
    results = []
    for index, (name, fn, n_cases) in enumerate(_CHECKS):
        if fast:
            n_cases = max(10, n_cases // 10)
        rng = np.random.default_rng(np.random.SeedSequence((seed, index)))
        start = time.monotonic()
        try:
            ok, cases, detail = fn(rng, n_cases)
        except Exception as exc:  # a crash is a failure, not an abort
            ok, cases, detail = False, 0, f"{type(exc).__name__}: {exc}"
        results.append(SelftestResult(name, ok, cases, time.monotonic() - start, detail))
    return results
