"""Measurement and machine-readable property checks for filter banks.

analyze() computes one StatsReport per bank: moments, the extremal
entry, the per-filter spectral Gram residual, and the margin against
the inverse-transform magnitude bound. check() turns a named policy
into a list of pass/fail results; failures are results, not errors.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError
from .initializers import FilterBank, InitSpec, initialize, spectrum_dim_1d, spectrum_dim_2d
from .spectral import hermitian_extend_1d, hermitian_extend_2d, rfft1, rfft2
from .tensors import RealTensor, population_variance

__all__ = [
    "StatsReport",
    "CheckResult",
    "Policy",
    "POLICIES",
    "analyze",
    "check",
    "determinism_hash",
]

_GRAM_TOL = 1e-8
_BOUND_SLACK = 1e-12


def determinism_hash(bank) -> str:
    """64-bit hash of the little-endian float64 byte stream of the weights.

    Identical across runs, platforms, and processes for identical banks;
    the CLI prints it so reproducibility can be asserted from outside.
    """
    w = bank.weights.data if isinstance(bank, FilterBank) else bank.data
    payload = np.ascontiguousarray(w, dtype="<f8").tobytes()
    return hashlib.blake2b(payload, digest_size=8).hexdigest()


@dataclass(frozen=True)
class StatsReport:
    """Per-bank measurements. All numeric fields are finite."""

    mean: float
    variance: float
    variance_target: float
    max_abs: float
    spectral_gram_residual: float
    bound_margin: float
    seed: int | None
    shape: tuple[int, ...]

    _FLOAT_FIELDS = (
        "mean",
        "variance",
        "variance_target",
        "max_abs",
        "spectral_gram_residual",
        "bound_margin",
    )

    def to_lines(self) -> list[str]:
        lines = [f"{name}={getattr(self, name)!r}" for name in self._FLOAT_FIELDS]
        lines.append(f"seed={'none' if self.seed is None else self.seed}")
        lines.append("shape=" + ",".join(str(v) for v in self.shape))
        return lines

    def to_dict(self) -> dict:
        out = {name: getattr(self, name) for name in self._FLOAT_FIELDS}
        out["seed"] = self.seed
        out["shape"] = list(self.shape)
        return out


def _default_fan_in(shape: tuple[int, ...]) -> int:
    return int(np.prod(shape[1:]))


def _resolved_fan_in(bank: FilterBank) -> int:
    if bank.spec is not None:
        return bank.spec.resolved_fan_in()
    return _default_fan_in(bank.weights.shape)


def _variance_target(bank: FilterBank) -> float:
    """The scheme's intended population variance; 2/fan_in when unknown."""
    spec = bank.spec
    shape = bank.weights.shape
    if spec is None or spec.scheme in ("cai", "he_normal", "he_uniform"):
        return 2.0 / _resolved_fan_in(bank)
    if spec.scheme == "glorot_normal":
        return 2.0 / (spec.resolved_fan_in() + spec.resolved_fan_out())
    if spec.scheme == "uniform":
        return (spec.high - spec.low) ** 2 / 12.0
    if spec.scheme == "normal":
        return spec.sigma**2
    if spec.scheme == "orthogonal":
        # unit rows of length s*r*c scaled by gain: mean square gain^2/dim
        return spec.gain**2 / _default_fan_in(shape)
    return 2.0 / _resolved_fan_in(bank)


def _half_spectra(w: np.ndarray) -> tuple[np.ndarray, int, float]:
    """Flattened per-slice half-spectra, the basis block size, and the
    number of spatial cells (for the magnitude bound)."""
    if w.ndim == 4:
        f, s, r, c = w.shape
        spectra = rfft2(w)
        full = hermitian_extend_2d(spectra, (r, c))
        block = spectrum_dim_2d(r, c)
        cells = r * c
    elif w.ndim == 3:
        f, s, r = w.shape
        spectra = rfft1(w)
        full = hermitian_extend_1d(spectra, r)
        block = spectrum_dim_1d(r)
        cells = r
    else:
        raise DomainError(f"banks must have rank 3 or 4, got rank {w.ndim}")
    flat = spectra.reshape(f, s, -1)
    spatial_axes = tuple(range(2, w.ndim))
    bound = np.sum(np.abs(full), axis=spatial_axes) / cells
    margin = float(np.min(bound - np.max(np.abs(w), axis=spatial_axes)))
    return flat, block, margin


def _gram_residual(flat: np.ndarray, block: int) -> float:
    """Max deviation of each filter's blockwise Gram matrix from a
    multiple of the identity, normalized by the block's diagonal mean."""
    f, s, _ = flat.shape
    worst = 0.0
    for start in range(0, s, block):
        V = flat[:, start : start + block, :]
        G = np.einsum("fad,fbd->fab", V, np.conj(V))
        n = V.shape[1]
        diag_mean = np.real(np.trace(G, axis1=1, axis2=2)) / n
        eye = np.eye(n)
        for i in range(f):
            g = diag_mean[i]
            dev = np.max(np.abs(G[i] - g * eye)) if g == 0.0 else np.max(np.abs(G[i] / g - eye))
            worst = max(worst, float(dev))
    return worst


def analyze(bank: FilterBank, *, spectral: bool = True) -> StatsReport:
    """Measure a bank. Read-only: the weights are untouched.

    spectral=False skips the transform-based fields (they read as 0.0),
    for quick looks at very large banks.
    """
    w = bank.weights.data
    mean = float(np.mean(w))
    variance = population_variance(bank.weights) if w.size >= 2 else 0.0
    max_abs = float(np.max(np.abs(w)))
    if spectral:
        flat, block, margin = _half_spectra(w)
        residual = _gram_residual(flat, block)
    else:
        residual, margin = 0.0, 0.0
    return StatsReport(
        mean=mean,
        variance=variance,
        variance_target=_variance_target(bank),
        max_abs=max_abs,
        spectral_gram_residual=residual,
        bound_margin=margin,
        seed=None if bank.spec is None else bank.spec.seed,
        shape=bank.weights.shape,
    )


# ---------------------------------------------------------------------------
# named assertion policies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float | str
    limit: float | str
    detail: str = ""

    def to_line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        line = f"{self.name}: {status} value={self.value!r} limit={self.limit!r}"
        return line + (f" {self.detail}" if self.detail else "")


@dataclass(frozen=True)
class Policy:
    """Which named assertions apply, and how the variance target is set.

    variance_rtol None means the statistical tolerance
    max(0.01, 6*sqrt(2/N)) for i.i.d. banks; a number means a hard
    relative tolerance (the spectral scheme's scale step is exact, so
    its policies pin 1e-9).
    """

    name: str
    assertions: tuple[str, ...]
    variance_rtol: float | None = None
    glorot_target: bool = False


POLICIES: dict[str, Policy] = {
    "cai": Policy(
        name="cai",
        assertions=("variance-match", "mean-band", "determinism-hash"),
        variance_rtol=1e-9,
    ),
    "cai-exact": Policy(
        name="cai-exact",
        assertions=("variance-match", "mean-band", "spectral-orthogonality", "determinism-hash"),
        variance_rtol=1e-9,
    ),
    "cai-prescale": Policy(
        name="cai-prescale",
        assertions=("mean-band", "entry-bound", "spectral-orthogonality", "determinism-hash"),
    ),
    "he_normal": Policy(
        name="he_normal",
        assertions=("variance-match", "mean-band", "determinism-hash"),
    ),
    "he_uniform": Policy(
        name="he_uniform",
        assertions=("variance-match", "mean-band", "determinism-hash"),
    ),
    "glorot_normal": Policy(
        name="glorot_normal",
        assertions=("variance-match", "mean-band", "determinism-hash"),
        glorot_target=True,
    ),
}


def _policy_variance_target(policy: Policy, bank: FilterBank, fan_in: int | None) -> float:
    resolved = fan_in if fan_in is not None else _resolved_fan_in(bank)
    if policy.glorot_target:
        shape = bank.weights.shape
        fan_out = int(shape[0] * np.prod(shape[2:]))
        return 2.0 / (resolved + fan_out)
    return 2.0 / resolved


def check(
    bank: FilterBank,
    policy,
    *,
    expected_hash: str | None = None,
    fan_in: int | None = None,
) -> list[CheckResult]:
    """Run a policy's named assertions against a bank.

    policy is a Policy or a registered policy name. fan_in overrides the
    variance-target denominator for banks whose request is not attached
    (a file says nothing about the fan_in it was built for). The
    determinism-hash assertion regenerates the bank from its spec and
    compares hashes; when the bank has no spec it compares against
    expected_hash instead, and is omitted if neither is available.
    """
    if isinstance(policy, str):
        try:
            policy = POLICIES[policy]
        except KeyError:
            raise ConfigError(
                f"unknown policy {policy!r}; known: {', '.join(sorted(POLICIES))}"
            ) from None
    if fan_in is not None and fan_in < 1:
        raise ConfigError(f"fan_in must be positive, got {fan_in}")
    n = bank.weights.size
    results: list[CheckResult] = []

    # measured lazily: hash-only policies must work on tensors whose
    # rank the spectral measurements cannot handle
    report = None

    def measured() -> StatsReport:
        nonlocal report
        if report is None:
            report = analyze(bank)
        return report

    for name in policy.assertions:
        if name == "variance-match":
            target = _policy_variance_target(policy, bank, fan_in)
            tol = policy.variance_rtol
            if tol is None:
                tol = max(0.01, float(6.0 * np.sqrt(2.0 / n)))
            value = abs(measured().variance / target - 1.0)
            results.append(
                CheckResult(
                    name=name,
                    passed=value <= tol,
                    value=value,
                    limit=tol,
                    detail=f"variance={measured().variance!r} target={target!r}",
                )
            )
        elif name == "mean-band":
            if "variance-match" in policy.assertions:
                band_var = _policy_variance_target(policy, bank, fan_in)
            else:
                band_var = max(measured().variance, 0.0)
            band = float(4.0 * np.sqrt(band_var) / np.sqrt(n))
            value = abs(measured().mean)
            results.append(
                CheckResult(name=name, passed=value <= band, value=value, limit=band)
            )
        elif name == "entry-bound":
            results.append(
                CheckResult(
                    name=name,
                    passed=measured().bound_margin >= -_BOUND_SLACK,
                    value=measured().bound_margin,
                    limit=-_BOUND_SLACK,
                    detail="min over filters of bound minus extremal entry",
                )
            )
        elif name == "spectral-orthogonality":
            value = measured().spectral_gram_residual
            results.append(
                CheckResult(name=name, passed=value < _GRAM_TOL, value=value, limit=_GRAM_TOL)
            )
        elif name == "determinism-hash":
            got = determinism_hash(bank)
            if bank.spec is not None:
                again = determinism_hash(initialize(bank.spec))
                results.append(
                    CheckResult(
                        name=name,
                        passed=got == again,
                        value=got,
                        limit=again,
                        detail="regenerated from spec",
                    )
                )
            elif expected_hash is not None:
                results.append(
                    CheckResult(name=name, passed=got == expected_hash, value=got, limit=expected_hash)
                )
            # no spec and no expectation: nothing to compare, omitted
        else:
            raise ConfigError(f"policy {policy.name!r} names unknown assertion {name!r}")
    return results
