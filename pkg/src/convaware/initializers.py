"""Filter-bank initialization schemes.

The centerpiece builds each filter's input-channel slices so that their
half-spectra form orthonormal rows: draw an orthonormal basis, plant
each row as a real half-spectrum, inverse-transform to the spatial
kernel, add a little symmetry-breaking noise, and scale the whole bank
so its population variance lands exactly on 2/fan_in.

Planting needs care. A real half-spectrum only survives the
inverse-then-forward round trip if it is reachable from some real
kernel: in the self-conjugate columns (bin 0, and bin N/2 for even N)
conjugate symmetry ties row k to row (M-k) mod M, so a real planting
there must be symmetric under that reflection. The rows of an
unconstrained basis are not, and the inverse transform would silently
project away the asymmetric part, destroying orthogonality. So the
basis is drawn in the subspace of plantings that do survive, and an
isometric embedding maps basis coordinates onto full half-spectra.
Orthonormality is preserved exactly because the embedding is an
isometry.

Baseline schemes (He, Glorot, flat orthogonal, plain uniform/normal)
share the same request plumbing and determinism contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigError, DomainError, NumericError
from .orthobasis import _basis_stack
from .spectral import irfft1, irfft2
from .tensors import RealTensor, population_variance

__all__ = [
    "InitSpec",
    "FilterBank",
    "initialize",
    "cai_2d",
    "cai_1d",
    "he_normal",
    "he_uniform",
    "glorot_normal",
    "orthogonal_flat",
    "uniform_init",
    "normal_init",
    "spectrum_embedding_2d",
    "spectrum_dim_2d",
    "spectrum_dim_1d",
    "SCHEMES",
]

SCHEMES = ("cai", "he_normal", "he_uniform", "glorot_normal", "orthogonal", "uniform", "normal")

# RNG stream tags, combined with the user seed into SeedSequence entropy:
# (seed, 0, i) basis for filter i; (seed, 1) noise; (seed, 2) i.i.d. draws
_STREAM_BASIS = 0
_STREAM_NOISE = 1
_STREAM_IID = 2


@dataclass(frozen=True)
class InitSpec:
    """Everything needed to reproduce one initialization bit-for-bit.

    shape is (f, s, r, c) for 2-D kernels or (f, s, r) for 1-D. fan_in
    defaults to s*r*c (2-D) or s*r (1-D). eps_std and scale only affect
    the spectral scheme; gain/low/high/mu/sigma only their own schemes.
    """

    shape: tuple[int, ...]
    scheme: str = "cai"
    seed: int = 0
    eps_std: float = 0.05
    fan_in: int | None = None
    scale: bool = True
    gain: float = 1.0
    low: float = -0.05
    high: float = 0.05
    mu: float = 0.0
    sigma: float = 0.3

    def __post_init__(self) -> None:
        shape = tuple(int(v) for v in self.shape)
        object.__setattr__(self, "shape", shape)
        if len(shape) not in (3, 4):
            raise DomainError(f"shape must have rank 3 or 4, got {shape}")
        if min(shape) < 1:
            raise DomainError(f"extents must be positive, got {shape}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0:
            raise DomainError(f"seed must be a non-negative integer, got {self.seed!r}")
        if not (math.isfinite(self.eps_std) and self.eps_std >= 0.0):
            raise DomainError(f"eps_std must be finite and >= 0, got {self.eps_std}")
        if self.fan_in is not None and self.fan_in < 1:
            raise DomainError(f"fan_in must be positive, got {self.fan_in}")
        if not (math.isfinite(self.sigma) and self.sigma >= 0.0):
            raise DomainError(f"sigma must be finite and >= 0, got {self.sigma}")
        if not (math.isfinite(self.low) and math.isfinite(self.high)) or self.low > self.high:
            raise DomainError(f"need finite low <= high, got [{self.low}, {self.high}]")
        if not math.isfinite(self.gain):
            raise DomainError(f"gain must be finite, got {self.gain}")

    @property
    def rank(self) -> int:
        return len(self.shape)

    def resolved_fan_in(self) -> int:
        if self.fan_in is not None:
            return int(self.fan_in)
        return int(np.prod(self.shape[1:]))

    def resolved_fan_out(self) -> int:
        # f * r * c for 2-D kernels, f * r for 1-D
        return int(self.shape[0] * np.prod(self.shape[2:]))


@dataclass(frozen=True)
class FilterBank:
    """An initialized weight tensor together with the request that made it."""

    weights: RealTensor
    spec: InitSpec | None = None

    def __post_init__(self) -> None:
        if not np.all(np.isfinite(self.weights.data)):
            raise NumericError("filter bank contains non-finite entries")
        if self.spec is not None and self.weights.shape != self.spec.shape:
            raise DomainError(
                f"weights shape {self.weights.shape} does not match spec {self.spec.shape}"
            )


# ---------------------------------------------------------------------------
# feasible half-spectrum subspace
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def spectrum_embedding_2d(r: int, c: int) -> np.ndarray:
    """Isometry from free coordinates onto real M x L half-spectra that
    a real r x c kernel can actually produce.

    Free columns get one unit vector per row. Self-conjugate columns
    (l = 0, and l = c/2 for even c) get the reflection-symmetric
    combinations only: row 0, paired rows (k, M-k) at weight 1/sqrt(2),
    and row M/2 alone when M is even. Columns are orthonormal, so the
    map preserves inner products exactly.
    """
    if r < 1 or c < 1:
        raise DomainError(f"kernel extents must be positive, got {r}x{c}")
    M, L = r, c // 2 + 1
    selfconj = {0} | ({c // 2} if c % 2 == 0 and c > 1 else set())
    cols = []
    for l in range(L):
        if l in selfconj:
            e = np.zeros((M, L))
            e[0, l] = 1.0
            cols.append(e)
            for k in range(1, (M - 1) // 2 + 1):
                e = np.zeros((M, L))
                e[k, l] = e[M - k, l] = 1.0 / np.sqrt(2.0)
                cols.append(e)
            if M % 2 == 0:
                e = np.zeros((M, L))
                e[M // 2, l] = 1.0
                cols.append(e)
        else:
            for k in range(M):
                e = np.zeros((M, L))
                e[k, l] = 1.0
                cols.append(e)
    E = np.stack([e.ravel() for e in cols], axis=1)
    E.setflags(write=False)
    return E


def spectrum_dim_2d(r: int, c: int) -> int:
    """Dimension of the feasible planting subspace for an r x c kernel."""
    n_sc = 1 + (1 if c % 2 == 0 and c > 1 else 0)
    return r * (c // 2 + 1) - n_sc * ((r - 1) // 2)


def spectrum_dim_1d(r: int) -> int:
    """For length-r kernels every real half-spectrum is feasible."""
    if r < 1:
        raise DomainError(f"kernel length must be positive, got {r}")
    return r // 2 + 1


# ---------------------------------------------------------------------------
# spectral scheme
# ---------------------------------------------------------------------------


def _noise_rng(spec: InitSpec) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((spec.seed, _STREAM_NOISE)))


def _iid_rng(spec: InitSpec) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((spec.seed, _STREAM_IID)))


def _basis_seeds(spec: InitSpec) -> list[tuple[int, int, int]]:
    return [(spec.seed, _STREAM_BASIS, i) for i in range(spec.shape[0])]


def _add_noise(w: np.ndarray, spec: InitSpec) -> np.ndarray:
    if spec.eps_std > 0.0:
        w = w + _noise_rng(spec).normal(0.0, spec.eps_std, size=w.shape)
    return w


def _scale_to_target(w: np.ndarray, spec: InitSpec) -> np.ndarray:
    if not spec.scale:
        return w
    target = 2.0 / spec.resolved_fan_in()
    if w.size < 2:
        # variance is undefined for one element; match the magnitude instead
        v = float(np.mean(w * w))
    else:
        v = population_variance(RealTensor._wrap(w))
    if v == 0.0:
        raise NumericError(
            "bank variance is zero before scaling; set eps_std > 0 to break the degeneracy"
        )
    return w * math.sqrt(target / v)


def cai_2d(spec: InitSpec) -> FilterBank:
    """Per-filter orthonormal half-spectra, inverted to r x c kernels.

    For filter i the s channel slices come from one seeded basis: each
    basis row is planted (through the feasible-subspace isometry) as a
    real half-spectrum, inverse-transformed, nudged with N(0, eps_std^2)
    noise, and finally the whole bank is scaled by one global factor
    sqrt((2/fan_in) / Var) so the population variance is exactly
    2/fan_in.
    """
    _require_scheme(spec, "cai")
    if spec.rank != 4:
        raise DomainError(f"2-D initialization needs a rank-4 shape, got {spec.shape}")
    f, s, r, c = spec.shape
    E = spectrum_embedding_2d(r, c)
    bases = _basis_stack(s, E.shape[1], _basis_seeds(spec))
    half = (bases @ E.T).reshape(f, s, r, c // 2 + 1)
    w = irfft2(half.astype(np.complex128), (r, c))
    w = _scale_to_target(_add_noise(w, spec), spec)
    return FilterBank(RealTensor._wrap(w), spec)


def cai_1d(spec: InitSpec) -> FilterBank:
    """1-D variant: basis rows plant directly as length floor(r/2)+1 spectra."""
    _require_scheme(spec, "cai")
    if spec.rank != 3:
        raise DomainError(f"1-D initialization needs a rank-3 shape, got {spec.shape}")
    f, s, r = spec.shape
    bases = _basis_stack(s, spectrum_dim_1d(r), _basis_seeds(spec))
    w = irfft1(bases.astype(np.complex128), r)
    w = _scale_to_target(_add_noise(w, spec), spec)
    return FilterBank(RealTensor._wrap(w), spec)


# ---------------------------------------------------------------------------
# baseline schemes
# ---------------------------------------------------------------------------


def he_normal(spec: InitSpec) -> FilterBank:
    """i.i.d. N(0, 2/fan_in)."""
    _require_scheme(spec, "he_normal")
    sd = math.sqrt(2.0 / spec.resolved_fan_in())
    w = _iid_rng(spec).normal(0.0, sd, size=spec.shape)
    return FilterBank(RealTensor._wrap(w), spec)


def he_uniform(spec: InitSpec) -> FilterBank:
    """i.i.d. U(-b, b) with b = sqrt(6/fan_in); variance 2/fan_in."""
    _require_scheme(spec, "he_uniform")
    b = math.sqrt(6.0 / spec.resolved_fan_in())
    w = _iid_rng(spec).uniform(-b, b, size=spec.shape)
    return FilterBank(RealTensor._wrap(w), spec)


def glorot_normal(spec: InitSpec) -> FilterBank:
    """i.i.d. N(0, 2/(fan_in + fan_out)), fan_out = f*r*c (f*r for 1-D)."""
    _require_scheme(spec, "glorot_normal")
    sd = math.sqrt(2.0 / (spec.resolved_fan_in() + spec.resolved_fan_out()))
    w = _iid_rng(spec).normal(0.0, sd, size=spec.shape)
    return FilterBank(RealTensor._wrap(w), spec)


def orthogonal_flat(spec: InitSpec, gain: float | None = None) -> FilterBank:
    """Flatten to f x (s*r*c), fill with orthonormal-by-block rows, times gain."""
    _require_scheme(spec, "orthogonal")
    g = spec.gain if gain is None else float(gain)
    if not math.isfinite(g):
        raise DomainError(f"gain must be finite, got {g}")
    dim = int(np.prod(spec.shape[1:]))
    basis = _basis_stack(spec.shape[0], dim, [(spec.seed, _STREAM_BASIS, 0)])[0]
    return FilterBank(RealTensor._wrap((basis * g).reshape(spec.shape)), spec)


def uniform_init(spec: InitSpec, low: float | None = None, high: float | None = None) -> FilterBank:
    """i.i.d. U(low, high)."""
    _require_scheme(spec, "uniform")
    lo = spec.low if low is None else float(low)
    hi = spec.high if high is None else float(high)
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
        raise DomainError(f"need finite low <= high, got [{lo}, {hi}]")
    w = _iid_rng(spec).uniform(lo, hi, size=spec.shape)
    return FilterBank(RealTensor._wrap(w), spec)


def normal_init(spec: InitSpec, mu: float | None = None, sigma: float | None = None) -> FilterBank:
    """i.i.d. N(mu, sigma^2); sigma = 0 degenerates to the constant mu."""
    _require_scheme(spec, "normal")
    m = spec.mu if mu is None else float(mu)
    sd = spec.sigma if sigma is None else float(sigma)
    if not (math.isfinite(sd) and sd >= 0.0 and math.isfinite(m)):
        raise DomainError(f"need finite mu and sigma >= 0, got mu={m}, sigma={sd}")
    w = _iid_rng(spec).normal(m, sd, size=spec.shape)
    return FilterBank(RealTensor._wrap(w), spec)


def _require_scheme(spec: InitSpec, name: str) -> None:
    if spec.scheme != name:
        raise ConfigError(f"spec names scheme {spec.scheme!r} but {name} was invoked")


def _cai(spec: InitSpec) -> FilterBank:
    return cai_2d(spec) if spec.rank == 4 else cai_1d(spec)


_DISPATCH = {
    "cai": _cai,
    "he_normal": he_normal,
    "he_uniform": he_uniform,
    "glorot_normal": glorot_normal,
    "orthogonal": orthogonal_flat,
    "uniform": uniform_init,
    "normal": normal_init,
}


def initialize(spec: InitSpec) -> FilterBank:
    """Build the bank the spec asks for. Unknown schemes are an error,
    never a silent fallback."""
    fn = _DISPATCH.get(spec.scheme)
    if fn is None:
        raise ConfigError(f"unknown scheme {spec.scheme!r}; known: {', '.join(SCHEMES)}")
    return fn(spec)
