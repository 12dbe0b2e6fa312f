"""Real-to-complex forward and complex-to-real inverse DFTs in 1-D and 2-D.

Conventions, fixed across the whole package:

  forward   A[k,l] = sum_m sum_n a[m,n] exp(-2*pi*i*(m*k/M + n*l/N))
  inverse   a[m,n] = (1/(M*N)) sum_k sum_l A[k,l] exp(+2*pi*i*(m*k/M + n*l/N))

The forward transform carries no normalization; the inverse carries all
of 1/(M*N). Real inputs make the spectrum Hermitian-symmetric, so only
the non-redundant half along the last axis is stored: floor(N/2)+1
columns. The inverse reconstructs the omitted half by conjugate
symmetry before transforming back.

Two independent computation routes live here on purpose. The fast path
is an iterative radix-2 FFT plus Bluestein's chirp-z algorithm for
lengths that are not powers of two. The naive_* functions evaluate the
defining double sums directly in O(M^2 N^2); they are slow, obviously
correct, and kept permanently as the oracle the fast path is tested
against. Do not delete or reroute them through the fast path.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DomainError, NumericError
from .tensors import ComplexTensor, RealTensor

__all__ = [
    "SpectralShape2",
    "forward_1d",
    "forward_2d",
    "inverse_1d",
    "inverse_2d",
    "circular_convolve_2d",
    "rfft1",
    "rfft2",
    "irfft1",
    "irfft2",
    "hermitian_extend_1d",
    "hermitian_extend_2d",
    "naive_forward_1d",
    "naive_forward_2d",
    "naive_inverse_1d",
    "naive_inverse_2d",
]

# imaginary residue allowed when inverting a symmetry-consistent spectrum
_RESIDUE_TOL = 1e-9
# how exactly the self-conjugate bins must honor conjugate symmetry to
# count as consistent (relative to the spectrum's magnitude scale)
_CONSISTENCY_RTOL = 1e-12


class SpectralShape2:
    """Half-spectrum extents for a real signal of shape r x c."""

    __slots__ = ("rows_out", "cols_out")

    def __init__(self, rows_out: int, cols_out: int) -> None:
        if rows_out < 1 or cols_out < 1:
            raise DomainError("spectral extents must be positive")
        self.rows_out = rows_out
        self.cols_out = cols_out

    @classmethod
    def for_target(cls, r: int, c: int) -> "SpectralShape2":
        if r < 1 or c < 1:
            raise DomainError("target extents must be positive")
        return cls(r, c // 2 + 1)

    def as_tuple(self) -> tuple[int, int]:
        return (self.rows_out, self.cols_out)

    def __eq__(self, other) -> bool:
        return isinstance(other, SpectralShape2) and self.as_tuple() == other.as_tuple()

    def __repr__(self) -> str:
        return f"SpectralShape2(rows_out={self.rows_out}, cols_out={self.cols_out})"


# ---------------------------------------------------------------------------
# fast path: radix-2 FFT with Bluestein fallback, batched over leading axes
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _bitrev_indices(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    rev.setflags(write=False)
    return rev


@lru_cache(maxsize=None)
def _twiddles(half: int, sign: int) -> np.ndarray:
    k = np.arange(half)
    w = np.exp(sign * 1j * np.pi * k / half)
    w.setflags(write=False)
    return w


def _fft_pow2(x: np.ndarray, sign: int) -> np.ndarray:
    """Unnormalized DFT along the last axis; length must be a power of two."""
    n = x.shape[-1]
    if n == 1:
        return x.astype(np.complex128, copy=True)
    y = np.ascontiguousarray(x, dtype=np.complex128)[..., _bitrev_indices(n)]
    size = 2
    while size <= n:
        half = size // 2
        w = _twiddles(half, sign)
        yv = y.reshape(y.shape[:-1] + (n // size, size))
        even = yv[..., :half].copy()
        odd = yv[..., half:] * w
        yv[..., :half] = even + odd
        yv[..., half:] = even - odd
        size *= 2
    return y


@lru_cache(maxsize=None)
def _bluestein_tables(n: int, sign: int):
    # chirp w^(k^2/2) with w = exp(sign*2*pi*i/n); exponents reduced
    # mod 2n so the phase argument stays exact for any n
    k = np.arange(n)
    e = (k * k) % (2 * n)
    chirp = np.exp(sign * 1j * np.pi * e / n)
    m = 1 << (2 * n - 1).bit_length()
    b = np.zeros(m, dtype=np.complex128)
    b[:n] = np.conj(chirp)
    b[m - n + 1:] = np.conj(chirp[1:])[::-1]
    fb = _fft_pow2(b, -1)
    chirp.setflags(write=False)
    fb.setflags(write=False)
    return chirp, fb, m


def _fft_bluestein(x: np.ndarray, sign: int) -> np.ndarray:
    n = x.shape[-1]
    chirp, fb, m = _bluestein_tables(n, sign)
    u = np.zeros(x.shape[:-1] + (m,), dtype=np.complex128)
    u[..., :n] = x * chirp
    conv = _fft_pow2(_fft_pow2(u, -1) * fb, +1) / m
    return conv[..., :n] * chirp


def _fft_last(x: np.ndarray, sign: int) -> np.ndarray:
    """Unnormalized DFT of any length along the last axis, batched."""
    n = x.shape[-1]
    if n == 1:
        return x.astype(np.complex128, copy=True)
    if n & (n - 1) == 0:
        return _fft_pow2(x, sign)
    return _fft_bluestein(np.asarray(x, dtype=np.complex128), sign)


def _ifft_last(x: np.ndarray) -> np.ndarray:
    return _fft_last(x, +1) / x.shape[-1]


def _ifft_axis2(x: np.ndarray) -> np.ndarray:
    return np.swapaxes(_ifft_last(np.ascontiguousarray(np.swapaxes(x, -1, -2))), -1, -2)


# ---------------------------------------------------------------------------
# half-spectrum transforms on plain arrays (batched over leading axes)
# ---------------------------------------------------------------------------


def rfft1(a: np.ndarray) -> np.ndarray:
    """Real (..., N) -> complex (..., floor(N/2)+1), unnormalized forward."""
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[-1]
    full = _fft_last(a.astype(np.complex128), -1)
    return np.ascontiguousarray(full[..., : n // 2 + 1])


def rfft2(a: np.ndarray) -> np.ndarray:
    """Real (..., M, N) -> complex (..., M, floor(N/2)+1)."""
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[-1]
    full = _fft_last(a.astype(np.complex128), -1)
    half = np.ascontiguousarray(full[..., : n // 2 + 1])
    tr = np.ascontiguousarray(np.swapaxes(half, -1, -2))
    return np.ascontiguousarray(np.swapaxes(_fft_last(tr, -1), -1, -2))


def hermitian_extend_1d(A: np.ndarray, n: int) -> np.ndarray:
    """Rebuild the full length-n spectrum from its stored half.

    Omitted bins l in floor(N/2)+1..N-1 are filled with conj(A[N-l]).
    Stored bins, the self-conjugate ones included, pass through as-is.
    """
    A = np.asarray(A, dtype=np.complex128)
    half = n // 2 + 1
    if A.shape[-1] != half:
        raise DomainError(f"half-spectrum has {A.shape[-1]} bins, target {n} needs {half}")
    full = np.empty(A.shape[:-1] + (n,), dtype=np.complex128)
    full[..., :half] = A
    if n > half:
        src = n - np.arange(half, n)
        full[..., half:] = np.conj(A[..., src])
    return full


def hermitian_extend_2d(A: np.ndarray, target: tuple[int, int]) -> np.ndarray:
    """Rebuild the full M x N spectrum: full[k, N-l] = conj(A[(M-k) mod M, l])."""
    A = np.asarray(A, dtype=np.complex128)
    M, N = int(target[0]), int(target[1])
    half = N // 2 + 1
    if A.shape[-2] != M or A.shape[-1] != half:
        raise DomainError(f"half-spectrum shape {A.shape[-2:]} does not match target {(M, N)}")
    full = np.empty(A.shape[:-1] + (N,), dtype=np.complex128)
    full[..., :half] = A
    if N > half:
        krefl = (M - np.arange(M)) % M
        src = N - np.arange(half, N)
        full[..., half:] = np.conj(A[..., krefl, :][..., src])
    return full


def _consistency_tol(A: np.ndarray) -> float:
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    return _CONSISTENCY_RTOL * max(1.0, scale)


def _consistent_1d(A: np.ndarray, n: int) -> bool:
    # a real signal's spectrum has real DC and (even n) Nyquist bins
    tol = _consistency_tol(A)
    dev = float(np.max(np.abs(A[..., 0].imag)))
    if n % 2 == 0 and n > 1:
        dev = max(dev, float(np.max(np.abs(A[..., n // 2].imag))))
    return dev <= tol


def _consistent_2d(A: np.ndarray, M: int, N: int) -> bool:
    # self-conjugate columns must satisfy col[k] == conj(col[(M-k) mod M])
    tol = _consistency_tol(A)
    krefl = (M - np.arange(M)) % M
    cols = [0] + ([N // 2] if N % 2 == 0 and N > 1 else [])
    dev = 0.0
    for l in cols:
        col = A[..., :, l]
        dev = max(dev, float(np.max(np.abs(col - np.conj(col[..., krefl])))))
    return dev <= tol


def _take_real(y: np.ndarray, consistent: bool, scale: float) -> np.ndarray:
    resid = float(np.max(np.abs(y.imag)))
    if consistent and resid >= _RESIDUE_TOL * max(1.0, scale):
        raise NumericError(f"imaginary residue {resid:.3e} on a symmetry-consistent spectrum")
    return np.ascontiguousarray(y.real)


def irfft1(A: np.ndarray, n: int) -> np.ndarray:
    """Complex (..., floor(N/2)+1) -> real (..., n) via Hermitian extension."""
    A = np.asarray(A, dtype=np.complex128)
    full = hermitian_extend_1d(A, n)
    y = _ifft_last(full)
    return _take_real(y, _consistent_1d(A, n), float(np.max(np.abs(A))) if A.size else 0.0)


def irfft2(A: np.ndarray, target: tuple[int, int]) -> np.ndarray:
    """Complex (..., M, floor(N/2)+1) -> real (..., M, N)."""
    A = np.asarray(A, dtype=np.complex128)
    M, N = int(target[0]), int(target[1])
    full = hermitian_extend_2d(A, (M, N))
    y = _ifft_axis2(_ifft_last(full))
    return _take_real(y, _consistent_2d(A, M, N), float(np.max(np.abs(A))) if A.size else 0.0)


# ---------------------------------------------------------------------------
# typed operations
# ---------------------------------------------------------------------------


def forward_2d(a: RealTensor) -> ComplexTensor:
    """Half-spectrum DFT of a rank-2 tensor. No forward normalization."""
    if a.rank != 2:
        raise DomainError(f"forward_2d needs rank 2, got rank {a.rank}")
    return ComplexTensor._wrap(rfft2(a.data))


def inverse_2d(A: ComplexTensor, target: tuple[int, int]) -> RealTensor:
    """Inverse of forward_2d; carries the full 1/(M*N) normalization.

    The omitted half is rebuilt by conjugate symmetry, so any stored
    half-spectrum is accepted. The imaginary residue is discarded; for
    symmetry-consistent input it is checked to be negligible first.
    """
    if A.rank != 2:
        raise DomainError(f"inverse_2d needs rank 2, got rank {A.rank}")
    target = tuple(int(v) for v in target)
    if len(target) != 2 or min(target) < 1:
        raise DomainError(f"target must be two positive extents, got {target}")
    M, N = target
    if A.shape != (M, N // 2 + 1):
        raise DomainError(f"spectrum shape {A.shape} inconsistent with target {target}")
    return RealTensor._wrap(irfft2(A.data, target))


def forward_1d(a: RealTensor) -> ComplexTensor:
    """Half-spectrum DFT of a rank-1 tensor."""
    if a.rank != 1:
        raise DomainError(f"forward_1d needs rank 1, got rank {a.rank}")
    return ComplexTensor._wrap(rfft1(a.data))


def inverse_1d(A: ComplexTensor, target: int) -> RealTensor:
    """Inverse of forward_1d; carries the full 1/N normalization."""
    if A.rank != 1:
        raise DomainError(f"inverse_1d needs rank 1, got rank {A.rank}")
    n = int(target)
    if n < 1:
        raise DomainError(f"target length must be positive, got {target}")
    if A.shape != (n // 2 + 1,):
        raise DomainError(f"spectrum shape {A.shape} inconsistent with target {n}")
    return RealTensor._wrap(irfft1(A.data, n))


def circular_convolve_2d(f: RealTensor, x: RealTensor) -> RealTensor:
    """Direct-sum circular convolution, indices wrapped modulo the extents.

    (f * x)[m,n] = sum_p sum_q f[p,q] x[(m-p) mod M, (n-q) mod N]

    Computed from the definition, not through the transforms: this is
    the independent side of the convolution-theorem duality test.
    """
    if f.rank != 2 or x.rank != 2:
        raise DomainError("circular_convolve_2d needs two rank-2 tensors")
    if f.shape != x.shape:
        raise DomainError(f"shape mismatch {f.shape} vs {x.shape}")
    M, N = f.shape
    mp = (np.arange(M)[:, None] - np.arange(M)[None, :]) % M
    nq = (np.arange(N)[:, None] - np.arange(N)[None, :]) % N
    shifted = x.data[mp[:, None, :, None], nq[None, :, None, :]]
    return RealTensor._wrap(np.einsum("pq,mnpq->mn", f.data, shifted))


# ---------------------------------------------------------------------------
# naive oracles: literal double sums, permanently retained
# ---------------------------------------------------------------------------


def naive_forward_2d(a: np.ndarray) -> np.ndarray:
    """Half-spectrum by the defining sum, one retained bin at a time."""
    a = np.asarray(a, dtype=np.float64)
    M, N = a.shape
    m = np.arange(M)[:, None]
    n = np.arange(N)[None, :]
    out = np.empty((M, N // 2 + 1), dtype=np.complex128)
    for k in range(M):
        for l in range(N // 2 + 1):
            phase = np.exp(-2j * np.pi * (m * k / M + n * l / N))
            out[k, l] = np.sum(a * phase)
    return out


def naive_inverse_2d(A_full: np.ndarray) -> np.ndarray:
    """Full-spectrum inverse by the defining sum; complex output kept."""
    A_full = np.asarray(A_full, dtype=np.complex128)
    M, N = A_full.shape
    k = np.arange(M)[:, None]
    l = np.arange(N)[None, :]
    out = np.empty((M, N), dtype=np.complex128)
    for m in range(M):
        for n in range(N):
            phase = np.exp(2j * np.pi * (k * m / M + l * n / N))
            out[m, n] = np.sum(A_full * phase) / (M * N)
    return out


def naive_forward_1d(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    N = a.shape[0]
    n = np.arange(N)
    out = np.empty(N // 2 + 1, dtype=np.complex128)
    for k in range(N // 2 + 1):
        out[k] = np.sum(a * np.exp(-2j * np.pi * n * k / N))
    return out


def naive_inverse_1d(A_full: np.ndarray) -> np.ndarray:
    A_full = np.asarray(A_full, dtype=np.complex128)
    N = A_full.shape[0]
    k = np.arange(N)
    out = np.empty(N, dtype=np.complex128)
    for n in range(N):
        out[n] = np.sum(A_full * np.exp(2j * np.pi * k * n / N)) / N
    return out
