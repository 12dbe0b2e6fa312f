"""Orthonormal row bases from seeded randomness.

The construction: sample a square standard-normal matrix, symmetrize it
into a positive definite matrix, eigendecompose, and keep the
eigenvector rows. Orthogonality of eigenvectors of a symmetric matrix
does the work; every entry of the eigenvector matrix is bounded by 1
because the columns have unit norm.

When more rows are requested than the ambient dimension holds,
independent blocks are stacked and truncated, so orthogonality holds
within each block of `dim` consecutive rows, which is as much as the
dimension permits.

The eigensolver is a cyclic Jacobi sweep, vectorized over a stack of
independent matrices so a whole bank's bases diagonalize in one pass.
Single-matrix calls run through the same kernel with a stack of one,
which keeps the two routes bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericError
from .tensors import RealTensor

__all__ = [
    "BasisRequest",
    "OrthoBasis",
    "symmetrize",
    "eigen_symmetric",
    "make_basis",
]

_MAX_SWEEPS = 100
_OFFDIAG_RTOL = 1e-12
_RIDGE = 1e-8
_SYMMETRY_RTOL = 1e-12


@dataclass(frozen=True)
class BasisRequest:
    """rows x dim basis request; seed is SeedSequence entropy (int or ints)."""

    rows: int
    dim: int
    seed: object

    def __post_init__(self) -> None:
        if self.rows < 1 or self.dim < 1:
            raise DomainError(f"rows and dim must be positive, got {self.rows}x{self.dim}")


@dataclass(frozen=True)
class OrthoBasis:
    """Orthonormal-by-block row matrix; every entry magnitude is <= 1."""

    matrix: RealTensor


def _symmetrize_stack(A: np.ndarray) -> np.ndarray:
    """S_b = A_b A_b^T + ridge, exactly symmetric, strictly positive definite."""
    B, n, _ = A.shape
    S = np.empty_like(A)
    for b in range(B):
        # per-matrix gemm so stacked and single calls share bit-exact kernels
        S[b] = A[b] @ A[b].T
    S = 0.5 * (S + np.swapaxes(S, 1, 2))
    tr = np.trace(S, axis1=1, axis2=2)
    delta = _RIDGE * tr / n
    S[:, np.arange(n), np.arange(n)] += delta[:, None]
    return S


def symmetrize(a: RealTensor) -> RealTensor:
    """Map any square matrix A to A A^T + (1e-8 trace/n) I.

    The product is symmetric positive semidefinite; the scaled-identity
    ridge removes the semidefinite edge so eigenvalues are strictly
    positive for any nonzero input.
    """
    if a.rank != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"symmetrize needs a square matrix, got shape {a.shape}")
    return RealTensor._wrap(_symmetrize_stack(a.data[None])[0])


def _offdiag_norms(A: np.ndarray) -> np.ndarray:
    # summed directly off the diagonal: the fro^2 - diag^2 shortcut
    # cancels catastrophically once a matrix is nearly diagonal
    n = A.shape[-1]
    off = np.array(A, copy=True)
    off[:, np.arange(n), np.arange(n)] = 0.0
    return np.linalg.norm(off, axis=(1, 2))


def _jacobi_eigh_stack(S: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalize a stack of symmetric matrices by cyclic Jacobi rotations.

    Returns (Q, lam): eigenvector columns and eigenvalues sorted
    descending, one pair per stacked matrix. Convergence: off-diagonal
    Frobenius norm below 1e-12 of the input's Frobenius norm, within a
    cap of 100 sweeps.
    """
    B, n, n2 = S.shape
    if n != n2:
        raise DomainError(f"stack entries must be square, got {S.shape}")
    A = np.array(S, dtype=np.float64, copy=True)
    Q = np.broadcast_to(np.eye(n), (B, n, n)).copy()
    if n == 1:
        return Q, A[:, 0, 0].copy()

    tol = _OFFDIAG_RTOL * np.linalg.norm(S, axis=(1, 2))
    converged = False
    for _ in range(_MAX_SWEEPS):
        active = _offdiag_norms(A) > tol
        if not active.any():
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[:, p, q]
                rotate = active & (apq != 0.0)
                if not rotate.any():
                    continue
                app = A[:, p, p]
                aqq = A[:, q, q]
                safe = np.where(rotate, apq, 1.0)
                # an overflowing tau saturates to inf and lands on t = 0,
                # the correct limit for a vanishing pivot
                with np.errstate(over="ignore"):
                    tau = (aqq - app) / (2.0 * safe)
                    sgn = np.where(tau >= 0.0, 1.0, -1.0)
                    t = sgn / (np.abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                c = np.where(rotate, c, 1.0)[:, None]
                s = np.where(rotate, s, 0.0)[:, None]

                colp = A[:, :, p].copy()
                colq = A[:, :, q].copy()
                A[:, :, p] = c * colp - s * colq
                A[:, :, q] = s * colp + c * colq
                rowp = A[:, p, :].copy()
                rowq = A[:, q, :].copy()
                A[:, p, :] = c * rowp - s * rowq
                A[:, q, :] = s * rowp + c * rowq
                # the rotation zeroes the pivot exactly in exact arithmetic
                pivot = np.where(rotate, 0.0, A[:, p, q])
                A[:, p, q] = pivot
                A[:, q, p] = pivot

                qcolp = Q[:, :, p].copy()
                qcolq = Q[:, :, q].copy()
                Q[:, :, p] = c * qcolp - s * qcolq
                Q[:, :, q] = s * qcolp + c * qcolq
    else:
        converged = not (_offdiag_norms(A) > tol).any()
    if not converged:
        raise NumericError(f"Jacobi sweep cap of {_MAX_SWEEPS} reached before convergence")

    lam = A[:, np.arange(n), np.arange(n)].copy()
    order = np.argsort(-lam, axis=1, kind="stable")
    lam = np.take_along_axis(lam, order, axis=1)
    Q = np.take_along_axis(Q, order[:, None, :], axis=2)

    # sign canon: make each eigenvector's largest-magnitude component positive
    imax = np.argmax(np.abs(Q), axis=1)
    vals = np.take_along_axis(Q, imax[:, None, :], axis=1)[:, 0, :]
    Q *= np.where(vals < 0.0, -1.0, 1.0)[:, None, :]
    return Q, lam


def eigen_symmetric(S: RealTensor) -> tuple[RealTensor, RealTensor]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (Q, lam) with eigenvector columns in Q, eigenvalues sorted
    descending, Q^T Q = I to 1e-10, and a deterministic sign convention
    (largest-magnitude component of each eigenvector positive).
    """
    if S.rank != 2 or S.shape[0] != S.shape[1]:
        raise DomainError(f"eigen_symmetric needs a square matrix, got shape {S.shape}")
    dev = float(np.max(np.abs(S.data - S.data.T)))
    scale = float(np.max(np.abs(S.data)))
    if dev > _SYMMETRY_RTOL * max(1.0, scale):
        raise DomainError(f"matrix is not symmetric (max asymmetry {dev:.3e})")
    Q, lam = _jacobi_eigh_stack(S.data[None])
    return RealTensor._wrap(Q[0]), RealTensor._wrap(lam[0])


def _basis_stack(rows: int, dim: int, seeds: list) -> np.ndarray:
    """Bases for many seeds in one Jacobi pass; returns (len(seeds), rows, dim).

    Per-seed stream discipline is identical to make_basis: all block
    Gaussians drawn first, then one row-sign draw. Lane b of the output
    is bit-identical to make_basis(BasisRequest(rows, dim, seeds[b])).
    """
    if rows < 1 or dim < 1:
        raise DomainError(f"rows and dim must be positive, got {rows}x{dim}")
    blocks = math.ceil(rows / dim)
    gauss = np.empty((len(seeds), blocks, dim, dim))
    signs = np.empty((len(seeds), rows))
    for i, seed in enumerate(seeds):
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        for b in range(blocks):
            gauss[i, b] = rng.standard_normal((dim, dim))
        signs[i] = rng.integers(0, 2, size=rows).astype(np.float64) * 2.0 - 1.0
    S = _symmetrize_stack(gauss.reshape(len(seeds) * blocks, dim, dim))
    Q, _ = _jacobi_eigh_stack(S)
    # eigenvector rows, eigenvalue-descending, blocks stacked then truncated
    stacked = np.swapaxes(Q, 1, 2).reshape(len(seeds), blocks * dim, dim)
    return np.ascontiguousarray(stacked[:, :rows, :]) * signs[:, :, None]


def make_basis(req: BasisRequest) -> OrthoBasis:
    """Seeded rows x dim matrix, orthonormal within each block of dim rows.

    Each block is the eigenvector set of an independently sampled
    symmetrized matrix; each kept row then receives an independent
    random sign from the same stream, which centers the entry
    distribution at zero without disturbing orthogonality or the unit
    entry bound.
    """
    basis = _basis_stack(req.rows, req.dim, [req.seed])[0]
    return OrthoBasis(matrix=RealTensor._wrap(basis))
