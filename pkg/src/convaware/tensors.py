"""Dense real and complex tensor containers with population statistics.

Everything downstream (transforms, bases, initializers, file I/O) moves
data through these two containers. They are deliberately thin: a shape,
a row-major 64-bit buffer, and the handful of statistics the scaling
step needs. No broadcasting, no general algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "RealTensor",
    "ComplexTensor",
    "Shape4",
    "population_mean",
    "population_variance",
    "scale_in_place",
]

_ALLOWED_RANKS = (1, 2, 3, 4)


def _check_extents(shape: tuple[int, ...]) -> None:
    if len(shape) not in _ALLOWED_RANKS:
        raise DomainError(f"rank must be one of {_ALLOWED_RANKS}, got {len(shape)}")
    for extent in shape:
        if extent < 1:
            raise DomainError(f"extents must be positive, got shape {shape}")


class RealTensor:
    """Rank 1..4 tensor of 64-bit floats, row-major.

    Values are held at full double precision even when a file export
    later narrows them to 32 bits, so verification tolerances are not
    dominated by storage precision.
    """

    __slots__ = ("data",)

    def __init__(self, data) -> None:
        arr = np.array(data, dtype=np.float64, order="C", copy=True)
        _check_extents(arr.shape)
        self.data = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "RealTensor":
        # internal no-copy constructor; caller must hand over ownership
        out = object.__new__(cls)
        if arr.dtype != np.float64 or not arr.flags.c_contiguous:
            arr = np.ascontiguousarray(arr, dtype=np.float64)
        _check_extents(arr.shape)
        out.data = arr
        return out

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def rank(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    def reshape(self, shape) -> "RealTensor":
        shape = tuple(int(n) for n in shape)
        _check_extents(shape)
        if int(np.prod(shape)) != self.size:
            raise DomainError(f"cannot reshape size {self.size} into {shape}")
        # row-major relinearization; round-trips exactly
        return RealTensor._wrap(self.data.reshape(shape).copy())

    def copy(self) -> "RealTensor":
        return RealTensor._wrap(self.data.copy())

    def __repr__(self) -> str:
        return f"RealTensor(shape={self.shape})"


class ComplexTensor:
    """Rank 1..4 tensor of complex values stored as (real, imag) float64 pairs."""

    __slots__ = ("data",)

    def __init__(self, data) -> None:
        arr = np.array(data, dtype=np.complex128, order="C", copy=True)
        _check_extents(arr.shape)
        self.data = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "ComplexTensor":
        out = object.__new__(cls)
        if arr.dtype != np.complex128 or not arr.flags.c_contiguous:
            arr = np.ascontiguousarray(arr, dtype=np.complex128)
        _check_extents(arr.shape)
        out.data = arr
        return out

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def rank(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    def __repr__(self) -> str:
        return f"ComplexTensor(shape={self.shape})"


@dataclass(frozen=True)
class Shape4:
    """Filter-bank extents: f output filters, s input channels, r x c kernel."""

    f: int
    s: int
    r: int
    c: int

    def __post_init__(self) -> None:
        for name in ("f", "s", "r", "c"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise DomainError(f"Shape4.{name} must be a positive integer, got {value!r}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.f, self.s, self.r, self.c)


def population_mean(t: RealTensor) -> float:
    """Arithmetic mean over every element."""
    if t.size == 0:
        raise DomainError("mean of an empty tensor is undefined")
    return float(np.mean(t.data))


def population_variance(t: RealTensor) -> float:
    """Mean squared deviation from the population mean. Divides by N, not N-1."""
    if t.size < 2:
        raise DomainError("population variance needs at least 2 elements")
    centered = t.data - np.mean(t.data)
    return float(np.mean(centered * centered))


def scale_in_place(t: RealTensor, k: float) -> RealTensor:
    """Multiply every element by k. Variance scales by k**2, mean by k."""
    if not np.isfinite(k):
        raise DomainError(f"scale factor must be finite, got {k!r}")
    t.data *= float(k)
    return t
