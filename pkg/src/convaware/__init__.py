"""convaware: convolution-aware weight initialization.

Builds convolution filter banks whose per-filter channel slices have
orthonormal Fourier half-spectra, verifies the properties that
construction guarantees (orthogonality, the unit entry bound, the
inverse-transform magnitude bound, exact variance, zero-mean tendency,
bit-level determinism), and exports reproducible NPY tensors for any
training framework to consume.
"""

from .errors import ConfigError, ConvawareError, DomainError, FormatError, NumericError
from .initializers import (
    FilterBank,
    InitSpec,
    SCHEMES,
    cai_1d,
    cai_2d,
    glorot_normal,
    he_normal,
    he_uniform,
    initialize,
    normal_init,
    orthogonal_flat,
    uniform_init,
)
from .npyio import read_array, write_array
from .orthobasis import BasisRequest, OrthoBasis, eigen_symmetric, make_basis, symmetrize
from .spectral import (
    SpectralShape2,
    circular_convolve_2d,
    forward_1d,
    forward_2d,
    inverse_1d,
    inverse_2d,
)
from .tensors import (
    ComplexTensor,
    RealTensor,
    Shape4,
    population_mean,
    population_variance,
    scale_in_place,
)
from .verify import POLICIES, CheckResult, Policy, StatsReport, analyze, check, determinism_hash

__version__ = "0.1.0"

__all__ = [
    "ConvawareError",
    "DomainError",
    "NumericError",
    "ConfigError",
    "FormatError",
    "RealTensor",
    "ComplexTensor",
    "Shape4",
    "population_mean",
    "population_variance",
    "scale_in_place",
    "SpectralShape2",
    "forward_1d",
    "forward_2d",
    "inverse_1d",
    "inverse_2d",
    "circular_convolve_2d",
    "BasisRequest",
    "OrthoBasis",
    "symmetrize",
    "eigen_symmetric",
    "make_basis",
    "InitSpec",
    "FilterBank",
    "SCHEMES",
    "initialize",
    "cai_2d",
    "cai_1d",
    "he_normal",
    "he_uniform",
    "glorot_normal",
    "orthogonal_flat",
    "uniform_init",
    "normal_init",
    "StatsReport",
    "CheckResult",
    "Policy",
    "POLICIES",
    "analyze",
    "check",
    "determinism_hash",
    "read_array",
    "write_array",
    "__version__",
]
