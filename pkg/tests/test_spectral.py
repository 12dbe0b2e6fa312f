"""Transform contracts: oracles first, then the fast path against them.

Ordering matters here. The slow defining-sum oracles are validated
against hand-derived spectra before anything else trusts them; the fast
engine is then held to the oracles, to an independent library
implementation, and to the algebraic identities (round trip, linearity,
energy, convolution duality) that the initializer construction relies on.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from convaware import ComplexTensor, DomainError, RealTensor, SpectralShape2
from convaware.spectral import (
    circular_convolve_2d,
    forward_1d,
    forward_2d,
    hermitian_extend_1d,
    hermitian_extend_2d,
    inverse_1d,
    inverse_2d,
    irfft1,
    irfft2,
    naive_forward_1d,
    naive_forward_2d,
    naive_inverse_1d,
    naive_inverse_2d,
    rfft1,
    rfft2,
)


def _rng(tag):
    return np.random.default_rng(np.random.SeedSequence((99, tag)))


# --------------------------------------------------- oracles vs hand algebra


def test_oracle_delta_spectrum_is_flat():
    # a unit impulse at the origin excites every bin with weight 1
    assert np.allclose(naive_forward_1d([1.0, 0.0, 0.0, 0.0]), [1.0, 1.0, 1.0], atol=1e-15)


def test_oracle_two_point_sum_and_difference():
    a, b = 2.5, -0.5
    assert np.allclose(naive_forward_1d([a, b]), [a + b, a - b], atol=1e-15)


def test_oracle_constant_concentrates_in_dc():
    got = naive_forward_1d(np.full(5, 3.0))
    assert got[0] == pytest.approx(15.0, abs=1e-12)
    assert np.max(np.abs(got[1:])) < 1e-12


def test_oracle_2d_two_by_two_signs():
    a, b, c, d = 1.0, 2.0, 4.0, 8.0
    got = naive_forward_2d([[a, b], [c, d]])
    want = [[a + b + c + d, a - b + c - d], [a + b - c - d, a - b - c + d]]
    assert np.allclose(got, want, atol=1e-14)


def test_oracle_2d_single_mode_round_trip():
    # cos(2 pi m / M) splits evenly between bins k=1 and k=M-1
    M = 8
    x = np.cos(2 * np.pi * np.arange(M) / M)[:, None] * np.ones((1, 1))
    got = naive_forward_2d(x)
    want = np.zeros((M, 1), dtype=complex)
    want[1, 0] = M / 2
    want[M - 1, 0] = M / 2
    assert np.allclose(got, want, atol=1e-12)


def test_oracle_inverse_carries_the_normalization():
    # forward has no 1/MN; the inverse must supply all of it
    full = np.zeros((3, 4), dtype=complex)
    full[0, 0] = 12.0
    assert np.allclose(naive_inverse_2d(full), np.ones((3, 4)), atol=1e-14)
    assert np.allclose(naive_inverse_1d([5.0, 0.0, 0.0, 0.0, 0.0]), np.full(5, 1.0), atol=1e-14)


def test_oracle_inverse_keeps_imaginary_output():
    # a spectrum with no conjugate partner inverts to a complex signal
    full = np.zeros(4, dtype=complex)
    full[1] = 1.0
    out = naive_inverse_1d(full)
    assert np.max(np.abs(out.imag)) > 0.1


# ------------------------------------------------------ fast path vs oracles


@pytest.mark.parametrize("n", list(range(1, 17)))
def test_rfft1_matches_oracle_all_small_sizes(n):
    x = _rng(n).standard_normal(n)
    assert np.allclose(rfft1(x), naive_forward_1d(x), atol=1e-10)


@pytest.mark.parametrize("shape", [(1, 1), (1, 5), (4, 1), (2, 2), (3, 3), (3, 5), (4, 6), (5, 5), (7, 3), (8, 8), (9, 16), (13, 11), (16, 16)])
def test_rfft2_matches_oracle(shape):
    x = _rng(hash(shape) % 1000).standard_normal(shape)
    assert np.allclose(rfft2(x), naive_forward_2d(x), atol=1e-10)


def test_inverse_matches_oracle_on_extended_spectra():
    for shape in [(3, 4), (5, 7), (8, 6)]:
        x = _rng(sum(shape)).standard_normal(shape)
        half = naive_forward_2d(x)
        full = hermitian_extend_2d(half, shape)
        slow = naive_inverse_2d(full)
        assert np.max(np.abs(slow.imag)) < 1e-12
        assert np.allclose(irfft2(half, shape), slow.real, atol=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 8, 11, 12, 16, 27, 32, 63, 64, 100])
def test_rfft1_matches_numpy(n):
    # independent implementation of the same convention
    x = _rng(200 + n).standard_normal(n)
    assert np.allclose(rfft1(x), np.fft.rfft(x), atol=1e-10 * max(1, n))


@pytest.mark.parametrize("shape", [(1, 1), (2, 3), (5, 5), (7, 4), (8, 8), (12, 9), (16, 16), (31, 17)])
def test_rfft2_matches_numpy(shape):
    x = _rng(300 + shape[0] * 31 + shape[1]).standard_normal(shape)
    assert np.allclose(rfft2(x), np.fft.rfft2(x), atol=1e-9)


@pytest.mark.parametrize("shape", [(2, 3), (5, 5), (8, 8), (12, 9)])
def test_irfft2_matches_numpy(shape):
    x = _rng(400 + shape[0] * 31 + shape[1]).standard_normal(shape)
    half = np.fft.rfft2(x)
    assert np.allclose(irfft2(half, shape), np.fft.irfft2(half, shape), atol=1e-10)


def test_batched_leading_axes_agree_with_loops():
    x = _rng(7).standard_normal((3, 4, 5, 6))
    got = rfft2(x)
    for i in range(3):
        for j in range(4):
            assert np.allclose(got[i, j], rfft2(x[i, j]), atol=1e-12)


# ------------------------------------------------------- algebraic identities


@pytest.mark.parametrize("shape", [(1, 1), (1, 8), (6, 1), (2, 2), (3, 3), (4, 4), (5, 6), (7, 7), (9, 5), (16, 16)])
def test_round_trip_2d(shape):
    x = _rng(500 + shape[0] * 31 + shape[1]).standard_normal(shape)
    assert np.max(np.abs(irfft2(rfft2(x), shape) - x)) < 1e-10


@pytest.mark.parametrize("n", list(range(1, 17)))
def test_round_trip_1d(n):
    x = _rng(600 + n).standard_normal(n)
    assert np.max(np.abs(irfft1(rfft1(x), n) - x)) < 1e-10


def test_linearity():
    r = _rng(9)
    x, y = r.standard_normal((5, 7)), r.standard_normal((5, 7))
    lhs = rfft2(2.0 * x - 3.0 * y)
    rhs = 2.0 * rfft2(x) - 3.0 * rfft2(y)
    assert np.allclose(lhs, rhs, atol=1e-11)


@pytest.mark.parametrize("shape", [(3, 3), (4, 4), (4, 5), (5, 4), (6, 9), (8, 8)])
def test_energy_identity(shape):
    # sum |x|^2 equals (1/MN) sum over the full spectrum of |A|^2
    x = _rng(700 + shape[0] * 31 + shape[1]).standard_normal(shape)
    full = hermitian_extend_2d(rfft2(x), shape)
    lhs = np.sum(x * x)
    rhs = np.sum(np.abs(full) ** 2) / (shape[0] * shape[1])
    assert lhs == pytest.approx(rhs, rel=1e-12)


@pytest.mark.parametrize("shape", [(2, 2), (3, 4), (5, 5), (6, 7), (8, 8)])
def test_hermitian_extension_has_conjugate_symmetry(shape):
    M, N = shape
    x = _rng(800 + M * 31 + N).standard_normal(shape)
    full = hermitian_extend_2d(rfft2(x), shape)
    for k in range(M):
        for l in range(N):
            assert full[k, l] == pytest.approx(np.conj(full[(M - k) % M, (N - l) % N]), abs=1e-12)


def test_hermitian_extension_matches_full_transform():
    for shape in [(3, 5), (4, 4), (6, 8)]:
        x = _rng(900 + shape[0]).standard_normal(shape)
        full = hermitian_extend_2d(rfft2(x), shape)
        k = np.arange(shape[0])[:, None, None, None]
        l = np.arange(shape[1])[None, :, None, None]
        m = np.arange(shape[0])[None, None, :, None]
        n = np.arange(shape[1])[None, None, None, :]
        phase = np.exp(-2j * np.pi * (k * m / shape[0] + l * n / shape[1]))
        want = np.einsum("mn,klmn->kl", x, phase)
        assert np.allclose(full, want, atol=1e-9)


def test_hermitian_extension_1d():
    x = _rng(17).standard_normal(9)
    full = hermitian_extend_1d(rfft1(x), 9)
    assert np.allclose(full, np.fft.fft(x), atol=1e-10)


# ------------------------------------------------------- convolution duality


@pytest.mark.parametrize("shape", [(2, 2), (3, 3), (4, 6), (5, 5), (7, 4), (8, 8)])
def test_circular_convolution_multiplies_spectra(shape):
    r = _rng(1000 + shape[0] * 31 + shape[1])
    f = RealTensor(r.standard_normal(shape))
    x = RealTensor(r.standard_normal(shape))
    conv = circular_convolve_2d(f, x)
    lhs = rfft2(conv.data)
    rhs = rfft2(f.data) * rfft2(x.data)
    assert np.max(np.abs(lhs - rhs)) < 1e-9 * max(1.0, np.max(np.abs(rhs)))


def test_circular_convolution_hand_value():
    # convolving with a unit shift rolls the image by one row and column
    shift = np.zeros((3, 3))
    shift[1, 1] = 1.0
    x = np.arange(9.0).reshape(3, 3)
    got = circular_convolve_2d(RealTensor(shift), RealTensor(x))
    assert np.allclose(got.data, np.roll(x, (1, 1), axis=(0, 1)), atol=1e-12)


def test_circular_convolution_identity_kernel():
    delta = np.zeros((4, 5))
    delta[0, 0] = 1.0
    x = _rng(3).standard_normal((4, 5))
    got = circular_convolve_2d(RealTensor(delta), RealTensor(x))
    assert np.allclose(got.data, x, atol=1e-12)


def test_circular_convolution_shape_mismatch():
    with pytest.raises(DomainError):
        circular_convolve_2d(RealTensor(np.ones((2, 2))), RealTensor(np.ones((3, 3))))


# -------------------------------------------------- inverse input semantics


def test_arbitrary_real_half_spectrum_is_accepted():
    # free columns may hold anything; the inverse returns the real part
    A = _rng(5).standard_normal((4, 3))  # N=5 target: no even-column bin
    out = irfft2(A.astype(complex), (4, 5))
    assert out.shape == (4, 5)
    assert out.dtype == np.float64


def test_inconsistent_self_conjugate_bin_is_projected_out():
    # an imaginary DC component cannot come from any real signal; the
    # inverse quietly discards it instead of failing
    A = np.zeros((4, 3), dtype=complex)
    A[0, 0] = 1j * 5.0
    assert np.allclose(irfft2(A, (4, 4)), 0.0, atol=1e-12)


def test_inconsistent_dc_bin_projected_out_1d():
    assert np.allclose(irfft1(np.array([2j, 0.0, 0.0]), 4), 0.0, atol=1e-12)


def test_consistent_spectra_do_not_raise():
    x = _rng(6).standard_normal((6, 6))
    irfft2(rfft2(x), (6, 6))  # must not raise


# ----------------------------------------------------------- typed wrappers


def test_typed_forward_inverse_round_trip():
    x = RealTensor(_rng(8).standard_normal((5, 7)))
    sp = forward_2d(x)
    assert isinstance(sp, ComplexTensor)
    assert sp.shape == (5, 4)
    back = inverse_2d(sp, (5, 7))
    assert np.max(np.abs(back.data - x.data)) < 1e-10


def test_typed_1d_round_trip():
    x = RealTensor(_rng(9).standard_normal(11))
    sp = forward_1d(x)
    assert sp.shape == (6,)
    back = inverse_1d(sp, 11)
    assert np.max(np.abs(back.data - x.data)) < 1e-10


def test_typed_rank_validation():
    with pytest.raises(DomainError):
        forward_2d(RealTensor(np.ones(4)))
    with pytest.raises(DomainError):
        forward_1d(RealTensor(np.ones((2, 2))))


def test_inverse_spectrum_shape_validation():
    sp = ComplexTensor(np.zeros((4, 3), dtype=complex))
    with pytest.raises(DomainError):
        inverse_2d(sp, (4, 7))  # needs (4, 4) half width
    with pytest.raises(DomainError):
        inverse_1d(ComplexTensor(np.zeros(3, dtype=complex)), 8)


def test_spectral_shape_for_target():
    assert SpectralShape2.for_target(5, 5) == SpectralShape2(5, 3)
    assert SpectralShape2.for_target(4, 6) == SpectralShape2(4, 4)
    assert SpectralShape2.for_target(4, 6).as_tuple() == (4, 4)


# ------------------------------------------------------------------ property


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 12),
    st.integers(1, 12),
    st.integers(0, 2**32 - 1),
)
def test_round_trip_property(rows, cols, seed):
    x = np.random.default_rng(seed).standard_normal((rows, cols))
    back = irfft2(rfft2(x), (rows, cols))
    assert np.max(np.abs(back - x)) < 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_round_trip_property_1d(n, seed):
    x = np.random.default_rng(seed).standard_normal(n)
    assert np.max(np.abs(irfft1(rfft1(x), n) - x)) < 1e-10
