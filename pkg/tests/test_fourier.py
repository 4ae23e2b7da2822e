import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from qndspin import (
    AsymptoticSupportError,
    fourier_coeff_asymptotic,
    fourier_coeff_quadrature,
    fourier_coeff_sum,
    measurement_outcome,
)
from qndspin.fourier import fourier_coeff_sum_all, partition_window


def test_trivial_values():
    assert_allclose(fourier_coeff_quadrature(0, 0, 0, 1.0), 1.0, atol=1e-14)
    assert_allclose(fourier_coeff_sum(0, 0, 0, 1.0), 1.0, atol=1e-14)
    # single photon in the c record: binomial expansion gives I(0)=1, I(1)=i
    assert_allclose(fourier_coeff_quadrature(1, 0, 0, 1.0), 1.0, atol=1e-13)
    assert_allclose(fourier_coeff_quadrature(1, 0, 1, 1.0), 1.0j, atol=1e-13)
    assert_allclose(fourier_coeff_sum(1, 0, 0, 1.0), 1.0, atol=1e-14)
    assert_allclose(fourier_coeff_sum(1, 0, 1, 1.0), 1.0j, atol=1e-14)


def test_out_of_range_partition_is_zero():
    assert fourier_coeff_sum(3, 2, 6, 1.0) == 0
    assert abs(fourier_coeff_quadrature(3, 2, 6, 1.0)) < 1e-10


def test_sum_matches_quadrature_spec_point():
    q = fourier_coeff_quadrature(20, 20, 20, 1.0)
    s = fourier_coeff_sum(20, 20, 20, 1.0)
    assert abs(q - s) / abs(s) < 1e-9


@settings(max_examples=60, deadline=None)
@given(
    n_c=st.integers(min_value=0, max_value=25),
    n_d=st.integers(min_value=0, max_value=25),
    eta=st.sampled_from([0.5, 1.0, 2.0]),
)
def test_sum_matches_quadrature_families(n_c, n_d, eta):
    s = fourier_coeff_sum_all(n_c, n_d, eta)
    q = np.array(
        [fourier_coeff_quadrature(n_c, n_d, nl, eta) for nl in range(n_c + n_d + 1)]
    )
    scale = max(np.max(np.abs(s)), 1e-300)
    assert np.max(np.abs(q - s)) / scale < 1e-9


def test_balanced_outcome_geometry():
    out = measurement_outcome(20, 20, 1.0)
    assert out.supported
    assert_allclose(out.x0, 0.0, atol=1e-14)
    assert_allclose(out.sigma, 20.0, atol=1e-12)
    assert_allclose(out.a, 20.0, atol=1e-12)
    assert_allclose(out.x0p, math.pi, atol=1e-14)


def test_outcome_support_boundary():
    # arcsin argument beyond 1: no stationary point
    out = measurement_outcome(2, 38, 0.5)
    assert not out.supported
    out0 = measurement_outcome(0, 20, 1.0)
    assert not out0.supported
    with pytest.raises(ValueError):
        measurement_outcome(2, 2, 0.0)


def test_asymptotic_magnitude_near_center():
    out = measurement_outcome(20, 20, 1.0)
    half = 2.0 * math.sqrt(out.sigma)
    for nl in range(int(out.a - half), int(out.a + half) + 1):
        exact = fourier_coeff_quadrature(20, 20, nl, 1.0)
        approx = fourier_coeff_asymptotic(out, nl)
        if abs(exact) < 1e-9 * abs(fourier_coeff_quadrature(20, 20, 20, 1.0)):
            # parity-suppressed partitions: both must vanish
            assert abs(approx) < 1e-9 * abs(fourier_coeff_quadrature(20, 20, 20, 1.0))
        else:
            assert abs(abs(approx) / abs(exact) - 1.0) < 0.05


def test_asymptotic_secondary_peak_factor():
    # dropping the secondary peak breaks the parity selection at odd n_l
    out = measurement_outcome(20, 20, 1.0)
    both = fourier_coeff_asymptotic(out, 21, include_secondary_peak=True)
    single = fourier_coeff_asymptotic(out, 21, include_secondary_peak=False)
    assert abs(both) < 1e-12 * abs(single)


def test_asymptotic_rejects_unsupported():
    out = measurement_outcome(2, 38, 0.5)
    with pytest.raises(AsymptoticSupportError):
        fourier_coeff_asymptotic(out, 5)


def test_partition_window_clipping():
    out = measurement_outcome(12, 12, 1.0)
    lo, hi = partition_window(out)
    assert lo == 0 and hi == 24  # full range: 8 sqrt(12) > 12
    out2 = measurement_outcome(200, 200, 1.0)
    lo2, hi2 = partition_window(out2)
    assert lo2 > 0 and hi2 < 400


def test_shifts_vanish_for_balanced_most_probable(fig2_params):
    out = measurement_outcome(20, 20, 1.0)
    q, qp = out.shifts(fig2_params, 10.0 / fig2_params.omega)
    assert_allclose(q, 0.0, atol=1e-12)
    assert qp != 0


@settings(max_examples=40, deadline=None)
@given(
    n_c=st.integers(min_value=0, max_value=12),
    n_d=st.integers(min_value=0, max_value=12),
    n_l=st.integers(min_value=0, max_value=30),
    eta=st.floats(min_value=0.3, max_value=3.0),
)
def test_sum_against_direct_polynomial(n_c, n_d, n_l, eta):
    # brute-force coefficient of z^{n_l} in (1 + i eta z)^{n_c} (i + eta z)^{n_d}
    poly = np.zeros(n_c + n_d + 1, dtype=complex)
    poly[0] = 1.0
    for _ in range(n_c):
        poly = np.convolve(poly[: n_c + n_d + 1], [1.0, 1j * eta])[: n_c + n_d + 1]
    for _ in range(n_d):
        poly = np.convolve(poly[: n_c + n_d + 1], [1j, eta])[: n_c + n_d + 1]
    expect = poly[n_l] if n_l <= n_c + n_d else 0.0
    got = fourier_coeff_sum(n_c, n_d, n_l, eta)
    assert_allclose(got, expect, atol=1e-9 * max(1.0, float(np.max(np.abs(poly)))))
