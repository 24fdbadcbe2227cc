"""Spherical-mode data, quadratic forms, Ritz minimization, curve location."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ckn_lab.params import beta_fs, derive, validate
from ckn_lab.profiles import PowerPeakProfile, kernel_mode
from ckn_lab.specfun import DomainError
from ckn_lab.spectral import (
    fs_locate,
    gamma_m,
    mode_data,
    mode_quadratic_form,
    ritz_min_eig,
)


def test_mode_data_reference_values(p511):
    m0 = mode_data(0, p511)
    assert (m0.k, m0.lambda_k, m0.l_k, m0.varpi_k) == (0, 0.0, 1, 0.0)
    m1 = mode_data(1, p511)
    assert (m1.k, m1.lambda_k, m1.l_k, m1.varpi_k) == (1, 4.0, 5, 5.0)
    m2 = mode_data(2, p511)
    assert (m2.k, m2.lambda_k, m2.l_k, m2.varpi_k) == (2, 10.0, 14, 12.0)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=5, max_value=10), st.integers(min_value=0, max_value=8))
def test_mode_data_combinatorics(N, k):
    """lambda_k = k(N-2+k); multiplicities are the usual binomial difference."""
    import math

    p = validate(N, 0.0, 0.0)
    data = mode_data(k, p)
    assert data.lambda_k == k * (N - 2 + k)
    expected_l = (N + 2 * k - 2) * math.factorial(N + k - 3) // (
        math.factorial(N - 2) * math.factorial(k)
    )
    assert data.l_k == expected_l
    assert data.l_k >= 1


def test_multiplicity_small_modes(p511):
    assert mode_data(0, p511).l_k == 1
    assert mode_data(1, p511).l_k == 5  # = N


def test_gamma_m_values():
    assert gamma_m(6.0) == pytest.approx(384.0, rel=1e-14)
    assert gamma_m(5.0) == pytest.approx(105.0, rel=1e-14)
    with pytest.raises(DomainError):
        gamma_m(4.0)


@settings(max_examples=80, deadline=None)
@given(st.floats(min_value=4.2, max_value=14.0))
def test_potential_strength_identity(m):
    """(2M/(M-4) - 1) * Gamma_M = (M+4)(M-2)M(M+2)."""
    lhs = (2.0 * m / (m - 4.0) - 1.0) * gamma_m(m)
    rhs = (m + 4.0) * (m - 2.0) * m * (m + 2.0)
    assert lhs == pytest.approx(rhs, rel=1e-11)


def _x_modes(m):
    half = -(m - 2.0) / 2.0
    x0 = PowerPeakProfile([(1.0, 0, half), (-1.0, 2, half)], sigma=2, nu=1.0)
    x1 = PowerPeakProfile([(1.0, 1, half)], sigma=2, nu=1.0)
    return x0, x1


def test_scaling_mode_is_always_a_zero_direction(p511):
    x0, _ = _x_modes(derive(p511).M)
    assert mode_quadratic_form(x0, 0, p511) == pytest.approx(0.0, abs=1e-10)


def test_translation_mode_value_at_breaking_point(p511):
    _, x1 = _x_modes(derive(p511).M)
    assert mode_quadratic_form(x1, 1, p511) == pytest.approx(-83.0 / 60.0, rel=1e-9)


def test_translation_mode_vanishes_exactly_on_curve():
    N, alpha = 5, 1.0
    p = validate(N, alpha, beta_fs(N, alpha))
    _, x1 = _x_modes(derive(p).M)
    assert mode_quadratic_form(x1, 1, p) == pytest.approx(0.0, abs=1e-10)
    x0, _ = _x_modes(derive(p).M)
    assert mode_quadratic_form(x0, 0, p) == pytest.approx(0.0, abs=1e-10)


def test_quadratic_form_homogeneity(p511):
    _, x1 = _x_modes(derive(p511).M)
    scaled = PowerPeakProfile(
        [(3.0 * c, pp, ee) for c, pp, ee in x1.terms], sigma=2, nu=1.0
    )
    assert mode_quadratic_form(scaled, 1, p511) == pytest.approx(
        9.0 * mode_quadratic_form(x1, 1, p511), rel=1e-12
    )


def test_mode_gap_ordering():
    """q^2 lambda_k >= varpi_k for k >= 1 below/at the curve.

    Equality holds only for k = 1 exactly on the curve; the k = 2 gap
    stays strictly positive there.
    """
    N, alpha = 5, 1.0
    curve = beta_fs(N, alpha)
    for beta in (0.2, 0.5, curve):
        p = validate(N, alpha, beta)
        d = derive(p)
        for k in (1, 2, 3):
            gap = d.q**2 * mode_data(k, p).lambda_k - mode_data(k, p).varpi_k
            if k == 1 and beta == curve:
                assert gap == pytest.approx(0.0, abs=1e-12)
            else:
                assert gap > 1e-6


def test_ritz_reference_value(p511):
    res = ritz_min_eig(1, p511, 16)
    assert res.min_eigenvalue == pytest.approx(-0.20334538714081252, rel=1e-6)
    assert res.basis_size == 16
    assert res.gram_condition < 1e12
    assert np.max(np.abs(res.coefficients)) == pytest.approx(1.0, rel=1e-14)


def test_ritz_minimum_is_monotone_in_basis_size(p511):
    rho16 = ritz_min_eig(1, p511, 16).min_eigenvalue
    rho20 = ritz_min_eig(1, p511, 20).min_eigenvalue
    assert rho20 <= rho16 + 1e-10


def test_ritz_rejects_tiny_basis(p511):
    with pytest.raises(DomainError):
        ritz_min_eig(1, p511, 3)


def test_ritz_sign_flips_across_curve():
    N, alpha = 5, 1.0
    curve = beta_fs(N, alpha)
    below = ritz_min_eig(1, validate(N, alpha, curve - 0.05), 16).min_eigenvalue
    above = ritz_min_eig(1, validate(N, alpha, curve + 0.05), 16).min_eigenvalue
    assert below > 0.0 > above


def test_ritz_second_mode_is_coercive_on_curve():
    N, alpha = 5, 1.0
    p = validate(N, alpha, beta_fs(N, alpha))
    assert ritz_min_eig(2, p, 16).min_eigenvalue == pytest.approx(
        1.8984430015612932, rel=1e-6
    )


def test_fs_locate_matches_closed_form():
    located = fs_locate(5, 1.0, 1e-4)
    assert located == pytest.approx(beta_fs(5, 1.0), abs=1e-4)


def test_fs_locate_argument_checks():
    with pytest.raises(DomainError):
        fs_locate(5, -1.0, 1e-4)
    with pytest.raises(DomainError):
        fs_locate(5, 1.0, 0.0)
