"""Exact profile algebra, ground states, ODE residuals, closed constants."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ckn_lab.params import derive, validate
from ckn_lab.profiles import (
    GaussianProfile,
    PowerPeakProfile,
    amplitude_constant,
    b_closed,
    constant_profile,
    cosh_profile_residual,
    emden_fowler,
    euler_lagrange_residual,
    extremal,
    kernel_mode,
    mode_laplacian,
    s_0_closed,
    s_r_closed,
    weighted_laplacian,
)
from ckn_lab.specfun import DomainError

R_SAMPLES = np.geomspace(1e-3, 1e3, 41)


# -- algebra ----------------------------------------------------------------


def test_eval_matches_direct_formula():
    prof = PowerPeakProfile([(2.0, 1, -3), (-0.5, 3, -2)], sigma=2, nu=1.5)
    for r in (0.1, 1.0, 7.3):
        direct = 2.0 * r * (1.5 + r * r) ** -3 - 0.5 * r**3 * (1.5 + r * r) ** -2
        assert prof.eval(r) == pytest.approx(direct, rel=1e-14)


def test_eval_at_origin_is_safe():
    prof = PowerPeakProfile([(1.0, 0, -2)], sigma=2, nu=1.0)
    assert prof.eval(0.0) == pytest.approx(1.0, rel=1e-14)
    assert prof.deriv(0.0, 1) == 0.0


def test_derivative_against_finite_differences():
    prof = PowerPeakProfile([(1.0, 2, -3), (0.7, 0, -1)], sigma=3, nu=2.0)
    h = 1e-6
    for r in (0.3, 1.1, 4.0):
        fd = (prof.eval(r + h) - prof.eval(r - h)) / (2.0 * h)
        assert prof.deriv(r, 1) == pytest.approx(fd, rel=1e-8)


def test_fourth_derivative_of_known_function():
    # f = (1+r^2)^(-1): f'''' has the closed form 24(5r^4-10r^2+1)/(1+r^2)^5
    prof = PowerPeakProfile([(1.0, 0, -1)], sigma=2, nu=1.0)
    for r in (0.2, 1.0, 3.0):
        expected = 24.0 * (5.0 * r**4 - 10.0 * r**2 + 1.0) / (1.0 + r * r) ** 5
        assert prof.deriv(r, 4) == pytest.approx(expected, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(min_value=-3.0, max_value=3.0),
    st.integers(min_value=0, max_value=3),
    st.integers(min_value=-4, max_value=-1),
)
def test_power_multiplication_product_rule(c, p, e):
    """d/dr[r^2 f] = 2r f + r^2 f' pointwise, exactly in the algebra."""
    if c == 0.0:
        return
    f = PowerPeakProfile([(c, p, e)], sigma=2, nu=1.0)
    lhs = f.times_power(2)
    rs = np.array([0.5, 1.0, 2.5])
    got = lhs.deriv(rs, 1)
    want = 2.0 * rs * f.eval(rs) + rs * rs * f.deriv(rs, 1)
    # the oracle itself cancels near sign changes, so allow tiny absolute slack
    np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-13)


def test_addition_requires_matching_shape():
    a = PowerPeakProfile([(1.0, 0, -1)], sigma=2, nu=1.0)
    b = PowerPeakProfile([(1.0, 0, -1)], sigma=3, nu=1.0)
    with pytest.raises(DomainError):
        a + b


def test_compose_power_substitutes_radius():
    f = PowerPeakProfile([(1.0, 1, -2)], sigma=2, nu=1.0)
    g = f.compose_power(3)  # g(r) = f(r^3)
    for r in (0.4, 1.7):
        assert g.eval(r) == pytest.approx(f.eval(r**3), rel=1e-13)


def test_canonical_collapses_exact_cancellation_to_empty():
    # (1+r^2)^2 - 2 r^2 (1+r^2) + r^4 - 1 == 0 identically, but the four
    # cells live at three different peak levels so the plain term-merge
    # cannot see it; canonical() must
    f = PowerPeakProfile(
        [(1.0, 0, 2), (-2.0, 2, 1), (1.0, 4, 0), (-1.0, 0, 0)], sigma=2, nu=1.0
    )
    g = f.canonical()
    assert len(g.terms) == 0
    np.testing.assert_allclose(g.eval(R_SAMPLES), 0.0, atol=1e-300)


def test_canonical_preserves_values():
    # (1+r^2)^2 - (1 + r^4) == 2 r^2
    f = PowerPeakProfile([(1.0, 0, 2), (-1.0, 0, 0), (-1.0, 4, 0)], sigma=2, nu=1.0)
    g = f.canonical()
    np.testing.assert_allclose(g.eval(R_SAMPLES), 2.0 * R_SAMPLES**2, rtol=1e-12)
    assert len(g.terms) == 1


def test_decay_and_origin_exponents():
    f = PowerPeakProfile([(1.0, 1, -3), (2.0, 0, -1)], sigma=2, nu=1.0)
    assert float(f.origin_exponent) == 0.0
    # tail: max(p + sigma*e) = max(1-6, 0-2) = -2
    assert float(f.decay_exponent) == -2.0


def test_gaussian_profile_derivatives():
    g = GaussianProfile([(1.0, 0)])
    for r in (0.0, 0.5, 2.0):
        assert g.eval(r) == pytest.approx(math.exp(-r * r), rel=1e-14)
        assert g.deriv(r, 1) == pytest.approx(-2.0 * r * math.exp(-r * r), rel=1e-13)
        assert g.deriv(r, 2) == pytest.approx(
            (4.0 * r * r - 2.0) * math.exp(-r * r), rel=1e-13
        )


# -- ground-state family ------------------------------------------------------


def test_amplitude_constant_reference_values(p511, p500):
    assert amplitude_constant(p511) == pytest.approx(384.0**0.25, rel=1e-13)
    assert amplitude_constant(p500) == pytest.approx(105.0**0.125, rel=1e-13)


def test_extremal_peak_value(p511):
    u = extremal(p511)
    assert u.eval(0.0) == pytest.approx(384.0**0.25, rel=1e-13)
    assert u.params is p511
    assert u.lam == 1.0


def test_extremal_dilation_family(p511):
    """u_lam(r) = lam^(kappa/2) u(lam r), with kappa = 2 here."""
    u1 = extremal(p511)
    u2 = extremal(p511, lam=2.0)
    for r in (0.1, 1.0, 5.0):
        assert u2.eval(r) == pytest.approx(2.0 * u1.eval(2.0 * r), rel=1e-13)


def test_scaling_direction_is_dilation_derivative(p511):
    """d/dlam u_lam at lam=1 is proportional to the Z0 kernel direction.

    The ратio is (kappa/2)*C and must be r-independent; r=1 sits exactly
    at the sign change of both sides, so probe off the node.
    """
    h = 1e-6
    z0 = kernel_mode(p511, "Z0")
    expected = 0.5 * 2.0 * 384.0**0.25  # kappa/2 * C
    for r in (0.3, 1.3, 3.0):
        fd = (extremal(p511, 1.0 + h).eval(r) - extremal(p511, 1.0 - h).eval(r)) / (
            2.0 * h
        )
        assert fd / z0.eval(r) == pytest.approx(expected, rel=1e-7)


def test_kernel_modes_shape(p511):
    z0 = kernel_mode(p511, "Z0")
    z1 = kernel_mode(p511, "Z1_radial")
    assert z0.eval(1.0) == pytest.approx(0.0, abs=1e-14)  # sign change at r=1
    assert z0.eval(0.5) > 0.0 > z0.eval(2.0)
    assert z1.eval(1.0) == pytest.approx(2.0**-2.0, rel=1e-13)
    with pytest.raises(DomainError):
        kernel_mode(p511, "Z7")


# -- operators and residuals --------------------------------------------------


def test_weighted_laplacian_reduces_to_laplacian(p500):
    # alpha=0: operator is f'' + (N-1) f'/r; check on (1+r^2)^(-1), N=5
    f = PowerPeakProfile([(1.0, 0, -1)], sigma=2, nu=1.0)
    lap = weighted_laplacian(f, 0.0, 5)
    for r in (0.3, 1.0, 2.0):
        t = 1.0 + r * r
        expected = (8.0 * r * r / t**3 - 2.0 / t**2) + (5.0 - 1.0) / r * (
            -2.0 * r / t**2
        )
        assert lap.eval(r) == pytest.approx(expected, rel=1e-12)


def test_mode_laplacian_adds_angular_term():
    f = PowerPeakProfile([(1.0, 1, -2)], sigma=2, nu=1.0)
    plain = mode_laplacian(f, 6)
    mode = mode_laplacian(f, 6, lam=5.0)
    for r in (0.5, 1.5):
        assert mode.eval(r) == pytest.approx(
            plain.eval(r) - 5.0 * f.eval(r) / (r * r), rel=1e-12
        )


EL_POINTS = [(5, 1.0, 1.0), (5, 0.0, 0.0), (6, 1.0, 0.5), (5, -1.0, -1.7)]


@pytest.mark.parametrize("N, alpha, beta", EL_POINTS)
@pytest.mark.parametrize("lam", [1.0, 2.0])
def test_ground_state_solves_euler_lagrange(N, alpha, beta, lam):
    p = validate(N, alpha, beta)
    res = euler_lagrange_residual(extremal(p, lam=lam), p)
    assert res < 1e-12


def test_perturbed_amplitude_fails_euler_lagrange(p511):
    u = extremal(p511)
    wrong = PowerPeakProfile(
        [(1.1 * c, pp, ee) for c, pp, ee in u.terms], sigma=u.sigma_frac, nu=u.nu
    )
    assert euler_lagrange_residual(wrong, p511) > 1e-2


def test_transform_to_autonomous_picture(p511):
    """phi of the ground state matches the closed cosh form."""
    u = extremal(p511)
    phi, residual = emden_fowler(u, p511)
    assert phi(0.0) == pytest.approx(384.0**0.25 / 2.0, rel=1e-12)
    ts = np.linspace(-5.0, 5.0, 41)
    # closed form at M=6: 384^(1/4) (2 cosh t)^(-1)
    closed = 384.0**0.25 / (2.0 * np.cosh(ts))
    np.testing.assert_allclose(phi(ts), closed, rtol=1e-11)
    assert np.max(np.abs(residual(ts))) < 1e-10


@pytest.mark.parametrize("m", [4.5, 5.0, 6.0, 8.0])
def test_cosh_profile_solves_autonomous_equation(m):
    ts = np.linspace(-8.0, 8.0, 81)
    assert np.max(np.abs(cosh_profile_residual(m, ts))) < 1e-12


# -- closed-form constants ----------------------------------------------------


def test_b_closed_reference_values():
    assert b_closed(5.0) == pytest.approx(7.481940131235293, rel=1e-12)
    assert b_closed(6.0) == pytest.approx(25.055152903480717, rel=1e-12)
    with pytest.raises(DomainError):
        b_closed(4.0)


def test_b_closed_independent_oracle():
    # recompute from stdlib gamma at a fractional M
    m = 5.5
    gamma = (m - 4.0) * (m - 2.0) * m * (m + 2.0)
    bracket = math.gamma(m / 2.0) ** 2 / (2.0 * math.gamma(m))
    assert b_closed(m) == pytest.approx(gamma * bracket ** (4.0 / m), rel=1e-12)


def test_s_r_closed_reference_value(p511):
    assert s_r_closed(p511) == pytest.approx(221.68826741979237, rel=1e-12)


def test_s_0_closed_independent_oracle():
    for N in range(5, 11):
        poly = N * (N - 4.0) * (N * N - 4.0)
        expected = (
            math.pi**2 * poly * (math.gamma(N / 2.0) / math.gamma(N)) ** (4.0 / N)
        )
        assert s_0_closed(N) == pytest.approx(expected, rel=1e-13)


def test_unweighted_reduction(p500):
    assert s_r_closed(p500) == pytest.approx(s_0_closed(5), rel=1e-13)
