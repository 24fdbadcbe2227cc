"""Numerical verification of the integral identities behind the inequality.

Every identity is checked on separated test functions u = f(r) Y_k(x/|x|)
with Y_k a degree-k spherical harmonic.  Angular integrals are then exact
(orthonormality), so each N-dimensional statement reduces to 1D radial
quadrature and verifies to near machine precision — no Monte Carlo noise.
Both sides of a quadratic identity carry the same harmonic normalization
factor, which therefore cancels and is omitted throughout.

Mode-k reduction rules used below, for u = f(r) Y_k:

    Delta u              -> f'' + (N-1)f'/r - lam_k f/r^2       (lam_k = k(N-2+k))
    div(|x|^a grad u)    -> r^a [f'' + (N-1+a)f'/r - lam_k f/r^2]
    |grad u|^2           -> (f')^2 + lam_k f^2/r^2
    x . grad u           -> r f'
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import Params, derive, hardy_comparison_constants, sphere_area, validate
from .profiles import (
    GaussianProfile,
    PowerPeakProfile,
    RadialProfile,
    extremal,
    s_0_closed,
    s_r_closed,
)
from .quadrature import (
    integrate_semiinfinite,
    norm_sq,
    power_weighted,
    quotient_radial,
    signed_weighted,
)
from .specfun import DomainError

__all__ = [
    "TestFunction",
    "ShiftConstants",
    "BATTERY_PROFILES",
    "BATTERY_POINTS",
    "check_laplacian_bound",
    "check_cross_term_identity",
    "check_divergence_expansion",
    "check_pohozaev_identity",
    "rellich_sobolev_constants",
    "check_eta_substitution",
    "rellich_sobolev_extremal",
    "check_rellich_sobolev",
    "check_boundary_sharp_constant",
]


@dataclass(frozen=True)
class TestFunction:
    """A separated test function: radial factor times the mode-k harmonic."""

    __test__ = False  # calculus-of-variations noun, not a pytest suite

    radial_part: RadialProfile
    mode_k: int = 0

    def __post_init__(self):
        if self.mode_k < 0:
            raise DomainError(f"mode index must be >= 0, got {self.mode_k}")


#: Fixed battery: varied decay rates, origin behavior, and families.
BATTERY_PROFILES = (
    ("inverse_square_2", PowerPeakProfile([(1.0, 0, -2)], sigma=2, nu=1.0)),
    ("inverse_square_3", PowerPeakProfile([(1.0, 0, -3)], sigma=2, nu=1.0)),
    ("gaussian", GaussianProfile([(1.0, 0.0)])),
    ("bump_r2", PowerPeakProfile([(1.0, 2, -4)], sigma=2, nu=1.0)),
    ("quartic_peak", PowerPeakProfile([(1.0, 0, -1.5)], sigma=4, nu=1.0)),
)

#: Fixed parameter points; all keep N + 2*alpha - beta inside (4, 12) so
#: that every integral in the battery converges for every profile above.
BATTERY_POINTS = (
    (5, 0.0, 0.0),
    (5, 1.0, 1.0),
    (5, 0.5, 0.2),
    (6, 1.0, 0.5),
    (5, -1.0, -1.7),
)


def _integral(fn) -> float:
    return integrate_semiinfinite(fn).value


def _mode_eigenvalue(N: int, k: int) -> float:
    return float(k * (N - 2 + k))


def check_laplacian_bound(u: TestFunction, p: Params):
    """Pure-Laplacian energy vs the full weighted energy.

    Returns (ratio, bound, passed): ratio of int |x|^(2a-b) |Delta u|^2 to
    the squared weighted norm, the closed-form comparison constant, and
    whether ratio <= bound + 1e-10.  At alpha = 0 the two energies are
    the same integral and the ratio is exactly 1.
    """
    f = u.radial_part
    lam = _mode_eigenvalue(p.N, u.mode_k)
    drift = p.N - 1.0 + p.alpha
    w = 2.0 * p.alpha - p.beta + p.N - 1.0

    def plain(r):
        vals = f.deriv(r, 2) + (p.N - 1.0) * f.deriv(r, 1) / r - lam * f.eval(r) / r**2
        return power_weighted(vals, r, 2.0, w)

    def weighted(r):
        vals = f.deriv(r, 2) + drift * f.deriv(r, 1) / r - lam * f.eval(r) / r**2
        return power_weighted(vals, r, 2.0, w)

    numerator = _integral(plain)
    denominator = _integral(weighted)
    if denominator == 0.0:
        raise DomainError("test function annihilated by the weighted operator")
    ratio = numerator / denominator
    bound = hardy_comparison_constants(p).bound_c
    return ratio, bound, ratio <= bound + 1e-10


def check_cross_term_identity(u: TestFunction, p: Params) -> float:
    """First-order/zeroth-order splitting of the mixed energy term.

    For radial u, the cross integral of the weighted operator against u
    equals a Hardy-type zeroth-order term plus the weighted gradient:

        -int r^(2a-b-2) [f'' + (N-1+a)f'/r] f r^(N-1) dr
          = (2+b-a)(N+2a-b-4)/2 * int r^(2a-b-4) f^2 r^(N-1) dr
            + int r^(2a-b-2) (f')^2 r^(N-1) dr

    Returns |LHS - RHS| / (|LHS| + |RHS|), 0 for the zero function.
    """
    if u.mode_k != 0:
        raise DomainError("cross-term identity applies to radial test functions")
    f = u.radial_part
    drift = p.N - 1.0 + p.alpha
    base = 2.0 * p.alpha - p.beta + p.N - 1.0

    def lhs_fn(r):
        op = f.deriv(r, 2) + drift * f.deriv(r, 1) / r
        return signed_weighted(-op * f.eval(r), r, base - 2.0)

    def zeroth_fn(r):
        return power_weighted(f.eval(r), r, 2.0, base - 4.0)

    def gradient_fn(r):
        return power_weighted(f.deriv(r, 1), r, 2.0, base - 2.0)

    lhs = _integral(lhs_fn)
    coeff = (2.0 + p.beta - p.alpha) * (p.N + 2.0 * p.alpha - p.beta - 4.0) / 2.0
    rhs = coeff * _integral(zeroth_fn) + _integral(gradient_fn)
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs) + 1e-300)


def check_divergence_expansion(u: TestFunction, p: Params) -> float:
    """Three-term expansion of the weighted energy.

    div(|x|^a grad u) = |x|^a Delta u + a |x|^(a-2) (x . grad u), so the
    squared weighted norm expands into Laplacian, cross, and radial-
    gradient terms.  Returns the relative defect; exactly 0 at alpha = 0.
    """
    f = u.radial_part
    lam = _mode_eigenvalue(p.N, u.mode_k)
    drift = p.N - 1.0 + p.alpha
    base = 2.0 * p.alpha - p.beta + p.N - 1.0

    def laplacian(r):
        return f.deriv(r, 2) + (p.N - 1.0) * f.deriv(r, 1) / r - lam * f.eval(r) / r**2

    def lhs_fn(r):
        vals = f.deriv(r, 2) + drift * f.deriv(r, 1) / r - lam * f.eval(r) / r**2
        return power_weighted(vals, r, 2.0, base)

    lhs = _integral(lhs_fn)
    pure = _integral(lambda r: power_weighted(laplacian(r), r, 2.0, base))
    if p.alpha == 0.0:
        rhs = pure
    else:
        cross = _integral(
            lambda r: signed_weighted(laplacian(r) * f.deriv(r, 1), r, base - 1.0)
        )
        radial_sq = _integral(lambda r: power_weighted(f.deriv(r, 1), r, 2.0, base - 2.0))
        rhs = pure + 2.0 * p.alpha * cross + p.alpha**2 * radial_sq
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs) + 1e-300)


def check_pohozaev_identity(v: TestFunction, N: int) -> float:
    """Scaling identity for the inverse-square-weighted gradient energy.

    (N-4) int |x|^(-2) |grad v|^2 = 2 int (x . grad v) div(|x|^(-2) grad v);
    mode-k reduced, returns the relative defect.
    """
    if N < 5:
        raise DomainError(f"dimension must be at least 5, got {N}")
    f = v.radial_part
    lam = _mode_eigenvalue(N, v.mode_k)

    def lhs_fn(r):
        grad_sq = power_weighted(f.deriv(r, 1), r, 2.0, N - 3.0)
        if lam != 0.0:
            grad_sq = grad_sq + lam * power_weighted(f.eval(r), r, 2.0, N - 5.0)
        return grad_sq

    def rhs_fn(r):
        op = f.deriv(r, 2) + (N - 3.0) * f.deriv(r, 1) / r - lam * f.eval(r) / r**2
        return signed_weighted(f.deriv(r, 1) * op, r, N - 2.0)

    lhs = (N - 4.0) * _integral(lhs_fn)
    rhs = 2.0 * _integral(rhs_fn)
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs) + 1e-300)


# ---------------------------------------------------------------------------
# Negative-alpha regime: shifted Rellich--Sobolev reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShiftConstants:
    """Constants of the power-shift reduction for 2-N < alpha < 0.

    mu5 is the shift exponent in (0, N-4); c_mu1 and c_mu2 are the
    coefficients of the Hardy-type intermediate terms; eta is the power
    of the substitution u = |x|^eta v that equalizes the critical norms.
    """

    mu5: float
    c_mu1: float
    c_mu2: float
    eta: float


def _shift_coefficients(N: int, mu: float):
    if not (0.0 < mu < N - 4.0):
        raise DomainError(f"shift exponent must lie in (0, {N - 4}), got {mu}")
    core = mu * (2.0 * (N - 4.0) - mu)
    c1 = (N * N - 4.0 * N + 8.0) / (2.0 * (N - 4.0) ** 2) * core
    c2 = N * N / (16.0 * (N - 4.0) ** 2) * core**2 - (N - 2.0) / 2.0 * core
    return c1, c2


def rellich_sobolev_constants(N: int, alpha: float) -> ShiftConstants:
    if not (2 - N < alpha < 0):
        raise DomainError(
            f"shift reduction needs 2 - N < alpha < 0, got alpha={alpha} at N={N}"
        )
    mu = (N - 4.0) * alpha / (2.0 - N)
    c1, c2 = _shift_coefficients(N, mu)
    eta = -(N - 4.0) * alpha / (2.0 * (N - 2.0))
    return ShiftConstants(mu5=mu, c_mu1=c1, c_mu2=c2, eta=eta)


def check_eta_substitution(v: TestFunction, N: int, alpha: float) -> float:
    """Equality of critical norms under the power substitution u = |x|^eta v.

    The exponents satisfy N*alpha/(N-2) + eta * 2N/(N-4) = 0, so the two
    weighted integrals are the same integral; this measures how far the
    separately-assembled sides drift apart (rounding only).
    """
    if v.mode_k != 0:
        raise DomainError("substitution check applies to radial test functions")
    consts = rellich_sobolev_constants(N, alpha)
    f = v.radial_part
    crit = 2.0 * N / (N - 4.0)
    lhs_weight = N * alpha / (N - 2.0) + consts.eta * crit + (N - 1.0)

    def lhs_fn(r):
        return power_weighted(f.eval(r), r, crit, lhs_weight)

    def rhs_fn(r):
        return power_weighted(f.eval(r), r, crit, N - 1.0)

    lhs = _integral(lhs_fn)
    rhs = _integral(rhs_fn)
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs) + 1e-300)


def rellich_sobolev_extremal(
    N: int, mu: float, amplitude: float = 1.0, nu: float = 1.0
) -> PowerPeakProfile:
    """Equality-case profile A r^(-mu/2) (nu + r^(2(1-mu/(N-4))))^(-(N-4)/2)."""
    if not (0.0 < mu < N - 4.0):
        raise DomainError(f"shift exponent must lie in (0, {N - 4}), got {mu}")
    sigma = 2.0 * (1.0 - mu / (N - 4.0))
    return PowerPeakProfile(
        [(amplitude, -mu / 2.0, -(N - 4.0) / 2.0)], sigma=sigma, nu=nu
    )


def check_rellich_sobolev(v: RadialProfile, N: int, mu: float):
    """Shifted Rellich--Sobolev inequality at a radial profile.

    lhs = int |Delta v|^2 - c_mu1 int |grad v|^2/|x|^2 + c_mu2 int v^2/|x|^4,
    rhs = (1 - mu/(N-4))^(4-4/N) * S0 * (int |v|^(2N/(N-4)))^((N-4)/N),
    both with their full angular factors.  Returns (lhs, rhs, passed)
    with passed = lhs >= rhs*(1 - 1e-8); equality holds on the
    `rellich_sobolev_extremal` family.
    """
    if N < 5:
        raise DomainError(f"dimension must be at least 5, got {N}")
    c1, c2 = _shift_coefficients(N, mu)
    omega = sphere_area(N)
    crit = 2.0 * N / (N - 4.0)

    def laplacian_sq(r):
        vals = v.deriv(r, 2) + (N - 1.0) * v.deriv(r, 1) / r
        return power_weighted(vals, r, 2.0, N - 1.0)

    def gradient_sq(r):
        return power_weighted(v.deriv(r, 1), r, 2.0, N - 3.0)

    def zeroth_sq(r):
        return power_weighted(v.eval(r), r, 2.0, N - 5.0)

    def critical(r):
        return power_weighted(v.eval(r), r, crit, N - 1.0)

    lhs = omega * (
        _integral(laplacian_sq) - c1 * _integral(gradient_sq) + c2 * _integral(zeroth_sq)
    )
    rhs = (
        (1.0 - mu / (N - 4.0)) ** (4.0 - 4.0 / N)
        * s_0_closed(N)
        * (omega * _integral(critical)) ** ((N - 4.0) / N)
    )
    return lhs, rhs, lhs >= rhs * (1.0 - 1e-8)


def check_boundary_sharp_constant(N: int, alpha: float):
    """Sharp constant on the upper parameter boundary for alpha < 0.

    At beta = N*alpha/(N-2) the sharp constant collapses to
    (1 + alpha/(N-2))^(4-4/N) * S0.  Returns (quotient, constant, defect):
    the measured quotient of the minimizer, the closed-form constant, and
    their relative gap.
    """
    if not (2 - N < alpha < 0):
        raise DomainError(
            f"boundary equality needs 2 - N < alpha < 0, got alpha={alpha} at N={N}"
        )
    beta = N * alpha / (N - 2.0)
    p = validate(N, alpha, beta)
    quotient = quotient_radial(extremal(p), p)
    constant = (1.0 + alpha / (N - 2.0)) ** (4.0 - 4.0 / N) * s_0_closed(N)
    return quotient, constant, abs(quotient - constant) / constant
