"""Self-contained verification battery behind the `verify-all` command.

Each check re-derives one of the package's analytic claims numerically
and reports pass/fail with a short detail string.  The `fast` level
trims grids so the whole battery finishes in well under a minute; `full`
runs everything at production grid sizes.

The `perturb` argument is a sensitivity hook for the test suite: it
multiplies one closed-form constant inside one check by (1 + perturb),
so any nonzero value must make the battery fail (proving the harness
actually compares things).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .identities import (
    BATTERY_POINTS,
    BATTERY_PROFILES,
    TestFunction,
    check_boundary_sharp_constant,
    check_cross_term_identity,
    check_divergence_expansion,
    check_eta_substitution,
    check_laplacian_bound,
    check_pohozaev_identity,
    check_rellich_sobolev,
    rellich_sobolev_extremal,
)
from .params import beta_fs, derive, fs_correspondence, validate
from .profiles import (
    PowerPeakProfile,
    cosh_profile_residual,
    euler_lagrange_residual,
    extremal,
    s_0_closed,
    s_r_closed,
)
from .quadrature import integrate_semiinfinite, power_weighted, quotient_radial
from .spectral import _potential_constant, fs_locate, mode_quadratic_form, ritz_min_eig
from .variation import Verdict, certify, second_variation

__all__ = ["CheckResult", "run_all", "EXTREMALITY_POINTS"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


#: Ten parameter points spanning every region class that carries a radial
#: extremal (interior breaking, interior symmetric, classical origin, both
#: upper-boundary signs, deep negative alpha, larger N).
EXTREMALITY_POINTS = (
    (5, 0.0, 0.0),
    (5, 1.0, 1.0),
    (5, 1.0, 0.3),
    (5, 1.0, 5.0 / 3.0),
    (5, -1.0, -5.0 / 3.0),
    (5, -1.0, -1.7),
    (6, 1.0, 0.5),
    (6, 2.0, 2.5),
    (7, 2.0, 1.3),
    (8, -2.0, -8.0 / 3.0),
)


def _check_closed_forms(fast: bool, perturb: float) -> CheckResult:
    worst = 0.0
    for N in range(5, 11):
        s_plain = s_0_closed(N)
        s_general = s_r_closed(validate(N, 0.0, 0.0)) * (1.0 + perturb)
        worst = max(worst, abs(s_general - s_plain) / s_plain)
    return CheckResult(
        "closed_form_consistency", worst < 1e-12, f"max rel defect {worst:.3e}"
    )


def _check_extremality(fast: bool, perturb: float) -> CheckResult:
    points = EXTREMALITY_POINTS[:4] if fast else EXTREMALITY_POINTS
    worst = 0.0
    for N, a, b in points:
        p = validate(N, a, b)
        gap = abs(quotient_radial(extremal(p), p) - s_r_closed(p)) / s_r_closed(p)
        worst = max(worst, gap)
    return CheckResult("extremality", worst < 1e-6, f"max rel defect {worst:.3e}")


def _check_euler_lagrange(fast: bool, perturb: float) -> CheckResult:
    points = EXTREMALITY_POINTS[:4] if fast else EXTREMALITY_POINTS
    worst = 0.0
    for N, a, b in points:
        p = validate(N, a, b)
        worst = max(worst, euler_lagrange_residual(extremal(p), p))
    return CheckResult("euler_lagrange_residual", worst < 1e-8, f"max {worst:.3e}")


def _check_transform_chain(fast: bool, perturb: float) -> CheckResult:
    ts = np.linspace(-6.0, 6.0, 25 if fast else 101)
    worst = 0.0
    for m in (4.5, 5.0, 6.0, 8.0):
        worst = max(worst, float(np.max(np.abs(cosh_profile_residual(m, ts)))))
    return CheckResult("transform_closed_form", worst < 1e-6, f"max {worst:.3e}")


def _check_fs_recoveries(fast: bool, perturb: float) -> CheckResult:
    pairs = ((5, 1.0),) if fast else tuple(
        (N, a) for N in (5, 6) for a in (0.5, 1.0, 2.0)
    )
    worst_first_order = 0.0
    worst_spectral = 0.0
    for N, a in pairs:
        closed = beta_fs(N, a)
        mapped = fs_correspondence(N, a).beta_mapped
        worst_first_order = max(worst_first_order, abs(mapped - closed))
        located = fs_locate(N, a, 1e-4)
        worst_spectral = max(worst_spectral, abs(located - closed))
    ok = worst_first_order < 1e-10 and worst_spectral < 1e-4
    return CheckResult(
        "fs_curve_recoveries",
        ok,
        f"first-order {worst_first_order:.3e}, spectral {worst_spectral:.3e}",
    )


def _sign_law_grid(fast: bool):
    grid = []
    alphas = (0.5, 1.0) if fast else (0.5, 1.0, 2.0, 3.0)
    offsets = (-0.15, 0.15) if fast else (-0.3, -0.15, -0.05, 0.05, 0.15)
    for a in alphas:
        for N in (5, 6):
            curve = beta_fs(N, a)
            for da in offsets:
                beta = curve + da
                if a - 2.0 < beta <= N * a / (N - 2.0):
                    grid.append((N, a, beta))
    return grid


def _check_sign_law(fast: bool, perturb: float) -> CheckResult:
    bad = []
    for N, a, b in _sign_law_grid(fast):
        p = validate(N, a, b)
        sv = second_variation(p)
        expected = math.copysign(1.0, beta_fs(N, a) - b)
        if math.copysign(1.0, sv.value) != expected:
            bad.append((N, a, b))
    return CheckResult(
        "second_variation_sign_law",
        not bad,
        "all signs match curve side" if not bad else f"sign mismatches at {bad}",
    )


def _check_certificate(fast: bool, perturb: float) -> CheckResult:
    cert = certify(validate(5, 1.0, 1.0))
    ok = (
        cert.verdict is Verdict.BREAKING
        and not cert.discrepancies
        and cert.witness_signs == (-1, -1, -1)
    )
    return CheckResult(
        "breaking_certificate",
        ok,
        f"verdict {cert.verdict.value}, signs {cert.witness_signs}",
    )


def _check_kernel_at_curve(fast: bool, perturb: float) -> CheckResult:
    N, a = 5, 1.0
    curve = beta_fs(N, a)
    p = validate(N, a, curve)
    m = derive(p).M
    x1 = PowerPeakProfile([(1.0, 1, -(m - 2.0) / 2.0)], sigma=2, nu=1.0)
    q1 = mode_quadratic_form(x1, 1, p)
    # Relative to the (positive) zero-order part of the form, which equals
    # the operator part when the form vanishes.
    pot = integrate_semiinfinite(
        lambda s: power_weighted(x1.eval(s) / (1.0 + s * s) ** 2, s, 2.0, m - 1.0)
    ).value
    rel = abs(q1) / (_potential_constant(m) * pot)
    rho2 = ritz_min_eig(2, p, 16).min_eigenvalue
    below = ritz_min_eig(1, validate(N, a, curve - 0.05), 16).min_eigenvalue
    above = ritz_min_eig(1, validate(N, a, curve + 0.05), 16).min_eigenvalue
    ok = rel < 1e-8 and rho2 > 0.0 and below > 0.0 and above < 0.0
    return CheckResult(
        "kernel_at_curve",
        ok,
        f"rel |Q1(X1)| {rel:.3e}, rho2 {rho2:.3e}, bracket ({below:.3e}, {above:.3e})",
    )


def _check_identity_battery(fast: bool, perturb: float) -> CheckResult:
    profiles = BATTERY_PROFILES[:2] if fast else BATTERY_PROFILES
    points = BATTERY_POINTS[:3] if fast else BATTERY_POINTS
    worst = 0.0
    for N, a, b in points:
        p = validate(N, a, b)
        for _, prof in profiles:
            for k in (0, 1):
                u = TestFunction(prof, k)
                ratio, bound, ok = check_laplacian_bound(u, p)
                if not ok:
                    return CheckResult(
                        "identity_battery",
                        False,
                        f"laplacian bound fails at ({N},{a},{b}) mode {k}",
                    )
                worst = max(worst, check_divergence_expansion(u, p))
                worst = max(worst, check_pohozaev_identity(u, N))
                if k == 0:
                    worst = max(worst, check_cross_term_identity(u, p))
    eta_profile = TestFunction(PowerPeakProfile([(1.0, 0, -2)], sigma=2, nu=1.0))
    for N, a in ((5, -1.0), (6, -0.5), (8, -2.0)):
        worst = max(worst, check_eta_substitution(eta_profile, N, a))
    return CheckResult("identity_battery", worst < 1e-8, f"max defect {worst:.3e}")


def _check_boundary_equality(fast: bool, perturb: float) -> CheckResult:
    pairs = ((5, -1.0),) if fast else ((5, -1.0), (6, -0.5), (8, -2.0))
    worst = 0.0
    for N, a in pairs:
        quotient, constant, defect = check_boundary_sharp_constant(N, a)
        consistency = abs(
            s_r_closed(validate(N, a, N * a / (N - 2.0))) - constant
        ) / constant
        worst = max(worst, defect, consistency)
    mu = 1.0 / 3.0
    lhs, rhs, _ = check_rellich_sobolev(rellich_sobolev_extremal(5, mu), 5, mu)
    worst = max(worst, abs(lhs / rhs - 1.0))
    return CheckResult("boundary_equality", worst < 1e-6, f"max defect {worst:.3e}")


_CHECKS = (
    _check_closed_forms,
    _check_extremality,
    _check_euler_lagrange,
    _check_transform_chain,
    _check_fs_recoveries,
    _check_sign_law,
    _check_certificate,
    _check_kernel_at_curve,
    _check_identity_battery,
    _check_boundary_equality,
)


def run_all(level: str = "fast", perturb: float = 0.0) -> list[CheckResult]:
    if level not in ("fast", "full"):
        raise ValueError(f"level must be 'fast' or 'full', got {level!r}")
    fast = level == "fast"
    return [check(fast, perturb) for check in _CHECKS]
