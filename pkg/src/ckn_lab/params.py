"""Parameter domain, derived exponents, and the region taxonomy.

The inequality under study compares a weighted second-order energy

    integral |x|^(-beta) |div(|x|^alpha grad u)|^2 dx

against a weighted critical Lebesgue norm with weight |x|^beta.  Its
admissible parameter set is

    N >= 5,    alpha > 2 - N,    alpha - 2 < beta <= N*alpha/(N - 2),

and every quantity downstream (critical exponent, transformed dimension,
sharp constants, symmetry-breaking thresholds) is a function of the
triple (N, alpha, beta).  This module owns that bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .specfun import log_gamma

__all__ = [
    "ParamError",
    "Params",
    "validate",
    "Derived",
    "derive",
    "beta_fs",
    "b_fs_first_order",
    "FsCorrespondence",
    "fs_correspondence",
    "RegionClass",
    "classify",
    "HardyConstants",
    "hardy_comparison_constants",
    "rellich_infimum",
    "sphere_area",
]

#: Absolute tolerance for boundary comparisons in :func:`classify`.
BOUNDARY_TOL = 1e-12


class ParamError(ValueError):
    """Raised when a parameter triple violates the admissibility box.

    ``reasons`` lists every violated condition, not just the first.
    """

    def __init__(self, reasons: list[str]):
        self.reasons = list(reasons)
        super().__init__("; ".join(self.reasons))


def _violations(N: int, alpha: float, beta: float) -> list[str]:
    reasons = []
    if not (isinstance(N, int) and N >= 5):
        reasons.append(f"dimension must be an integer >= 5, got N={N!r}")
    else:
        if not alpha > 2 - N:
            reasons.append(f"alpha must exceed 2 - N = {2 - N}, got alpha={alpha!r}")
        if not beta > alpha - 2:
            reasons.append(f"beta must exceed alpha - 2 = {alpha - 2}, got beta={beta!r}")
        if not beta <= N * alpha / (N - 2):
            reasons.append(
                f"beta must not exceed N*alpha/(N-2) = {N * alpha / (N - 2)}, got beta={beta!r}"
            )
    return reasons


@dataclass(frozen=True)
class Params:
    """Validated parameter triple.  Construction enforces admissibility."""

    N: int
    alpha: float
    beta: float

    def __post_init__(self):
        reasons = _violations(self.N, self.alpha, self.beta)
        if reasons:
            raise ParamError(reasons)


def validate(N: int, alpha: float, beta: float) -> Params:
    """Return a validated :class:`Params` or raise :class:`ParamError`."""
    return Params(N, float(alpha), float(beta))


@dataclass(frozen=True)
class Derived:
    """Derived exponents for a parameter triple.

    p_star: critical exponent 2(N+beta)/(N-4+2*alpha-beta), in (2, inf).
    q:      radial substitution exponent 2/(2+beta-alpha), positive.
    M:      transformed dimension 2(N+beta)/(2+beta-alpha), always > 4
            on the admissible set (and >= N, with equality exactly on
            the upper beta boundary).
    omega:  surface area of the unit sphere S^(N-1).
    """

    p_star: float
    q: float
    M: float
    omega: float


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere S^(n-1) in R^n: 2 pi^(n/2) / Gamma(n/2)."""
    return 2.0 * math.exp(0.5 * n * math.log(math.pi) - log_gamma(0.5 * n))


def derive(p: Params) -> Derived:
    """Compute the derived exponents for validated parameters."""
    sig = 2.0 + p.beta - p.alpha
    kappa = p.N - 4.0 + 2.0 * p.alpha - p.beta  # positive on the valid set
    return Derived(
        p_star=2.0 * (p.N + p.beta) / kappa,
        q=2.0 / sig,
        M=2.0 * (p.N + p.beta) / sig,
        omega=sphere_area(p.N),
    )


def beta_fs(N: int, alpha: float) -> float:
    """Symmetry-breaking threshold curve beta as a function of alpha.

    Defined by -N + sqrt(N^2 + alpha^2 + 2(N-2)alpha); the radicand
    equals (alpha + N - 2)^2 + 4(N - 1) and is always positive.
    """
    rad = N * N + alpha * alpha + 2.0 * (N - 2.0) * alpha
    if rad < 0.0:  # pragma: no cover - unreachable for N >= 2, kept as a guard
        raise ParamError([f"threshold radicand negative: {rad}"])
    return -N + math.sqrt(rad)


def b_fs_first_order(N: int, a: float) -> float:
    """First-order (gradient-level) symmetry-breaking curve b(a).

    Uses the L^2 normalisation a_c = (N-2)/2 and requires a < a_c.
    """
    a_c = (N - 2.0) / 2.0
    if not a < a_c:
        raise ParamError([f"first-order curve needs a < (N-2)/2 = {a_c}, got a={a!r}"])
    d = a_c - a
    return N * d / (2.0 * math.sqrt(d * d + N - 1.0)) + a - a_c


class FsCorrespondence(tuple):
    """(a, b, tau, beta_mapped) linking the first-order curve to ours."""

    __slots__ = ()

    def __new__(cls, a, b, tau, beta_mapped):
        return super().__new__(cls, (a, b, tau, beta_mapped))

    a = property(lambda self: self[0])
    b = property(lambda self: self[1])
    tau = property(lambda self: self[2])
    beta_mapped = property(lambda self: self[3])


def fs_correspondence(N: int, alpha: float) -> FsCorrespondence:
    """Map alpha > 0 through the first-order curve and back.

    With a = -alpha/2, b = b(a) on the first-order curve and
    tau = 2N / (N - 2(1 + a - b)), the image beta_mapped = -b*tau
    reproduces :func:`beta_fs` exactly; the round trip is a consistency
    anchor between the two formulations.
    """
    if not alpha > 0.0:
        raise ParamError([f"correspondence defined for alpha > 0, got {alpha!r}"])
    a = -alpha / 2.0
    b = b_fs_first_order(N, a)
    tau = 2.0 * N / (N - 2.0 * (1.0 + a - b))
    return FsCorrespondence(a, b, tau, -b * tau)


class RegionClass(Enum):
    """Taxonomy of the (alpha, beta) plane at fixed dimension."""

    INVALID = "Invalid"
    CLASSICAL = "Classical"
    SYMMETRY_BREAKING = "SymmetryBreaking"
    CONJECTURED_SYMMETRY = "ConjecturedSymmetry"
    PROVEN_SYMMETRY_BOUNDARY = "ProvenSymmetryBoundary"
    NOT_ATTAINED_BOUNDARY = "NotAttainedBoundary"
    RELLICH_DEGENERATE = "RellichDegenerate"


def classify(N: int, alpha: float, beta: float, tol: float = BOUNDARY_TOL) -> RegionClass:
    """Classify a raw triple into exactly one :class:`RegionClass`.

    Boundary comparisons use absolute tolerance ``tol``.  The degenerate
    edge beta = alpha - 2 (critical exponent collapses to 2, the energy
    reduces to a pure Rellich form) sits outside the admissible box but
    is reported with its own tag rather than as plain Invalid.
    """
    if not (isinstance(N, int) and N >= 5) or not alpha > 2 - N:
        return RegionClass.INVALID
    upper = N * alpha / (N - 2.0)
    if abs(beta - (alpha - 2.0)) <= tol:
        return RegionClass.RELLICH_DEGENERATE
    if beta < alpha - 2.0 or beta > upper + tol:
        return RegionClass.INVALID
    if abs(alpha) <= tol and abs(beta) <= tol:
        return RegionClass.CLASSICAL
    on_upper = abs(beta - upper) <= tol
    if on_upper and alpha > tol:
        return RegionClass.NOT_ATTAINED_BOUNDARY
    if on_upper and alpha < -tol:
        return RegionClass.PROVEN_SYMMETRY_BOUNDARY
    if alpha > tol and beta > beta_fs(N, alpha) + tol:
        return RegionClass.SYMMETRY_BREAKING
    return RegionClass.CONJECTURED_SYMMETRY


@dataclass(frozen=True)
class HardyConstants:
    """Constants of the second-order comparison bound.

    hardy_e is the square (2/(N-4+2*alpha-beta))^2 entering the weighted
    Hardy step; bound_c = 1 + |alpha| + hardy_e*(|alpha| + alpha^2)
    dominates the ratio of the pure-Laplacian energy to the full energy.
    """

    hardy_e: float
    bound_c: float


def hardy_comparison_constants(p: Params) -> HardyConstants:
    e = (2.0 / (p.N - 4.0 + 2.0 * p.alpha - p.beta)) ** 2
    c = 1.0 + abs(p.alpha) + e * (abs(p.alpha) + p.alpha * p.alpha)
    return HardyConstants(hardy_e=e, bound_c=c)


def rellich_infimum(N: int, a: float) -> tuple[float, int]:
    """Sharp constant of the weighted Rellich inequality with weight |x|^(-2a).

    Returns ``(value, argmin_k)`` where value minimises
    f(k) = (k + N/2 + a)^2 (k + (N-4)/2 - a)^2 over integers k >= 0.

    The product inside the square is an upward parabola in k with roots
    at -N/2 - a and a - (N-4)/2, so f is increasing once k passes the
    larger root; scanning up to it (plus slack) is exhaustive.
    """
    k_hi = math.ceil(max(0.0, a - (N - 4.0) / 2.0, -N / 2.0 - a)) + 2
    best_val, best_k = math.inf, 0
    for k in range(k_hi + 1):
        g = (k + N / 2.0 + a) * (k + (N - 4.0) / 2.0 - a)
        val = g * g
        if val < best_val:
            best_val, best_k = val, k
    return best_val, best_k
