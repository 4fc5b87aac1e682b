"""The researcher's objective and optimal (distance, output) choice.

A researcher studying a question at canonical distance ``d`` in an area of
length ``X`` with success probability ``rho`` earns

    payoff = rho * benefit(d; X) - eta * ctilde(rho) * sigma2(d; X).

Interior optima satisfy the two first-order conditions

    eta * ctilde_prime(rho) = benefit / sigma2            (output)
    rho * benefit_slope     = eta * ctilde * sigma2_slope (distance)

which this module solves by reducing each candidate class to a single
bracketed bisection.  ``opt_choice`` compares expanding beyond the frontier
against deepening every bounded area; ties go to expanding, then to the
lowest-index area, so the simulator is deterministic.

With eta = 0 the cost term is dropped entirely (including at rho = 1, where
the kernel's infinite-cost sentinel would otherwise apply) and the choice
falls back to the costless benefit maximizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

from ._solve import ConvergenceError, bisect_root, golden_max, scan_roots
from .knowledge import KnowledgeSet, areas
from .specfun import ctilde, ctilde_prime, ctilde_prime_inv
from .valuation import benefit, benefit_slope, d0, sigma2, sigma2_slope

__all__ = [
    "EconomyParams",
    "ResearchChoice",
    "ResearcherCutoffs",
    "cost",
    "opt_choice",
    "opt_deepen",
    "opt_expand",
    "opt_rho_given_d",
    "payoff",
    "researcher_cutoffs",
    "substitutes_or_complements",
]

_RHO_LO = 1e-12
_RHO_HI = 1.0 - 1e-9

# Area length beyond which novelty and output complement each other
# throughout the area, in units of q.
_COMPLEMENT_EDGE = 4.0 + math.sqrt(6.0)


@dataclass(frozen=True)
class EconomyParams:
    """Error tolerance q > 0 and cost weight eta >= 0."""

    q: float = 1.0
    eta: float = 1.0

    def __post_init__(self) -> None:
        if not self.q > 0.0:
            raise ValueError(f"q must be positive, got {self.q!r}")
        if math.isnan(self.eta) or self.eta < 0.0:
            raise ValueError(f"eta must be nonnegative, got {self.eta!r}")


@dataclass(frozen=True)
class ResearchChoice:
    """An optimal research plan: where to search and how hard.

    ``kind`` is "expand" or "deepen"; ``X`` is the area length (inf when
    expanding).  ``x`` and ``area_index`` are attached by ``opt_choice`` once
    a concrete knowledge set fixes coordinates.
    """

    kind: str
    d: float
    rho: float
    payoff: float
    X: float
    area_index: int | None = None
    x: float | None = None


@dataclass(frozen=True)
class ResearcherCutoffs:
    """Cost-dependent cutoff area lengths, ordered 2q < x_hat < x_dot < x_check < x_tilde < 8q."""

    x_hat: float
    x_dot: float
    x_check: float
    x_tilde: float


def cost(rho: float, d: float, X: float, params: EconomyParams) -> float:
    """Unweighted search cost ``ctilde(rho) * sigma2(d; X)``.

    The eta weight is applied by callers; rho = 1 returns the infinite-cost
    sentinel (unless the variance is zero).
    """
    s2 = sigma2(d, X)
    if s2 == 0.0:
        return 0.0
    return ctilde(rho) * s2

def payoff(rho: float, d: float, X: float, params: EconomyParams) -> float:
    """Researcher payoff ``rho * benefit - eta * cost`` at error tolerance params.q."""
    b = rho * benefit(d, X, params.q)
    if params.eta == 0.0:
        return b
    return b - params.eta * cost(rho, d, X, params)


def opt_rho_given_d(d: float, X: float, params: EconomyParams) -> float:
    """Output level solving the output first-order condition at fixed d.

    Returns 0 for the degenerate d = 0.  Requires eta > 0 (with no cost the
    optimum is the corner rho = 1).
    """
    if not params.eta > 0.0:
        raise ValueError("opt_rho_given_d requires eta > 0")
    if d == 0.0:
        return 0.0
    s2 = sigma2(d, X)
    return ctilde_prime_inv(benefit(d, X, params.q) / (params.eta * s2))


def _expand_d_of_rho(rho: float, q: float) -> float:
    """Distance implied by combining both expanding first-order conditions."""
    ct = ctilde(rho)
    cp = ctilde_prime(rho)
    return 3.0 * q * (1.0 - ct / (2.0 * rho * cp - ct))


@lru_cache(maxsize=4096)
def opt_expand(params: EconomyParams) -> ResearchChoice:
    """Optimal expansion beyond the frontier.

    Joint first-order-condition solution with d in (2q, 3q); reduces to a
    single bisection in rho after substituting the distance condition.
    eta = 0 short-circuits to (d, rho) = (3q, 1).
    """
    q, eta = params.q, params.eta
    if eta == 0.0:
        d = 3.0 * q
        return ResearchChoice("expand", d, 1.0, benefit(d, math.inf, q), math.inf)

    def resid(rho: float) -> float:
        return eta * ctilde_prime(rho) - (1.0 - _expand_d_of_rho(rho, q) / (6.0 * q))

    rho = bisect_root(resid, _RHO_LO, _RHO_HI, tol=1e-15)
    d = _expand_d_of_rho(rho, q)
    return ResearchChoice("expand", d, rho, payoff(rho, d, math.inf, params), math.inf)


def _deepen_boundary(X: float, params: EconomyParams) -> tuple[float, float, float]:
    """Midpoint candidate: (d, rho, payoff) at d = X/2."""
    d = 0.5 * X
    rho = opt_rho_given_d(d, X, params)
    return d, rho, payoff(rho, d, X, params)


def _deepen_interior(X: float, params: EconomyParams) -> tuple[float, float, float] | None:
    """Best interior candidate with d < 4q and X - d > 4q, if any.

    The distance-condition residual can cross zero twice on the strip, so
    every sign change is refined and compared by payoff.
    """
    q, eta = params.q, params.eta
    hi = min(4.0 * q, X - 4.0 * q)
    if hi <= 0.0:
        return None
    margin = 1e-9 * q

    def resid(d: float) -> float:
        rho = opt_rho_given_d(d, X, params)
        return rho * benefit_slope(d, X, q) - eta * ctilde(rho) * sigma2_slope(d, X)

    best: tuple[float, float, float] | None = None
    for d in scan_roots(resid, margin, hi - margin, n=160, tol=1e-12 * q):
        rho = opt_rho_given_d(d, X, params)
        pay = payoff(rho, d, X, params)
        if best is None or pay > best[2]:
            best = (d, rho, pay)
    return best


@lru_cache(maxsize=4096)
def opt_deepen(X: float, params: EconomyParams) -> ResearchChoice:
    """Optimal choice inside a bounded area of length X.

    Compares the midpoint candidate against any interior first-order
    solution; exact ties keep the midpoint.
    """
    if not (math.isfinite(X) and X > 0.0):
        raise ValueError(f"opt_deepen requires a finite positive area, got {X!r}")
    q, eta = params.q, params.eta
    if eta == 0.0:
        d = d0(X, q)
        return ResearchChoice("deepen", d, 1.0, benefit(d, X, q), X)
    d, rho, pay = _deepen_boundary(X, params)
    interior = _deepen_interior(X, params)
    if interior is not None and interior[2] > pay:
        d, rho, pay = interior
    return ResearchChoice("deepen", d, rho, pay, X)


def opt_choice(F: KnowledgeSet, params: EconomyParams, side: str = "right") -> ResearchChoice:
    """Best plan across expanding and every bounded area of F.

    Expanding wins exact payoff ties; among areas, the lowest index wins.
    The returned choice carries the concrete question coordinate: expansion
    is taken on ``side`` ("right" or "left"), deepening measures d from the
    lower anchor of the area.
    """
    if side not in ("right", "left"):
        raise ValueError(f"side must be 'right' or 'left', got {side!r}")
    x_lo, x_hi = F.frontier
    best = opt_expand(params)
    best = replace(best, x=(x_hi + best.d) if side == "right" else (x_lo - best.d))
    for ar in areas(F):
        if ar.kind != "bounded":
            continue
        ch = opt_deepen(ar.length, params)
        if ch.payoff > best.payoff:
            best = replace(ch, area_index=ar.index, x=ar.lo + ch.d)
    return best


@lru_cache(maxsize=1024)
def researcher_cutoffs(params: EconomyParams) -> ResearcherCutoffs:
    """The four cutoff area lengths of the researcher's problem.

    * x_hat: indifference between expanding and deepening; bisection.
    * x_dot: peak of the midpoint-branch output, 8 cos(pi/18)/sqrt(3) * q,
      independent of eta.
    * x_check: peak of the deepening payoff; golden section on the midpoint
      branch over [4q, 8q] (concave there).
    * x_tilde: switch from the midpoint to an interior distance; first sign
      change of the candidate comparison on [x_check, 8q].
    """
    q, eta = params.q, params.eta
    if not eta > 0.0:
        raise ValueError("researcher_cutoffs requires eta > 0")
    u_inf = opt_expand(params).payoff
    x_dot = 8.0 * math.cos(math.pi / 18.0) / math.sqrt(3.0) * q

    def boundary_payoff(X: float) -> float:
        return _deepen_boundary(X, params)[2]

    x_check, _ = golden_max(boundary_payoff, 4.0 * q, 8.0 * q, tol=1e-10 * q)

    x_hat = bisect_root(
        lambda X: opt_deepen(X, params).payoff - u_inf,
        2.0 * q,
        x_check,
        tol=1e-9 * q,
    )

    def interior_minus_boundary(X: float) -> float:
        interior = _deepen_interior(X, params)
        if interior is None:
            return -1.0
        return interior[2] - boundary_payoff(X)

    switches = scan_roots(
        interior_minus_boundary,
        x_check,
        8.0 * q * (1.0 - 1e-9),
        n=100,
        tol=1e-9 * q,
    )
    if not switches:
        raise ConvergenceError("no midpoint-to-interior switch found below 8q")
    x_tilde = switches[0]
    cut = ResearcherCutoffs(x_hat=x_hat, x_dot=x_dot, x_check=x_check, x_tilde=x_tilde)
    if not 2.0 * q < x_hat < x_dot < x_check < x_tilde < 8.0 * q:
        raise ConvergenceError(f"cutoff ordering violated: {cut}")
    return cut


def _complement_threshold(X: float, q: float) -> float:
    """Distance below which novelty and output are substitutes, for
    X in [(4 + sqrt 6) q, 8q): the feasible root of the ratio slope."""
    m = (X * X - 6.0 * q * X + 6.0 * q * q)
    disc = math.sqrt((18.0 * q * q - 8.0 * q * X + X * X) / 2.0)
    return 2.0 / (X - 6.0 * q) * (m - (X - 2.0 * q) * disc)


def substitutes_or_complements(d: float, X: float, params: EconomyParams) -> str:
    """Classify the local relation between novelty and output at (d, X).

    Returns "independent", "complements", or "substitutes" from the sign of
    the d-slope of benefit / variance: expanding is always substitutes;
    short areas (X <= 4q) are independent; areas up to (4 + sqrt 6) q are
    complements; up to 8q they are substitutes below a threshold distance
    and complements above it; longer areas are substitutes throughout.
    """
    q = params.q
    _ = sigma2(d, X)  # validates the (d, X) pair
    if math.isinf(X):
        return "substitutes"
    if X <= 4.0 * q:
        return "independent"
    if X < _COMPLEMENT_EDGE * q:
        return "complements"
    if X >= 8.0 * q:
        return "substitutes"
    return "substitutes" if d < _complement_threshold(X, q) else "complements"
