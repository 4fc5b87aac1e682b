"""Closed-form value of knowledge and the benefit of a single discovery.

The decision maker acts proactively on every question whose conjecture
variance is at most the error tolerance ``q``, earning ``(q - var) / q``
there and zero elsewhere.  Integrating that payoff over an area of length
``X`` gives

    area_value(X) = X - X^2/(6q)                                 X <= 4q
                  = X - X^2/(6q) + (X-4q)/(6q) * sqrt(X) sqrt(X-4q)   X > 4q

and the value of a knowledge set is ``q`` (the two unbounded sides) plus the
sum of its bounded-area values.  The benefit of a discovery at canonical
distance ``d`` in an area of length ``X`` decomposes as

    benefit(d; X) = area_value(d) + area_value(X - d) - area_value(X),

with the expanding case ``X = inf`` reducing to ``area_value(d)``.

Conventions: all finite-area operations take the canonical distance
``d in [0, X/2]``; callers holding d > X/2 must reflect first.  Infinite
length is the literal ``math.inf``, never a large float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from ._solve import bisect_root, scan_roots
from .knowledge import KnowledgeSet, areas

__all__ = [
    "BenefitCutoffs",
    "area_value",
    "benefit",
    "benefit_cutoffs",
    "benefit_slope",
    "d0",
    "sigma2",
    "sigma2_slope",
    "value_of_knowledge",
]

# Relative slack for the d <= X/2 precondition, to absorb float round-off
# from callers that compute d = X/2 themselves.
_HALF_SLACK = 1e-9


def _check_q(q: float) -> None:
    if not q > 0.0:
        raise ValueError(f"error tolerance q must be positive, got {q!r}")


def _canonical_d(d: float, X: float) -> float:
    """Validate d in [0, X/2] (or d >= 0 for X = inf) and clamp round-off."""
    if math.isnan(d) or d < 0.0:
        raise ValueError(f"distance must be nonnegative, got {d!r}")
    if math.isinf(X):
        return d
    if not X > 0.0:
        raise ValueError(f"area length must be positive, got {X!r}")
    half = 0.5 * X
    if d > half:
        if d <= half * (1.0 + _HALF_SLACK):
            return half
        raise ValueError(f"canonical distance requires d <= X/2, got d={d}, X={X}")
    return d


def sigma2(d: float, X: float) -> float:
    """Conjecture variance at canonical distance d in an area of length X.

    ``d (X - d) / X`` for finite X; the expanding limit ``X = inf`` gives d.
    """
    d = _canonical_d(d, X)
    if math.isinf(X):
        return d
    return d * (X - d) / X


def sigma2_slope(d: float, X: float) -> float:
    """d/dd of the variance: ``(X - 2d)/X`` for finite X, 1 when expanding."""
    d = _canonical_d(d, X)
    if math.isinf(X):
        return 1.0
    return (X - 2.0 * d) / X


def area_value(X: float, q: float = 1.0) -> float:
    """Decision-maker value generated inside one bounded area of length X."""
    _check_q(q)
    if math.isnan(X) or X < 0.0:
        raise ValueError(f"area length must be nonnegative, got {X!r}")
    v = X - X * X / (6.0 * q)
    if X > 4.0 * q:
        v += (X - 4.0 * q) / (6.0 * q) * math.sqrt(X) * math.sqrt(X - 4.0 * q)
    return v


def value_of_knowledge(F: KnowledgeSet, q: float = 1.0) -> float:
    """Total expected payoff from the optimal pointwise policy given F.

    The two unbounded areas contribute q in total, independent of F.
    """
    _check_q(q)
    total = q
    for ar in areas(F):
        if ar.kind == "bounded":
            total += area_value(ar.length, q)
    return total


def benefit(d: float, X: float, q: float = 1.0) -> float:
    """Value gained by discovering an answer at distance d in an area of length X."""
    _check_q(q)
    d = _canonical_d(d, X)
    if math.isinf(X):
        return area_value(d, q)
    return area_value(d, q) + area_value(X - d, q) - area_value(X, q)


def benefit_slope(d: float, X: float, q: float = 1.0) -> float:
    """d/dd of ``benefit`` on the canonical domain (one-sided at kinks)."""
    _check_q(q)
    d = _canonical_d(d, X)
    if math.isinf(X):
        out = 1.0 - d / (3.0 * q)
        if d > 4.0 * q:
            out += (d - q) / (3.0 * q) * math.sqrt((d - 4.0 * q) / d)
        return out
    out = (X - 2.0 * d) / (3.0 * q)
    if d > 4.0 * q:
        out += (d - q) / (3.0 * q) * math.sqrt((d - 4.0 * q) / d)
    if X - d > 4.0 * q:
        out -= (X - d - q) / (3.0 * q) * math.sqrt((X - d - 4.0 * q) / (X - d))
    return out


def _interior_candidate(X: float, q: float) -> tuple[float, float] | None:
    """Best interior critical point of benefit(.; X), if one exists.

    Interior maxima require d < 4q and X - d > 4q; the slope can change sign
    twice on that strip, so scan for every root and keep the best.
    """
    hi = min(4.0 * q, X - 4.0 * q, 0.5 * X)
    lo = 3.0 * q
    if hi <= lo:
        return None
    margin = 1e-12 * q
    roots = scan_roots(
        lambda d: benefit_slope(d, X, q),
        lo + margin,
        hi - margin,
        n=200,
        tol=1e-12 * q,
    )
    best: tuple[float, float] | None = None
    for r in roots:
        val = benefit(r, X, q)
        if best is None or val > best[1]:
            best = (r, val)
    return best


def d0(X: float, q: float = 1.0) -> float:
    """Benefit-maximizing canonical distance in an area of length X.

    Expanding (X = inf) peaks at 3q.  Finite areas split at the midpoint up
    to the cutoff ``x_tilde0``; beyond it an interior distance in
    (3q, min(X/2, 4q)] wins.
    """
    _check_q(q)
    if math.isinf(X):
        return 3.0 * q
    if not X > 0.0:
        raise ValueError(f"area length must be positive, got {X!r}")
    half = 0.5 * X
    boundary_val = benefit(half, X, q)
    interior = _interior_candidate(X, q)
    if interior is not None and interior[1] > boundary_val:
        return interior[0]
    return half


@dataclass(frozen=True)
class BenefitCutoffs:
    """Cutoff area lengths of the costless benefit problem, all in units of q.

    Ordering: 4q < x_hat0 < 6q < x_check0 < x_tilde0 < 8q.
    """

    x_hat0: float
    x_check0: float
    x_tilde0: float
    d0_inf: float
    v_inf_max: float


@lru_cache(maxsize=64)
def benefit_cutoffs(q: float = 1.0) -> BenefitCutoffs:
    """Compute the three cutoff area lengths for error tolerance q.

    * x_hat0: area length above which splitting an area beats expanding by
      3q; root of ``benefit(X/2; X) = 1.5 q`` on (4q, 6q).
    * x_check0: area length whose midpoint split is most valuable; closed
      form ``(2/3) (4 + (19 - 3 sqrt 2)^(1/3) + (19 + 3 sqrt 2)^(1/3)) q``.
    * x_tilde0: smallest length where the interior candidate matches the
      midpoint split; bisection on the candidate comparison over
      [x_check0, 8q].
    """
    _check_q(q)
    x_check0 = (
        2.0 / 3.0 * (4.0 + (19.0 - 3.0 * math.sqrt(2.0)) ** (1.0 / 3.0)
                     + (19.0 + 3.0 * math.sqrt(2.0)) ** (1.0 / 3.0)) * q
    )
    x_hat0 = bisect_root(
        lambda X: benefit(0.5 * X, X, q) - 1.5 * q,
        4.0 * q,
        6.0 * q,
        tol=1e-12 * q,
    )

    def interior_minus_boundary(X: float) -> float:
        boundary = benefit(0.5 * X, X, q)
        interior = _interior_candidate(X, q)
        if interior is None:
            return -1.0
        return interior[1] - boundary

    x_tilde0 = bisect_root(
        interior_minus_boundary,
        x_check0,
        8.0 * q * (1.0 - 1e-9),
        tol=1e-8 * q,
    )
    cut = BenefitCutoffs(
        x_hat0=x_hat0,
        x_check0=x_check0,
        x_tilde0=x_tilde0,
        d0_inf=3.0 * q,
        v_inf_max=1.5 * q,
    )
    if not 4.0 * q < cut.x_hat0 < 6.0 * q < cut.x_check0 < cut.x_tilde0 < 8.0 * q:
        raise RuntimeError(f"cutoff ordering violated: {cut}")
    return cut
