"""Budget-constrained research funding: rewards, cost reductions, and frontiers.

A funder with budget ``K`` splits spending between an ex-post reward ``zeta``
and an ex-ante cost reduction ``h`` at relative price ``kappa``
(``zeta + kappa h = K``), leaving the researcher with cost weight
``eta = eta0 - h``.  Rewards pay off with probability ``f(sigma^2)`` given by
the reward technology: piecewise linear ``min(sigma^2 / s, 1)`` (default) or
exponential ``1 - exp(-s sigma^2)``.

The funded researcher expands beyond the frontier (variance equals distance)
and solves

    max_{d, rho}  rho * (V(d) + f(d) * zeta) - eta * ctilde(rho) * d,

whose candidates are interior first-order solutions plus, for the linear
technology, the kink d = s.  On the budget line the interior optima trace
the research-possibility frontier

    d(rho; K) = 6q (K + s - kappa eta0) (rho c' - c) / (2 s rho c' - s c - kappa rho),

with endpoints pinned by the two polar schemes (all-cost-reduction and
all-rewards).  Myopic funding maximizes rho * V(d); forward-looking funding
maximizes the exact chain NPV with a non-guaranteed first period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from ._solve import golden_max, scan_roots
from .knowledge import KnowledgePoint, make_knowledge
from .moonshot import MODE_CHAIN, MoonshotAssessment, chain_npv
from .researcher import EconomyParams
from .specfun import ctilde, ctilde_prime, ctilde_prime_inv, ctilde_second
from .valuation import benefit, benefit_slope

__all__ = [
    "FeasibleBounds",
    "FrontierPoint",
    "FundingParams",
    "FundingScheme",
    "FundingOptimum",
    "ForwardFundingOptimum",
    "complementarity_sign",
    "feasible_bounds",
    "frontier_d_of_rho",
    "mrs_d",
    "mrs_rho",
    "optimize_forward",
    "optimize_myopic",
    "researcher_with_rewards",
    "reward_prob",
    "scheme_from_choice",
    "scheme_on_budget",
]

LINEAR = "linear"
EXPONENTIAL = "exponential"

# Grid densities and refinement tolerances for the funding optimizers.
MYOPIC_GRID_POINTS = 2000
FORWARD_GRID_POINTS = 400
GOLDEN_TOL = 1e-8


@dataclass(frozen=True)
class FundingParams:
    """Budget K, price kappa of cost reductions, reward scale s, baseline cost eta0."""

    K: float
    kappa: float
    s: float
    eta0: float
    reward_tech: str = LINEAR

    def __post_init__(self) -> None:
        if math.isnan(self.K) or self.K < 0.0:
            raise ValueError(f"budget K must be nonnegative, got {self.K!r}")
        if not self.kappa > 0.0:
            raise ValueError(f"kappa must be positive, got {self.kappa!r}")
        if not self.s > 0.0:
            raise ValueError(f"reward scale s must be positive, got {self.s!r}")
        if not self.eta0 > 0.0:
            raise ValueError(f"baseline cost eta0 must be positive, got {self.eta0!r}")
        if not self.kappa > self.K / self.eta0:
            raise ValueError("kappa must exceed K/eta0: the budget cannot erase the cost")
        if self.reward_tech not in (LINEAR, EXPONENTIAL):
            raise ValueError(f"unknown reward technology {self.reward_tech!r}")


@dataclass(frozen=True)
class FundingScheme:
    """A budget split: reward zeta, cost reduction h, effective cost eta = eta0 - h."""

    zeta: float
    h: float
    eta: float

    def __post_init__(self) -> None:
        if math.isnan(self.zeta) or self.zeta < 0.0:
            raise ValueError(f"zeta must be nonnegative, got {self.zeta!r}")
        if math.isnan(self.h) or self.h < 0.0:
            raise ValueError(f"h must be nonnegative, got {self.h!r}")
        if not self.eta > 0.0:
            raise ValueError(f"effective eta must stay positive, got {self.eta!r}")


@dataclass(frozen=True)
class FrontierPoint:
    """The researcher's optimum under a scheme: output, novelty, and payoff."""

    rho: float
    d: float
    scheme: FundingScheme
    payoff: float
    at_kink: bool = False


@dataclass(frozen=True)
class FeasibleBounds:
    """Output range spanned by the two polar schemes, sorted, with attribution."""

    rho_low: float
    rho_high: float
    low_scheme: str
    high_scheme: str


@dataclass(frozen=True)
class FundingOptimum:
    scheme: FundingScheme
    point: FrontierPoint
    objective: float
    kind: str  # "mix", "rewards-only", or "cost-reduction-only"


@dataclass(frozen=True)
class ForwardFundingOptimum:
    scheme: FundingScheme
    point: FrontierPoint
    assessment: MoonshotAssessment
    objective: float
    kind: str


def scheme_on_budget(fp: FundingParams, zeta: float) -> FundingScheme:
    """The scheme spending zeta on rewards and the rest on cost reductions."""
    if math.isnan(zeta) or not 0.0 <= zeta <= fp.K:
        raise ValueError(f"zeta must lie in [0, K], got {zeta!r}")
    h = (fp.K - zeta) / fp.kappa
    return FundingScheme(zeta=zeta, h=h, eta=fp.eta0 - h)


def reward_prob(sigma2_value: float, s: float, tech: str = LINEAR) -> float:
    """Probability that a discovery of difficulty sigma^2 earns the reward."""
    if math.isnan(sigma2_value) or sigma2_value < 0.0:
        raise ValueError(f"variance must be nonnegative, got {sigma2_value!r}")
    if tech == LINEAR:
        return min(sigma2_value / s, 1.0)
    if tech == EXPONENTIAL:
        return -math.expm1(-s * sigma2_value)
    raise ValueError(f"unknown reward technology {tech!r}")


def _reward_slope(d: float, s: float, tech: str) -> float:
    if tech == LINEAR:
        return 1.0 / s if d < s else 0.0
    return s * math.exp(-s * d)


def _reward_payoff(d: float, rho: float, scheme: FundingScheme, fp: FundingParams,
                   q: float) -> float:
    gross = benefit(d, math.inf, q) + reward_prob(d, fp.s, fp.reward_tech) * scheme.zeta
    return rho * gross - scheme.eta * ctilde(rho) * d


def _reward_rho_of_d(d: float, scheme: FundingScheme, fp: FundingParams, q: float) -> float:
    gross = benefit(d, math.inf, q) + reward_prob(d, fp.s, fp.reward_tech) * scheme.zeta
    return ctilde_prime_inv(gross / (scheme.eta * d))


def researcher_with_rewards(scheme: FundingScheme, fp: FundingParams,
                            q: float = 1.0) -> FrontierPoint:
    """Globally optimal (rho, d) for a funded researcher expanding knowledge.

    Candidate classes: interior first-order roots (scanned and bisected) and,
    under the linear technology, the kink d = s with its own output
    condition.  The best payoff wins; the kink wins exact ties.
    """
    if not q > 0.0:
        raise ValueError(f"q must be positive, got {q!r}")
    if fp.reward_tech == LINEAR and fp.s < 4.0 * q:
        raise ValueError("linear reward technology requires s >= 4q")
    eta, zeta, s = scheme.eta, scheme.zeta, fp.s

    def resid(d: float) -> float:
        rho = _reward_rho_of_d(d, scheme, fp, q)
        slope = benefit_slope(d, math.inf, q) + zeta * _reward_slope(d, s, fp.reward_tech)
        return rho * slope - eta * ctilde(rho)

    hi = s if fp.reward_tech == LINEAR else 12.0 * q
    margin = 1e-9 * q
    candidates: list[tuple[float, float, float, bool]] = []
    for d in scan_roots(resid, margin, hi - margin, n=120, tol=1e-12 * q):
        rho = _reward_rho_of_d(d, scheme, fp, q)
        candidates.append((_reward_payoff(d, rho, scheme, fp, q), d, rho, False))
    if fp.reward_tech == LINEAR:
        rho_kink = ctilde_prime_inv((benefit(s, math.inf, q) + zeta) / (eta * s))
        candidates.append((_reward_payoff(s, rho_kink, scheme, fp, q), s, rho_kink, True))
    else:
        if not candidates:
            d_grid, _ = golden_max(
                lambda d: _reward_payoff(d, _reward_rho_of_d(d, scheme, fp, q), scheme, fp, q),
                margin, hi, tol=GOLDEN_TOL * q,
            )
            rho = _reward_rho_of_d(d_grid, scheme, fp, q)
            candidates.append((_reward_payoff(d_grid, rho, scheme, fp, q), d_grid, rho, False))
    pay, d, rho, at_kink = max(candidates, key=lambda c: (c[0], c[3]))
    return FrontierPoint(rho=rho, d=d, scheme=scheme, payoff=pay, at_kink=at_kink)


@lru_cache(maxsize=512)
def feasible_bounds(fp: FundingParams, q: float = 1.0) -> FeasibleBounds:
    """Output bounds from the two polar schemes (all cost reduction / all rewards).

    When the reward scale is small enough that large rewards push the
    researcher to the kink d = s, outputs on the interior branch of the
    frontier can exceed both polar values; ``frontier_d_of_rho`` therefore
    checks feasibility against a sampled hull rather than these bounds.
    """
    rho_cost = researcher_with_rewards(scheme_on_budget(fp, 0.0), fp, q).rho
    rho_reward = researcher_with_rewards(scheme_on_budget(fp, fp.K), fp, q).rho
    if rho_cost <= rho_reward:
        return FeasibleBounds(rho_cost, rho_reward, "cost-reduction", "rewards")
    return FeasibleBounds(rho_reward, rho_cost, "rewards", "cost-reduction")


@lru_cache(maxsize=512)
def _rho_hull(fp: FundingParams, q: float) -> tuple[float, float]:
    """Range of outputs induced across the budget line (sampled, cached)."""
    rhos = [
        researcher_with_rewards(scheme_on_budget(fp, fp.K * i / 16.0), fp, q).rho
        for i in range(17)
    ]
    return min(rhos), max(rhos)


def frontier_d_of_rho(rho: float, fp: FundingParams, q: float = 1.0) -> float:
    """Research-possibility frontier: largest implementable novelty at output rho.

    Closed form for the linear technology, valid on the interior (d < s)
    branch.  Outputs outside the sampled feasible hull are rejected; a small
    relative slack absorbs round-off at the endpoints.
    """
    if fp.reward_tech != LINEAR:
        raise ValueError("the closed-form frontier exists for the linear technology only")
    lo, hi = _rho_hull(fp, q)
    slack = 1e-6
    if not (lo * (1.0 - slack) <= rho <= hi * (1.0 + slack)):
        raise ValueError(f"rho={rho} outside the feasible range [{lo}, {hi}]")
    c = ctilde(rho)
    cp = ctilde_prime(rho)
    num = rho * cp - c
    den = 2.0 * fp.s * rho * cp - fp.s * c - fp.kappa * rho
    return 6.0 * q * (fp.K + fp.s - fp.kappa * fp.eta0) * num / den


def scheme_from_choice(d: float, rho: float, s: float, q: float = 1.0) -> tuple[float, float]:
    """The unique (eta, zeta) implementing (d, rho) as an interior optimum.

    A negative zeta signals that the pair needs a reward subsidy below zero,
    i.e. it is unimplementable with rewards; it is reported, not clamped.
    Nonpositive implied eta is rejected.
    """
    if not (0.0 < rho < 1.0):
        raise ValueError(f"rho must lie in (0, 1), got {rho!r}")
    if not d > 0.0:
        raise ValueError(f"d must be positive, got {d!r}")
    c = ctilde(rho)
    cp = ctilde_prime(rho)
    gap = rho * cp - c
    eta = d / (6.0 * q) * rho / gap
    if not eta > 0.0:
        raise ValueError(f"implied eta is not positive: {eta}")
    zeta = (d / (3.0 * q) - 1.0 + d / (6.0 * q) * c / gap) * s
    return eta, zeta


def mrs_rho(rho: float, s: float) -> float:
    """Slope of the iso-output curve in the (eta, zeta) instrument plane."""
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho!r}")
    return s * (2.0 * ctilde_prime(rho) - ctilde(rho) / rho)


def mrs_d(rho: float) -> float:
    """Slope of the iso-novelty curve in the (eta, zeta) instrument plane."""
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho!r}")
    c = ctilde(rho)
    cp = ctilde_prime(rho)
    cpp = ctilde_second(rho)
    return cp * (c / rho - cp + c / cp * cpp) / (c / rho - cp + rho * cpp)


def complementarity_sign(rho: float, fp: FundingParams, q: float = 1.0) -> int:
    """Sign of the frontier slope at rho: +1 where novelty and output co-move."""
    product = (fp.K + fp.s - fp.kappa * fp.eta0) * (fp.s * mrs_d(rho) - fp.kappa)
    if product > 0.0:
        return 1
    if product < 0.0:
        return -1
    return 0


def _classify(zeta_star: float, K: float, tol: float) -> str:
    if K - zeta_star <= tol:
        return "rewards-only"
    if zeta_star <= tol:
        return "cost-reduction-only"
    return "mix"


def _optimize_budget_line(objective, fp: FundingParams, n_grid: int) -> tuple[float, float]:
    """Grid scan of the budget line plus golden refinement; returns (zeta, value)."""
    K = fp.K
    if K == 0.0:
        return 0.0, objective(0.0)
    grid = [K * i / n_grid for i in range(n_grid + 1)]
    vals = [objective(z) for z in grid]
    k = max(range(len(grid)), key=vals.__getitem__)
    lo = grid[max(0, k - 1)]
    hi = grid[min(n_grid, k + 1)]
    z_star, v_star = golden_max(objective, lo, hi, tol=GOLDEN_TOL * max(K, 1.0))
    # Golden section stops short of the corners; let the exact corner win ties.
    for corner, val in ((grid[0], vals[0]), (grid[-1], vals[-1])):
        if val >= v_star:
            z_star, v_star = corner, val
    return z_star, v_star


def optimize_myopic(fp: FundingParams, q: float = 1.0,
                    n_grid: int = MYOPIC_GRID_POINTS) -> FundingOptimum:
    """Scheme maximizing the immediate expected benefit rho * V(d)."""

    def objective(zeta: float) -> float:
        pt = researcher_with_rewards(scheme_on_budget(fp, zeta), fp, q)
        return pt.rho * benefit(pt.d, math.inf, q)

    z_star, v_star = _optimize_budget_line(objective, fp, n_grid)
    scheme = scheme_on_budget(fp, z_star)
    point = researcher_with_rewards(scheme, fp, q)
    kind = _classify(z_star, fp.K, 1e-6 * max(fp.K, 1.0))
    return FundingOptimum(scheme=scheme, point=point, objective=v_star, kind=kind)


def optimize_forward(fp: FundingParams, q: float, delta: float,
                     n_grid: int = FORWARD_GRID_POINTS) -> ForwardFundingOptimum:
    """Scheme maximizing the exact chain NPV with a risky first discovery.

    The funded offer stays open until the first discovery arrives (each
    attempt succeeds with the researcher's chosen probability, so low output
    costs geometric delay); once knowledge moves, researchers are unfunded
    at the baseline cost eta0 and failure is absorbing as usual.
    """
    if math.isnan(delta) or not 0.0 <= delta < 1.0:
        raise ValueError(f"delta must lie in [0, 1), got {delta!r}")
    base = make_knowledge([KnowledgePoint(0.0, 0.0)])
    future = EconomyParams(q=q, eta=fp.eta0)

    def objective(zeta: float) -> float:
        pt = researcher_with_rewards(scheme_on_budget(fp, zeta), fp, q)
        return chain_npv(base, pt.d, future, delta, guaranteed=False, first_rho=pt.rho)

    z_star, v_star = _optimize_budget_line(objective, fp, n_grid)
    scheme = scheme_on_budget(fp, z_star)
    point = researcher_with_rewards(scheme, fp, q)
    kind = _classify(z_star, fp.K, 1e-6 * max(fp.K, 1.0))
    npv_my = chain_npv(base, 3.0 * q, future, delta)
    assessment = MoonshotAssessment(
        x_hat=point.d, delta=delta, npv_moonshot=v_star, npv_myopic=npv_my,
        benefit=v_star - npv_my, mode=MODE_CHAIN,
    )
    return ForwardFundingOptimum(
        scheme=scheme, point=point, assessment=assessment, objective=v_star, kind=kind
    )
