"""Discounted evaluation of first-period discovery choices.

A long-lived evaluator with discount factor ``delta`` values the stream
``sum_t delta^(t-1) E[v(F_{t+1})]``.  Period 1's discovery is guaranteed at a
chosen distance beyond the frontier; every later period follows the
researcher's optimal plan, succeeding with its chosen probability, and the
first failure freezes knowledge forever.  Conditional on the success count
the whole path is deterministic (values depend only on question
coordinates), so the expectation is computed exactly: simulated period by
period until the policy enters the constant-step expansion regime, then
closed in geometric form.  No Monte Carlo anywhere.

Two computation modes exist for the 6q-versus-3q comparison:

* ``"chain"`` (default): the exact chain value above, with every period's
  plan re-solved from the first-order-condition system.
* ``"closed-form"``: the shortcut recipe that fixes the second-period
  responses in closed form -- the expander's distance solves
  ``d = 3q - eta * ctilde(rho)/rho`` jointly with the output condition, the
  bridge output is ``erf(sqrt(W(8 (3 - 2/sqrt 3) / (9 eta^2 pi)) / 2))`` --
  and treats continuation payoffs as identical so they cancel.  The two
  recipes are deliberately not reconciled; the closed form is kept for
  regression against its historical reference values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._solve import ConvergenceError, bisect_root, golden_max
from .knowledge import KnowledgePoint, KnowledgeSet, distance, insert, make_knowledge
from .researcher import EconomyParams, opt_choice
from .specfun import ctilde, ctilde_prime, lambert_w0
from .valuation import benefit, value_of_knowledge

__all__ = [
    "MoonshotAssessment",
    "SixQClosedForm",
    "chain_npv",
    "critical_delta",
    "eta_range",
    "is_moonshot",
    "moonshot_benefit",
    "optimal_moonshot",
    "sixq_closed_form",
]

MODE_CHAIN = "chain"
MODE_CLOSED_FORM = "closed-form"

_RHO_LO = 1e-12
_RHO_HI = 1.0 - 1e-9


def is_moonshot(x: float, F: KnowledgeSet, q: float) -> bool:
    """True iff x lies strictly outside the frontier at distance above 3q."""
    lo, hi = F.frontier
    return (x < lo or x > hi) and distance(x, F) > 3.0 * q


def _single_point() -> KnowledgeSet:
    return make_knowledge([KnowledgePoint(0.0, 0.0)])


def _chain_from(F2: KnowledgeSet, params: EconomyParams, delta: float,
                side: str, max_periods: int, horizon: int | None) -> float:
    """NPV given knowledge F2 after a period-1 success, per the chain model.

    ``horizon=None`` sums the full infinite stream (geometric closed form
    once the policy enters the constant-step expansion regime); an integer
    horizon truncates the sum after that many periods.
    """
    q = params.q
    acc = value_of_knowledge(F2, q)
    if delta == 0.0:
        return acc
    if horizon is None:
        extra = 0.0
        surv = 1.0
        disc = delta
        F = F2
        for _ in range(max_periods):
            choice = opt_choice(F, params, side=side)
            if choice.kind == "expand":
                gain = benefit(choice.d, math.inf, q)
                extra += disc * surv * choice.rho * gain / (1.0 - delta * choice.rho)
                return (acc + extra) / (1.0 - delta)
            gain = benefit(choice.d, choice.X, q)
            surv *= choice.rho
            extra += disc * surv * gain
            disc *= delta
            F = insert(F, KnowledgePoint(choice.x, 0.0))
        raise ConvergenceError("policy never entered the expansion regime")
    total = 0.0
    expected = acc  # E[value after period t's research]
    surv = 1.0
    F = F2
    expanding: tuple[float, float] | None = None
    for t in range(1, horizon + 1):
        total += delta ** (t - 1) * expected
        if t == horizon:
            break
        if expanding is None:
            choice = opt_choice(F, params, side=side)
            if choice.kind == "expand":
                expanding = (choice.rho, benefit(choice.d, math.inf, q))
            else:
                surv *= choice.rho
                expected += surv * benefit(choice.d, choice.X, q)
                F = insert(F, KnowledgePoint(choice.x, 0.0))
                continue
        rho, gain = expanding
        surv *= rho
        expected += surv * gain
    return total


def chain_npv(
    F1: KnowledgeSet,
    first_distance: float,
    params: EconomyParams,
    delta: float,
    *,
    guaranteed: bool = True,
    first_rho: float | None = None,
    first_failure: str = "retry",
    horizon: int | None = None,
    side: str = "right",
    max_periods: int = 10000,
) -> float:
    """Exact expected NPV when period 1 discovers at ``first_distance``.

    With ``guaranteed=False`` the first discovery succeeds with probability
    ``first_rho`` per period.  ``first_failure`` selects the failure branch:
    ``"retry"`` (default) keeps the first-period offer open until the
    discovery arrives, so success is only delayed geometrically;
    ``"frozen"`` makes the very first failure absorbing, freezing knowledge
    at F1 forever.  Later periods are always absorbing on failure.

    ``horizon`` truncates the value stream after that many periods (None
    sums the infinite stream); it applies to the guaranteed path only.
    Answers never feed back into values, so inserted points carry a
    placeholder answer.
    """
    if math.isnan(delta) or not 0.0 <= delta < 1.0:
        raise ValueError(f"delta must lie in [0, 1), got {delta!r}")
    if not first_distance > 0.0:
        raise ValueError(f"first distance must be positive, got {first_distance!r}")
    if horizon is not None and (horizon < 1 or not guaranteed):
        raise ValueError("horizon must be a positive period count on the guaranteed path")
    x_lo, x_hi = F1.frontier
    x1 = x_hi + first_distance if side == "right" else x_lo - first_distance
    F2 = insert(F1, KnowledgePoint(x1, 0.0))
    success_npv = _chain_from(F2, params, delta, side, max_periods, horizon)
    if guaranteed:
        return success_npv
    if first_rho is None or not 0.0 <= first_rho <= 1.0:
        raise ValueError("non-guaranteed first period needs first_rho in [0, 1]")
    v1 = value_of_knowledge(F1, params.q)
    if first_failure == "retry":
        return (first_rho * success_npv + (1.0 - first_rho) * v1) / (
            1.0 - delta * (1.0 - first_rho)
        )
    if first_failure == "frozen":
        return first_rho * success_npv + (1.0 - first_rho) * v1 / (1.0 - delta)
    raise ValueError(f"first_failure must be 'retry' or 'frozen', got {first_failure!r}")


@dataclass(frozen=True)
class MoonshotAssessment:
    """Comparison of a first-period choice against the myopic 3q optimum."""

    x_hat: float
    delta: float
    npv_moonshot: float
    npv_myopic: float
    benefit: float
    mode: str


@dataclass(frozen=True)
class SixQClosedForm:
    """Closed-form ingredients of the 6q-versus-3q comparison.

    ``loss`` is the forgone first-period value (3/2 - 2/sqrt(3)) q;
    ``gain_rate`` multiplies delta in the second-period comparison, so the
    net advantage at discount delta is ``delta * gain_rate - loss``.
    """

    eta: float
    q: float
    d_inf: float
    rho_inf: float
    rho_6q: float
    loss: float
    gain_rate: float

    def benefit(self, delta: float) -> float:
        return delta * self.gain_rate - self.loss

    @property
    def benefit_delta1(self) -> float:
        return self.gain_rate - self.loss


def sixq_closed_form(eta: float, q: float = 1.0) -> SixQClosedForm:
    """Evaluate the closed-form 6q recipe at cost weight eta > 0."""
    if not eta > 0.0:
        raise ValueError(f"closed-form recipe requires eta > 0, got {eta!r}")
    if not q > 0.0:
        raise ValueError(f"q must be positive, got {q!r}")

    def resid(rho: float) -> float:
        # Output condition after substituting d = 3q - eta*ctilde/rho.
        return eta * ctilde_prime(rho) - 0.5 - eta * ctilde(rho) / (6.0 * q * rho)

    rho_inf = bisect_root(resid, _RHO_LO, _RHO_HI, tol=1e-15)
    d_inf = 3.0 * q - eta * ctilde(rho_inf) / rho_inf
    root3 = math.sqrt(3.0)
    arg = 8.0 * (3.0 - 2.0 / root3) / (9.0 * eta * eta * math.pi)
    rho_6q = math.erf(math.sqrt(0.5 * lambert_w0(arg)))
    loss = (1.5 - 2.0 / root3) * q
    gain_rate = rho_6q * (3.0 - 2.0 / root3) * q - rho_inf * d_inf * (1.0 - d_inf / (6.0 * q))
    return SixQClosedForm(
        eta=eta, q=q, d_inf=d_inf, rho_inf=rho_inf, rho_6q=rho_6q,
        loss=loss, gain_rate=gain_rate,
    )


def moonshot_benefit(
    x_hat: float,
    params: EconomyParams,
    delta: float,
    mode: str = MODE_CHAIN,
    F1: KnowledgeSet | None = None,
    horizon: int | None = None,
) -> MoonshotAssessment:
    """Assess a guaranteed first discovery at distance x_hat against 3q.

    Chain mode compares exact NPVs from a single-point start (or ``F1``),
    over an infinite stream or the given finite ``horizon``.  Closed-form
    mode supports only x_hat = 6q and reports the truncated two-period
    sides whose continuations cancel.
    """
    q = params.q
    if mode == MODE_CLOSED_FORM:
        if not math.isclose(x_hat, 6.0 * q, rel_tol=1e-12):
            raise ValueError("closed-form mode is defined for the 6q comparison only")
        if math.isnan(delta) or not 0.0 <= delta <= 1.0:
            raise ValueError(f"delta must lie in [0, 1], got {delta!r}")
        cf = sixq_closed_form(params.eta, q)
        root3 = math.sqrt(3.0)
        npv_ms = (2.0 / root3) * q + delta * cf.rho_6q * (3.0 - 2.0 / root3) * q
        npv_my = 1.5 * q + delta * cf.rho_inf * cf.d_inf * (1.0 - cf.d_inf / (6.0 * q))
        return MoonshotAssessment(x_hat, delta, npv_ms, npv_my, cf.benefit(delta), mode)
    if mode != MODE_CHAIN:
        raise ValueError(f"unknown mode {mode!r}")
    base = F1 if F1 is not None else _single_point()
    npv_ms = chain_npv(base, x_hat, params, delta, horizon=horizon)
    npv_my = chain_npv(base, 3.0 * q, params, delta, horizon=horizon)
    return MoonshotAssessment(x_hat, delta, npv_ms, npv_my, npv_ms - npv_my, mode)


def critical_delta(eta: float, q: float = 1.0, mode: str = MODE_CHAIN,
                   horizon: int | None = None) -> float | None:
    """Smallest discount factor at which the 6q moonshot beats 3q, or None."""
    params = EconomyParams(q=q, eta=eta)

    def f(delta: float) -> float:
        return moonshot_benefit(6.0 * q, params, delta, mode=mode, horizon=horizon).benefit

    lo, hi = 1e-9, 1.0 - 1e-9
    flo, fhi = f(lo), f(hi)
    if flo > 0.0:
        return lo
    if fhi <= 0.0:
        return None
    return bisect_root(f, lo, hi, tol=1e-10, flo=flo, fhi=fhi)


def eta_range(
    delta: float,
    q: float = 1.0,
    mode: str = MODE_CHAIN,
    *,
    horizon: int | None = None,
    eta_lo: float = 1e-4,
    eta_hi: float = 32.0,
    n_scan: int = 60,
) -> tuple[float, float] | None:
    """Cost-weight interval on which the 6q moonshot beats 3q at ``delta``.

    Log-grid scan for the two sign changes of the benefit in eta, each
    refined by bisection; None when the benefit never turns positive (always
    the case for a myopic delta = 0).
    """
    if math.isnan(delta) or not 0.0 <= delta < 1.0:
        raise ValueError(f"delta must lie in [0, 1), got {delta!r}")
    if delta == 0.0:
        return None

    def f(eta: float) -> float:
        return moonshot_benefit(
            6.0 * q, EconomyParams(q=q, eta=eta), delta, mode=mode, horizon=horizon
        ).benefit

    ratio = (eta_hi / eta_lo) ** (1.0 / n_scan)
    grid = [eta_lo * ratio**i for i in range(n_scan + 1)]
    vals = [f(e) for e in grid]
    ups = [i for i in range(n_scan) if vals[i] <= 0.0 < vals[i + 1]]
    downs = [i for i in range(n_scan) if vals[i] > 0.0 >= vals[i + 1]]
    if not ups or not downs:
        return None
    i, j = ups[0], downs[-1]
    low = bisect_root(f, grid[i], grid[i + 1], tol=1e-9, flo=vals[i], fhi=vals[i + 1])
    high = bisect_root(f, grid[j], grid[j + 1], tol=1e-9, flo=vals[j], fhi=vals[j + 1])
    return low, high


def optimal_moonshot(
    delta: float,
    params: EconomyParams,
    x_hi: float | None = None,
    *,
    horizon: int | None = None,
    n_scan: int = 90,
) -> MoonshotAssessment:
    """Maximize the chain NPV over the first distance in [3q, x_hi].

    Coarse grid scan plus golden-section refinement in the best cell; the
    NPV can have policy kinks, so the scan guards the refinement.  With
    eta = 0 the static optimum 3q is returned directly.
    """
    q = params.q
    if x_hi is None:
        x_hi = 12.0 * q
    if params.eta == 0.0:
        npv = chain_npv(_single_point(), 3.0 * q, params, delta, horizon=horizon)
        return MoonshotAssessment(3.0 * q, delta, npv, npv, 0.0, MODE_CHAIN)
    base = _single_point()

    def f(x_hat: float) -> float:
        return chain_npv(base, x_hat, params, delta, horizon=horizon)

    lo = 3.0 * q
    grid = [lo + (x_hi - lo) * i / n_scan for i in range(n_scan + 1)]
    vals = [f(x) for x in grid]
    k = max(range(len(grid)), key=vals.__getitem__)
    a = grid[max(0, k - 1)]
    b = grid[min(n_scan, k + 1)]
    x_star, npv_star = golden_max(f, a, b, tol=1e-7 * q)
    npv_my = f(3.0 * q)
    if npv_my >= npv_star:
        x_star, npv_star = 3.0 * q, npv_my
    return MoonshotAssessment(x_star, delta, npv_star, npv_my, npv_star - npv_my, MODE_CHAIN)
