"""Sequential short-lived researchers sampling answers from the conjecture law.

Each period one researcher observes current knowledge, makes the optimal
(question, output) choice, and searches the prediction interval that attains
her chosen success probability.  The sampled answer lands inside that
interval with probability exactly ``rho`` (the interval is the central
rho-mass of the conjecture's normal law), so successes are Bernoulli(rho)
by construction.

Identical researchers repeat the identical plan after a failure, so a single
failure is absorbing: the simulation halts there and records the period in
``halted_at``.  Randomness comes from one numpy ``default_rng`` (PCG64)
stream per run, so traces are bit-identical across platforms given a seed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO

import numpy as np

from .knowledge import KnowledgePoint, KnowledgeSet, conjecture, insert
from .researcher import EconomyParams, ResearchChoice, opt_choice
from .specfun import erf_inv
from .valuation import value_of_knowledge

__all__ = [
    "EvolutionTrace",
    "PeriodRecord",
    "SearchInterval",
    "prediction_interval",
    "run",
    "sample_answer",
    "step",
    "trace_to_jsonl",
]

_HALF_WIDTH_FACTOR = math.sqrt(2.0)  # half of 2^(3/2)


@dataclass(frozen=True)
class SearchInterval:
    """Closed answer interval [a, b], centered on the conjecture mean."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not self.a <= self.b:
            raise ValueError(f"interval requires a <= b, got [{self.a}, {self.b}]")

    def contains(self, y: float) -> bool:
        return self.a <= y <= self.b

    @property
    def length(self) -> float:
        return self.b - self.a


@dataclass(frozen=True)
class PeriodRecord:
    """One simulated period: the plan, the draw, and the resulting state."""

    t: int
    choice: ResearchChoice
    y: float
    interval: SearchInterval
    success: bool
    knowledge_after: KnowledgeSet
    value_after: float


@dataclass(frozen=True)
class EvolutionTrace:
    periods: tuple[PeriodRecord, ...]
    seed: int | None
    halted_at: int | None


def prediction_interval(mean: float, sigma: float, rho: float) -> SearchInterval:
    """Shortest interval holding probability rho of a Normal(mean, sigma^2) draw.

    Length is ``2^(3/2) * erf_inv(rho) * sigma``.  rho = 1 would need the
    whole line and is rejected.
    """
    if math.isnan(sigma) or sigma < 0.0:
        raise ValueError(f"sigma must be nonnegative, got {sigma!r}")
    if math.isnan(rho) or not 0.0 <= rho < 1.0:
        raise ValueError(f"rho must lie in [0, 1), got {rho!r}")
    half = _HALF_WIDTH_FACTOR * erf_inv(rho) * sigma
    return SearchInterval(mean - half, mean + half)


def sample_answer(F: KnowledgeSet, x: float, rng: np.random.Generator) -> float:
    """Draw the answer at x from its conjecture law given F."""
    c = conjecture(x, F)
    if c.variance == 0.0:
        raise ValueError(f"question x={x} is already known")
    return float(rng.normal(c.mean, math.sqrt(c.variance)))


def step(
    F: KnowledgeSet,
    params: EconomyParams,
    rng: np.random.Generator,
    *,
    side: str = "right",
    force_success: bool = False,
) -> tuple[ResearchChoice, float, SearchInterval, bool, KnowledgeSet]:
    """One research period: choose, search, and update knowledge on success."""
    choice = opt_choice(F, params, side=side)
    c = conjecture(choice.x, F)
    sigma = math.sqrt(c.variance)
    y = float(rng.normal(c.mean, sigma))
    interval = prediction_interval(c.mean, sigma, choice.rho)
    success = force_success or interval.contains(y)
    F_next = insert(F, KnowledgePoint(choice.x, y)) if success else F
    return choice, y, interval, success, F_next


def run(
    F1: KnowledgeSet,
    params: EconomyParams,
    T: int,
    seed: int | None = 0,
    *,
    side: str = "right",
    force_success: bool = False,
) -> EvolutionTrace:
    """Simulate up to T periods from initial knowledge F1.

    Halts at the first failure (failure is absorbing for identical
    researchers); the trace records the post-period knowledge value each
    period.  Requires eta > 0 so the chosen output stays below one.
    """
    if not (isinstance(T, int) and T >= 1):
        raise ValueError(f"horizon T must be a positive integer, got {T!r}")
    if not params.eta > 0.0:
        raise ValueError("simulation requires eta > 0")
    rng = np.random.default_rng(seed)
    F = F1
    periods: list[PeriodRecord] = []
    halted_at: int | None = None
    for t in range(1, T + 1):
        choice, y, interval, success, F = step(
            F, params, rng, side=side, force_success=force_success
        )
        periods.append(
            PeriodRecord(t, choice, y, interval, success, F, value_of_knowledge(F, params.q))
        )
        if not success:
            halted_at = t
            break
    return EvolutionTrace(tuple(periods), seed, halted_at)


def trace_to_jsonl(trace: EvolutionTrace, fp: IO[str] | None = None) -> str:
    """One JSON record per period: t, x, d, X, rho, y, success, v.

    Expansion periods have infinite X, serialized as the JSON literal
    ``Infinity`` (Python's json default; readable by ``json.loads``).
    """
    lines = []
    for p in trace.periods:
        lines.append(
            json.dumps(
                {
                    "t": p.t,
                    "x": p.choice.x,
                    "d": p.choice.d,
                    "X": p.choice.X,
                    "rho": p.choice.rho,
                    "y": p.y,
                    "success": p.success,
                    "v": p.value_after,
                }
            )
        )
    text = "\n".join(lines) + ("\n" if lines else "")
    if fp is not None:
        fp.write(text)
    return text
