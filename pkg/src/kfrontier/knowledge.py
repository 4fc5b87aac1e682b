"""Knowledge as an ordered set of question-answer points on the real line.

A knowledge set induces a partition of the line into areas: one unbounded
area on each side of the frontier and a bounded area between each adjacent
pair of known questions.  Conjectures about unknown answers are Gaussian;
inside a bounded area the mean interpolates linearly between the two anchor
answers and the variance is the bridge form ``(hi - x)(x - lo) / X``, while
outside the frontier the mean is the nearest frontier answer and the
variance equals the distance to it.

Values are immutable; ``insert`` returns a new set and never mutates.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import IO, Iterable

__all__ = [
    "Action",
    "Area",
    "Conjecture",
    "KnowledgePoint",
    "KnowledgeSet",
    "areas",
    "conjecture",
    "distance",
    "dump_knowledge_json",
    "insert",
    "load_knowledge_json",
    "make_knowledge",
    "nearest_anchor",
    "optimal_action",
]


@dataclass(frozen=True)
class KnowledgePoint:
    """One known question-answer pair."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"knowledge point must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class KnowledgeSet:
    """Nonempty tuple of knowledge points, strictly increasing in x."""

    points: tuple[KnowledgePoint, ...]

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("knowledge set must contain at least one point")
        xs = [p.x for p in self.points]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("knowledge points must be strictly increasing in x")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def xs(self) -> tuple[float, ...]:
        return tuple(p.x for p in self.points)

    @property
    def frontier(self) -> tuple[float, float]:
        """Leftmost and rightmost known questions."""
        return self.points[0].x, self.points[-1].x


@dataclass(frozen=True)
class Area:
    """One element of the induced partition.

    ``kind`` is "left", "bounded", or "right"; unbounded areas have infinite
    ``length`` and an infinite ``lo``/``hi`` endpoint.  Bounded areas carry a
    1-based ``index`` matching their position between anchors.
    """

    kind: str
    length: float
    lo: float
    hi: float
    index: int | None = None


@dataclass(frozen=True)
class Conjecture:
    """Gaussian belief about an unknown answer: variance is 0 iff x is known."""

    mean: float
    variance: float


@dataclass(frozen=True)
class Action:
    """Pointwise optimal response: proactive at the conjecture mean or opt out."""

    proactive: bool
    value: float | None
    payoff: float


def make_knowledge(points: Iterable[KnowledgePoint | tuple[float, float]]) -> KnowledgeSet:
    """Build a sorted knowledge set; duplicate questions with conflicting answers fail."""
    normalized = [p if isinstance(p, KnowledgePoint) else KnowledgePoint(*p) for p in points]
    if not normalized:
        raise ValueError("knowledge set must contain at least one point")
    normalized.sort(key=lambda p: p.x)
    deduped: list[KnowledgePoint] = [normalized[0]]
    for p in normalized[1:]:
        if p.x == deduped[-1].x:
            if p.y != deduped[-1].y:
                raise ValueError(f"conflicting answers for question x={p.x}")
            continue
        deduped.append(p)
    return KnowledgeSet(tuple(deduped))


def areas(F: KnowledgeSet) -> list[Area]:
    """The k+1 areas induced by a k-point knowledge set, left to right."""
    xs = F.xs
    out = [Area("left", math.inf, -math.inf, xs[0])]
    for i in range(len(xs) - 1):
        out.append(Area("bounded", xs[i + 1] - xs[i], xs[i], xs[i + 1], index=i + 1))
    out.append(Area("right", math.inf, xs[-1], math.inf))
    return out


def _bracket(x: float, xs: tuple[float, ...]) -> int:
    """Index of the first known question >= x."""
    return bisect_left(xs, x)


def distance(x: float, F: KnowledgeSet) -> float:
    """Minimal Euclidean distance from x to a known question."""
    xs = F.xs
    i = _bracket(x, xs)
    best = math.inf
    if i < len(xs):
        best = xs[i] - x
    if i > 0:
        best = min(best, x - xs[i - 1])
    return best


def nearest_anchor(x: float, F: KnowledgeSet) -> KnowledgePoint:
    """Closest known point; equidistant ties resolve to the lower-x anchor."""
    xs = F.xs
    i = _bracket(x, xs)
    if i == 0:
        return F.points[0]
    if i == len(xs):
        return F.points[-1]
    lo, hi = F.points[i - 1], F.points[i]
    return lo if x - lo.x <= hi.x - x else hi


def conjecture(x: float, F: KnowledgeSet) -> Conjecture:
    """Mean and variance of the answer distribution at question x."""
    pts = F.points
    xs = F.xs
    if x <= xs[0]:
        return Conjecture(pts[0].y, xs[0] - x)
    if x >= xs[-1]:
        return Conjecture(pts[-1].y, x - xs[-1])
    i = _bracket(x, xs)
    if i < len(xs) and xs[i] == x:
        return Conjecture(pts[i].y, 0.0)
    lo, hi = pts[i - 1], pts[i]
    X = hi.x - lo.x
    mean = lo.y + (x - lo.x) / X * (hi.y - lo.y)
    var = (hi.x - x) * (x - lo.x) / X
    return Conjecture(mean, var)


def insert(F: KnowledgeSet, p: KnowledgePoint | tuple[float, float]) -> KnowledgeSet:
    """Persistent insert; the original set is unchanged.  Duplicate x fails."""
    if not isinstance(p, KnowledgePoint):
        p = KnowledgePoint(*p)
    xs = F.xs
    i = _bracket(p.x, xs)
    if i < len(xs) and xs[i] == p.x:
        raise ValueError(f"question x={p.x} is already known")
    return KnowledgeSet(F.points[:i] + (p,) + F.points[i:])


def optimal_action(x: float, F: KnowledgeSet, q: float) -> Action:
    """Proactive action at the conjecture mean iff variance <= q, else opt out.

    The tie at variance == q goes to the proactive action.  The per-question
    expected payoff is ``max((q - variance) / q, 0)``.
    """
    if not q > 0.0:
        raise ValueError(f"error tolerance q must be positive, got {q!r}")
    c = conjecture(x, F)
    if c.variance <= q:
        return Action(True, c.mean, (q - c.variance) / q)
    return Action(False, None, 0.0)


def load_knowledge_json(fp: IO[str] | str) -> KnowledgeSet:
    """Parse the knowledge file schema {"points": [{"x": ..., "y": ...}, ...]}."""
    data = json.loads(fp) if isinstance(fp, str) else json.load(fp)
    try:
        raw = data["points"]
        pts = [KnowledgePoint(float(r["x"]), float(r["y"])) for r in raw]
    except (TypeError, KeyError) as exc:
        raise ValueError(f"malformed knowledge file: {exc}") from exc
    return make_knowledge(pts)


def dump_knowledge_json(F: KnowledgeSet, fp: IO[str] | None = None) -> str:
    """Serialize to the knowledge file schema with points sorted by x."""
    payload = {"points": [{"x": p.x, "y": p.y} for p in F.points]}
    text = json.dumps(payload, indent=2)
    if fp is not None:
        fp.write(text + "\n")
    return text
