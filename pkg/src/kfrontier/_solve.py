"""Scalar root finding and maximization used by the cutoff and FOC solvers."""

from __future__ import annotations

import math
from typing import Callable

__all__ = ["ConvergenceError", "bisect_root", "golden_max", "scan_roots"]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class ConvergenceError(RuntimeError):
    """A bracket could not be established or an iteration budget ran out."""


def bisect_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    tol: float,
    max_iter: int = 200,
    flo: float | None = None,
    fhi: float | None = None,
) -> float:
    """Bisection on a sign change of ``f`` over [lo, hi].

    ``tol`` is an absolute tolerance on the bracket width.  Raises
    ConvergenceError when f(lo) and f(hi) have the same (nonzero) sign.
    """
    if not lo < hi:
        raise ValueError(f"invalid bracket [{lo}, {hi}]")
    flo = f(lo) if flo is None else flo
    if flo == 0.0:
        return lo
    fhi = f(hi) if fhi is None else fhi
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise ConvergenceError(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol or mid <= lo or mid >= hi:
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return 0.5 * (lo + hi)


def golden_max(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    tol: float,
    max_iter: int = 300,
) -> tuple[float, float]:
    """Golden-section maximization of a unimodal ``f`` on [lo, hi].

    Returns ``(argmax, max)``; ``tol`` is absolute on the argument.
    """
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def scan_roots(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    n: int = 160,
    tol: float,
) -> list[float]:
    """All sign-change roots of ``f`` found on an ``n``-interval grid scan.

    Each sign change is refined by bisection.  Exact zeros at grid nodes are
    returned as-is.  The list may be empty.
    """
    if not lo < hi:
        return []
    xs = [lo + (hi - lo) * i / n for i in range(n + 1)]
    vals = [f(x) for x in xs]
    roots: list[float] = []
    for i in range(n):
        a, b = xs[i], xs[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            roots.append(a)
        elif (fa > 0.0) != (fb > 0.0):
            roots.append(bisect_root(f, a, b, tol=tol, flo=fa, fhi=fb))
    if vals[-1] == 0.0:
        roots.append(hi)
    return roots
