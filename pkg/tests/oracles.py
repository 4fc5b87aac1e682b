"""Independent oracles for the test suite.

Everything here is deliberately implemented without the package's own
numerics: series/bisection inversions, scipy quadrature and special
functions, and brute-force grids.  Tests compare the package against these,
never against itself.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate
from scipy.special import erfinv as sp_erfinv


def erf_series(x: float) -> float:
    """Maclaurin-series error function, accurate to ~1e-15 for |x| <= 5."""
    term = x
    total = x
    for n in range(1, 200):
        term *= -x * x / n
        contrib = term / (2 * n + 1)
        total += contrib
        if abs(contrib) < 1e-18 * max(abs(total), 1e-30):
            break
    return 2.0 / math.sqrt(math.pi) * total


def erfinv_bisect(p: float, tol: float = 1e-14) -> float:
    """Invert the series erf by plain bisection."""
    if p == 0.0:
        return 0.0
    sign = 1.0 if p > 0 else -1.0
    target = abs(p)
    lo, hi = 0.0, 6.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if erf_series(mid) < target:
            lo = mid
        else:
            hi = mid
    return sign * 0.5 * (lo + hi)


def lambert_newton(x: float, tol: float = 1e-15) -> float:
    """Newton iteration for the principal Lambert W branch."""
    w = 0.0 if x < math.e else math.log(x)
    if x < -0.2:
        w = -0.5
    for _ in range(200):
        ew = math.exp(w)
        f = w * ew - x
        if abs(f) <= tol * max(abs(x), 1e-30):
            break
        w -= f / (ew * (w + 1.0))
    return w


def variance_profile(x: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Conjecture variance at questions x for known coordinates xs (sorted)."""
    out = np.empty_like(x, dtype=float)
    for i, xi in enumerate(x):
        j = np.searchsorted(xs, xi)
        if j == 0:
            out[i] = xs[0] - xi
        elif j == len(xs):
            out[i] = xi - xs[-1]
        elif xs[j] == xi:
            out[i] = 0.0
        else:
            lo, hi = xs[j - 1], xs[j]
            out[i] = (hi - xi) * (xi - lo) / (hi - lo)
    return out


def quad_value_of_knowledge(xs: list[float], q: float) -> float:
    """Adaptive quadrature of max{(q - var)/q, 0} over the whole line.

    The two unbounded sides integrate to q exactly; each bounded gap is
    integrated numerically with the gap endpoints as break points.
    """
    total = q
    arr = np.asarray(sorted(xs), dtype=float)
    for lo, hi in zip(arr, arr[1:]):
        def integrand(x: float) -> float:
            var = (hi - x) * (x - lo) / (hi - lo)
            return max((q - var) / q, 0.0)

        val, _ = integrate.quad(integrand, lo, hi, limit=200,
                                points=[lo, 0.5 * (lo + hi), hi])
        total += val
    return total


def _cell_centers(top: float, n: int) -> np.ndarray:
    return (np.arange(n) + 0.5) * (top / n)


def grid_payoff_matrix(X: float, eta: float, q: float,
                       nd: int = 2000, nrho: int = 2000,
                       d_max: float | None = None):
    """Brute-force researcher payoff over a cell-centered (d, rho) grid.

    Returns (d grid, rho grid, payoff matrix).  The benefit and kernel are
    recomputed here from scratch (scipy erfinv), independent of the package.
    """
    if d_max is None:
        d_max = 6.0 * q if math.isinf(X) else 0.5 * X
    d = _cell_centers(d_max, nd)
    rho = _cell_centers(0.999, nrho)

    def v_area(length: np.ndarray) -> np.ndarray:
        out = length - length**2 / (6.0 * q)
        mask = length > 4.0 * q
        out = np.where(
            mask,
            out + (length - 4.0 * q) / (6.0 * q) * np.sqrt(length)
            * np.sqrt(np.maximum(length - 4.0 * q, 0.0)),
            out,
        )
        return out

    if math.isinf(X):
        V = v_area(d)
        s2 = d.copy()
    else:
        V = v_area(d) + v_area(X - d) - v_area(np.full_like(d, X))
        s2 = d * (X - d) / X
    ct = sp_erfinv(rho) ** 2
    payoff = rho[:, None] * V[None, :] - eta * ct[:, None] * s2[None, :]
    return d, rho, payoff


def grid_best(X: float, eta: float, q: float, nd: int = 2000, nrho: int = 2000,
              d_max: float | None = None):
    """Argmax of the brute-force grid: (payoff, d, rho, d step, rho step)."""
    d, rho, payoff = grid_payoff_matrix(X, eta, q, nd, nrho, d_max)
    k = int(np.argmax(payoff))
    i, j = divmod(k, len(d))
    return payoff[i, j], d[j], rho[i], d[1] - d[0], rho[1] - rho[0]


def grid_best_rewarded(zeta: float, eta: float, s: float, q: float,
                       tech: str = "linear", nd: int = 2000, nrho: int = 2000,
                       d_max: float | None = None):
    """Brute-force optimum of the funded expanding researcher."""
    if d_max is None:
        d_max = s if tech == "linear" else 12.0 * q
    d = _cell_centers(d_max, nd)
    rho = _cell_centers(0.999, nrho)
    V = d - d**2 / (6.0 * q)
    mask = d > 4.0 * q
    V = np.where(mask,
                 V + (d - 4.0 * q) / (6.0 * q) * np.sqrt(d)
                 * np.sqrt(np.maximum(d - 4.0 * q, 0.0)), V)
    if tech == "linear":
        f = np.minimum(d / s, 1.0)
    else:
        f = 1.0 - np.exp(-s * d)
    gross = V + f * zeta
    ct = sp_erfinv(rho) ** 2
    payoff = rho[:, None] * gross[None, :] - eta * ct[:, None] * d[None, :]
    k = int(np.argmax(payoff))
    i, j = divmod(k, len(d))
    return payoff[i, j], d[j], rho[i], d[1] - d[0], rho[1] - rho[0]
