"""Special functions behind the search-cost model.

The cost of discovering an answer with probability ``rho`` is governed by the
kernel ``ctilde(rho) = erf_inv(rho)**2``.  This module provides that kernel,
its first two derivatives, the principal Lambert W branch, and the closed-form
inverse of the kernel's derivative,

    ctilde_prime_inv(x) = erf(sqrt(W(2 x^2 / pi) / 2)).

Everything is implemented library-free in double precision: the inverse error
function starts from a log-based approximation and is polished with Halley
steps against the C-library ``math.erf``; Lambert W uses a branch-aware
initial guess plus Halley iteration.  Results carry at least 10 significant
digits on [1e-6, 1 - 1e-6] (round-trip tested in the suite).

All functions are pure and reentrant; they hold no state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "CostKernelPoint",
    "cost_kernel_point",
    "ctilde",
    "ctilde_prime",
    "ctilde_prime_inv",
    "ctilde_second",
    "erf_inv",
    "lambert_w0",
]

_SQRT_PI = math.sqrt(math.pi)
_TWO_OVER_SQRT_PI = 2.0 / _SQRT_PI
_INV_E = math.exp(-1.0)


def erf_inv(p: float) -> float:
    """Inverse of the error function on (-1, 1).

    Uses a Winitzki-style starting approximation refined by three Halley
    steps on ``erf(x) - p``.  Domain error for ``|p| >= 1`` or NaN.
    """
    if math.isnan(p) or not -1.0 < p < 1.0:
        raise ValueError(f"erf_inv requires |p| < 1, got {p!r}")
    if p == 0.0:
        return 0.0
    a = 0.147
    ln1mp2 = math.log1p(-p * p)
    t = 2.0 / (math.pi * a) + 0.5 * ln1mp2
    x = math.copysign(math.sqrt(math.sqrt(t * t - ln1mp2 / a) - t), p)
    # Halley: with f = erf(x) - p we have f'' = -2 x f', so the update
    # x - 2 f f' / (2 f'^2 - f f'') collapses to x - f / (f' + x f).
    for _ in range(3):
        err = math.erf(x) - p
        if err == 0.0:
            break
        fprime = _TWO_OVER_SQRT_PI * math.exp(-x * x)
        x -= err / (fprime + x * err)
    return x


def ctilde(rho: float) -> float:
    """Search-cost kernel: squared inverse error function.

    Defined on [0, 1]; the limit convention ``ctilde(1) = inf`` is the
    explicit infinite-cost sentinel.  Optimizers treat rho = 1 as infeasible
    whenever the cost weight is positive.
    """
    if math.isnan(rho) or not 0.0 <= rho <= 1.0:
        raise ValueError(f"ctilde requires rho in [0, 1], got {rho!r}")
    if rho == 1.0:
        return math.inf
    i = erf_inv(rho)
    return i * i


def ctilde_prime(rho: float) -> float:
    """First derivative of the cost kernel: sqrt(pi) * erf_inv(rho) * exp(ctilde(rho))."""
    if math.isnan(rho) or not 0.0 <= rho < 1.0:
        raise ValueError(f"ctilde_prime requires rho in [0, 1), got {rho!r}")
    i = erf_inv(rho)
    return _SQRT_PI * i * math.exp(i * i)


def ctilde_second(rho: float) -> float:
    """Second derivative of the cost kernel.

    With ``i = erf_inv(rho)`` and ``i' = (sqrt(pi)/2) exp(i^2)`` the chain
    rule gives ``2 i'^2 (1 + 2 i^2)``; the rho -> 0 limit is pi/2.
    """
    if math.isnan(rho) or not 0.0 <= rho < 1.0:
        raise ValueError(f"ctilde_second requires rho in [0, 1), got {rho!r}")
    i = erf_inv(rho)
    iprime = 0.5 * _SQRT_PI * math.exp(i * i)
    return 2.0 * iprime * iprime * (1.0 + 2.0 * i * i)


def lambert_w0(x: float) -> float:
    """Principal branch of the Lambert W function (real, x >= -1/e).

    Halley iteration from a branch-aware initial guess; iteration cap 50
    with a 1e-14 relative residual test on ``W exp(W) - x``.
    """
    if math.isnan(x) or x < -_INV_E:
        # Allow a one-ulp grace below the branch point before rejecting.
        if not math.isnan(x) and x > -_INV_E - 1e-15:
            return -1.0
        raise ValueError(f"lambert_w0 requires x >= -1/e, got {x!r}")
    if x == 0.0:
        return 0.0
    if x < -0.3:
        # Series around the branch point in p = sqrt(2 (e x + 1)).
        p = math.sqrt(max(0.0, 2.0 * (math.e * x + 1.0)))
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3
    elif x < math.e:
        w = math.log1p(x) if x > 0.0 else x
    else:
        l1 = math.log(x)
        l2 = math.log(l1)
        w = l1 - l2 + l2 / l1
    tol = 1e-14 * max(abs(x), 1e-300)
    for _ in range(50):
        ew = math.exp(w)
        f = w * ew - x
        if abs(f) <= tol:
            break
        wp1 = w + 1.0
        w -= f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
    return w


def ctilde_prime_inv(x: float) -> float:
    """Inverse of ``ctilde_prime`` on [0, inf); the value lies in [0, 1)."""
    if math.isnan(x) or x < 0.0:
        raise ValueError(f"ctilde_prime_inv requires x >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    w = lambert_w0(2.0 * x * x / math.pi)
    return math.erf(math.sqrt(0.5 * w))


@dataclass(frozen=True)
class CostKernelPoint:
    """Kernel and its first two derivatives evaluated at one output level."""

    rho: float
    ctilde: float
    ctilde_prime: float
    ctilde_second: float


def cost_kernel_point(rho: float) -> CostKernelPoint:
    """Evaluate the kernel and both derivatives in one pass."""
    if math.isnan(rho) or not 0.0 <= rho < 1.0:
        raise ValueError(f"cost_kernel_point requires rho in [0, 1), got {rho!r}")
    i = erf_inv(rho)
    e = math.exp(i * i)
    iprime = 0.5 * _SQRT_PI * e
    return CostKernelPoint(
        rho=rho,
        ctilde=i * i,
        ctilde_prime=_SQRT_PI * i * e,
        ctilde_second=2.0 * iprime * iprime * (1.0 + 2.0 * i * i),
    )
