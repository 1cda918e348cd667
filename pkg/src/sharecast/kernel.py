"""Reaction-time memory kernel: density, exact cumulative mass, sampling.

The kernel is a probability density over the delay s between seeing a share
and resharing it:

    phi(s) = c                      for 0 <= s <= s0
    phi(s) = c * (s / s0)^-(1+theta)   for s > s0

Its integral has a closed form, used everywhere instead of quadrature:

    F(x) = c * x                                      for x <= s0
    F(x) = c*s0 + (c*s0/theta) * (1 - (x/s0)^-theta)  for x > s0

Total mass F(inf) = c*s0*(1 + 1/theta); a normalized kernel has mass 1.
"""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from .types import KernelParams


def phi(s, k: KernelParams):
    """Density at delay s (seconds). Accepts scalars or arrays; s must be >= 0."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0):
        raise ValueError("delay must be non-negative")
    out = np.where(s_arr <= k.s0, k.c, k.c * np.power(np.maximum(s_arr, k.s0) / k.s0, -(1.0 + k.theta)))
    return float(out) if np.isscalar(s) or s_arr.ndim == 0 else out


def _cumulative(x, k: KernelParams):
    x_arr = np.asarray(x, dtype=float)
    head = k.c * np.minimum(x_arr, k.s0)
    with np.errstate(invalid="ignore"):
        tail_ratio = np.where(np.isinf(x_arr), 0.0, np.power(np.maximum(x_arr, k.s0) / k.s0, -k.theta))
    tail = np.where(x_arr > k.s0, (k.c * k.s0 / k.theta) * (1.0 - tail_ratio), 0.0)
    return head + tail


def phi_mass(a, b, k: KernelParams):
    """Exact integral of phi over [a, b]; additive over adjacent intervals.

    Broadcasts over array arguments. b may be +inf.
    """
    a_arr = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    if np.any(a_arr < 0) or np.any(b_arr < a_arr):
        raise ValueError("need 0 <= a <= b")
    out = _cumulative(b_arr, k) - _cumulative(a_arr, k)
    if np.isscalar(a) and np.isscalar(b):
        return float(out)
    return out


def total_mass(k: KernelParams) -> float:
    """Mass over [0, inf): c*s0*(1 + 1/theta)."""
    return k.c * k.s0 * (1.0 + 1.0 / k.theta)


def normalize(k: KernelParams) -> KernelParams:
    """Rescale c so the kernel integrates to exactly 1. Idempotent.

    The rounding of c is nudged by up to a few ulp so that the closed-form
    total c*s0*(1 + 1/theta) evaluates to exactly 1.0 in floating point.
    """
    factor = k.s0 * (1.0 + 1.0 / k.theta)
    c = 1.0 / factor
    best, best_err = c, abs(c * k.s0 * (1.0 + 1.0 / k.theta) - 1.0)
    cand = c
    for _ in range(8):
        if best_err == 0.0:
            break
        total = cand * k.s0 * (1.0 + 1.0 / k.theta)
        cand = math.nextafter(cand, math.inf if total < 1.0 else 0.0)
        err = abs(cand * k.s0 * (1.0 + 1.0 / k.theta) - 1.0)
        if err < best_err:
            best, best_err = cand, err
    return replace(k, c=best, normalized=True)


def sample_delay(u, k: KernelParams):
    """Inverse CDF of the normalized kernel at quantile(s) u in [0, 1).

    The kernel must be normalized (total mass 1) for u to be a probability.
    """
    if not k.normalized and not math.isclose(total_mass(k), 1.0, abs_tol=1e-9):
        raise ValueError("sampling requires a normalized kernel")
    u_arr = np.asarray(u, dtype=float)
    if np.any((u_arr < 0) | (u_arr >= 1)):
        raise ValueError("quantiles must lie in [0, 1)")
    head_mass = k.c * k.s0  # = theta / (1 + theta) when normalized
    linear = u_arr / k.c
    # Tail branch: invert F(s) = head_mass + (head_mass/theta)*(1 - (s/s0)^-theta)
    with np.errstate(invalid="ignore", divide="ignore"):
        inner = 1.0 - k.theta * (u_arr - head_mass) / head_mass
        tail = k.s0 * np.power(np.maximum(inner, 1e-300), -1.0 / k.theta)
    out = np.where(u_arr <= head_mass, linear, tail)
    return float(out) if np.isscalar(u) or u_arr.ndim == 0 else out
