"""Baseline self-exciting point-process predictor.

Given the cascade observed up to time t, the model estimates a time-varying
infectiousness p_t (probability that an exposed user reshares), then projects
the final reshare count through the branching-process expectation

    R_inf = R_t + p_t * (N_t - N_t_eff) / (1 - p_t * n_star)

where N_t is the total exposure (sum of degrees of nodes seen so far, root
included), N_t_eff the kernel-weighted "effective" exposure, and n_star the
assumed mean degree of the network. When p_t * n_star reaches 1 the branching
process is supercritical and no finite prediction exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .kernel import phi, phi_mass
from .types import Cascade, InsufficientDataError, KernelParams, ModelParams

#: Outcome status values carried by PredictionPoint.
OK = "ok"
SUPERCRITICAL = "supercritical"
INSUFFICIENT_DATA = "insufficient_data"


@dataclass(frozen=True)
class PredictionPoint:
    """A prediction made at one observation time.

    ``predicted_final`` is None unless ``status == "ok"``; it is always
    >= the reshare count observed by ``time_s``.
    """

    time_s: float
    status: str
    predicted_final: Optional[float]
    n_star_used: float
    model_tag: str
    p_used: Optional[float] = None

    @property
    def ok(self) -> bool:
        return self.status == OK


@dataclass(frozen=True)
class InfectiousnessSeries:
    """Per-time accounting backing a prediction curve.

    Arrays are aligned with ``times``; undefined entries (too few reshares)
    are NaN. ``p_adj`` is filled by the speed-adjusted predictor, NaN here.
    """

    times: np.ndarray
    r: np.ndarray
    n: np.ndarray
    n_eff: np.ndarray
    p: np.ndarray
    lam: np.ndarray
    p_adj: np.ndarray = field(default_factory=lambda: np.array([]))


def exposure(cascade: Cascade, t: float, k: KernelParams) -> tuple[float, float]:
    """(N_t, N_t_eff): total and kernel-weighted exposure from nodes with t_i <= t.

    The root counts toward exposure: its audience is exposed from time 0.
    """
    mask = cascade.times <= t
    degrees = cascade.degrees[mask]
    if degrees.size == 0:
        return 0.0, 0.0
    ages = t - cascade.times[mask]
    n_t = float(degrees.sum())
    n_eff = float(np.dot(degrees, phi_mass(np.zeros_like(ages), ages, k)))
    return n_t, n_eff


def estimate_p(cascade: Cascade, t: float, k: KernelParams, min_reshares: int = 1) -> float:
    """Maximum-likelihood infectiousness: reshares over effective exposure."""
    r_t = cascade.reshare_count(t)
    if r_t < min_reshares:
        raise InsufficientDataError(f"{r_t} reshares by t={t}, need {min_reshares}")
    _, n_eff = exposure(cascade, t, k)
    if n_eff <= 0:
        raise InsufficientDataError("zero effective exposure")
    return r_t / n_eff


def intensity(cascade: Cascade, t: float, p: float, k: KernelParams) -> float:
    """Instantaneous reshare rate: p * sum of degree-weighted kernel values."""
    if p < 0:
        raise ValueError("infectiousness must be non-negative")
    mask = cascade.times <= t
    if not mask.any():
        return 0.0
    return p * float(np.dot(cascade.degrees[mask], phi(t - cascade.times[mask], k)))


def _intensity_left(cascade: Cascade, t: float, p: float, k: KernelParams) -> float:
    # Left limit: only events strictly before t contribute (a share cannot
    # trigger itself).
    mask = cascade.times < t
    if not mask.any():
        return 0.0
    return p * float(np.dot(cascade.degrees[mask], phi(t - cascade.times[mask], k)))


def log_likelihood(cascade: Cascade, t: float, p: float, k: KernelParams) -> float:
    """Point-process log likelihood of the reshares in (0, t] under constant p.

    The compensator integral collapses to p * N_t_eff because the kernel
    integrates in closed form.
    """
    if p <= 0:
        raise ValueError("log likelihood requires p > 0")
    reshares = [e for e in cascade.reshares if e.time_s <= t]
    if not reshares:
        raise InsufficientDataError("no reshares in (0, t]")
    ll = 0.0
    for e in reshares:
        lam = _intensity_left(cascade, e.time_s, p, k)
        if lam <= 0:
            return -math.inf
        ll += math.log(lam)
    _, n_eff = exposure(cascade, t, k)
    return ll - p * n_eff


def predict_final(
    r_t: float,
    n_t: float,
    n_t_eff: float,
    p: float,
    n_star: float,
    eps: float = 0.01,
) -> tuple[str, Optional[float]]:
    """Final-size projection, or the supercritical marker when p*n_star >= 1-eps.

    Returns (status, predicted_final-or-None). eps keeps predictions away
    from the pole at p*n_star = 1.
    """
    if n_star <= 0:
        raise ValueError("n_star must be positive")
    if p < 0:
        raise ValueError("p must be non-negative")
    if n_t < n_t_eff - 1e-12:
        raise ValueError("effective exposure cannot exceed total exposure")
    if p * n_star >= 1.0 - eps:
        return SUPERCRITICAL, None
    return OK, r_t + p * (n_t - n_t_eff) / (1.0 - p * n_star)


def infectiousness_series(cascade: Cascade, times: Sequence[float], params: ModelParams) -> InfectiousnessSeries:
    """Exposure, infectiousness and intensity at each evaluation time."""
    times_arr = np.asarray(times, dtype=float)
    r = np.empty_like(times_arr)
    n = np.empty_like(times_arr)
    n_eff = np.empty_like(times_arr)
    p = np.full_like(times_arr, np.nan)
    lam = np.full_like(times_arr, np.nan)
    for i, t in enumerate(times_arr):
        r[i] = cascade.reshare_count(t)
        n[i], n_eff[i] = exposure(cascade, t, params.kernel)
        try:
            p[i] = params.alpha(t) * estimate_p(cascade, t, params.kernel, params.min_reshares)
        except InsufficientDataError:
            continue
        lam[i] = intensity(cascade, t, p[i], params.kernel)
    return InfectiousnessSeries(times=times_arr, r=r, n=n, n_eff=n_eff, p=p, lam=lam,
                               p_adj=np.full_like(times_arr, np.nan))


def baseline_series(
    cascade: Cascade,
    times: Sequence[float],
    params: ModelParams,
    n_star: Optional[float] = None,
    model_tag: str = "seismic",
) -> list[PredictionPoint]:
    """Run the baseline predictor at each time; insufficient data and the
    supercritical regime become outcomes, never exceptions."""
    n_star = params.n_star_default if n_star is None else n_star
    points = []
    for t in np.asarray(times, dtype=float):
        r_t = cascade.reshare_count(t)
        n_t, n_eff = exposure(cascade, t, params.kernel)
        try:
            p = params.alpha(t) * estimate_p(cascade, t, params.kernel, params.min_reshares)
        except InsufficientDataError:
            points.append(PredictionPoint(float(t), INSUFFICIENT_DATA, None, n_star, model_tag))
            continue
        status, value = predict_final(r_t, n_t, n_eff, p, n_star, params.epsilon_subcritical)
        points.append(PredictionPoint(float(t), status, value, n_star, model_tag, p_used=p))
    return points
