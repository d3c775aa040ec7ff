"""Trajectories of evolving packets and their deviation from closed forms."""

import math
from dataclasses import dataclass

import numpy as np

from .analytic1d import center_expectation, localized, moments, neighbour_overlap, propagate_exact
from .errors import DomainError
from .lattice2d import density_moments, propagate_exact_2d
from .lissajous import curve_point
from .special import bessel_symmetric, kernel_halfwidth


@dataclass(frozen=True)
class TrajectorySample:
    time: float
    center_x: float
    center_y: float
    var_x: float
    var_y: float
    predicted_x: float
    predicted_y: float
    deviation: float


def predicted_center(spec, params, time_t):
    """Exact theta-function center per axis; an untilted axis drifts freely."""
    out = []
    for name in ("x", "y"):
        s, p = spec.axis(name), params.axis(name)
        if p.tilt_F > 0:
            out.append(center_expectation(s, p, time_t))
        else:
            drift = 2 * p.tunneling_J * math.sin(s.momentum_P) * neighbour_overlap(s.center_X, s.width_sigma)
            out.append(s.center_X + drift * time_t)
    return tuple(out)


def _check_times(times):
    times = [float(t) for t in times]
    if not times:
        raise DomainError("time list is empty")
    if any(b < a for a, b in zip(times, times[1:])):
        raise DomainError("times must be ascending")
    return times


def sample_state(state, time_t, predicted):
    cx, cy, vx, vy, _ = density_moments(state)
    px, py = predicted
    return TrajectorySample(time_t, cx, cy, vx, vy, px, py, math.hypot(cx - px, cy - py))


def record_trajectory(spec, params, times, predictor=None, keep_states=False):
    """Propagate ``spec`` exactly to each time and compare its center to a prediction.

    With a Lissajous plan the prediction is the plan's curve; otherwise it
    is the exact expectation value per axis. Returns the samples, or
    (samples, states) when ``keep_states`` is set.
    """
    times = _check_times(times)
    samples, states = [], []
    for t in times:
        state = propagate_exact_2d(spec, params, t)
        pred = curve_point(predictor, t) if predictor is not None else predicted_center(spec, params, t)
        samples.append(sample_state(state, t, pred))
        if keep_states:
            states.append(state)
    return (samples, states) if keep_states else samples


def max_deviation(samples):
    return max(s.deviation for s in samples)


def breathing_profile(x0, params, times):
    """Variance of |J_{x-x0}[(4J/F) sin(Ft/2)]|^2 at each time.

    Analytically (8J^2/F^2) sin^2(Ft/2); here summed from the Bessel row.
    """
    if params.tilt_F <= 0:
        raise DomainError("breathing needs tilt_F > 0")
    out = []
    for t in times:
        z = (4 * params.tunneling_J / params.tilt_F) * math.sin(params.tilt_F * t / 2)
        w = kernel_halfwidth(z)
        rho = bessel_symmetric(w, z) ** 2
        m = np.arange(-w, w + 1, dtype=float)
        mean = math.fsum(m * rho)
        out.append((float(t), math.fsum((m - mean) ** 2 * rho)))
    return out


def breathing_variance_propagated(x0, params, t):
    """Same quantity obtained by propagating a localized state."""
    return moments(propagate_exact(localized(x0), params, t))[1]


def oscillation_amplitude(series):
    """(max - min) / 2 of a sampled center time series."""
    a = np.asarray(series, dtype=float)
    return float(a.max() - a.min()) / 2.0


def bloch_period_grid(period, samples=256):
    """``samples + 1`` times covering [0, period] inclusive, so period/2 is hit exactly for even counts."""
    return [period * k / samples for k in range(samples + 1)]
