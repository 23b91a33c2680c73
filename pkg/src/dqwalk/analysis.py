"""Power-law characterization of information spreading.

A series F(t) ~ A * t^alpha appears as a line of slope alpha in log-log
coordinates; the exponent separates the transport regimes (alpha = 2
ballistic, 1 diffusive, between the two superdiffusive, below 1 subdiffusive,
flattening toward 0 localized).  Fits are least squares on (log t, log F).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Entries this far (relatively) below the window maximum count as zeros: an
# analytically-zero value can come back as ~1e-31 dust after cancellation,
# and its log would dominate the fit.  Relative, so rescaling the series
# cannot change which points are kept.
ZERO_FLOOR = 1e-12


@dataclass
class PowerLawFit:
    """Result of one log-log fit: F(t) ~ amplitude * t**alpha."""

    alpha: float
    amplitude: float
    t_min: int
    t_max: int
    n_points: int
    residual_rms: float


@dataclass
class AlphaSeries:
    """Sliding-window exponent estimates alpha(t) at the window centers."""

    centers: np.ndarray
    alphas: np.ndarray
    window: int


def fit_power_law(values, t_min, t_max, steps=None):
    """Fit alpha over the step range [t_min, t_max] (inclusive).

    values[i] is the series at step steps[i]; steps defaults to 0..len-1.
    Steps whose value is zero up to ZERO_FLOOR relative to the window maximum
    are excluded (log undefined; for this family of series a zero carries no
    scaling information).  Values negative beyond that floor raise.
    At least 3 usable points are required.
    """
    values = np.asarray(values, dtype=float)
    steps = np.arange(len(values)) if steps is None else np.asarray(steps)
    if values.shape != steps.shape:
        raise ValueError("values and steps must have matching lengths")
    if t_min < 1 or t_max <= t_min:
        raise ValueError(f"bad fit range [{t_min}, {t_max}]")
    keep = (steps >= t_min) & (steps <= t_max)
    t = steps[keep].astype(float)
    f = values[keep]
    floor = ZERO_FLOOR * f.max() if len(f) else 0.0
    if (f < -floor).any():
        raise ValueError("series contains negative values; cannot fit a power law")
    nonzero = f > floor
    t, f = t[nonzero], f[nonzero]
    if len(f) < 3:
        raise ValueError(
            f"only {len(f)} usable points in [{t_min}, {t_max}]; need at least 3"
        )
    log_t, log_f = np.log(t), np.log(f)
    slope, intercept = np.polyfit(log_t, log_f, 1)
    resid = log_f - (slope * log_t + intercept)
    return PowerLawFit(
        alpha=float(slope),
        amplitude=float(np.exp(intercept)),
        t_min=int(t_min),
        t_max=int(t_max),
        n_points=int(len(f)),
        residual_rms=float(np.sqrt(np.mean(resid**2))),
    )


def windowed_alpha(values, window=20, steps=None):
    """Local exponent from a sliding fit over [t - window//2, t + window//2].

    Lets localization show up as alpha(t) sinking toward zero while early-time
    windows still report transport.  Window centers run over every step whose
    full window fits inside the positive-step part of the series.
    """
    values = np.asarray(values, dtype=float)
    steps = np.arange(len(values)) if steps is None else np.asarray(steps)
    if window < 5:
        raise ValueError("window must be >= 5 steps for a stable fit")
    half = window // 2
    t_lo, t_hi = max(int(steps.min()), 1), int(steps.max())
    centers = [t for t in range(t_lo + half, t_hi - half + 1)]
    if not centers:
        raise ValueError(
            f"window {window} does not fit inside steps {t_lo}..{t_hi}"
        )
    alphas = np.empty(len(centers))
    for i, t in enumerate(centers):
        fit = fit_power_law(values, t - half, t + half, steps=steps)
        alphas[i] = fit.alpha
    return AlphaSeries(np.asarray(centers), alphas, int(window))
