"""Waveform generators for pulse sample arrays.

A waveform kind maps normalised time x in [0, 1] (sample k sits at
x = k / (nsamples - 1)) to a sample value. Durations and sigmas are in ns,
amplitudes in rad/ns, matching the pulse they fill.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import BadParamsError, KnotCountTooSmallError

WAVEFORM_KINDS = (
    "gaussian", "sine", "cosine", "saw", "blackman",
    "interpolated", "composite", "custom",
)


def _check_finite(name: str, value: float) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise BadParamsError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(value):
        raise BadParamsError(f"{name} must be finite, got {value!r}")
    return value


def _gaussian(x: np.ndarray, duration: float, amplitude: float, sigma: float,
              center: float | None = None) -> np.ndarray:
    amplitude = _check_finite("amplitude", amplitude)
    sigma = _check_finite("sigma", sigma)
    if sigma <= 0:
        raise BadParamsError(f"gaussian sigma must be > 0, got {sigma}")
    c = duration / 2.0 if center is None else _check_finite("center", center)
    t = x * duration
    return amplitude * np.exp(-((t - c) ** 2) / (2.0 * sigma**2))


def _sine(x: np.ndarray, duration: float, amplitude: float, cycles: float = 1.0,
          phase0: float = 0.0) -> np.ndarray:
    amplitude = _check_finite("amplitude", amplitude)
    cycles = _check_finite("cycles", cycles)
    phase0 = _check_finite("phase0", phase0)
    if cycles <= 0:
        raise BadParamsError(f"cycles must be > 0, got {cycles}")
    return amplitude * np.sin(2.0 * math.pi * cycles * x + phase0)


def _cosine(x: np.ndarray, duration: float, amplitude: float, cycles: float = 1.0,
            phase0: float = 0.0) -> np.ndarray:
    amplitude = _check_finite("amplitude", amplitude)
    cycles = _check_finite("cycles", cycles)
    phase0 = _check_finite("phase0", phase0)
    if cycles <= 0:
        raise BadParamsError(f"cycles must be > 0, got {cycles}")
    return amplitude * np.cos(2.0 * math.pi * cycles * x + phase0)


def _saw(x: np.ndarray, duration: float, amplitude: float,
         cycles: float = 1.0) -> np.ndarray:
    """Periodic ramp from -amplitude to +amplitude, resetting each cycle."""
    amplitude = _check_finite("amplitude", amplitude)
    cycles = _check_finite("cycles", cycles)
    if cycles <= 0:
        raise BadParamsError(f"cycles must be > 0, got {cycles}")
    frac = np.mod(x * cycles, 1.0)
    return amplitude * (2.0 * frac - 1.0)


def _blackman(x: np.ndarray, duration: float, amplitude: float) -> np.ndarray:
    """Blackman window scaled so the midpoint hits amplitude, endpoints zero."""
    amplitude = _check_finite("amplitude", amplitude)
    return amplitude * (0.42 - 0.5 * np.cos(2 * math.pi * x)
                        + 0.08 * np.cos(4 * math.pi * x))


def _interpolated(x: np.ndarray, duration: float, values: Sequence[float],
                  times: Sequence[float] | None = None) -> np.ndarray:
    """Natural cubic spline through the given knots."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size < 2:
        raise KnotCountTooSmallError(
            f"interpolated needs at least 2 knots, got {values.size}"
        )
    if not np.all(np.isfinite(values)):
        raise BadParamsError("interpolated knot values must be finite")
    if times is None:
        knots_t = np.linspace(0.0, duration, values.size)
    else:
        knots_t = np.asarray(times, dtype=float)
        if knots_t.shape != values.shape:
            raise BadParamsError("knot times and values must have the same length")
        if np.any(np.diff(knots_t) <= 0):
            raise BadParamsError("knot times must be strictly increasing")
    spline = CubicSpline(knots_t, values, bc_type="natural")
    return spline(x * duration)


def _composite(x: np.ndarray, duration: float,
               segments: Sequence[tuple]) -> np.ndarray:
    """Concatenate sub-waveforms, each scaled to its own sub-duration.

    segments: iterable of (kind, sub_duration, *params). Sub-durations must
    add up to the total duration. custom and composite cannot nest here.
    """
    if not segments:
        raise BadParamsError("composite needs at least one segment")
    kinds, durs, args = [], [], []
    for seg in segments:
        if len(seg) < 2:
            raise BadParamsError(f"composite segment too short: {seg!r}")
        kind, sub = seg[0], _check_finite("sub_duration", seg[1])
        if kind in ("custom", "composite"):
            raise BadParamsError(f"{kind} waveforms cannot nest inside composite")
        if kind not in _EVALUATORS:
            raise BadParamsError(f"unknown waveform kind {kind!r}")
        if sub <= 0:
            raise BadParamsError(f"sub_duration must be > 0, got {sub}")
        kinds.append(kind)
        durs.append(sub)
        args.append(seg[2:])
    total = float(np.sum(durs))
    if not math.isclose(total, duration, rel_tol=1e-9, abs_tol=1e-12):
        raise BadParamsError(
            f"composite sub-durations sum to {total}, pulse lasts {duration}"
        )
    starts = np.concatenate([[0.0], np.cumsum(durs)])
    t = x * duration
    out = np.empty_like(t)
    for i, (kind, sub) in enumerate(zip(kinds, durs)):
        lo, hi = starts[i], starts[i + 1]
        if i == len(kinds) - 1:
            mask = (t >= lo) & (t <= hi + 1e-12)
        else:
            mask = (t >= lo) & (t < hi)
        local_x = np.clip((t[mask] - lo) / sub, 0.0, 1.0)
        out[mask] = _EVALUATORS[kind](local_x, sub, *args[i])
    return out


_EVALUATORS = {
    "gaussian": _gaussian,
    "sine": _sine,
    "cosine": _cosine,
    "saw": _saw,
    "blackman": _blackman,
    "interpolated": _interpolated,
}


def waveform_samples(kind: str, nsamples: int, duration: float,
                     *params) -> np.ndarray:
    """Evaluate one waveform kind on the pulse sample grid."""
    x = np.linspace(0.0, 1.0, nsamples)
    if kind == "custom":
        if len(params) != 1:
            raise BadParamsError("custom takes exactly one sample array")
        samples = np.asarray(params[0], dtype=float)
        if samples.ndim != 1 or samples.size != nsamples:
            raise BadParamsError(
                f"custom sample array must have length {nsamples}, got {samples.size}"
            )
        if not np.all(np.isfinite(samples)):
            raise BadParamsError("custom samples must be finite")
        return samples.copy()
    if kind == "composite":
        if len(params) != 1:
            raise BadParamsError("composite takes exactly one segment list")
        return _composite(x, duration, params[0])
    fn = _EVALUATORS.get(kind)
    if fn is None:
        raise BadParamsError(f"unknown waveform kind {kind!r}")
    try:
        return np.asarray(fn(x, duration, *params), dtype=float)
    except TypeError as exc:
        raise BadParamsError(f"bad arguments for {kind}: {exc}") from None
