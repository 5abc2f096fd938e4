"""Pulse envelope shapes.

An envelope is a smooth, non-negative, unit-peak profile of the retarded
time xi = t - z/c: zero before xi = 0, a ramp up over ``rise_time``, a flat
plateau, a ramp down over ``fall_time``, and zero afterwards.  Only named
families are supported (no user-scripted callables), so configs stay
serializable and runs reproducible.

Both families are continuously differentiable across the ramp corners:
raised-cosine exactly, tanh up to a corner slope mismatch of order 2e-9 of
the peak ramp slope (steepness fixed at TANH_STEEPNESS half-widths).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SHAPES = ("raised_cosine", "tanh")

TANH_STEEPNESS = 12.0
# tanh argument runs over [-TANH_STEEPNESS, TANH_STEEPNESS] across one ramp


@dataclass(frozen=True)
class Envelope:
    """Unit-amplitude pulse profile in retarded time (seconds).

    ``unit_value``/``unit_slope`` evaluate the profile and its derivative
    with respect to xi; callers scale by the peak field and apply any
    group-velocity stretch of the argument themselves.
    """

    shape: str
    rise_time: float
    plateau_time: float
    fall_time: float

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown envelope shape {self.shape!r}, expected one of {SHAPES}")
        if not self.rise_time > 0.0:
            raise ValueError("envelope rise_time must be positive")
        if not self.fall_time > 0.0:
            raise ValueError("envelope fall_time must be positive")
        if self.plateau_time < 0.0:
            raise ValueError("envelope plateau_time must be non-negative")

    @property
    def duration(self) -> float:
        """Total support length in retarded time (s), without any stretch."""
        return self.rise_time + self.plateau_time + self.fall_time

    @property
    def symmetric(self) -> bool:
        return self.rise_time == self.fall_time

    def breakpoints(self) -> tuple[float, float, float, float]:
        """(start, plateau start, plateau end, end) in retarded time."""
        r = self.rise_time
        return (0.0, r, r + self.plateau_time, self.duration)

    def unit_value(self, xi):
        """Profile value in [0, 1] at retarded time xi (scalar or array)."""
        return _eval(self, np.asarray(xi, dtype=float), derivative=False)

    def unit_slope(self, xi):
        """d(profile)/d(xi) at retarded time xi (1/s)."""
        return _eval(self, np.asarray(xi, dtype=float), derivative=True)


def _ramp(shape: str, s, derivative: bool):
    """Monotone 0 -> 1 transition on s in [0, 1] (s already clipped)."""
    if shape == "raised_cosine":
        if derivative:
            return 0.5 * np.pi * np.sin(np.pi * s)
        return 0.5 * (1.0 - np.cos(np.pi * s))
    # tanh, rescaled so the endpoints are exactly 0 and 1
    a = TANH_STEEPNESS
    t0 = math.tanh(a)
    if derivative:
        return a / np.cosh(a * (2.0 * s - 1.0)) ** 2 / t0
    return 0.5 * (np.tanh(a * (2.0 * s - 1.0)) + t0) / t0


def _eval(env: Envelope, xi: np.ndarray, derivative: bool):
    scalar = xi.ndim == 0
    xi = np.atleast_1d(xi)
    out = np.zeros_like(xi)
    _, t1, t2, t3 = env.breakpoints()

    rising = (xi > 0.0) & (xi < t1)
    if rising.any():
        s = xi[rising] / env.rise_time
        val = _ramp(env.shape, s, derivative)
        out[rising] = val / env.rise_time if derivative else val

    if not derivative:
        out[(xi >= t1) & (xi <= t2)] = 1.0

    falling = (xi > t2) & (xi < t3)
    if falling.any():
        s = (t3 - xi[falling]) / env.fall_time
        val = _ramp(env.shape, s, derivative)
        out[falling] = -val / env.fall_time if derivative else val

    return out[0] if scalar else out


def make_envelope(shape: str, rise_time: float, plateau_time: float,
                  fall_time: float | None = None) -> Envelope:
    """Build a named envelope; fall_time defaults to rise_time (symmetric)."""
    return Envelope(shape=shape, rise_time=float(rise_time),
                    plateau_time=float(plateau_time),
                    fall_time=float(rise_time if fall_time is None else fall_time))
