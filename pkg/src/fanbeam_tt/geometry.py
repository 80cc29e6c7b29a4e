"""Fan-beam coordinates on the unit circle bundle of the unit disk.

A boundary point ``(beta, alpha)`` denotes the unit vector at ``e^{i beta}``
with direction ``beta + pi + alpha``; influx points have ``|alpha| < pi/2``.
All angle comparisons go through :func:`wrap` / :func:`wrap_signed`.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

TWO_PI = 2.0 * math.pi


def wrap(angle):
    """Reduce an angle (scalar or array) to ``[0, 2pi)``."""
    out = np.mod(angle, TWO_PI)
    # np.mod can return exactly 2pi for tiny negative inputs
    out = np.where(out >= TWO_PI, 0.0, out)
    if np.ndim(out) == 0:
        return float(out)
    return out


def wrap_signed(angle):
    """Reduce an angle to ``(-pi, pi]``."""
    out = math.pi - wrap(math.pi - np.asarray(angle, dtype=float))
    if np.ndim(out) == 0:
        return float(out)
    return out


def angle_distance(a, b):
    """Distance between two angles on the circle, in ``[0, pi]``."""
    return np.abs(wrap_signed(np.asarray(a) - np.asarray(b)))


class BoundaryPoint(NamedTuple):
    beta: float
    alpha: float

    @property
    def is_influx(self) -> bool:
        return is_influx(self.alpha)


class Chord(NamedTuple):
    beta: float
    alpha: float

    @property
    def length(self) -> float:
        return chord_length(self.alpha)

    @property
    def entry(self) -> complex:
        return complex(math.cos(self.beta), math.sin(self.beta))

    @property
    def exit(self) -> complex:
        phi = self.beta + math.pi + 2.0 * self.alpha
        return complex(math.cos(phi), math.sin(phi))


def is_influx(alpha):
    return np.cos(wrap_signed(alpha)) > 0


def chord_length(alpha):
    """Length ``2 cos(alpha)`` of the chord leaving an influx point."""
    return 2.0 * np.cos(alpha)


def _check_influx(alpha):
    if np.any(np.abs(wrap_signed(alpha)) >= math.pi / 2):
        raise ValueError(f"alpha={alpha!r} is not an influx fan angle (|alpha| < pi/2)")


def scattering(beta, alpha):
    """Scattering relation on the whole boundary: entry point to exit point."""
    return BoundaryPoint(wrap(beta + math.pi + 2.0 * alpha), wrap(math.pi - alpha))


def antipodal_scattering(beta, alpha):
    """Scattering relation followed by the fiber antipode; maps influx to influx."""
    _check_influx(alpha)
    return BoundaryPoint(wrap(beta + math.pi + 2.0 * alpha), wrap_signed(-alpha))


def flow_point(beta, alpha, t):
    """Point ``(x, y)`` and direction angle reached after time ``t`` along a chord."""
    tau = chord_length(alpha)
    # tolerate round-off at the exit point
    if np.any(t < -1e-14) or np.any(t > tau + 1e-14):
        raise ValueError(f"t={t!r} outside [0, 2cos(alpha)]")
    theta = beta + math.pi + alpha
    x = np.cos(beta) + t * np.cos(theta)
    y = np.sin(beta) + t * np.sin(theta)
    return x, y, wrap(theta)
