"""Analytic test images and the three fixed experiment presets.

The presets are fixed blends of gaussians (plus a harmonic term for the
vector-field case).  They are stand-ins chosen for reproducibility, not
copies of any published figure.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .data import DiskImage, TensorField

PRESET_VERSION = 1


def gaussian_fn(center=0j, width: float = 0.1, amplitude: float = 1.0):
    """``amplitude * exp(-|z - center|^2 / (2 width^2))`` as a callable of ``z``."""
    if not width > 0:
        raise ValueError("width must be positive")
    c = complex(center)
    if abs(c) >= 1:
        raise ValueError("center must lie inside the unit disk")
    return lambda z: amplitude * np.exp(-np.abs(z - c) ** 2 / (2.0 * width**2))


def gaussian(center=0j, width: float = 0.1, amplitude: float = 1.0, nx: int = 128, ny: int | None = None, r_mask: float = 1.0) -> DiskImage:
    return DiskImage.from_function(gaussian_fn(center, width, amplitude), nx, ny, r_mask)


def monomial(k: int, nx: int = 128, ny: int | None = None, r_mask: float = 1.0) -> DiskImage:
    """``z^k`` for ``k >= 0`` and ``zbar^|k|`` for ``k < 0``."""
    if k >= 0:
        return DiskImage.from_function(lambda z: z**k + 0j, nx, ny, r_mask)
    return DiskImage.from_function(lambda z: np.conj(z) ** (-k) + 0j, nx, ny, r_mask)


def harmonic_re(n: int, nx: int = 128, ny: int | None = None, r_mask: float = 1.0) -> DiskImage:
    """``Re z^n``."""
    return DiskImage.from_function(lambda z: (z**n).real + 0j, nx, ny, r_mask)


def blend(specs):
    """Sum of gaussians ``[(center, width, amplitude), ...]`` as a callable."""
    fns = [gaussian_fn(c, w, a) for c, w, a in specs]
    return lambda z: sum(f(z) for f in fns)


def circle_mean(fn, n: int = 4096) -> complex:
    """Average of ``fn`` over the unit circle."""
    z = np.exp(2j * np.pi * np.arange(n) / n)
    return complex(np.mean(fn(z)))


# Fixed preset ingredients (center, width, amplitude).
_EXP1_F0 = [(0.3 + 0.2j, 0.12, 1.0), (-0.35 - 0.1j, 0.09, 0.8), (0.05 - 0.45j, 0.07, 0.6)]
_EXP1_F2R = [(-0.2 + 0.35j, 0.1, 0.5), (0.4 - 0.3j, 0.08, -0.4)]
_EXP1_F2I = [(0.1 + 0.1j, 0.15, 0.4), (-0.45 + 0.2j, 0.07, 0.3)]
_EXP2_F0 = [(0.3 + 0.25j, 0.06, 1.0), (-0.3 + 0.1j, 0.05, 0.8), (0.0 - 0.4j, 0.07, 0.7)]
_EXP3_F1R = [(0.25 + 0.25j, 0.1, 1.0), (-0.3 - 0.3j, 0.08, 0.6)]
_EXP3_F1I = [(-0.25 + 0.3j, 0.09, 0.7)]
_EXP3_F3R = [(0.35 - 0.2j, 0.08, 0.5), (-0.1 + 0.45j, 0.06, 0.4)]
_EXP3_F3I = [(-0.4 - 0.05j, 0.1, 0.5)]


class Preset(NamedTuple):
    """A preset tensor, plus the scalar potential and its parts for the vector-field case."""

    tensor: TensorField
    potential: DiskImage | None = None
    parts: dict | None = None


def _real_pair(re_specs, im_specs, nx, ny):
    fr, fi = blend(re_specs), blend(im_specs)
    plus = DiskImage.from_function(lambda z: fr(z) + 1j * fi(z), nx, ny)
    return plus, plus.conj()


def experiment_preset(preset_id: int, nx: int = 300, ny: int | None = None) -> Preset:
    """Fixed phantom for experiment ``preset_id`` in {1, 2, 3}.

    1: real 2-tensor ``f_0 + f_2 e^{2i theta} + conj(f_2) e^{-2i theta}``.
    2: potential ``h = f_(0) + Re z^3`` with compact gaussians ``f_(0)``; the
       tensor is ``X_perp h``.
    3: real 3-tensor with harmonics ``+-1`` and ``+-3``.
    """
    ny = nx if ny is None else ny
    if preset_id == 1:
        f0 = DiskImage.from_function(lambda z: blend(_EXP1_F0)(z) + 0j, nx, ny)
        f2, fm2 = _real_pair(_EXP1_F2R, _EXP1_F2I, nx, ny)
        return Preset(TensorField(2, {0: f0, 2: f2, -2: fm2}, real=True))
    if preset_id == 2:
        from .forward import xperp_tensor

        g0 = blend(_EXP2_F0)
        h_fn = potential_fn_exp2()
        h = DiskImage.from_function(h_fn, nx, ny)
        parts = {
            "zero": DiskImage.from_function(lambda z: g0(z) + 0j, nx, ny),
            "boundary": harmonic_re(3, nx, ny),
        }
        return Preset(xperp_tensor(h), h, parts)
    if preset_id == 3:
        f1, fm1 = _real_pair(_EXP3_F1R, _EXP3_F1I, nx, ny)
        f3, fm3 = _real_pair(_EXP3_F3R, _EXP3_F3I, nx, ny)
        return Preset(TensorField(3, {-3: fm3, -1: fm1, 1: f1, 3: f3}, real=True))
    raise ValueError(f"unknown preset {preset_id!r}; expected 1, 2 or 3")


def potential_fn_exp2():
    """Callable potential of preset 2, normalised to zero mean on the boundary circle."""
    g0 = blend(_EXP2_F0)

    def raw(z):
        return g0(z) + (z**3).real + 0j

    shift = circle_mean(raw)
    return lambda z: raw(z) - shift
