"""Operators on data space built from the scattering relation and the fiber Hilbert transform.

Grid bookkeeping: for the influx column ``a`` put ``s_a = pi + 2 alpha_a``.
The scattering relation sends ``(beta, alpha_a)`` to ``(beta + s_a, pi - alpha_a)``,
which is full-fiber column ``2 nalpha - 1 - a``; the antipodal version lands on
influx column ``nalpha - 1 - a``.  Only beta moves off-grid, and when
``nbeta`` is a multiple of ``2 nalpha`` the shift is a whole number of
samples.  Otherwise it is applied as a Fourier phase in beta, which is exact
for band-limited data.
"""

from __future__ import annotations

import numpy as np

from .data import BoundaryField, Sinogram
from .fiber import hilbert_fiber


def _scatter_shifts(nalpha: int) -> np.ndarray:
    return 2.0 * np.pi * (np.arange(nalpha) + 0.5) / nalpha


def shift_beta(values: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    """``out[b, a] = values(beta_b + shifts[a], a)`` with periodic beta."""
    nb = values.shape[0]
    steps = np.asarray(shifts) * nb / (2.0 * np.pi)
    whole = np.rint(steps)
    if np.all(np.abs(steps - whole) < 1e-9):
        idx = (np.arange(nb)[:, None] + whole.astype(int)[None, :]) % nb
        return np.take_along_axis(values, idx, axis=0)
    p = np.fft.fftfreq(nb, 1.0 / nb)
    phase = np.exp(1j * p[:, None] * np.asarray(shifts)[None, :])
    if nb % 2 == 0:
        phase[nb // 2] = np.cos(nb / 2 * np.asarray(shifts))
    return np.fft.ifft(np.fft.fft(values, axis=0) * phase, axis=0)


def _sign(sign) -> int:
    if sign in ("+", 1, +1):
        return 1
    if sign in ("-", -1):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def pullback_sa(sino: Sinogram) -> Sinogram:
    """``D(beta + pi + 2 alpha, -alpha)``."""
    return Sinogram(shift_beta(sino.values[:, ::-1], _scatter_shifts(sino.nalpha)))


def pullback_s(field: BoundaryField) -> BoundaryField:
    """``g o S`` on the whole boundary."""
    n = field.nalpha
    s = _scatter_shifts(n)
    inflow, outflow = field.values[:, :n], field.values[:, n:]
    new_in = shift_beta(outflow[:, ::-1], s)
    new_out = shift_beta(inflow, -s)[:, ::-1]
    return BoundaryField(np.concatenate([new_in, new_out], axis=1))


def extend_a(sino: Sinogram, sign="+") -> BoundaryField:
    """Even/odd extension with respect to the scattering relation."""
    sg = _sign(sign)
    out = sg * shift_beta(sino.values, -_scatter_shifts(sino.nalpha))[:, ::-1]
    return BoundaryField(np.concatenate([sino.values, out], axis=1))


def restrict_astar(field: BoundaryField, sign="+") -> Sinogram:
    """Adjoint of :func:`extend_a`: ``g +- g o S`` on influx samples."""
    sg = _sign(sign)
    n = field.nalpha
    inflow, outflow = field.values[:, :n], field.values[:, n:]
    return Sinogram(inflow + sg * shift_beta(outflow[:, ::-1], _scatter_shifts(n)))


def extend_e(sino: Sinogram, sign="+") -> BoundaryField:
    """Even/odd extension with respect to the fiber antipode ``alpha -> alpha + pi``."""
    sg = _sign(sign)
    return BoundaryField(np.concatenate([sino.values, sg * sino.values], axis=1))


def op_p(sino: Sinogram, part: str = "full") -> Sinogram:
    """``A_-^* H A_+`` (or with ``H_+`` / ``H_-``)."""
    return restrict_astar(hilbert_fiber(extend_a(sino, "+"), part), "-")


def op_c(sino: Sinogram, part: str = "full") -> Sinogram:
    """``(1/2) A_-^* H A_-`` (or with ``H_+`` / ``H_-``)."""
    return restrict_astar(hilbert_fiber(extend_a(sino, "-"), part), "-") * 0.5


def project_vpm(sino: Sinogram, sign="+") -> Sinogram:
    """Orthogonal projection onto the ``+1``/``-1`` eigenspace of the antipodal pullback."""
    return (sino + _sign(sign) * pullback_sa(sino)) * 0.5


def project_range_i0(sino: Sinogram) -> Sinogram:
    """Projection onto the range of the scalar transform: ``(Id + C_-^2)`` on the symmetric part."""
    sym = project_vpm(sino, "+")
    return sym + op_c(op_c(sym, "-"), "-")


def _ahha(sino: Sinogram) -> Sinogram:
    return restrict_astar(hilbert_fiber(extend_a(sino, "-")), "-")


def project_range_iperp_core(sino: Sinogram) -> Sinogram:
    """``(Id + (A_-^* H A_-)^2) D``: keeps the part coming from potentials vanishing on the boundary."""
    return sino + _ahha(_ahha(sino))


def iperp_boundary_part(sino: Sinogram) -> Sinogram:
    """``-(A_-^* H A_-)^2 D``: the part coming from the harmonic boundary extension."""
    return -_ahha(_ahha(sino))
