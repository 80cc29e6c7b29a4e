"""Reconstruction of the canonical tensor representative from fan-beam data.

An even ``2n``-tensor is recovered as a central function ``g_0`` (filtered
backprojection) plus holomorphic harmonics ``g_{2k}`` and antiholomorphic
harmonics ``g_{-2k}`` (Cauchy-type contour integrals).  An odd ``2n+1``-tensor
has its central part ``X_perp g_0`` expressed through a potential
``g_0 = g_(0) + g_(-) + g_(+)``; the last two are holomorphic/antiholomorphic
and are read off from boundary data.

Contour integrals are evaluated either as truncated power series in ``z``
(default; accurate up to the boundary) or by direct summation of the Cauchy
kernel over the beta grid, cut at ``r_cut`` with a linear taper.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .boundary import project_range_iperp_core, project_vpm, restrict_astar, extend_a
from .data import DiskImage, Sinogram, TensorField, pixel_centers
from .fiber import basis_sinogram, hilbert_fiber
from .forward import backproject_i0, backproject_iperp, xperp_tensor

# Prefactor of both filtered backprojections under the normalisation of
# ``backproject_i0`` / ``backproject_iperp``; fixed by round trips on I0 and I_perp data.
FBP_SCALE = -0.25


@dataclass(frozen=True)
class ReconstructionConfig:
    """Output grid and contour-evaluation settings.

    ``nx``/``ny`` default to ``nalpha`` of the data.  ``evaluation`` is
    ``"series"`` or ``"cauchy"``; ``r_cut`` and ``taper`` only affect the
    latter.  ``half_sum`` symmetrises the data under the antipodal
    scattering relation before each contour integral.
    """

    r_cut: float = 0.97
    nx: int | None = None
    ny: int | None = None
    evaluation: str = "series"
    taper: bool = True
    half_sum: bool = False

    def __post_init__(self):
        if not 0.0 < self.r_cut < 1.0:
            raise ValueError(f"r_cut must lie in (0, 1), got {self.r_cut}")
        if self.evaluation not in ("series", "cauchy"):
            raise ValueError(f"unknown evaluation mode {self.evaluation!r}")

    def dims(self, sino: Sinogram) -> tuple[int, int]:
        nx = self.nx or sino.nalpha
        return nx, self.ny or nx


DEFAULT_CONFIG = ReconstructionConfig()


class OddCenter(NamedTuple):
    g_zero: DiskImage
    g_minus: DiskImage
    g_plus: DiskImage

    @property
    def potential(self) -> DiskImage:
        return self.g_zero + self.g_minus + self.g_plus


class OddReconstruction(NamedTuple):
    tensor: TensorField
    potential: DiskImage
    center: OddCenter


# ---------------------------------------------------------------- contour integrals


def _alpha_moment(sino: Sinogram, power: int) -> np.ndarray:
    """``int D(beta, alpha) e^{i power alpha} d alpha`` for every beta."""
    w = np.exp(1j * power * sino.alpha) * sino.dalpha
    return sino.values @ w


def _beta_fourier(weights: np.ndarray, conj_kernel: bool) -> np.ndarray:
    """``int W(beta) e^{-+ik beta} d beta`` for ``k = 0..nbeta/2 - 1``."""
    nb = weights.shape[0]
    spec = nb * np.fft.ifft(weights) if conj_kernel else np.fft.fft(weights)
    return spec[: nb // 2] * (2.0 * np.pi / nb)


def _horner(coeffs: np.ndarray, w: np.ndarray) -> np.ndarray:
    out = np.zeros_like(w, dtype=complex)
    for c in coeffs[::-1]:
        out = out * w + c
    return out


def _contour(weights: np.ndarray, kernel: str, conj_kernel: bool, nx: int, ny: int, cfg) -> DiskImage:
    """Contour integral of ``weights`` against a Cauchy-type kernel on the image grid.

    ``kernel="square"``: ``1/(1 - w e^{-i beta})^2``; ``kernel="first"``:
    ``w e^{-i beta}/(1 - w e^{-i beta})``, with ``w = z`` or, for
    ``conj_kernel``, ``w = zbar`` and ``beta -> -beta``.
    """
    x, y = np.meshgrid(pixel_centers(nx), pixel_centers(ny), indexing="ij")
    z = x + 1j * y
    r = np.abs(z)
    inside = r <= 1.0
    out = np.zeros((nx, ny), dtype=complex)
    if cfg.evaluation == "series":
        coef = _beta_fourier(weights, conj_kernel)
        k = np.arange(coef.shape[0])
        coef = coef * (k + 1) if kernel == "square" else np.where(k == 0, 0.0, coef)
        w = np.conj(z[inside]) if conj_kernel else z[inside]
        out[inside] = _horner(coef, w)
        return DiskImage(out)
    nb = weights.shape[0]
    betas = 2.0 * np.pi * np.arange(nb) / nb
    if cfg.taper:
        sel = inside & (r < 1.0)
        scale = np.ones_like(r)
        outer = sel & (r > cfg.r_cut)
        scale[outer] = (1.0 - r[outer]) / (1.0 - cfg.r_cut)
        zc = np.where(r > cfg.r_cut, z * cfg.r_cut / np.maximum(r, 1e-300), z)
    else:
        sel = r <= cfg.r_cut
        scale = np.ones_like(r)
        zc = z
    pts = np.ascontiguousarray(zc[sel])
    vals = np.zeros(pts.shape[0], dtype=complex)
    _kernels.cauchy_sum(
        pts, betas, np.ascontiguousarray(weights * (2.0 * np.pi / nb)), 2 if kernel == "square" else 0, conj_kernel, vals
    )
    out[sel] = vals * scale[sel]
    return DiskImage(out)


def _maybe_symmetrise(sino: Sinogram, cfg) -> Sinogram:
    return project_vpm(sino, "+") if cfg.half_sum else sino


def invert_holo(sino: Sinogram, config: ReconstructionConfig | None = None) -> DiskImage:
    """Holomorphic ``f`` from ``I0 f``."""
    cfg = config or DEFAULT_CONFIG
    d = _maybe_symmetrise(sino, cfg)
    img = _contour(_alpha_moment(d, 1), "square", False, *cfg.dims(sino), cfg)
    return img * (1.0 / (2.0 * math.pi**2))


def invert_antiholo(sino: Sinogram, config: ReconstructionConfig | None = None) -> DiskImage:
    """Antiholomorphic ``f`` from ``I0 f``."""
    cfg = config or DEFAULT_CONFIG
    d = _maybe_symmetrise(sino, cfg)
    img = _contour(_alpha_moment(d, -1), "square", True, *cfg.dims(sino), cfg)
    return img * (1.0 / (2.0 * math.pi**2))


def coefficient_recovery_holo(sino: Sinogram, k_max: int) -> np.ndarray:
    """Taylor coefficients ``a_0..a_kmax`` of a holomorphic ``f`` from ``I0 f``."""
    out = np.zeros(k_max + 1, dtype=complex)
    for k in range(k_max + 1):
        u = basis_sinogram("uprime", k, k, sino.nbeta, sino.nalpha)
        out[k] = (-1) ** k * (k + 1) / (2.0 * math.pi * math.sqrt(2.0)) * sino.inner(u)
    return out


# ---------------------------------------------------------------- side harmonics


def _untwist(sino: Sinogram, m: int) -> Sinogram:
    # I[f e^{im theta}] = (-1)^m e^{im(beta+alpha)} I0 f
    beta, alpha = sino.mesh()
    return Sinogram(sino.values * (-1) ** m * np.exp(-1j * m * (beta + alpha)))


def reconstruct_side(sino: Sinogram, m: int, config: ReconstructionConfig | None = None) -> DiskImage:
    """Harmonic ``g_m`` (holomorphic for ``m > 0``, antiholomorphic for ``m < 0``)."""
    if m == 0:
        raise ValueError("m = 0 is the central harmonic")
    d = _untwist(sino, m)
    return invert_holo(d, config) if m > 0 else invert_antiholo(d, config)


def _side_sign(sign) -> int:
    if sign in ("+", 1):
        return 1
    if sign in ("-", -1):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def reconstruct_sidek_even(sino: Sinogram, k: int, sign="+", config=None) -> DiskImage:
    """``g_{+-2k}``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return reconstruct_side(sino, _side_sign(sign) * 2 * k, config)


def reconstruct_sidek_odd(sino: Sinogram, k: int, sign="+", config=None) -> DiskImage:
    """``g_{+-(2k+1)}``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return reconstruct_side(sino, _side_sign(sign) * (2 * k + 1), config)


# ---------------------------------------------------------------- central parts


def _ahha_plus(sino: Sinogram) -> Sinogram:
    return restrict_astar(hilbert_fiber(extend_a(sino, "-")), "+")


def reconstruct_g0_even(sino: Sinogram, config: ReconstructionConfig | None = None) -> DiskImage:
    """Central harmonic of an even tensor."""
    cfg = config or DEFAULT_CONFIG
    return backproject_iperp(_ahha_plus(sino), *cfg.dims(sino)) * FBP_SCALE


def reconstruct_g_center_odd(sino: Sinogram, config: ReconstructionConfig | None = None) -> OddCenter:
    """The three pieces of the potential of an odd tensor's central harmonic."""
    cfg = config or DEFAULT_CONFIG
    nx, ny = cfg.dims(sino)
    core = project_range_iperp_core(sino)
    g_zero = backproject_i0(_ahha_plus(core), nx, ny) * FBP_SCALE
    w = _alpha_moment(sino, 0)
    g_minus = _contour(w, "first", False, nx, ny, cfg) * (1.0 / (2j * math.pi**2))
    g_plus = _contour(w, "first", True, nx, ny, cfg) * (1j / (2.0 * math.pi**2))
    return OddCenter(g_zero, g_minus, g_plus)


def reconstruct_even(sino: Sinogram, n: int, config: ReconstructionConfig | None = None) -> TensorField:
    """Canonical ``2n``-tensor with the given data."""
    comps = {0: reconstruct_g0_even(sino, config)}
    for k in range(1, n + 1):
        comps[2 * k] = reconstruct_sidek_even(sino, k, "+", config)
        comps[-2 * k] = reconstruct_sidek_even(sino, k, "-", config)
    return TensorField(2 * n, comps)


def reconstruct_odd(sino: Sinogram, n: int, config: ReconstructionConfig | None = None) -> OddReconstruction:
    """Canonical ``2n+1``-tensor with the given data, plus its central potential."""
    center = reconstruct_g_center_odd(sino, config)
    potential = center.potential
    comps = dict(xperp_tensor(potential).components)
    for k in range(1, n + 1):
        comps[2 * k + 1] = reconstruct_sidek_odd(sino, k, "+", config)
        comps[-(2 * k + 1)] = reconstruct_sidek_odd(sino, k, "-", config)
    return OddReconstruction(TensorField(2 * n + 1, comps), potential, center)


def reconstruct(sino: Sinogram, order: int, config: ReconstructionConfig | None = None) -> TensorField:
    """Dispatch on tensor order."""
    if order < 0:
        raise ValueError("order must be >= 0")
    if order % 2 == 0:
        return reconstruct_even(sino, order // 2, config)
    return reconstruct_odd(sino, order // 2, config).tensor
