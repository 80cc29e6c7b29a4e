"""X-ray transforms of tensor fields on the disk and the two backprojections.

Images are sampled on pixel centres; a tensor is given by its angular
harmonics ``f_k`` so that ``f(x, theta) = sum_k f_k(x) e^{ik theta}``.  Along
the chord from ``e^{i beta}`` with direction ``theta = beta + pi + alpha`` the
phase ``e^{ik theta}`` is constant, so every harmonic reduces to a scalar chord
integral.

When an image covers the whole disk (``r_mask == 1``) it is extended by a
local quadratic fit into a thin ring outside the circle, so that bilinear
interpolation near the boundary does not see the zero padding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .data import DiskImage, Sinogram, TensorField, alpha_grid, beta_grid, pixel_centers

PAD = 5
RING = 3.0  # extrapolation ring width, in pixels
FIT_RADIUS = 5  # half-width of the fitting window, in pixels


@dataclass(frozen=True)
class QuadratureSpec:
    """Chord quadrature settings.

    ``samples_per_unit=None`` means ``2 * max(nx, ny)`` for the image at hand.
    """

    samples_per_unit: float | None = None
    interpolation: str = "bilinear"

    def __post_init__(self):
        if self.interpolation != "bilinear":
            raise ValueError(f"unsupported interpolation {self.interpolation!r}")
        if self.samples_per_unit is not None and not self.samples_per_unit > 0:
            raise ValueError("samples_per_unit must be positive")

    def resolve(self, nx: int, ny: int) -> float:
        spu = 2.0 * max(nx, ny) if self.samples_per_unit is None else float(self.samples_per_unit)
        if spu < nx:
            raise ValueError(f"samples_per_unit={spu} is below the image width {nx}")
        return spu


DEFAULT_QUAD = QuadratureSpec()


# ---------------------------------------------------------------- padding


def _padded_coords(nx: int, ny: int):
    xs = -1.0 + (2.0 * np.arange(-PAD, nx + PAD) + 1.0) / nx
    ys = -1.0 + (2.0 * np.arange(-PAD, ny + PAD) + 1.0) / ny
    return xs, ys


def _extrapolate(arr: np.ndarray, valid: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Fill ``target`` pixels with weighted quadratic least-squares fits to nearby valid pixels."""
    ti, tj = np.nonzero(target)
    if ti.size == 0:
        return arr
    r = FIT_RADIUS
    di, dj = np.meshgrid(np.arange(-r, r + 1), np.arange(-r, r + 1), indexing="ij")
    di = di.ravel()
    dj = dj.ravel()
    ii = np.clip(ti[:, None] + di[None, :], 0, arr.shape[0] - 1)
    jj = np.clip(tj[:, None] + dj[None, :], 0, arr.shape[1] - 1)
    w = valid[ii, jj].astype(float)
    vals = arr[ii, jj]
    a = np.stack([np.ones_like(di), di, dj, di * di, di * dj, dj * dj], axis=-1).astype(float)
    m = np.einsum("tk,ki,kj->tij", w, a, a)
    rhs = np.einsum("tk,ki,tk->ti", w, a, vals)
    enough = w.sum(axis=1) >= 10
    m[~enough] = np.eye(6)
    rhs[~enough] = 0.0
    coef = np.linalg.solve(m, rhs[..., None])[..., 0]
    out = arr.copy()
    out[ti, tj] = coef[:, 0]
    return out


def _ring(nx: int, ny: int):
    xs, ys = _padded_coords(nx, ny)
    rr = np.hypot(xs[:, None], ys[None, :])
    h = 2.0 / min(nx, ny)
    return rr, h


def pad_image(img: DiskImage) -> tuple[np.ndarray, int]:
    """Padded copy of ``img.values`` and the number of extrapolated pixels."""
    nx, ny = img.shape
    arr = np.zeros((nx + 2 * PAD, ny + 2 * PAD), dtype=complex)
    arr[PAD:-PAD, PAD:-PAD] = img.values
    if img.r_mask < 1.0:
        return arr, 0
    rr, h = _ring(nx, ny)
    valid = np.zeros_like(arr, dtype=bool)
    valid[PAD:-PAD, PAD:-PAD] = img.mask
    target = ~valid & (rr <= 1.0 + RING * h)
    return _extrapolate(arr, valid, target), int(target.sum())


def _stack_integrals(padded: list[np.ndarray], nx, ny, nbeta, nalpha, quad) -> np.ndarray:
    quad = quad or DEFAULT_QUAD
    spu = quad.resolve(nx, ny)
    stack = np.ascontiguousarray(np.stack(padded).astype(complex))
    out = np.zeros((stack.shape[0], nbeta, nalpha), dtype=complex)
    xs, ys = _padded_coords(nx, ny)
    _kernels.chord_integrals(
        stack, xs[0], ys[0], 2.0 / nx, 2.0 / ny, beta_grid(nbeta), alpha_grid(nalpha), spu, out
    )
    return out


def _direction_phase(k: int, nbeta: int, nalpha: int) -> np.ndarray:
    theta = beta_grid(nbeta)[:, None] + math.pi + alpha_grid(nalpha)[None, :]
    return np.exp(1j * k * theta)


# ---------------------------------------------------------------- forward


def xray(tensor: TensorField, nbeta: int, nalpha: int, quad: QuadratureSpec | None = None) -> Sinogram:
    """X-ray transform of a tensor field given by its harmonics."""
    keys = sorted(tensor.components)
    if not keys:
        return Sinogram.zeros(nbeta, nalpha)
    imgs = [tensor.components[k] for k in keys]
    nx, ny = imgs[0].shape
    raw = _stack_integrals([pad_image(im)[0] for im in imgs], nx, ny, nbeta, nalpha, quad)
    total = np.zeros((nbeta, nalpha), dtype=complex)
    for k, part in zip(keys, raw):
        total += part if k == 0 else part * _direction_phase(k, nbeta, nalpha)
    return Sinogram(total)


def i0(f: DiskImage, nbeta: int, nalpha: int, quad: QuadratureSpec | None = None) -> Sinogram:
    """Transform of a function, seen as a 0-tensor."""
    return xray(TensorField(0, {0: f}), nbeta, nalpha, quad)


def i_m(f: DiskImage, m: int, nbeta: int, nalpha: int, quad: QuadratureSpec | None = None) -> Sinogram:
    """Transform of the single harmonic ``f(x) e^{im theta}`` via a phase on ``i0(f)``."""
    base = i0(f, nbeta, nalpha, quad)
    beta, alpha = base.mesh()
    return Sinogram(base.values * (-1) ** m * np.exp(1j * m * (beta + alpha)))


def gradient(h: DiskImage, callback=None) -> tuple[np.ndarray, np.ndarray, dict]:
    """Padded gradient arrays ``(h_x, h_y)`` of an image and a quality report.

    ``callback(z) -> (h_x, h_y)`` supplies exact derivatives; otherwise
    centered differences are used, falling back to one-sided ones where a
    neighbour lies outside the known samples.
    """
    nx, ny = h.shape
    xs, ys = _padded_coords(nx, ny)
    rr = np.hypot(xs[:, None], ys[None, :])
    _, hpix = _ring(nx, ny)
    if callback is not None:
        support = rr <= (h.r_mask if h.r_mask < 1.0 else 1.0 + RING * hpix)
        z = (xs[:, None] + 1j * ys[None, :])[support]
        gx, gy = callback(z)
        out_x = np.zeros(rr.shape, dtype=complex)
        out_y = np.zeros(rr.shape, dtype=complex)
        out_x[support] = gx
        out_y[support] = gy
        return out_x, out_y, {"derivative": "analytic", "one_sided": 0, "extrapolated": 0}
    arr, n_extra = pad_image(h)
    if h.r_mask < 1.0:
        known = np.zeros(rr.shape, dtype=bool)
        known[PAD:-PAD, PAD:-PAD] = h.mask
        evaluate = known
    else:
        known = rr <= 1.0 + RING * hpix
        evaluate = rr <= 1.0 + (RING - 1.0) * hpix
    gx, nx1 = _diff(arr, known, evaluate, 0, 2.0 / nx)
    gy, ny1 = _diff(arr, known, evaluate, 1, 2.0 / ny)
    report = {"derivative": "centered-fd", "one_sided": int(nx1 + ny1), "extrapolated": n_extra}
    return gx, gy, report


def _shift(arr, step, axis, fill):
    # out[i] = arr[i + step] along ``axis``; no wrap-around
    out = np.full_like(arr, fill)
    src = [slice(None)] * arr.ndim
    dst = [slice(None)] * arr.ndim
    if step > 0:
        src[axis], dst[axis] = slice(step, None), slice(None, -step)
    else:
        src[axis], dst[axis] = slice(None, step), slice(-step, None)
    out[tuple(dst)] = arr[tuple(src)]
    return out


def _diff(arr, known, evaluate, axis, step):
    fwd = _shift(arr, 1, axis, 0)
    bwd = _shift(arr, -1, axis, 0)
    kf = _shift(known, 1, axis, False)
    kb = _shift(known, -1, axis, False)
    out = np.zeros_like(arr)
    both = evaluate & kf & kb
    only_f = evaluate & kf & ~kb
    only_b = evaluate & kb & ~kf
    out[both] = (fwd[both] - bwd[both]) / (2.0 * step)
    out[only_f] = (fwd[only_f] - arr[only_f]) / step
    out[only_b] = (arr[only_b] - bwd[only_b]) / step
    return out, int(only_f.sum() + only_b.sum())


def _xperp_harmonics(gx, gy):
    # X_perp h = sin(theta) h_x - cos(theta) h_y
    return -(gy + 1j * gx) / 2.0, -(gy - 1j * gx) / 2.0


def iperp(
    h: DiskImage,
    nbeta: int,
    nalpha: int,
    quad: QuadratureSpec | None = None,
    derivative=None,
    report: bool = False,
):
    """Transform of ``X_perp h``.

    ``derivative`` is ``None`` (centered differences) or a callable returning
    ``(h_x, h_y)`` at complex points.  With ``report=True`` the quality report
    of the derivative step is returned as well.
    """
    gx, gy, rep = gradient(h, derivative)
    nx, ny = h.shape
    f1, fm1 = _xperp_harmonics(gx, gy)
    raw = _stack_integrals([f1, fm1], nx, ny, nbeta, nalpha, quad)
    out = Sinogram(raw[0] * _direction_phase(1, nbeta, nalpha) + raw[1] * _direction_phase(-1, nbeta, nalpha))
    return (out, rep) if report else out


def xperp_tensor(h: DiskImage, derivative=None) -> TensorField:
    """The 1-tensor ``X_perp h`` restricted to the image grid."""
    gx, gy, _ = gradient(h, derivative)
    f1, fm1 = _xperp_harmonics(gx, gy)
    crop = (slice(PAD, -PAD), slice(PAD, -PAD))
    return TensorField(1, {1: h.with_values(f1[crop]), -1: h.with_values(fm1[crop])})


def x_tensor(g: DiskImage, derivative=None) -> TensorField:
    """The 1-tensor ``X g = cos(theta) g_x + sin(theta) g_y``."""
    gx, gy, _ = gradient(g, derivative)
    crop = (slice(PAD, -PAD), slice(PAD, -PAD))
    return TensorField(
        1,
        {1: g.with_values(((gx - 1j * gy) / 2.0)[crop]), -1: g.with_values(((gx + 1j * gy) / 2.0)[crop])},
    )


def i0_holomorphic(coeffs, nbeta: int, nalpha: int, antiholomorphic: bool = False) -> Sinogram:
    """Closed-form transform of ``sum_k a_k z^k`` (or of ``sum_k a_k zbar^k``)."""
    beta = beta_grid(nbeta)[:, None]
    alpha = alpha_grid(nalpha)[None, :]
    out = np.zeros((nbeta, nalpha), dtype=complex)
    for k, a in enumerate(coeffs):
        if a == 0:
            continue
        ak = np.conj(a) if antiholomorphic else a
        out += (
            (-1) ** k
            * ak
            / (k + 1)
            * np.exp(1j * k * beta)
            * (np.exp(1j * (2 * k + 1) * alpha) + (-1) ** k * np.exp(-1j * alpha))
        )
    return Sinogram(np.conj(out) if antiholomorphic else out)


# ---------------------------------------------------------------- backprojection


def _backproject(sino: Sinogram, nx: int, ny: int, ntheta: int | None):
    ntheta = sino.nbeta if ntheta is None else int(ntheta)
    xs = pixel_centers(nx)
    ys = pixel_centers(ny)
    mask = np.hypot(xs[:, None], ys[None, :]) < 1.0
    out = np.zeros((nx, ny), dtype=complex)
    outx = np.zeros_like(out)
    outy = np.zeros_like(out)
    data = np.ascontiguousarray(sino.values.astype(complex))
    _kernels.backproject(data, xs, ys, mask, ntheta, out, outx, outy)
    return out, outx, outy, mask


def backproject_i0(sino: Sinogram, nx: int, ny: int | None = None, ntheta: int | None = None) -> DiskImage:
    """``(1/2pi) int D(theta + asin(x.theta_perp), -asin(x.theta_perp)) dtheta``."""
    ny = nx if ny is None else ny
    out, _, _, _ = _backproject(sino, nx, ny, ntheta)
    return DiskImage(out)


def backproject_iperp(sino: Sinogram, nx: int, ny: int | None = None, ntheta: int | None = None) -> DiskImage:
    """Divergence of ``(1/2pi) int theta_perp D(...) dtheta``."""
    ny = nx if ny is None else ny
    _, vx, vy, mask = _backproject(sino, nx, ny, ntheta)
    dx, _ = _diff(vx, mask, mask, 0, 2.0 / nx)
    dy, _ = _diff(vy, mask, mask, 1, 2.0 / ny)
    return DiskImage(dx + dy)
