"""Compiled inner loops: chord quadrature, backprojection, Cauchy sums.

Every output sample is accumulated in a fixed order, so results do not depend
on the number of threads.
"""

import math
import os

import numba
import numpy as np
from numba import njit, prange

# TBB is probed first by default and warns when too old; the workqueue layer is always present.
if "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER = "workqueue"


@njit(cache=True, inline="always")
def _bilinear(stack, k, fx, fy):
    nx = stack.shape[1]
    ny = stack.shape[2]
    i0 = int(math.floor(fx))
    j0 = int(math.floor(fy))
    if i0 < 0 or j0 < 0 or i0 + 1 >= nx or j0 + 1 >= ny:
        return 0j
    wx = fx - i0
    wy = fy - j0
    return (
        (1.0 - wx) * ((1.0 - wy) * stack[k, i0, j0] + wy * stack[k, i0, j0 + 1])
        + wx * ((1.0 - wy) * stack[k, i0 + 1, j0] + wy * stack[k, i0 + 1, j0 + 1])
    )


@njit(cache=True, parallel=True)
def chord_integrals(stack, x0, y0, hx, hy, betas, alphas, spu, out):
    """Midpoint rule along every chord for each image of ``stack``.

    ``stack[k, i, j]`` is sampled at ``(x0 + i hx, y0 + j hy)``; ``out`` has shape
    ``(K, nbeta, nalpha)``.
    """
    nk = stack.shape[0]
    nb = betas.shape[0]
    na = alphas.shape[0]
    for b in prange(nb):
        beta = betas[b]
        cb = math.cos(beta)
        sb = math.sin(beta)
        acc = np.zeros(nk, dtype=np.complex128)
        for a in range(na):
            alpha = alphas[a]
            length = 2.0 * math.cos(alpha)
            n = max(1, int(math.ceil(length * spu)))
            dt = length / n
            theta = beta + math.pi + alpha
            ct = math.cos(theta)
            st = math.sin(theta)
            for k in range(nk):
                acc[k] = 0j
            for j in range(n):
                t = (j + 0.5) * dt
                fx = (cb + t * ct - x0) / hx
                fy = (sb + t * st - y0) / hy
                for k in range(nk):
                    acc[k] += _bilinear(stack, k, fx, fy)
            for k in range(nk):
                out[k, b, a] = acc[k] * dt


@njit(cache=True, inline="always")
def _sino_interp(data, beta, alpha):
    nb = data.shape[0]
    na = data.shape[1]
    fb = beta / (2.0 * math.pi) * nb
    fb = fb - nb * math.floor(fb / nb)
    ib = int(math.floor(fb))
    wb = fb - ib
    ib = ib % nb
    ib1 = (ib + 1) % nb
    fa = (alpha + 0.5 * math.pi) / math.pi * na - 0.5
    ia = int(math.floor(fa))
    # linear extrapolation over the half-cells next to alpha = +-pi/2
    if ia < 0:
        ia = 0
    elif ia > na - 2:
        ia = na - 2
    wa = fa - ia
    lo = (1.0 - wb) * data[ib, ia] + wb * data[ib1, ia]
    hi = (1.0 - wb) * data[ib, ia + 1] + wb * data[ib1, ia + 1]
    return (1.0 - wa) * lo + wa * hi


@njit(cache=True, parallel=True)
def backproject(data, xs, ys, mask, ntheta, out, outx, outy):
    """``(1/2pi) int D(theta + asin s, -asin s) dtheta`` and its ``theta_perp``-weighted pair."""
    nx = xs.shape[0]
    ny = ys.shape[0]
    for i in prange(nx):
        x = xs[i]
        for j in range(ny):
            if not mask[i, j]:
                continue
            y = ys[j]
            acc = 0j
            accx = 0j
            accy = 0j
            for m in range(ntheta):
                theta = 2.0 * math.pi * m / ntheta
                sn = math.sin(theta)
                cs = math.cos(theta)
                s = -x * sn + y * cs
                if s >= 1.0 or s <= -1.0:
                    continue
                a = math.asin(s)
                val = _sino_interp(data, theta + a, -a)
                acc += val
                accx += -sn * val
                accy += cs * val
            out[i, j] = acc / ntheta
            outx[i, j] = accx / ntheta
            outy[i, j] = accy / ntheta


@njit(cache=True, parallel=True)
def cauchy_sum(zs, betas, weights, power, conj_z, out):
    """``sum_b weights[b] / (1 - w e^{-+i beta_b})^power`` with ``w = z`` or ``conj(z)``.

    ``power`` 2 gives the squared Cauchy kernel; power 0 selects the kernel
    ``w e^{-i beta} / (1 - w e^{-i beta})``.  With ``conj_z`` the exponent sign flips.
    """
    nz = zs.shape[0]
    nb = betas.shape[0]
    sgn = 1.0 if conj_z else -1.0
    for n in prange(nz):
        w = zs[n]
        if conj_z:
            w = w.conjugate()
        acc = 0j
        for b in range(nb):
            e = complex(math.cos(betas[b]), sgn * math.sin(betas[b]))
            r = w * e
            if power == 2:
                acc += weights[b] / ((1.0 - r) * (1.0 - r))
            else:
                acc += weights[b] * r / (1.0 - r)
        out[n] = acc
