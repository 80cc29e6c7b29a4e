"""Independent closed-form oracles shared by the unit and acceptance tests."""

import numpy as np

from fanbeam_tt import fiber


def p_plus_eig(p, q):
    """Spectral value of ``P_+`` on the unit-norm ``u_{p,q}`` (image along ``v_{p,q}``)."""
    if q > 0 and p < q:
        return -2j
    if q > 0 and p == q:
        return -1j
    if q == 0 and p < 0:
        return -1j
    return 0


def p_minus_eig(p, q):
    """Spectral value of ``P_-`` on the unit-norm ``v'_{p,q}`` (image along ``u'_{p,q}``)."""
    return -2j if q >= 0 and p <= q else 0


def c_plus_eig(p, q):
    """Eigenvalue of ``C_+`` on ``v_{p,q}``."""
    if q < 0 and p < q:
        return 1j
    if q > 0 and p > q:
        return -1j
    if q == 0 and p < 0:
        return 0.5j
    if q > 0 and p == q:
        return -0.5j
    return 0


def c_minus_eig(p, q):
    """Eigenvalue of ``C_-`` on ``u'_{p,q}``."""
    if q < 0 and p <= q:
        return 1j
    if q >= 0 and p > q:
        return -1j
    return 0


def spectral_cases(family, limit=8):
    """Valid indices with ``|p|, |q| <= limit`` whose element is nonzero."""
    return [
        (p, q)
        for p in range(-limit, limit + 1)
        for q in range(-limit, limit + 1)
        if fiber.valid_index(family, p, q) and fiber.sym_norm_sq(family, p, q) > 0
    ]


def i0_monomial(k, beta, alpha):
    """Closed-form transform of ``z^k`` (``k >= 0``)."""
    s = (-1) ** k
    return s / (k + 1) * np.exp(1j * k * beta) * (np.exp(1j * (2 * k + 1) * alpha) + s * np.exp(-1j * alpha))


def chord_quadrature(fn, beta, alpha, n=100_000):
    """Dense midpoint rule along one chord, independent of the package kernels."""
    tau = 2 * np.cos(alpha)
    t = (np.arange(n) + 0.5) * tau / n
    z = np.exp(1j * beta) + t * np.exp(1j * (beta + np.pi + alpha))
    return np.sum(fn(z)) * tau / n
