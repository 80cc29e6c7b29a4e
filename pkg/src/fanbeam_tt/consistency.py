"""Range tests on fan-beam data.

Two independent characterisations of the range of the scalar transform are
implemented: moment conditions (orthogonality to ``cos a sin^n a e^{+-ik(b+a)}``
for ``k > n``, ``k - n`` even, together with antipodal symmetry) and absence of
coefficients on the orthocomplement of the range of ``P_-`` in the ``u'``
basis.  Both report residuals normalised to be scale free.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .boundary import project_vpm
from .data import CoeffTable, DiskImage, Sinogram
from .fiber import analyze, band as grid_band, basis_sinogram, sym_norm_sq, synthesize
from .forward import i0

DEFAULT_TOL = 1e-4
ALGEBRAIC_TOL = 1e-9
TAGS = ("moments", "p-minus-range", "iperp-range", "ker-m-range")


@dataclass
class ConsistencyReport:
    """Residual table of one range test; ``passed`` iff every residual is below ``tolerance``."""

    tag: str
    residuals: dict = field(default_factory=dict)
    tolerance: float = DEFAULT_TOL
    symmetry_residual: float | None = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown report tag {self.tag!r}")

    @property
    def max_residual(self) -> float:
        vals = list(self.residuals.values())
        if self.symmetry_residual is not None:
            vals.append(self.symmetry_residual)
        return max(vals, default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tolerance

    def worst(self):
        """Index of the largest table residual (``None`` for an empty table)."""
        if not self.residuals:
            return None
        return max(self.residuals, key=self.residuals.get)

    def to_csv(self, path) -> None:
        """Rows ``tag,p_or_n,q_or_k,residual``; the symmetry residual has empty indices."""
        with open(path, "w", newline="") as fh:
            self.write_csv(fh)

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["tag", "p_or_n", "q_or_k", "residual"])
        for (a, b), r in sorted(self.residuals.items()):
            w.writerow([self.tag, a, b, format(r, ".17g")])
        if self.symmetry_residual is not None:
            w.writerow(["symmetry", "", "", format(self.symmetry_residual, ".17g")])


def _rel(x: float, scale: float) -> float:
    return 0.0 if scale == 0 else x / scale


def symmetry_residual(sino: Sinogram, sign: str = "+") -> float:
    """Relative size of the component outside ``V_+`` (or ``V_-``)."""
    other = "-" if sign == "+" else "+"
    return _rel(project_vpm(sino, other).norm(), sino.norm())


# ---------------------------------------------------------------- moments


def moment_indices(n_max: int, k_max: int):
    """``(n, +-k)`` with ``0 <= n <= n_max``, ``n < k <= k_max``, ``k - n`` even."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if k_max <= n_max:
        raise ValueError("k_max must exceed n_max")
    out = []
    for n in range(n_max + 1):
        for k in range(n + 2, k_max + 1, 2):
            out.extend([(n, k), (n, -k)])
    return out


def moment_conditions(sino: Sinogram, n_max: int = 6, k_max: int = 16, tol: float = DEFAULT_TOL) -> ConsistencyReport:
    """Normalised moments ``|<D, w>| / (|w| |D|)`` with ``w = cos a sin^n a e^{-+ik(b+a)}``."""
    idx = moment_indices(n_max, k_max)
    beta, alpha = sino.mesh()
    dnorm = sino.norm()
    # beta integral first: FFT along beta picks the e^{ik beta} mode
    spec = np.fft.fft(sino.values, axis=0) * sino.dbeta
    nb = sino.nbeta
    ca, sa = np.cos(sino.alpha), np.sin(sino.alpha)
    res = {}
    for n, k in idx:
        if abs(k) >= nb // 2:
            res[(n, k)] = 0.0
            continue
        a_weight = ca * sa**n * np.exp(1j * k * sino.alpha)
        # int int D e^{ik(b+a)} cos a sin^n a = sum_a spec[-k] a_weight
        val = np.sum(spec[(-k) % nb] * a_weight) * sino.dalpha
        wnorm = math.sqrt(2 * math.pi * np.sum(np.abs(a_weight) ** 2) * sino.dalpha)
        res[(n, k)] = _rel(abs(val), wnorm * dnorm)
    return ConsistencyReport("moments", res, tol, symmetry_residual(sino, "+"))


# ---------------------------------------------------------------- coefficient tests


def in_p_minus_range(p: int, q: int) -> bool:
    """Whether ``u'_{p,q}`` lies in the range of ``P_-``."""
    return q >= 0 and p <= q


def orthocomplement_indices(nbeta: int, nalpha: int, band=None):
    """Reduced ``u'`` indices outside the range of ``P_-`` within the band."""
    pmax, qmax = band or grid_band(nbeta, nalpha)
    out = []
    for p in range(-pmax, pmax + 1):
        for q in range(-qmax, qmax + 1):
            if p > 2 * q or in_p_minus_range(p, q):
                continue
            if abs(p - q - 1) > qmax:
                continue
            out.append((p, q))
    return out


def _normalised_coeffs(sino: Sinogram, family: str):
    table = analyze(sino, family)
    dnorm = sino.norm()
    return {pq: _rel(abs(c) * math.sqrt(sym_norm_sq(family, *pq)), dnorm) for pq, c in table.coeffs.items()}


def p_minus_range_test(sino: Sinogram, band=None, tol: float = DEFAULT_TOL) -> ConsistencyReport:
    """Coefficients of ``D`` on the orthocomplement of the range of ``P_-``."""
    coeffs = _normalised_coeffs(sino, "uprime")
    pmax, qmax = band or grid_band(sino.nbeta, sino.nalpha)
    res = {
        pq: r
        for pq, r in coeffs.items()
        if not in_p_minus_range(*pq) and abs(pq[0]) <= pmax and abs(pq[1]) <= qmax
    }
    return ConsistencyReport("p-minus-range", res, tol, symmetry_residual(sino, "+"))


def iperp_range_test(sino: Sinogram, band=None, tol: float = DEFAULT_TOL) -> ConsistencyReport:
    """Range test for ``I_perp`` of potentials vanishing on the boundary.

    Such data lie in ``V_-`` and have no coefficients on ``v_{k,k}`` or
    ``v_{-k,0}`` for ``k >= 1``.
    """
    coeffs = _normalised_coeffs(sino, "v")
    pmax, qmax = band or grid_band(sino.nbeta, sino.nalpha)
    kmax = min(pmax, qmax)
    res = {}
    for k in range(1, kmax + 1):
        for pq in ((k, k), (-k, 0)):
            if pq in coeffs:
                res[pq] = coeffs[pq]
    return ConsistencyReport("iperp-range", res, tol, symmetry_residual(sino, "-"))


# ---------------------------------------------------------------- ker^m ranges


class RangeBasis(NamedTuple):
    family: str
    indices: list


def ker_m_range_basis(order: int, sign: str, count: int = 8) -> RangeBasis:
    """Basis family and first ``count`` indices spanning the transforms of ``ker^order eta_sign``.

    ``sign="-"`` is the holomorphic side (``f e^{i order theta}`` with
    ``dbar f = 0``), ``sign="+"`` the antiholomorphic side.
    """
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    if count < 1:
        raise ValueError("count must be >= 1")
    if order % 2 == 0:
        m = order // 2
        if sign == "-":
            idx = [(2 * m + k, m + k) for k in range(count)]
        else:
            idx = [(2 * m - k, m) for k in range(count)]
        return RangeBasis("uprime", idx)
    m = (order - 1) // 2
    if sign == "-":
        idx = [(2 * m + 1 + k, m + k + 1) for k in range(count)]
    else:
        idx = [(2 * m + 1 - k, m + 1) for k in range(count)]
    return RangeBasis("v", idx)


def ker_m_range_test(sino: Sinogram, order: int, sign: str, count: int | None = None, tol: float = DEFAULT_TOL) -> ConsistencyReport:
    """Normalised coefficients of ``D`` outside the span of :func:`ker_m_range_basis`.

    The symmetry residual measures the part of ``D`` outside the subspace
    spanned by the whole family (``V_+`` for ``u'``, ``V_-`` for ``v``).
    """
    pmax, qmax = grid_band(sino.nbeta, sino.nalpha)
    count = count or min(pmax, qmax)
    rb = ker_m_range_basis(order, sign, count)
    coeffs = _normalised_coeffs(sino, rb.family)
    span = set(rb.indices)
    res = {pq: r for pq, r in coeffs.items() if pq not in span}
    sym = symmetry_residual(sino, "+" if rb.family == "uprime" else "-")
    return ConsistencyReport("ker-m-range", res, tol, sym)


def side_range_indices(order: int, nbeta: int, nalpha: int) -> list:
    """``u'`` indices of the transforms of ``ker^{+-2m}`` harmonics, ``1 <= m <= order/2``."""
    if order < 0 or order % 2:
        raise ValueError("side ranges are defined here for even orders only")
    pmax, qmax = grid_band(nbeta, nalpha)
    count = 2 * max(pmax, qmax)
    out = []
    for m in range(1, order // 2 + 1):
        out += ker_m_range_basis(2 * m, "-", count).indices
        out += ker_m_range_basis(-2 * m, "+", count).indices
    return out


def strip_side_ranges(sino: Sinogram, order: int) -> Sinogram:
    """Remove the components of ``D`` carried by the non-central harmonics of an even tensor.

    What remains is the part of the data that must lie in the range of ``I0``.
    """
    if order == 0:
        return sino
    table = analyze(sino, "uprime")
    side = {pq: table.coeffs[pq] for pq in side_range_indices(order, sino.nbeta, sino.nalpha) if pq in table.coeffs}
    return sino - synthesize(CoeffTable("Uprime", side, sino.nbeta, sino.nalpha))


# ---------------------------------------------------------------- audit


class AuditResult(NamedTuple):
    clean: tuple
    spiked: tuple

    @property
    def agree(self) -> bool:
        """Both tests give the same verdict on the clean and on the spiked data."""
        return self.clean[0].passed == self.clean[1].passed and self.spiked[0].passed == self.spiked[1].passed

    @property
    def expected(self) -> bool:
        """Clean data pass both tests and spiked data fail both."""
        return self.clean[0].passed and self.clean[1].passed and not self.spiked[0].passed and not self.spiked[1].passed


def spike(p: int, q: int, nbeta: int, nalpha: int) -> Sinogram:
    """Unit-norm ``u'_{p,q}`` on the grid."""
    u = basis_sinogram("uprime", p, q, nbeta, nalpha)
    return u / u.norm()


def equivalence_audit(
    f: DiskImage | Sinogram,
    nbeta: int = 256,
    nalpha: int = 128,
    spike_index=(4, 3),
    amplitude: float = 0.5,
    n_max: int = 6,
    k_max: int = 16,
    tol: float = DEFAULT_TOL,
) -> AuditResult:
    """Run both range tests on ``I0 f`` and on ``I0 f + amplitude |I0 f| u'_{spike}``.

    ``f`` may also be given directly as data.  The spike amplitude is relative
    to the data norm (absolute when the data vanish).
    """
    data = f if isinstance(f, Sinogram) else i0(f, nbeta, nalpha)
    p, q = spike_index
    if in_p_minus_range(p, q) or p > 2 * q:
        raise ValueError(f"u'_{{{p},{q}}} is not an orthocomplement element")
    scale = data.norm() or 1.0
    spiked = data + spike(p, q, data.nbeta, data.nalpha) * (amplitude * scale)

    def both(d):
        return moment_conditions(d, n_max, k_max, tol), p_minus_range_test(d, tol=tol)

    return AuditResult(both(data), both(spiked))
