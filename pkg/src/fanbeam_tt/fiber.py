"""Harmonic analysis on data space and on the boundary fibers.

The orthonormal families on the influx boundary are

    phi_{p,q}  = e^{i(p beta + 2 q alpha)} / (pi sqrt 2)
    phi'_{p,q} = e^{i alpha} phi_{p,q}

and their symmetrised combinations under the antipodal scattering pullback

    u_{p,q}  = phi_{p,q}  + (-1)^p phi_{p,p-q}        (p <= 2q)
    v_{p,q}  = phi_{p,q}  - (-1)^p phi_{p,p-q}        (p <  2q)
    u'_{p,q} = phi'_{p,q} + (-1)^p phi'_{p,p-q-1}     (p <  2q+1)
    v'_{p,q} = phi'_{p,q} - (-1)^p phi'_{p,p-q-1}     (p <= 2q+1)

CoeffTables for the symmetrised families hold projection coefficients
``<D, u> / |u|^2`` so that ``D = sum c_{p,q} u_{p,q}`` on the reduced set.
"""

from __future__ import annotations

import math

import numpy as np

from .data import BoundaryField, CoeffTable, Sinogram, alpha_grid, beta_grid

INV_NORM = 1.0 / (math.pi * math.sqrt(2.0))

FAMILY_OF_TAG = {
    "B": "phi",
    "Bprime": "phiprime",
    "U": "u",
    "V": "v",
    "Uprime": "uprime",
    "Vprime": "vprime",
}
TAG_OF_FAMILY = {v: k for k, v in FAMILY_OF_TAG.items()}

# (primed, symmetry sign, partner offset): partner index is p - q - offset
_SYM = {
    "u": (False, +1, 0),
    "v": (False, -1, 0),
    "uprime": (True, +1, 1),
    "vprime": (True, -1, 1),
}


def _family(tag_or_family: str) -> str:
    return FAMILY_OF_TAG.get(tag_or_family, tag_or_family)


def valid_index(basis: str, p: int, q: int) -> bool:
    """Reduced index rule of a family (or CoeffTable tag)."""
    fam = _family(basis)
    if fam in ("phi", "phiprime"):
        return True
    if fam == "u":
        return p <= 2 * q
    if fam == "v":
        return p < 2 * q
    if fam == "uprime":
        return p < 2 * q + 1
    if fam == "vprime":
        return p <= 2 * q + 1
    raise ValueError(f"unknown basis family {basis!r}")


def partner(family: str, p: int, q: int) -> int:
    """Second alpha index paired with ``q`` in a symmetrised family."""
    return p - q - _SYM[_family(family)][2]


def sign_p(p: int) -> int:
    return -1 if p % 2 else 1


def eval_basis(family: str, p: int, q: int, beta, alpha, strict: bool = True):
    """Pointwise value of a basis element."""
    fam = _family(family)
    if strict and not valid_index(fam, p, q):
        raise ValueError(f"({p},{q}) outside the reduced range of {fam}")
    beta = np.asarray(beta, dtype=float)
    alpha = np.asarray(alpha, dtype=float)

    def phi(pp, qq, primed):
        val = INV_NORM * np.exp(1j * (pp * beta + 2 * qq * alpha))
        return val * np.exp(1j * alpha) if primed else val

    if fam == "phi":
        return phi(p, q, False)
    if fam == "phiprime":
        return phi(p, q, True)
    primed, s, off = _SYM[fam]
    return phi(p, q, primed) + s * sign_p(p) * phi(p, p - q - off, primed)


def basis_sinogram(family: str, p: int, q: int, nbeta: int, nalpha: int, strict: bool = True) -> Sinogram:
    b, a = np.meshgrid(beta_grid(nbeta), alpha_grid(nalpha), indexing="ij")
    return Sinogram(eval_basis(family, p, q, b, a, strict=strict))


def normalized(sino: Sinogram) -> Sinogram:
    """Unit-norm copy (grid norm); the zero vector is rejected."""
    n = sino.norm()
    if n == 0:
        raise ValueError("cannot normalise the zero vector")
    return sino / n


# ---------------------------------------------------------------------------
# analysis / synthesis


def band(nbeta: int, nalpha: int) -> tuple[int, int]:
    """Largest ``|p|`` and ``|q|`` represented without aliasing."""
    return nbeta // 2 - 1, nalpha // 2 - 1


def _alpha_phase(q, nalpha):
    # e^{2iq alpha_a} = e^{2iq alpha_0} e^{2 pi i q a / nalpha}
    return np.exp(2j * q * (-np.pi / 2 + np.pi / (2 * nalpha)))


def phi_coefficients(sino: Sinogram, primed: bool = False) -> np.ndarray:
    """Inner products ``<D, phi_{p,q}>`` as an array indexed ``[p mod nbeta, q mod nalpha]``."""
    vals = sino.values
    if primed:
        vals = vals * np.exp(-1j * sino.alpha)[None, :]
    nb, na = vals.shape
    spec = np.fft.fft2(vals)
    q = np.fft.fftfreq(na, 1.0 / na)
    spec *= np.conj(_alpha_phase(q, na))[None, :]
    return spec * (2 * np.pi**2 / (nb * na)) * INV_NORM


def _phi_lookup(arr: np.ndarray, p: int, q: int) -> complex:
    return arr[p % arr.shape[0], q % arr.shape[1]]


def reduced_indices(basis: str, nbeta: int, nalpha: int):
    """All reduced ``(p, q)`` of a family whose partners also sit in band."""
    fam = _family(basis)
    pmax, qmax = band(nbeta, nalpha)
    out = []
    for p in range(-pmax, pmax + 1):
        for q in range(-qmax, qmax + 1):
            if not valid_index(fam, p, q):
                continue
            if fam in _SYM and abs(partner(fam, p, q)) > qmax:
                continue
            out.append((p, q))
    return out


def sym_norm_sq(family: str, p: int, q: int) -> float:
    """Continuum squared norm of a symmetrised element (0, 2 or 4)."""
    fam = _family(family)
    _, s, off = _SYM[fam]
    if p - q - off != q:
        return 2.0
    return 4.0 if s * sign_p(p) > 0 else 0.0


def analyze(sino: Sinogram, basis: str = "B") -> CoeffTable:
    """Coefficients of ``sino`` in a basis, truncated to the grid band."""
    fam = _family(basis)
    tag = TAG_OF_FAMILY[fam]
    primed = fam in ("phiprime", "uprime", "vprime")
    arr = phi_coefficients(sino, primed)
    coeffs = {}
    if fam in ("phi", "phiprime"):
        pmax, qmax = band(sino.nbeta, sino.nalpha)
        for p in range(-pmax, pmax + 1):
            for q in range(-qmax, qmax + 1):
                coeffs[(p, q)] = complex(_phi_lookup(arr, p, q))
    else:
        _, s, _ = _SYM[fam]
        for p, q in reduced_indices(fam, sino.nbeta, sino.nalpha):
            nsq = sym_norm_sq(fam, p, q)
            if nsq == 0:
                continue
            ip = _phi_lookup(arr, p, q) + s * sign_p(p) * _phi_lookup(arr, p, partner(fam, p, q))
            coeffs[(p, q)] = complex(ip / nsq)
    return CoeffTable(tag, coeffs, sino.nbeta, sino.nalpha)


def synthesize(table: CoeffTable, nbeta: int | None = None, nalpha: int | None = None) -> Sinogram:
    """Pointwise sum ``sum c_{p,q} e_{p,q}`` on the target grid."""
    nbeta = nbeta or table.nbeta
    nalpha = nalpha or table.nalpha
    if nbeta is None or nalpha is None:
        raise ValueError("grid dimensions required")
    fam = _family(table.basis)
    primed = fam in ("phiprime", "uprime", "vprime")
    pmax, qmax = band(nbeta, nalpha)
    arr = np.zeros((nbeta, nalpha), dtype=complex)

    def put(p, q, c):
        if abs(p) > pmax or abs(q) > qmax:
            raise ValueError(f"index ({p},{q}) outside the band of a {nbeta}x{nalpha} grid")
        arr[p % nbeta, q % nalpha] += c

    for (p, q), c in table.coeffs.items():
        put(p, q, c)
        if fam in _SYM:
            _, s, _ = _SYM[fam]
            put(p, partner(fam, p, q), s * sign_p(p) * c)
    qf = np.fft.fftfreq(nalpha, 1.0 / nalpha)
    arr *= _alpha_phase(qf, nalpha)[None, :]
    vals = np.fft.ifft2(arr) * (nbeta * nalpha) * INV_NORM
    if primed:
        vals = vals * np.exp(1j * alpha_grid(nalpha))[None, :]
    return Sinogram(vals)


def change_of_basis_partial(p: int, q: int, L: int, nbeta: int, nalpha: int) -> Sinogram:
    """Truncation at ``|l| <= L`` of the phi-series expansion of ``phi'_{p,q}``.

    The coefficients are ``(2/pi) (-1)^l / (1 - 2l)``: the Fourier series of
    ``e^{i alpha}`` on the half range, with no extra normalisation factor since
    ``phi'_{p,q} = e^{i alpha} phi_{p,q}``.
    """
    b, a = np.meshgrid(beta_grid(nbeta), alpha_grid(nalpha), indexing="ij")
    acc = np.zeros_like(b, dtype=complex)
    for l in range(-L, L + 1):
        acc += (2 / math.pi) * (-1) ** (l % 2) / (1 - 2 * l) * eval_basis("phi", p, l + q, b, a)
    return Sinogram(acc)


# ---------------------------------------------------------------------------
# fiberwise Hilbert transform


def _fiber_modes(n: int) -> np.ndarray:
    return np.fft.fftfreq(n, 1.0 / n).astype(int)


def hilbert_multiplier(n: int, part: str = "full") -> np.ndarray:
    """``-i sgn(k)`` on fiber modes, restricted to even/odd ``k`` for parts ``+``/``-``.

    The Nyquist mode of an even-length fiber carries no sign and is zeroed.
    """
    k = _fiber_modes(n)
    mult = -1j * np.sign(k)
    if n % 2 == 0:
        mult[n // 2] = 0.0
    if part == "+":
        mult[k % 2 == 1] = 0.0
    elif part == "-":
        mult[k % 2 == 0] = 0.0
    elif part != "full":
        raise ValueError(f"unknown Hilbert part {part!r}")
    return mult


def hilbert_fiber(field: BoundaryField, part: str = "full") -> BoundaryField:
    """Fiberwise Hilbert transform: per beta, multiply alpha-mode k by -i sgn(k)."""
    n = field.nalphafull
    spec = np.fft.fft(field.values, axis=1)
    spec *= hilbert_multiplier(n, part)[None, :]
    return BoundaryField(np.fft.ifft(spec, axis=1))


def hilbert_split(field: BoundaryField) -> tuple[BoundaryField, BoundaryField]:
    """``(H_+ field, H_- field)``: even and odd fiber harmonics."""
    return hilbert_fiber(field, "+"), hilbert_fiber(field, "-")


def boundary_from_function(fn, nbeta: int, nalpha: int) -> BoundaryField:
    """Sample ``fn(beta, alpha)`` on the full-fiber grid."""
    from .data import alpha_grid_full

    b, a = np.meshgrid(beta_grid(nbeta), alpha_grid_full(nalpha), indexing="ij")
    return BoundaryField(np.broadcast_to(fn(b, a), b.shape))


# ---------------------------------------------------------------------------
# conjugation identities


def conjugate_identities_check(p: int, q: int, nbeta: int = 64, nalpha: int = 64) -> dict:
    """Maximum grid deviation in each conjugation identity for ``(p, q)``."""
    b, a = np.meshgrid(beta_grid(nbeta), alpha_grid(nalpha), indexing="ij")

    def ev(fam, pp, qq):
        return eval_basis(fam, pp, qq, b, a, strict=False)

    sp = sign_p(p)
    checks = {
        "u": [(np.conj(ev("u", p, q)), ev("u", -p, -q)), (np.conj(ev("u", p, q)), sp * ev("u", -p, -p + q))],
        "v": [(np.conj(ev("v", p, q)), ev("v", -p, -q)), (np.conj(ev("v", p, q)), -sp * ev("v", -p, -p + q))],
        "uprime": [
            (np.conj(ev("uprime", p, q)), ev("uprime", -p, -q - 1)),
            (np.conj(ev("uprime", p, q)), sp * ev("uprime", -p, -p + q)),
        ],
        "vprime": [
            (np.conj(ev("vprime", p, q)), ev("vprime", -p, -q - 1)),
            (np.conj(ev("vprime", p, q)), -sp * ev("vprime", -p, -p + q)),
        ],
    }
    record = {fam: max(float(np.max(np.abs(l - r))) for l, r in pairs) for fam, pairs in checks.items()}
    record["max"] = max(record.values())
    return record
