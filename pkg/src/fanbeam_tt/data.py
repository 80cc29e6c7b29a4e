"""Grid containers, binary/CSV file formats and PGM rendering.

Grids
-----
DiskImage     ``values[i, j]`` sits at the pixel centre
              ``(x, y) = (-1 + (2i+1)/nx, -1 + (2j+1)/ny)``.
Sinogram      ``values[b, a]`` sits at ``beta_b = 2 pi b / nbeta`` and
              ``alpha_a = -pi/2 + pi (a + 1/2) / nalpha``.
BoundaryField ``values[b, a]`` for ``a < 2 nalpha`` continues the same
              midpoint alpha grid around the full fiber circle, so the first
              ``nalpha`` columns are the influx samples of a Sinogram and
              column ``a + nalpha`` is the fiber antipode of column ``a``.

All binary payloads are little-endian float64 ``(re, im)`` pairs.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SINO_MAGIC = "FBSG1"
IMAGE_MAGIC = "DIMG1"
TENSOR_MAGIC = "TFLD1"

_LE_C128 = np.dtype("<c16")


class FormatError(ValueError):
    """A file does not follow one of the container formats."""


class ValidationError(ValueError):
    """Container contents violate an invariant."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


# ---------------------------------------------------------------------------
# containers


def pixel_centers(n: int) -> np.ndarray:
    return -1.0 + (2.0 * np.arange(n) + 1.0) / n


@dataclass(frozen=True, eq=False)
class DiskImage:
    """Complex field on pixel centres; zero outside ``|z| > r_mask``."""

    values: np.ndarray
    r_mask: float = 1.0

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.ndim != 2 or min(vals.shape) < 2:
            raise ValidationError(f"image must be 2-D with sides >= 2, got {vals.shape}")
        if not 0.0 < self.r_mask <= 1.0:
            raise ValidationError(f"r_mask must lie in (0, 1], got {self.r_mask}")
        vals[~disk_mask(vals.shape[0], vals.shape[1], self.r_mask)] = 0.0
        object.__setattr__(self, "values", _frozen(vals))
        object.__setattr__(self, "r_mask", float(self.r_mask))

    @classmethod
    def zeros(cls, nx: int, ny: int | None = None, r_mask: float = 1.0) -> "DiskImage":
        return cls(np.zeros((nx, nx if ny is None else ny), dtype=complex), r_mask)

    @classmethod
    def from_function(cls, fn, nx: int, ny: int | None = None, r_mask: float = 1.0) -> "DiskImage":
        """Sample ``fn(z)`` (complex argument) on pixel centres."""
        ny = nx if ny is None else ny
        x, y = np.meshgrid(pixel_centers(nx), pixel_centers(ny), indexing="ij")
        z = x + 1j * y
        vals = np.zeros((nx, ny), dtype=complex)
        mask = np.abs(z) <= r_mask
        vals[mask] = np.broadcast_to(fn(z[mask]), z[mask].shape)
        return cls(vals, r_mask)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def nx(self) -> int:
        return self.values.shape[0]

    @property
    def ny(self) -> int:
        return self.values.shape[1]

    @property
    def x(self) -> np.ndarray:
        return pixel_centers(self.nx)

    @property
    def y(self) -> np.ndarray:
        return pixel_centers(self.ny)

    @property
    def z(self) -> np.ndarray:
        x, y = np.meshgrid(self.x, self.y, indexing="ij")
        return x + 1j * y

    @property
    def mask(self) -> np.ndarray:
        return disk_mask(self.nx, self.ny, self.r_mask)

    @property
    def pixel_area(self) -> float:
        return 4.0 / (self.nx * self.ny)

    def norm(self, radius: float | None = None) -> float:
        """L2 norm over the disk (optionally restricted to ``|z| <= radius``)."""
        vals = self.values
        if radius is not None:
            vals = np.where(np.abs(self.z) <= radius, vals, 0.0)
        return math.sqrt(float(np.sum(np.abs(vals) ** 2)) * self.pixel_area)

    def with_values(self, values, r_mask: float | None = None) -> "DiskImage":
        return DiskImage(values, self.r_mask if r_mask is None else r_mask)

    def conj(self) -> "DiskImage":
        return self.with_values(np.conj(self.values))

    def __add__(self, other: "DiskImage") -> "DiskImage":
        return DiskImage(self.values + other.values, max(self.r_mask, other.r_mask))

    def __sub__(self, other: "DiskImage") -> "DiskImage":
        return DiskImage(self.values - other.values, max(self.r_mask, other.r_mask))

    def __mul__(self, c) -> "DiskImage":
        return self.with_values(self.values * c)

    __rmul__ = __mul__


def disk_mask(nx: int, ny: int, r_mask: float = 1.0) -> np.ndarray:
    x, y = np.meshgrid(pixel_centers(nx), pixel_centers(ny), indexing="ij")
    return x * x + y * y <= r_mask * r_mask


def beta_grid(nbeta: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(nbeta) / nbeta


def alpha_grid(nalpha: int) -> np.ndarray:
    return -np.pi / 2 + np.pi * (np.arange(nalpha) + 0.5) / nalpha


def alpha_grid_full(nalpha: int) -> np.ndarray:
    """The influx midpoint grid continued to ``2 nalpha`` points on the circle."""
    return -np.pi / 2 + np.pi * (np.arange(2 * nalpha) + 0.5) / nalpha


class _GridData:
    """Shared arithmetic for data-space grids."""

    values: np.ndarray

    def _like(self, values):
        return type(self)(values)

    @property
    def nbeta(self) -> int:
        return self.values.shape[0]

    @property
    def beta(self) -> np.ndarray:
        return beta_grid(self.nbeta)

    @property
    def dbeta(self) -> float:
        return 2.0 * np.pi / self.nbeta

    def conj(self):
        return self._like(np.conj(self.values))

    def __add__(self, other):
        return self._like(self.values + _vals(other))

    def __sub__(self, other):
        return self._like(self.values - _vals(other))

    def __neg__(self):
        return self._like(-self.values)

    def __mul__(self, c):
        return self._like(self.values * _vals(c))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self._like(self.values / c)

    def inner(self, other) -> complex:
        """Midpoint/trapezoid quadrature of ``<self, other>`` (conjugate-linear in other)."""
        return complex(np.sum(self.values * np.conj(_vals(other)))) * self.dbeta * self.dalpha

    def norm(self) -> float:
        return math.sqrt(max(self.inner(self).real, 0.0))


def _vals(x):
    return x.values if isinstance(x, _GridData) else x


@dataclass(frozen=True, eq=False)
class Sinogram(_GridData):
    """Function on the influx boundary sampled on the ``(beta, alpha)`` grid."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.ndim != 2:
            raise ValidationError(f"sinogram must be 2-D, got {vals.shape}")
        nb, na = vals.shape
        if nb < 4 or nb % 2:
            raise ValidationError(f"nbeta must be even and >= 4, got {nb}")
        if na < 2:
            raise ValidationError(f"nalpha must be >= 2, got {na}")
        object.__setattr__(self, "values", _frozen(vals))

    @classmethod
    def zeros(cls, nbeta: int, nalpha: int) -> "Sinogram":
        return cls(np.zeros((nbeta, nalpha), dtype=complex))

    @classmethod
    def from_function(cls, fn, nbeta: int, nalpha: int) -> "Sinogram":
        """Sample ``fn(beta, alpha)`` on the grid (broadcast over 2-D arrays)."""
        b, a = np.meshgrid(beta_grid(nbeta), alpha_grid(nalpha), indexing="ij")
        return cls(np.broadcast_to(fn(b, a), b.shape))

    @property
    def nalpha(self) -> int:
        return self.values.shape[1]

    @property
    def alpha(self) -> np.ndarray:
        return alpha_grid(self.nalpha)

    @property
    def dalpha(self) -> float:
        return np.pi / self.nalpha

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.beta, self.alpha, indexing="ij")


@dataclass(frozen=True, eq=False)
class BoundaryField(_GridData):
    """Function on the whole boundary ``dSM`` (full fiber circle in alpha)."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.ndim != 2 or vals.shape[1] % 2:
            raise ValidationError(f"boundary field needs an even alpha count, got {vals.shape}")
        object.__setattr__(self, "values", _frozen(vals))

    @property
    def nalpha(self) -> int:
        """Number of influx samples (half the fiber)."""
        return self.values.shape[1] // 2

    @property
    def nalphafull(self) -> int:
        return self.values.shape[1]

    @property
    def alpha(self) -> np.ndarray:
        return alpha_grid_full(self.nalpha)

    @property
    def dalpha(self) -> float:
        return np.pi / self.nalpha

    def restrict(self) -> Sinogram:
        """Influx samples as a Sinogram."""
        return Sinogram(self.values[:, : self.nalpha])


def _parity_keys(order: int) -> list[int]:
    return list(range(-order, order + 1, 2))


@dataclass(frozen=True, eq=False)
class TensorField:
    """Symmetric ``order``-tensor stored by its fiber harmonics ``{k: f_k}``."""

    order: int
    components: dict = field(default_factory=dict)
    real: bool = False

    def __post_init__(self):
        if self.order < 0:
            raise ValidationError("tensor order must be >= 0")
        allowed = set(self.allowed_keys)
        comps = {}
        for k, img in self.components.items():
            k = int(k)
            if k not in allowed:
                raise ValidationError(f"harmonic {k} not allowed for order {self.order}")
            comps[k] = img
        shapes = {img.shape for img in comps.values()}
        if len(shapes) > 1:
            raise ValidationError(f"component images differ in shape: {shapes}")
        object.__setattr__(self, "components", dict(sorted(comps.items())))
        if self.real and self.realness_defect() > 1e-12:
            raise ValidationError("realness flag set but f_{-k} != conj(f_k)")

    @property
    def allowed_keys(self) -> list[int]:
        return _parity_keys(self.order)

    @property
    def shape(self):
        for img in self.components.values():
            return img.shape
        return None

    def component(self, k: int) -> DiskImage:
        """Harmonic ``k``; keys absent from the map read as zero images."""
        if k in self.components:
            return self.components[k]
        if k not in self.allowed_keys:
            raise KeyError(k)
        if self.shape is None:
            raise ValidationError("empty tensor has no grid")
        return DiskImage.zeros(*self.shape)

    def realness_defect(self) -> float:
        if not self.components:
            return 0.0
        worst = 0.0
        for k in self.allowed_keys:
            if k < 0:
                continue
            a = self.component(k).values
            b = self.component(-k).values
            worst = max(worst, float(np.max(np.abs(a - np.conj(b)), initial=0.0)))
        return worst

    def evaluate(self, theta: float) -> DiskImage:
        """Pointwise value ``sum_k f_k e^{ik theta}`` at a fixed direction."""
        acc = sum(img.values * np.exp(1j * k * theta) for k, img in self.components.items())
        first = next(iter(self.components.values()))
        return first.with_values(acc)


@dataclass(frozen=True, eq=False)
class CoeffTable:
    """Coefficients indexed by ``(p, q)`` in one of the data-space bases."""

    basis: str
    coeffs: dict
    nbeta: int | None = None
    nalpha: int | None = None

    BASES = ("B", "Bprime", "U", "V", "Uprime", "Vprime")

    def __post_init__(self):
        if self.basis not in self.BASES:
            raise ValidationError(f"unknown basis tag {self.basis!r}")
        from .fiber import valid_index

        for p, q in self.coeffs:
            if not valid_index(self.basis, p, q):
                raise ValidationError(f"({p},{q}) is not a reduced index of basis {self.basis}")

    def __getitem__(self, pq):
        return self.coeffs.get(tuple(pq), 0.0)

    def max_abs(self, keys=None) -> float:
        keys = self.coeffs.keys() if keys is None else keys
        return max((abs(self.coeffs.get(k, 0.0)) for k in keys), default=0.0)


# ---------------------------------------------------------------------------
# binary IO


def _write(path, header: str, payload: bytes = b""):
    Path(path).write_bytes(header.encode("ascii") + payload)


def _payload(values: np.ndarray) -> bytes:
    return np.ascontiguousarray(values, dtype=_LE_C128).tobytes()


def _readline(buf: io.BytesIO, what: str) -> str:
    line = buf.readline()
    if not line.endswith(b"\n"):
        raise FormatError(f"truncated {what} header")
    try:
        return line.decode("ascii").strip()
    except UnicodeDecodeError as exc:
        raise FormatError(f"non-ascii {what} header") from exc


def _ints(line: str, n: int, what: str) -> list[int]:
    parts = line.split()
    if len(parts) != n:
        raise FormatError(f"bad {what} dimension line {line!r}")
    try:
        vals = [int(p) for p in parts]
    except ValueError as exc:
        raise FormatError(f"bad {what} dimension line {line!r}") from exc
    if any(v < 0 for v in vals):
        raise FormatError(f"negative dimension in {line!r}")
    return vals


def _read_values(buf: io.BytesIO, count: int, what: str, exact_end: bool) -> np.ndarray:
    nbytes = count * _LE_C128.itemsize
    raw = buf.read(nbytes)
    if len(raw) < nbytes:
        raise FormatError(f"short {what} payload: expected {nbytes} bytes, got {len(raw)}")
    if exact_end and buf.read(1):
        raise FormatError(f"{what} payload longer than header dimensions")
    return np.frombuffer(raw, dtype=_LE_C128).astype(complex)


def _check_magic(buf: io.BytesIO, magic: str):
    got = buf.readline().rstrip(b"\n")
    if got != magic.encode("ascii"):
        raise FormatError(f"bad magic {got[:16]!r}, expected {magic!r}")


def write_sinogram(sino: Sinogram, path) -> None:
    _write(path, f"{SINO_MAGIC}\n{sino.nbeta} {sino.nalpha}\n", _payload(sino.values))


def read_sinogram(path) -> Sinogram:
    buf = io.BytesIO(Path(path).read_bytes())
    _check_magic(buf, SINO_MAGIC)
    nb, na = _ints(_readline(buf, "sinogram"), 2, "sinogram")
    vals = _read_values(buf, nb * na, "sinogram", exact_end=True)
    try:
        return Sinogram(vals.reshape(nb, na))
    except ValidationError as exc:
        raise FormatError(str(exc)) from exc


def _image_header(img: DiskImage) -> str:
    return f"{IMAGE_MAGIC}\n{img.nx} {img.ny} {img.r_mask!r}\n"


def _read_image_from(buf: io.BytesIO, exact_end: bool) -> DiskImage:
    _check_magic(buf, IMAGE_MAGIC)
    parts = _readline(buf, "image").split()
    if len(parts) != 3:
        raise FormatError(f"bad image dimension line {parts!r}")
    nx, ny = _ints(" ".join(parts[:2]), 2, "image")
    try:
        r_mask = float(parts[2])
    except ValueError as exc:
        raise FormatError(f"bad r_mask {parts[2]!r}") from exc
    vals = _read_values(buf, nx * ny, "image", exact_end).reshape(nx, ny)
    if nx < 2 or ny < 2 or not 0.0 < r_mask <= 1.0:
        raise ValidationError(f"invalid image geometry {nx}x{ny}, r_mask={r_mask}")
    outside = ~disk_mask(nx, ny, r_mask)
    if np.any(vals[outside] != 0):
        raise ValidationError("nonzero values outside the mask radius")
    return DiskImage(vals, r_mask)


def write_image(img: DiskImage, path) -> None:
    _write(path, _image_header(img), _payload(img.values))


def read_image(path) -> DiskImage:
    return _read_image_from(io.BytesIO(Path(path).read_bytes()), exact_end=True)


def write_tensor(tensor: TensorField, path) -> None:
    chunks = [f"{TENSOR_MAGIC}\n{tensor.order} {len(tensor.components)}\n".encode("ascii")]
    for k, img in tensor.components.items():
        chunks.append(f"{k}\n".encode("ascii"))
        chunks.append(_image_header(img).encode("ascii") + _payload(img.values))
    Path(path).write_bytes(b"".join(chunks))


def read_tensor(path) -> TensorField:
    buf = io.BytesIO(Path(path).read_bytes())
    _check_magic(buf, TENSOR_MAGIC)
    order, ncomp = _ints(_readline(buf, "tensor"), 2, "tensor")
    comps = {}
    for _ in range(ncomp):
        line = _readline(buf, "tensor record")
        try:
            k = int(line)
        except ValueError as exc:
            raise FormatError(f"bad harmonic index {line!r}") from exc
        comps[k] = _read_image_from(buf, exact_end=False)
    if buf.read(1):
        raise FormatError("trailing bytes after last tensor record")
    tensor = TensorField(order, comps)
    if comps and tensor.realness_defect() == 0.0:
        tensor = TensorField(order, comps, real=True)
    return tensor


# ---------------------------------------------------------------------------
# CSV


def _fmt(v: float) -> str:
    return format(v, ".17g")


def write_csv(obj, path) -> None:
    """Lossless decimal export of any container."""
    lines = []
    if isinstance(obj, (Sinogram, BoundaryField)):
        lines.append("b,a,beta,alpha,re,im")
        beta, alpha = obj.beta, obj.alpha
        for b in range(obj.values.shape[0]):
            for a in range(obj.values.shape[1]):
                v = obj.values[b, a]
                lines.append(f"{b},{a},{_fmt(beta[b])},{_fmt(alpha[a])},{_fmt(v.real)},{_fmt(v.imag)}")
    elif isinstance(obj, DiskImage):
        lines.append("i,j,x,y,re,im")
        for i, xv in enumerate(obj.x):
            for j, yv in enumerate(obj.y):
                v = obj.values[i, j]
                lines.append(f"{i},{j},{_fmt(xv)},{_fmt(yv)},{_fmt(v.real)},{_fmt(v.imag)}")
    elif isinstance(obj, TensorField):
        lines.append("k,i,j,re,im")
        for k, img in obj.components.items():
            for (i, j), v in np.ndenumerate(img.values):
                lines.append(f"{k},{i},{j},{_fmt(v.real)},{_fmt(v.imag)}")
    elif isinstance(obj, CoeffTable):
        lines.append("family,p,q,re,im")
        for (p, q), v in sorted(obj.coeffs.items()):
            v = complex(v)
            lines.append(f"{obj.basis},{p},{q},{_fmt(v.real)},{_fmt(v.imag)}")
    else:
        raise TypeError(f"no CSV layout for {type(obj).__name__}")
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# rendering


def _channel(values: np.ndarray, channel: str) -> np.ndarray:
    if channel == "re":
        return values.real
    if channel == "im":
        return values.imag
    if channel == "abs":
        return np.abs(values)
    raise ValueError(f"unknown channel {channel!r}")


def raster(obj, channel: str = "re") -> tuple[np.ndarray, float, float]:
    """Scaled 16-bit raster rows (top row first) and the scaling bounds.

    Images are drawn with x to the right and y up; sinograms with beta to the
    right and alpha up.
    """
    data = _channel(np.asarray(obj.values), channel)
    if not np.all(np.isfinite(data)):
        raise ValueError("cannot render NaN/Inf values")
    rows = data.T[::-1]
    lo, hi = float(rows.min()), float(rows.max())
    if hi > lo:
        scaled = np.rint((rows - lo) / (hi - lo) * 65535.0)
    else:
        scaled = np.zeros_like(rows)
    return scaled.astype(">u2"), lo, hi


def render_pgm(obj, channel: str, path) -> Path:
    """Write a binary 16-bit PGM plus ``<path>.txt`` holding ``min max``."""
    pix, lo, hi = raster(obj, channel)
    h, w = pix.shape
    path = Path(path)
    path.write_bytes(f"P5\n{w} {h}\n65535\n".encode("ascii") + pix.tobytes())
    sidecar = path.with_name(path.name + ".txt")
    sidecar.write_text(f"channel {channel}\nmin {_fmt(lo)}\nmax {_fmt(hi)}\n")
    return sidecar
