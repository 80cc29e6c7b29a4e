"""Fan-beam tensor tomography on the Euclidean unit disk."""

from .data import (
    BoundaryField,
    CoeffTable,
    DiskImage,
    FormatError,
    Sinogram,
    TensorField,
    ValidationError,
)
from .forward import QuadratureSpec, backproject_i0, backproject_iperp, i0, i_m, iperp, xray
from .reconstruction import ReconstructionConfig, reconstruct, reconstruct_even, reconstruct_odd

__version__ = "0.1.0"

__all__ = [
    "BoundaryField",
    "CoeffTable",
    "DiskImage",
    "FormatError",
    "QuadratureSpec",
    "ReconstructionConfig",
    "Sinogram",
    "TensorField",
    "ValidationError",
    "backproject_i0",
    "backproject_iperp",
    "i0",
    "i_m",
    "iperp",
    "reconstruct",
    "reconstruct_even",
    "reconstruct_odd",
    "xray",
]
