# -*- coding: utf-8 -*-
"""
Binary field files (.nsf).

Layout (little-endian): magic b"NSDF", uint32 version, uint32 d, uint32 N,
float64 L, uint32 field count C, float64 time, then C·N^d complex128
coefficients in C order, component-major. See docs/FORMATS.md.
"""

import logging
import struct
from typing import Tuple

import numpy as np

from spectral.fields import SpectralField, TensorField, VectorField
from spectral.grid import GridSpec
from utils.errors import DimensionError

log = logging.getLogger(__name__)

MAGIC = b"NSDF"
VERSION = 1
_HEADER = struct.Struct("<4sIIIdId")


def write_field(path: str, field, time: float = 0.0):
    grid = field.grid
    coeffs = field.coeffs.reshape((-1,) + grid.shape)
    header = _HEADER.pack(MAGIC, VERSION, grid.d, grid.N, grid.L, coeffs.shape[0], float(time))
    with open(path, "wb") as f:
        f.write(header)
        f.write(np.ascontiguousarray(coeffs, dtype="<c16").tobytes())


def read_raw(path: str) -> Tuple[GridSpec, float, np.ndarray]:
    with open(path, "rb") as f:
        header = f.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise DimensionError(f"'{path}' is too short to be a field file")
        magic, version, d, N, L, count, time = _HEADER.unpack(header)
        if magic != MAGIC or version != VERSION:
            raise DimensionError(f"'{path}' is not a version-{VERSION} field file")
        grid = GridSpec(d, N, L)
        data = np.frombuffer(f.read(), dtype="<c16")
    expected = count * N ** d
    if data.size != expected:
        raise DimensionError(f"'{path}' holds {data.size} coefficients, header promises {expected}")
    return grid, time, data.reshape((count,) + grid.shape).astype(np.complex128)


def read_field(path: str):
    """Returns (field, time); the field type follows the stored component count."""
    grid, time, coeffs = read_raw(path)
    count = coeffs.shape[0]
    if count == 1:
        return SpectralField(grid, coeffs[0]), time
    if count == grid.d:
        return VectorField(grid, coeffs), time
    if count == grid.d ** 2:
        return TensorField(grid, coeffs.reshape((grid.d, grid.d) + grid.shape)), time
    raise DimensionError(f"'{path}' stores {count} fields, which matches no field type for d={grid.d}")
