"""CFLD binary field files, CSV export and P5 grayscale images.

CFLD layout (little-endian)::

    b"CFLD"  u32 version=1  u32 nx  u32 ny
    f64 x0  f64 y0  f64 dx  f64 dy  f64 omega
    nx*ny pairs (re f64, im f64), x index outermost

so a file is always ``56 + 16 * nx * ny`` bytes long.
"""

from __future__ import annotations

import csv
import re
import struct
from pathlib import Path

import numpy as np

from .medium import DomainSpec
from .sweep import Field2D

__all__ = [
    "FieldFormatError",
    "MAGIC",
    "HEADER",
    "write_field",
    "read_field",
    "field_bytes",
    "write_csv",
    "render_image",
    "write_pgm",
    "read_pgm",
]

MAGIC = b"CFLD"
VERSION = 1
HEADER = struct.Struct("<4sIII5d")


class FieldFormatError(ValueError):
    """A field file is malformed, truncated or of an unsupported version."""


def field_bytes(field: Field2D) -> bytes:
    dom = field.domain
    head = HEADER.pack(MAGIC, VERSION, dom.nx, dom.ny, dom.x0, dom.y0, dom.dx, dom.dy,
                       float(field.omega))
    payload = np.ascontiguousarray(field.values, dtype="<c16").tobytes()
    return head + payload


def write_field(path, field: Field2D) -> Path:
    path = Path(path)
    path.write_bytes(field_bytes(field))
    return path


def _parse(blob: bytes, source: str) -> Field2D:
    if len(blob) < HEADER.size:
        raise FieldFormatError(f"{source}: truncated header ({len(blob)} bytes)")
    magic, version, nx, ny, x0, y0, dx, dy, omega = HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise FieldFormatError(f"{source}: bad magic {magic!r}")
    if version != VERSION:
        raise FieldFormatError(f"{source}: unsupported version {version} (expected {VERSION})")
    need = HEADER.size + 16 * nx * ny
    if len(blob) < need:
        raise FieldFormatError(f"{source}: truncated payload ({len(blob)} of {need} bytes)")
    if len(blob) > need:
        raise FieldFormatError(f"{source}: {len(blob) - need} trailing bytes")
    vals = np.frombuffer(blob, dtype="<c16", count=nx * ny, offset=HEADER.size)
    try:
        domain = DomainSpec(x0, y0, dx, dy, nx, ny)
    except ValueError as exc:
        raise FieldFormatError(f"{source}: {exc}") from None
    return Field2D(domain, vals.reshape(nx, ny).astype(complex), omega)


def read_field(path) -> Field2D:
    path = Path(path)
    return _parse(path.read_bytes(), str(path))


def write_csv(path, field: Field2D) -> Path:
    """One row per node, ``x,y,re,im``, x index outermost."""
    path = Path(path)
    dom = field.domain
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "re", "im"])
        for i, x in enumerate(dom.x):
            for j, y in enumerate(dom.y):
                v = field.values[i, j]
                w.writerow([repr(float(x)), repr(float(y)), repr(float(v.real)), repr(float(v.imag))])
    return path


def render_image(values, mode: str = "abs") -> np.ndarray:
    """8-bit image with rows along y and columns along x.

    ``real`` and ``abs`` map the field linearly from its min to its max;
    ``fft`` shows ``log10(1 + |u^|)`` of the centred 2D DFT.  A constant
    image renders as mid-gray.
    """
    vals = np.asarray(getattr(values, "values", values))
    if mode == "real":
        img = vals.real
    elif mode == "abs":
        img = np.abs(vals)
    elif mode == "fft":
        img = np.log10(1.0 + np.abs(np.fft.fftshift(np.fft.fft2(vals))))
    else:
        raise ValueError(f"render mode must be real, abs or fft, got {mode!r}")
    img = np.asarray(img, dtype=float).T[::-1]  # y upwards
    lo, hi = float(img.min()), float(img.max())
    if not hi > lo:
        return np.full(img.shape, 128, dtype=np.uint8)
    return np.round(255.0 * (img - lo) / (hi - lo)).astype(np.uint8)


def write_pgm(path, image: np.ndarray) -> Path:
    path = Path(path)
    image = np.asarray(image, dtype=np.uint8)
    rows, cols = image.shape
    path.write_bytes(f"P5\n{cols} {rows}\n255\n".encode("ascii") + image.tobytes())
    return path


_PGM_HEAD = re.compile(rb"P5\s+(\d+)\s+(\d+)\s+(\d+)\s")


def read_pgm(path) -> np.ndarray:
    blob = Path(path).read_bytes()
    m = _PGM_HEAD.match(blob)
    if m is None:
        raise FieldFormatError(f"{path}: not a binary PGM file")
    cols, rows, maxval = (int(g) for g in m.groups())
    if maxval != 255:
        raise FieldFormatError(f"{path}: only 8-bit PGM is supported")
    data = blob[m.end():]
    if len(data) != rows * cols:
        raise FieldFormatError(f"{path}: expected {rows * cols} pixel bytes, found {len(data)}")
    return np.frombuffer(data, dtype=np.uint8).reshape(rows, cols)
