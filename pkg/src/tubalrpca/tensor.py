"""Dense 3-order tensor basics.

Tensors are plain float64 numpy arrays of shape (d1, d2, d3); complex
spectra are complex128 arrays of the same shape. Frontal slice k is
``x[:, :, k]``, a tube is ``x[i, j, :]``. This module holds validation,
the structural operators (unfold/fold/bcirc), norms, and the T3B binary
format.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, FormatError

T3B_MAGIC = b"T3B1"


def as_tensor3(x, name: str = "tensor") -> np.ndarray:
    """Validate and return `x` as a float64 array of shape (d1, d2, d3)."""
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 3:
        raise DimensionMismatch(f"{name} must be 3-order, got shape {a.shape}")
    if min(a.shape) < 1:
        raise DimensionMismatch(f"{name} has an empty dimension: {a.shape}")
    return a


def frontal_slice(x: np.ndarray, k: int) -> np.ndarray:
    return x[:, :, k]


def identity_tensor(d: int, d3: int) -> np.ndarray:
    """First frontal slice is the d x d identity, the rest are zero."""
    t = np.zeros((d, d, d3))
    t[:, :, 0] = np.eye(d)
    return t


def unfold(x) -> np.ndarray:
    """Stack the frontal slices vertically into a (d1*d3, d2) matrix."""
    x = as_tensor3(x)
    d1, d2, d3 = x.shape
    return x.transpose(2, 0, 1).reshape(d1 * d3, d2)


def fold(m, d3: int) -> np.ndarray:
    """Inverse of :func:`unfold`."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise DimensionMismatch(f"fold expects a matrix, got shape {m.shape}")
    rows, d2 = m.shape
    if d3 < 1 or rows % d3 != 0:
        raise DimensionMismatch(f"row count {rows} not divisible by d3={d3}")
    d1 = rows // d3
    return np.ascontiguousarray(m.reshape(d3, d1, d2).transpose(1, 2, 0))


def bcirc(x) -> np.ndarray:
    """Block-circulant matrix: block (i, j) holds frontal slice (i - j) mod d3.

    O(d1*d2*d3^2) memory; used by tests and oracles, production paths go
    through the Fourier domain instead.
    """
    x = as_tensor3(x)
    d1, d2, d3 = x.shape
    out = np.empty((d1 * d3, d2 * d3))
    for j in range(d3):
        for i in range(d3):
            out[i * d1:(i + 1) * d1, j * d2:(j + 1) * d2] = x[:, :, (i - j) % d3]
    return out


def fro_norm(x) -> float:
    return float(np.sqrt(np.sum(np.square(np.asarray(x, dtype=np.float64)))))


def inf_norm(x) -> float:
    return float(np.max(np.abs(x)))


def l1_norm(x) -> float:
    return float(np.sum(np.abs(x)))


def axpy(a: float, x, y) -> np.ndarray:
    """Entrywise a*x + y."""
    x = as_tensor3(x, "x")
    y = as_tensor3(y, "y")
    if x.shape != y.shape:
        raise DimensionMismatch(f"axpy shapes differ: {x.shape} vs {y.shape}")
    return a * x + y


def mirror_index(k: int, d3: int) -> int:
    """Index of the conjugate partner of frequency slice `k` (0-based)."""
    return (-k) % d3


def conj_asymmetry(xf) -> float:
    """Max deviation of a complex spectrum from conjugate symmetry."""
    xf = np.asarray(xf)
    if xf.ndim != 3:
        raise DimensionMismatch(f"expected 3-order spectrum, got {xf.shape}")
    d3 = xf.shape[2]
    mirror = (-np.arange(d3)) % d3
    return float(np.max(np.abs(xf[:, :, mirror] - xf.conj())))


def conj_symmetric(xf, tol: float) -> bool:
    """True iff every slice equals the conjugate of its mirror within `tol`."""
    return conj_asymmetry(xf) <= tol


def write_t3b(x, path) -> None:
    """Write the T3B format: magic ``T3B1``, d1/d2/d3 as little-endian
    uint64, then float64 entries slice-major, row-major within a slice."""
    x = as_tensor3(x)
    d1, d2, d3 = x.shape
    payload = np.ascontiguousarray(x.transpose(2, 0, 1), dtype="<f8")
    with open(path, "wb") as f:
        f.write(T3B_MAGIC)
        f.write(struct.pack("<QQQ", d1, d2, d3))
        f.write(payload.tobytes())


def read_t3b(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if len(data) < 28 or data[:4] != T3B_MAGIC:
        raise FormatError(f"{path}: not a T3B tensor file")
    d1, d2, d3 = struct.unpack_from("<QQQ", data, 4)
    if min(d1, d2, d3) < 1:
        raise FormatError(f"{path}: invalid dims {(d1, d2, d3)}")
    expect = 28 + 8 * d1 * d2 * d3
    if len(data) != expect:
        raise FormatError(f"{path}: size {len(data)} != expected {expect}")
    flat = np.frombuffer(data, dtype="<f8", offset=28)
    return flat.reshape(d3, d1, d2).transpose(1, 2, 0).astype(np.float64)
