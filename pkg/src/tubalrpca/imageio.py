"""8-bit color image I/O (PNG and binary PPM) as float tensors in [0, 255]."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DimensionMismatch, FormatError
from .tensor import as_tensor3

_CONVERTIBLE_MODES = ("RGB", "L", "P", "RGBA")


def load_image(path) -> np.ndarray:
    """Load an 8-bit PNG or binary (P6) PPM as a (d1, d2, 3) float tensor."""
    try:
        img = Image.open(path)
    except UnidentifiedImageError as e:
        raise FormatError(f"{path}: not a recognized image") from e
    with img:
        if img.format not in ("PNG", "PPM"):
            raise FormatError(f"{path}: unsupported format {img.format!r} (need PNG or P6 PPM)")
        if img.format == "PPM" and img.mode != "RGB":
            raise FormatError(f"{path}: only binary P6 (color) PPM is supported")
        if img.mode not in _CONVERTIBLE_MODES:
            raise FormatError(f"{path}: unsupported mode/bit depth {img.mode!r}")
        rgb = img if img.mode == "RGB" else img.convert("RGB")
        return np.asarray(rgb, dtype=np.float64)


def save_image(t, path) -> None:
    """Write a (d1, d2, 3) tensor as an 8-bit image; values are clamped
    to [0, 255] and rounded half-to-even."""
    t = as_tensor3(t)
    if t.shape[2] != 3:
        raise DimensionMismatch(f"image tensor needs 3 channels, got {t.shape}")
    u8 = np.clip(np.rint(t), 0.0, 255.0).astype(np.uint8)
    suffix = Path(path).suffix.lower()
    if suffix not in (".png", ".ppm"):
        raise FormatError(f"{path}: unsupported image extension {suffix!r}")
    Image.fromarray(u8, "RGB").save(path)
