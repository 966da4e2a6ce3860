"""Screenshot decoding. PNG input limited to 8-bit RGB/RGBA (plus palette
and grayscale modes that losslessly convert); alpha is composited over white.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .errors import UnsupportedImage

_CONVERTIBLE = {"RGB", "RGBA", "P", "L", "LA", "1"}


def load_image(path: str | Path) -> np.ndarray:
    """Decode an image file to an HxWx3 uint8 RGB array."""
    with Image.open(path) as img:
        if img.mode not in _CONVERTIBLE:
            raise UnsupportedImage(
                f"unsupported image mode {img.mode!r} in {path} (8-bit RGB/RGBA only)")
        rgba = img.convert("RGBA")
    arr = np.asarray(rgba, dtype=np.float64)
    alpha = arr[:, :, 3:4] / 255.0
    rgb = arr[:, :, :3] * alpha + 255.0 * (1.0 - alpha)
    return np.clip(rgb + 0.5, 0, 255).astype(np.uint8)


def save_thumbnail(image: np.ndarray, dest: str | Path, max_dim: int = 360) -> None:
    """Write a PNG thumbnail no larger than ``max_dim`` on its longest side."""
    img = Image.fromarray(image, mode="RGB")
    img.thumbnail((max_dim, max_dim))
    dest = Path(dest)
    dest.parent.mkdir(parents=True, exist_ok=True)
    img.save(dest, format="PNG")
