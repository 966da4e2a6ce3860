"""Color handling: RGB/HSL conversion, named/hex color parsing, tolerance
matching, and dominant-palette extraction from screenshots.

Palette extraction groups pixels by coarse HSL buckets, averages each group,
merges near-duplicate groups, and keeps the largest k as the screen's palette.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyImage, UnknownColor
from .model import ColorEntry, Palette

# The extended color keyword table used by web browsers (148 names, including
# the gray/grey spelling pairs and rebeccapurple).
WEB_COLORS: dict[str, str] = {
    "aliceblue": "f0f8ff", "antiquewhite": "faebd7", "aqua": "00ffff",
    "aquamarine": "7fffd4", "azure": "f0ffff", "beige": "f5f5dc",
    "bisque": "ffe4c4", "black": "000000", "blanchedalmond": "ffebcd",
    "blue": "0000ff", "blueviolet": "8a2be2", "brown": "a52a2a",
    "burlywood": "deb887", "cadetblue": "5f9ea0", "chartreuse": "7fff00",
    "chocolate": "d2691e", "coral": "ff7f50", "cornflowerblue": "6495ed",
    "cornsilk": "fff8dc", "crimson": "dc143c", "cyan": "00ffff",
    "darkblue": "00008b", "darkcyan": "008b8b", "darkgoldenrod": "b8860b",
    "darkgray": "a9a9a9", "darkgreen": "006400", "darkgrey": "a9a9a9",
    "darkkhaki": "bdb76b", "darkmagenta": "8b008b", "darkolivegreen": "556b2f",
    "darkorange": "ff8c00", "darkorchid": "9932cc", "darkred": "8b0000",
    "darksalmon": "e9967a", "darkseagreen": "8fbc8f", "darkslateblue": "483d8b",
    "darkslategray": "2f4f4f", "darkslategrey": "2f4f4f",
    "darkturquoise": "00ced1", "darkviolet": "9400d3", "deeppink": "ff1493",
    "deepskyblue": "00bfff", "dimgray": "696969", "dimgrey": "696969",
    "dodgerblue": "1e90ff", "firebrick": "b22222", "floralwhite": "fffaf0",
    "forestgreen": "228b22", "fuchsia": "ff00ff", "gainsboro": "dcdcdc",
    "ghostwhite": "f8f8ff", "gold": "ffd700", "goldenrod": "daa520",
    "gray": "808080", "green": "008000", "greenyellow": "adff2f",
    "grey": "808080", "honeydew": "f0fff0", "hotpink": "ff69b4",
    "indianred": "cd5c5c", "indigo": "4b0082", "ivory": "fffff0",
    "khaki": "f0e68c", "lavender": "e6e6fa", "lavenderblush": "fff0f5",
    "lawngreen": "7cfc00", "lemonchiffon": "fffacd", "lightblue": "add8e6",
    "lightcoral": "f08080", "lightcyan": "e0ffff",
    "lightgoldenrodyellow": "fafad2", "lightgray": "d3d3d3",
    "lightgreen": "90ee90", "lightgrey": "d3d3d3", "lightpink": "ffb6c1",
    "lightsalmon": "ffa07a", "lightseagreen": "20b2aa",
    "lightskyblue": "87cefa", "lightslategray": "778899",
    "lightslategrey": "778899", "lightsteelblue": "b0c4de",
    "lightyellow": "ffffe0", "lime": "00ff00", "limegreen": "32cd32",
    "linen": "faf0e6", "magenta": "ff00ff", "maroon": "800000",
    "mediumaquamarine": "66cdaa", "mediumblue": "0000cd",
    "mediumorchid": "ba55d3", "mediumpurple": "9370db",
    "mediumseagreen": "3cb371", "mediumslateblue": "7b68ee",
    "mediumspringgreen": "00fa9a", "mediumturquoise": "48d1cc",
    "mediumvioletred": "c71585", "midnightblue": "191970",
    "mintcream": "f5fffa", "mistyrose": "ffe4e1", "moccasin": "ffe4b5",
    "navajowhite": "ffdead", "navy": "000080", "oldlace": "fdf5e6",
    "olive": "808000", "olivedrab": "6b8e23", "orange": "ffa500",
    "orangered": "ff4500", "orchid": "da70d6", "palegoldenrod": "eee8aa",
    "palegreen": "98fb98", "paleturquoise": "afeeee",
    "palevioletred": "db7093", "papayawhip": "ffefd5", "peachpuff": "ffdab9",
    "peru": "cd853f", "pink": "ffc0cb", "plum": "dda0dd",
    "powderblue": "b0e0e6", "purple": "800080", "rebeccapurple": "663399",
    "red": "ff0000", "rosybrown": "bc8f8f", "royalblue": "4169e1",
    "saddlebrown": "8b4513", "salmon": "fa8072", "sandybrown": "f4a460",
    "seagreen": "2e8b57", "seashell": "fff5ee", "sienna": "a0522d",
    "silver": "c0c0c0", "skyblue": "87ceeb", "slateblue": "6a5acd",
    "slategray": "708090", "slategrey": "708090", "snow": "fffafa",
    "springgreen": "00ff7f", "steelblue": "4682b4", "tan": "d2b48c",
    "teal": "008080", "thistle": "d8bfd8", "tomato": "ff6347",
    "turquoise": "40e0d0", "violet": "ee82ee", "wheat": "f5deb3",
    "white": "ffffff", "whitesmoke": "f5f5f5", "yellow": "ffff00",
    "yellowgreen": "9acd32",
}

_HEX_RE = re.compile(r"#?([0-9a-f]{6})")

# Below this saturation a hue carries no information, so hue comparisons are
# skipped for either color.
ACHROMATIC_SATURATION = 0.05


def _rgb_unit_to_hsl(r: float, g: float, b: float) -> tuple[float, float, float]:
    """HSL of unit-range RGB components. Hue in [0, 360), 0 when achromatic."""
    max_c = max(r, g, b)
    min_c = min(r, g, b)
    diff = max_c - min_c
    light = (max_c + min_c) / 2.0

    if diff == 0:
        return 0.0, 0.0, light

    if light <= 0.5:
        sat = diff / (max_c + min_c)
    else:
        sat = diff / (2.0 - max_c - min_c)

    if max_c == r:
        hue = (60.0 * ((g - b) / diff) + 360.0) % 360.0
    elif max_c == g:
        hue = (60.0 * ((b - r) / diff) + 120.0) % 360.0
    else:
        hue = (60.0 * ((r - g) / diff) + 240.0) % 360.0
    return hue, sat, light


def rgb_to_hsl(rgb) -> tuple[float, float, float]:
    """Convert an RGB triple (components in 0..255) to (hue, sat, light)."""
    r, g, b = rgb
    if any(not (0 <= c <= 255) for c in (r, g, b)):
        raise ValueError(f"rgb component out of range: {rgb}")
    return _rgb_unit_to_hsl(r / 255.0, g / 255.0, b / 255.0)


def hsl_to_rgb(hsl) -> tuple[int, int, int]:
    """Inverse of rgb_to_hsl with round-to-nearest integer channels."""
    h, s, light = hsl
    h = h % 360.0
    c = (1.0 - abs(2.0 * light - 1.0)) * s
    x = c * (1.0 - abs((h / 60.0) % 2.0 - 1.0))
    m = light - c / 2.0

    if h < 60:
        r, g, b = c, x, 0.0
    elif h < 120:
        r, g, b = x, c, 0.0
    elif h < 180:
        r, g, b = 0.0, c, x
    elif h < 240:
        r, g, b = 0.0, x, c
    elif h < 300:
        r, g, b = x, 0.0, c
    else:
        r, g, b = c, 0.0, x

    return (round((r + m) * 255), round((g + m) * 255), round((b + m) * 255))


def hue_distance(h1: float, h2: float) -> float:
    """Circular hue distance in degrees, wrapping at 360."""
    d = abs(h1 - h2) % 360.0
    return min(d, 360.0 - d)


@dataclass(frozen=True)
class ColorTolerance:
    """Per-channel HSL deltas below which two colors count as matching."""

    max_hue_delta: float
    max_sat_delta: float
    max_light_delta: float

    def __post_init__(self):
        if not (0.0 <= self.max_hue_delta <= 180.0):
            raise ValueError(f"max_hue_delta out of [0,180]: {self.max_hue_delta}")
        if not (0.0 <= self.max_sat_delta <= 1.0):
            raise ValueError(f"max_sat_delta out of [0,1]: {self.max_sat_delta}")
        if not (0.0 <= self.max_light_delta <= 1.0):
            raise ValueError(f"max_light_delta out of [0,1]: {self.max_light_delta}")


DEFAULT_COLOR_TOLERANCE = ColorTolerance(30.0, 0.25, 0.25)


def tolerance_from_scalar(s: float) -> ColorTolerance:
    """Map the UI slider scalar in [0,1] onto all three HSL deltas."""
    if not (0.0 <= s <= 1.0):
        raise ValueError(f"tolerance scalar out of [0,1]: {s}")
    return ColorTolerance(180.0 * s, s, s)


@dataclass(frozen=True)
class ColorSpec:
    """A query color: a web color name or explicit hex, resolved to RGB/HSL."""

    origin: str  # "named" or "hex"
    token: str
    rgb: tuple[int, int, int]
    hsl: tuple[float, float, float]


def parse_color_token(token: str) -> ColorSpec:
    """Resolve a color name or (optionally #-prefixed) 6-digit hex string."""
    cleaned = token.strip().lower()
    if cleaned in WEB_COLORS:
        hex_digits = WEB_COLORS[cleaned]
        origin = "named"
        name = cleaned
    else:
        m = _HEX_RE.fullmatch(cleaned)
        if m is None:
            raise UnknownColor(f"not a web color name or 6-digit hex value: {token!r}")
        hex_digits = m.group(1)
        origin = "hex"
        name = hex_digits
    rgb = tuple(int(hex_digits[i:i + 2], 16) for i in (0, 2, 4))
    return ColorSpec(origin=origin, token=name, rgb=rgb, hsl=rgb_to_hsl(rgb))


def hsl_close(a, b, tol: ColorTolerance) -> bool:
    """True when two HSL triples fall within the tolerance on every channel.

    The hue check is skipped when either color is effectively achromatic
    (saturation below ACHROMATIC_SATURATION), where hue is meaningless.
    """
    if abs(a[1] - b[1]) > tol.max_sat_delta:
        return False
    if abs(a[2] - b[2]) > tol.max_light_delta:
        return False
    if a[1] < ACHROMATIC_SATURATION or b[1] < ACHROMATIC_SATURATION:
        return True
    return hue_distance(a[0], b[0]) <= tol.max_hue_delta


def color_matches(palette_entry_hsl, query: ColorSpec, tol: ColorTolerance) -> bool:
    """True when a palette entry matches the queried color under ``tol``."""
    return hsl_close(palette_entry_hsl, query.hsl, tol)


# --- palette extraction ---

@dataclass(frozen=True)
class PaletteConfig:
    hue_buckets: int = 24       # 15 degrees each
    lightness_buckets: int = 8
    saturation_buckets: int = 4
    merge_tolerance: ColorTolerance = field(
        default_factory=lambda: ColorTolerance(15.0, 0.1, 0.1))


DEFAULT_PALETTE_CONFIG = PaletteConfig()


def make_color_entry(rgb, proportion: float) -> ColorEntry:
    rgb = tuple(int(c) for c in rgb)
    return ColorEntry(rgb=rgb, hsl=rgb_to_hsl(rgb), proportion=proportion)


def make_palette(weighted_colors) -> Palette:
    """Build a Palette from (rgb, weight) pairs, normalizing the weights."""
    total = float(sum(w for _, w in weighted_colors))
    if total <= 0:
        raise ValueError("weights must sum to a positive value")
    ranked = sorted(weighted_colors, key=lambda cw: -cw[1])
    return Palette(tuple(make_color_entry(rgb, w / total) for rgb, w in ranked))


def _pixel_hsl(pixels: np.ndarray):
    """Vectorized HSL for an (N, 3) float array of 0..255 pixels."""
    unit = pixels / 255.0
    r, g, b = unit[:, 0], unit[:, 1], unit[:, 2]
    max_c = np.maximum(np.maximum(r, g), b)
    min_c = np.minimum(np.minimum(r, g), b)
    diff = max_c - min_c
    light = (max_c + min_c) / 2.0

    chroma = diff > 0
    safe_diff = np.where(chroma, diff, 1.0)
    low = np.where(max_c + min_c == 0, 1.0, max_c + min_c)
    high = np.where(2.0 - max_c - min_c == 0, 1.0, 2.0 - max_c - min_c)
    sat = np.where(chroma, np.where(light <= 0.5, diff / low, diff / high), 0.0)

    is_r = chroma & (max_c == r)
    is_g = chroma & ~is_r & (max_c == g)
    is_b = chroma & ~is_r & ~is_g
    hue = np.zeros_like(light)
    hue = np.where(is_r, (60.0 * ((g - b) / safe_diff) + 360.0) % 360.0, hue)
    hue = np.where(is_g, (60.0 * ((b - r) / safe_diff) + 120.0) % 360.0, hue)
    hue = np.where(is_b, (60.0 * ((r - g) / safe_diff) + 240.0) % 360.0, hue)
    return hue, sat, light


def extract_palette(image, k: int = 6,
                    config: PaletteConfig = DEFAULT_PALETTE_CONFIG) -> Palette:
    """Extract the dominant palette (up to ``k`` entries) of an RGB image.

    Pixels are grouped by quantized HSL buckets; each group is averaged in
    RGB weighted by pixel count; groups ranked by size; lower-ranked groups
    within the merge tolerance of a kept group fold into it; the largest
    ``k`` survivors become the palette, with proportions renormalized over
    the kept entries so they sum to 1.

    Depends only on the multiset of pixels (shuffling the image does not
    change the result).
    """
    arr = np.asarray(image)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise EmptyImage(f"expected an HxWx3 RGB array, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise EmptyImage("image has no pixels")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")

    pixels = arr.reshape(-1, 3).astype(np.float64)
    hue, sat, light = _pixel_hsl(pixels)

    nh, nl, ns = config.hue_buckets, config.lightness_buckets, config.saturation_buckets
    hb = (hue * nh / 360.0).astype(np.int64) % nh
    lb = np.minimum((light * nl).astype(np.int64), nl - 1)
    sb = np.minimum((sat * ns).astype(np.int64), ns - 1)
    key = (hb * nl + lb) * ns + sb

    n_buckets = nh * nl * ns
    counts = np.bincount(key, minlength=n_buckets)
    sums = np.stack([
        np.bincount(key, weights=pixels[:, c], minlength=n_buckets)
        for c in range(3)
    ], axis=1)

    occupied = np.nonzero(counts)[0]
    # Rank by pixel count, ties by bucket key, for a deterministic order.
    ranked = sorted(occupied.tolist(), key=lambda i: (-int(counts[i]), i))

    # Greedy merge: each group either joins the first kept group it is close
    # to, or starts a new kept group. Averages shift as counts accumulate.
    kept: list[dict] = []
    tol = config.merge_tolerance
    for idx in ranked:
        c = int(counts[idx])
        s = sums[idx]
        avg = s / c
        group_hsl = _rgb_unit_to_hsl(avg[0] / 255.0, avg[1] / 255.0, avg[2] / 255.0)
        target = None
        for g in kept:
            if hsl_close(g["hsl"], group_hsl, tol):
                target = g
                break
        if target is None:
            kept.append({"count": c, "sums": s.copy(), "hsl": group_hsl})
        else:
            target["count"] += c
            target["sums"] += s
            avg = target["sums"] / target["count"]
            target["hsl"] = _rgb_unit_to_hsl(avg[0] / 255.0, avg[1] / 255.0,
                                             avg[2] / 255.0)

    top = sorted(range(len(kept)), key=lambda i: (-kept[i]["count"], i))[:k]
    total = sum(kept[i]["count"] for i in top)
    entries = []
    for i in top:
        g = kept[i]
        avg = g["sums"] / g["count"]
        rgb = tuple(int(v + 0.5) for v in avg)
        entries.append(make_color_entry(rgb, g["count"] / total))
    return Palette(tuple(entries))
