"""
Binary PPM/PGM renders of walls and profiles, one pixel per cell.

Colour scheme (P6): zero is yellow, a residue v in 1..p-1 is blue with green
channel 64 + 160 (v-1) / (p-2) (darkest at 1, lightest at p-1), Undefined is
mid gray. Gray scheme (P5, profiles): Zero 255, X 0, Undefined 128.
"""

from enum import Enum
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from src.exceptions import WallFormatError
from src.logging_config import configure_module_logging
from src.wall import ProfileGrid, Wall
from src.wall_engine import profile

logger = configure_module_logging("render")

YELLOW = (255, 230, 0)
GRAY = (128, 128, 128)
BLUE_LO = 64
BLUE_SPAN = 160

Renderable = Union[Wall, ProfileGrid]


class Palette(str, Enum):
    COLOR = "color"
    GRAY = "gray"


def _header(magic: str, height: int, width: int) -> bytes:
    return f"{magic}\n{width} {height}\n255\n".encode("ascii")


def wall_rgb(w: Wall) -> np.ndarray:
    """(rows, cols, 3) uint8 pixels of a wall."""
    p = w.p
    v = w.values
    known = v >= 0
    zero = v == 0
    steps = max(p - 2, 1)
    # zero and Undefined cells get a stand-in residue; both are painted over below
    residue = np.where(known & ~zero, v, 1)
    green = (BLUE_LO + (BLUE_SPAN * (residue - 1)) // steps).astype(np.int64)
    rgb = np.empty(v.shape + (3,), dtype=np.uint8)
    rgb[..., 0] = 0
    rgb[..., 1] = np.clip(green, 0, 255)
    rgb[..., 2] = 255
    rgb[zero] = YELLOW
    rgb[~known] = GRAY
    return rgb


def profile_rgb(pg: ProfileGrid) -> np.ndarray:
    """Profile in the colour scheme; X takes the darkest blue."""
    rgb = np.empty(pg.cells.shape + (3,), dtype=np.uint8)
    rgb[...] = (0, BLUE_LO, 255)
    rgb[pg.cells == ProfileGrid.ZERO] = YELLOW
    rgb[pg.cells == ProfileGrid.UNDEFINED] = GRAY
    return rgb


def profile_gray(pg: ProfileGrid) -> np.ndarray:
    """(rows, cols) uint8: Zero 255, X 0, Undefined 128."""
    gray = np.zeros(pg.cells.shape, dtype=np.uint8)
    gray[pg.cells == ProfileGrid.ZERO] = 255
    gray[pg.cells == ProfileGrid.UNDEFINED] = 128
    return gray


def encode_pnm(pixels: np.ndarray) -> bytes:
    """P6 for (h, w, 3) arrays, P5 for (h, w) arrays."""
    if pixels.ndim == 3 and pixels.shape[2] == 3:
        magic = "P6"
    elif pixels.ndim == 2:
        magic = "P5"
    else:
        raise WallFormatError(f"Cannot encode pixel array of shape {pixels.shape}")
    height, width = pixels.shape[:2]
    return _header(magic, height, width) + np.ascontiguousarray(pixels, dtype=np.uint8).tobytes()


def render_wall(obj: Renderable, palette: Palette = Palette.COLOR) -> bytes:
    """
    Render a wall or a profile.

    Args:
        obj: Wall or ProfileGrid; a wall is reduced to its profile for the
            gray scheme
        palette: COLOR gives P6, GRAY gives P5

    Returns:
        Image bytes; identical inputs give identical bytes
    """
    palette = Palette(palette)
    if palette is Palette.GRAY:
        pg = profile(obj) if isinstance(obj, Wall) else obj
        return encode_pnm(profile_gray(pg))
    if isinstance(obj, Wall):
        return encode_pnm(wall_rgb(obj))
    return encode_pnm(profile_rgb(obj))


def write_image(obj: Renderable, path: Path, palette: Palette = Palette.COLOR) -> Tuple[int, int]:
    """Write a render to `path`; returns (height, width) in pixels."""
    data = render_wall(obj, palette)
    Path(path).write_bytes(data)
    height, width = (obj.values if isinstance(obj, Wall) else obj.cells).shape
    logger.info(f"Wrote {width}x{height} {Palette(palette).value} image to {path}")
    return height, width


def decode_pnm(data: bytes) -> np.ndarray:
    """
    Pixels of a binary P5/P6 image with maxval 255 and single-space headers.

    Raises:
        WallFormatError: If the header is not one written by encode_pnm
    """
    try:
        magic, size, maxval, body = data.split(b"\n", 3)
        width, height = (int(x) for x in size.split())
    except ValueError:
        raise WallFormatError("Malformed PNM header") from None
    if maxval != b"255" or magic not in (b"P5", b"P6"):
        raise WallFormatError(f"Unsupported PNM {magic!r} maxval {maxval!r}")
    channels = 3 if magic == b"P6" else 1
    if len(body) != width * height * channels:
        raise WallFormatError(f"Expected {width * height * channels} pixel bytes, got {len(body)}")
    pixels = np.frombuffer(body, dtype=np.uint8)
    return pixels.reshape((height, width, 3) if channels == 3 else (height, width))
