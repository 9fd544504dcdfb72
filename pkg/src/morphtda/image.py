"""Pixel grids, thresholding and level sets.

Images are plain 2-D numpy integer arrays indexed ``[row, col]`` with the
origin at the top-left. A binary image takes values in {0, 1}, where 0 is
black. Level sets are boolean masks of the same shape.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

N_LEVELS = 256


class GridMismatchError(ValueError):
    """Two images that must share a pixel grid do not."""


def as_image(g) -> np.ndarray:
    g = np.asarray(g)
    if g.ndim != 2 or g.shape[0] < 1 or g.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D image, got shape {g.shape}")
    if g.dtype == bool:
        g = g.astype(np.uint8)
    if not np.issubdtype(g.dtype, np.integer):
        raise TypeError(f"images must be integer valued, got {g.dtype}")
    if g.size and g.min() < 0:
        raise ValueError("image values must be non-negative")
    return g


def check_same_grid(f: np.ndarray, g: np.ndarray) -> None:
    if np.shape(f) != np.shape(g):
        raise GridMismatchError(f"grid mismatch: {np.shape(f)} vs {np.shape(g)}")


def is_binary(g: np.ndarray) -> bool:
    return bool(np.all((g == 0) | (g == 1)))


def threshold(g, t: int) -> np.ndarray:
    """Global threshold: 0 where ``g <= t`` and 1 elsewhere."""
    g = as_image(g)
    return (g > t).astype(np.uint8)


def zero_level_set(f) -> np.ndarray:
    f = as_image(f)
    if not is_binary(f):
        raise ValueError("zero_level_set expects a binary image")
    return f == 0


def sublevel_set(g, t: int) -> np.ndarray:
    return np.asarray(g) <= t


def image_le(f, g) -> bool:
    """Pointwise partial order ``f <= g``."""
    check_same_grid(f, g)
    return bool(np.all(np.asarray(f) <= np.asarray(g)))


def threshold_stack(g) -> list[np.ndarray]:
    """All 256 thresholded binary images of an 8-bit image."""
    g = as_image(g)
    return [threshold(g, t) for t in range(N_LEVELS)]


def sum_binary_levels(levels: Sequence[np.ndarray]) -> np.ndarray:
    """Pointwise sum of 256 binary images on one grid.

    With ``levels[t] = threshold(g, t)`` this reproduces ``g`` exactly. The
    result is int64 so that arbitrary 0/1 stacks cannot overflow.
    """
    if len(levels) != N_LEVELS:
        raise ValueError(f"expected {N_LEVELS} levels, got {len(levels)}")
    first = np.asarray(levels[0])
    out = np.zeros(first.shape, dtype=np.int64)
    for lv in levels:
        lv = np.asarray(lv)
        check_same_grid(first, lv)
        if not is_binary(lv):
            raise ValueError("every level must be a binary image")
        out += lv
    return out
