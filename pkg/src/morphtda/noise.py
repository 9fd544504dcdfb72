"""Salt-and-pepper noise with imnoise semantics."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import as_image, is_binary

PRNG = "numpy.random.PCG64"


@dataclass(frozen=True)
class NoiseSpec:
    density: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.density <= 1.0:
            raise ValueError(f"density must lie in [0, 1], got {self.density}")


def add_salt_pepper(f, spec: NoiseSpec, white: int | None = None) -> np.ndarray:
    """Replace pixels by black (0) or white with total probability ``density``.

    One uniform draw per pixel in row-major order: ``u < density/2`` gives
    pepper, ``density/2 <= u < density`` gives salt. ``white`` defaults to
    1 for binary images and 255 otherwise.
    """
    f = as_image(f)
    if white is None:
        white = 1 if is_binary(f) else 255
    u = np.random.Generator(np.random.PCG64(spec.seed)).random(f.shape)
    out = f.copy()
    d = spec.density
    out[u < d / 2] = 0
    out[(u >= d / 2) & (u < d)] = white
    return out
