"""Deterministic synthetic test images."""
from __future__ import annotations

import numpy as np

# (row0, row1, col0, col1) half-open boxes on the 190 x 190 canvas
TRUTH_BLOBS = [
    ((12, 78, 12, 62), (30, 60, 25, 49)),
    ((12, 70, 76, 118), (26, 56, 90, 104)),
    ((12, 84, 132, 178), (28, 68, 146, 164)),
    ((100, 176, 12, 70), (116, 160, 26, 56)),
    ((98, 150, 84, 126), None),
    ((104, 178, 140, 180), (118, 164, 154, 166)),
]
TRUTH_BETTI = (6, 5)


def make_synthetic_truth(width: int = 190, height: int = 190) -> np.ndarray:
    """Six black rectangles on white, five with one rectangular hole.

    Every blob, hole and gap is at least 12 pixels across, so opening or
    closing by squares up to 12 x 12 leaves the image unchanged. Other
    canvas sizes rescale the layout.
    """
    f = np.ones((height, width), dtype=np.uint8)
    sy, sx = height / 190, width / 190

    def box(r0, r1, c0, c1):
        return (slice(round(r0 * sy), round(r1 * sy)), slice(round(c0 * sx), round(c1 * sx)))

    for blob, hole in TRUTH_BLOBS:
        f[box(*blob)] = 0
        if hole is not None:
            f[box(*hole)] = 1
    return f


def make_kanji_analogue(seed: int = 0, n_specks: int = 40, size: int = 120):
    """A thick 日-like glyph with three large holes plus small salt specks.

    Specks are 1x1 or 2x2 white squares placed at least 3 pixels from any
    other white pixel. Returns ``(image, n_large_holes)``.
    """
    f = np.ones((size, size), dtype=np.uint8)
    m = size // 10
    f[m:size - m, 2 * m:size - 2 * m] = 0
    inner_c = slice(2 * m + 12, size - 2 * m - 12)
    bar = (size - 2 * m - 4 * 12) // 3
    holes = 0
    top = m + 12
    for _ in range(3):
        f[top:top + bar, inner_c] = 1
        top += bar + 12
        holes += 1
    rng = np.random.default_rng(seed)
    placed = 0
    attempts = 0
    while placed < n_specks and attempts < 100 * n_specks:
        attempts += 1
        k = 1 if rng.random() < 0.7 else 2
        r, c = rng.integers(0, size - k, size=2)
        r0, r1, c0, c1 = r - 3, r + k + 3, c - 3, c + k + 3
        if r0 < 0 or c0 < 0 or r1 > size or c1 > size:
            continue
        if f[r0:r1, c0:c1].any():
            continue
        f[r:r + k, c:c + k] = 1
        placed += 1
    return f, holes
