from __future__ import annotations

import numpy as np

from .image import N_LEVELS, check_same_grid


def iou(a, b) -> float:
    """|a ∩ b| / |a ∪ b| for boolean masks; 1.0 when both are empty."""
    check_same_grid(a, b)
    a, b = np.asarray(a, dtype=bool), np.asarray(b, dtype=bool)
    union = np.count_nonzero(a | b)
    if union == 0:
        return 1.0
    return np.count_nonzero(a & b) / union


def extended_iou(g, h) -> float:
    """Mean IOU of the 256 sublevel sets; empty/empty levels count as 1."""
    g, h = np.asarray(g), np.asarray(h)
    return float(np.mean([iou(g <= t, h <= t) for t in range(N_LEVELS)]))
