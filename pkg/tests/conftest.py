import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def image_shapes(lo=1, hi=16):
    return st.tuples(st.integers(lo, hi), st.integers(lo, hi))


def binary_images(lo=1, hi=16):
    return image_shapes(lo, hi).flatmap(
        lambda s: arrays(np.uint8, s, elements=st.integers(0, 1)))


def gray_images(lo=1, hi=16, vmax=255):
    return image_shapes(lo, hi).flatmap(
        lambda s: arrays(np.uint8, s, elements=st.integers(0, vmax)))


def blob_speck_hole():
    """Large black blob with a 1x1 white hole, plus a 1x1 black speck."""
    f = np.ones((30, 30), dtype=np.uint8)
    f[4:26, 4:26] = 0
    clean = f.copy()
    f[14, 14] = 1
    f[1, 28] = 0
    return f, clean


def window_oracle(g, offsets, reduce, sign):
    """Pure Python per-pixel window scan over x + sign*b, clipped to the grid."""
    h, w = g.shape
    out = np.empty_like(g)
    for r in range(h):
        for c in range(w):
            vals = [int(g[r + sign * dy, c + sign * dx]) for dx, dy in offsets
                    if 0 <= r + sign * dy < h and 0 <= c + sign * dx < w]
            out[r, c] = reduce(vals)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
