"""Flat structuring elements, erosion/dilation/opening/closing and top-hats.

Offsets are ``(dx, dy)`` pairs: ``dx`` moves along columns, ``dy`` along rows.
Every operator clips its window to the image domain; there is no padding
value that could leak into the result.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .image import as_image

Offset = tuple[int, int]


@dataclass(frozen=True)
class StructuringElement:
    offsets: frozenset[Offset]

    def __post_init__(self):
        offs = frozenset((int(dx), int(dy)) for dx, dy in self.offsets)
        if (0, 0) not in offs:
            raise ValueError("a structuring element must contain the origin")
        object.__setattr__(self, "offsets", offs)

    @classmethod
    def from_offsets(cls, offsets: Iterable[Offset]) -> "StructuringElement":
        return cls(frozenset(offsets))

    @classmethod
    def from_file(cls, path) -> "StructuringElement":
        """Read whitespace separated integer pairs, one offset per line."""
        offsets = []
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected two integers")
            offsets.append((int(parts[0]), int(parts[1])))
        return cls.from_offsets(offsets)

    def __len__(self):
        return len(self.offsets)

    def __le__(self, other: "StructuringElement") -> bool:
        return self.offsets <= other.offsets

    def reflect(self) -> "StructuringElement":
        return StructuringElement(frozenset((-dx, -dy) for dx, dy in self.offsets))

    @property
    def is_symmetric(self) -> bool:
        return self.offsets == self.reflect().offsets

    def square_bounds(self):
        """``(lo, hi)`` if this is the square ``{lo..hi}^2``, else None."""
        xs = [dx for dx, _ in self.offsets]
        lo, hi = min(xs), max(xs)
        ys = [dy for _, dy in self.offsets]
        if (min(ys), max(ys)) != (lo, hi) or len(self) != (hi - lo + 1) ** 2:
            return None
        return lo, hi


def square(i: int) -> StructuringElement:
    """The (i+1) x (i+1) square B_i of the nested square family.

    Odd steps grow towards +x/+y, even steps towards -x/-y, so
    B_i = {-(i // 2) .. (i + 1) // 2}^2.
    """
    if i < 0:
        raise ValueError("scale must be non-negative")
    lo, hi = -(i // 2), (i + 1) // 2
    r = range(lo, hi + 1)
    return StructuringElement(frozenset((x, y) for x in r for y in r))


@dataclass(frozen=True)
class SESequence:
    """Nested chain B_0 = {0} ⊆ B_1 ⊆ ... ⊆ B_n."""

    elements: tuple[StructuringElement, ...]

    def __post_init__(self):
        els = tuple(self.elements)
        if not els or els[0].offsets != {(0, 0)}:
            raise ValueError("B_0 must be the origin alone")
        for a, b in zip(els, els[1:]):
            if not a <= b:
                raise ValueError("structuring elements must be nested")
        object.__setattr__(self, "elements", els)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i) -> StructuringElement:
        return self.elements[i]

    def __iter__(self):
        return iter(self.elements)

    @property
    def n(self) -> int:
        return len(self.elements) - 1

    def is_square_family(self) -> bool:
        return all(b == square(i) for i, b in enumerate(self.elements))


def square_se_sequence(n: int) -> SESequence:
    if n < 0:
        raise ValueError("n must be non-negative")
    return SESequence(tuple(square(i) for i in range(n + 1)))


def _shift_reduce(g: np.ndarray, offsets: Iterable[Offset], reduce) -> np.ndarray:
    """out(x) = reduce over g(x + b), b in offsets, x + b inside the grid."""
    out = g.copy()
    h, w = g.shape
    for dx, dy in offsets:
        if abs(dx) >= w or abs(dy) >= h:
            continue
        # output rows r with 0 <= r + dy < h, likewise for columns
        r0, r1 = max(0, -dy), min(h, h - dy)
        c0, c1 = max(0, -dx), min(w, w - dx)
        dst = out[r0:r1, c0:c1]
        reduce(dst, g[r0 + dy:r1 + dy, c0 + dx:c1 + dx], out=dst)
    return out


def _separable(g: np.ndarray, lo: int, hi: int, reduce) -> np.ndarray:
    rows = _shift_reduce(g, ((d, 0) for d in range(lo, hi + 1)), reduce)
    return _shift_reduce(rows, ((0, d) for d in range(lo, hi + 1)), reduce)


def erode_reference(g, B: StructuringElement) -> np.ndarray:
    return _shift_reduce(as_image(g), B.offsets, np.minimum)


def dilate_reference(g, B: StructuringElement) -> np.ndarray:
    return _shift_reduce(as_image(g), B.reflect().offsets, np.maximum)


def erode(g, B: StructuringElement) -> np.ndarray:
    """min of g over (x + B) ∩ P."""
    g = as_image(g)
    sq = B.square_bounds()
    if sq is not None:
        return _separable(g, *sq, np.minimum)
    return _shift_reduce(g, B.offsets, np.minimum)


def dilate(g, B: StructuringElement) -> np.ndarray:
    """max of g over (x - B) ∩ P."""
    g = as_image(g)
    sq = B.square_bounds()
    if sq is not None:
        lo, hi = sq
        return _separable(g, -hi, -lo, np.maximum)
    return _shift_reduce(g, B.reflect().offsets, np.maximum)


def opening(g, B: StructuringElement) -> np.ndarray:
    return dilate(erode(g, B), B)


def closing(g, B: StructuringElement) -> np.ndarray:
    return erode(dilate(g, B), B)


def white_top_hat(g, B: StructuringElement) -> np.ndarray:
    g = as_image(g)
    return g - opening(g, B)


def black_top_hat(g, B: StructuringElement) -> np.ndarray:
    g = as_image(g)
    return closing(g, B) - g


def self_complementary_top_hat(g, B: StructuringElement) -> np.ndarray:
    return closing(g, B) - opening(g, B)


OPERATORS = {
    "erode": erode,
    "dilate": dilate,
    "open": opening,
    "close": closing,
    "wth": white_top_hat,
    "bth": black_top_hat,
    "sth": self_complementary_top_hat,
}
