"""Cubical persistent homology of nested binary sets over Z/2.

Each black pixel is a closed unit square (T-construction), so black sets
are 8-connected and their complements 4-connected. Persistence runs on
positions 0..L-1; filtration labels are attached afterwards.

Two routes produce a ``PersistenceDiagram``:

* ``compute_persistence`` reduces the boundary matrix of the complex;
* ``levelwise_persistence`` applies the elder rule to connected components
  level by level (H1 through the 4-connected complement, by planar
  duality). It is much faster and is what the denoiser uses.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy import ndimage

from .filtration import OneParamFiltration

INF = math.inf
_EIGHT = np.ones((3, 3), dtype=bool)
_FOUR = ndimage.generate_binary_structure(2, 1)


class BettiPair(NamedTuple):
    beta0: int
    beta1: int


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of ``(dim, birth, death)`` in positions; death may be ``inf``."""

    pairs: tuple[tuple[int, int, float], ...]
    labels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(sorted(
            (int(k), int(b), d if d == INF else int(d)) for k, b, d in self.pairs)))
        object.__setattr__(self, "labels", tuple(self.labels))

    def __len__(self):
        return len(self.pairs)

    def label(self, pos):
        return pos if pos == INF else self.labels[pos]

    def dim(self, k: int) -> list[tuple[int, float]]:
        return [(b, d) for kk, b, d in self.pairs if kk == k]

    def labeled(self, k: int | None = None) -> list[tuple[int, int, float]]:
        return [(kk, self.label(b), self.label(d))
                for kk, b, d in self.pairs if k is None or kk == k]


# --- complex ----------------------------------------------------------------

@dataclass(frozen=True)
class CubicalComplex:
    """Cells present in the final set, sorted by (position, dim, cell id)."""

    shape: tuple[int, int]
    cell_ids: np.ndarray
    dims: np.ndarray
    positions: np.ndarray
    boundaries: tuple[tuple[int, ...], ...]  # in sorted-order indices
    labels: tuple[int, ...]

    def counts(self, upto: int | None = None) -> tuple[int, int, int]:
        sel = slice(None) if upto is None else self.positions <= upto
        d = self.dims[sel]
        return int((d == 0).sum()), int((d == 1).sum()), int((d == 2).sum())

    def euler_characteristic(self, upto: int | None = None) -> int:
        v, e, f = self.counts(upto)
        return v - e + f


def pixel_positions(sets: np.ndarray) -> np.ndarray:
    """First position at which each pixel is present; ``L`` if never."""
    L = len(sets)
    present = sets.any(axis=0)
    first = np.argmax(sets, axis=0)
    return np.where(present, first, L).astype(np.int64)


def build_complex(filt: OneParamFiltration) -> CubicalComplex:
    sets = filt.sets
    L = len(sets)
    H, W = sets.shape[1:]
    pos = pixel_positions(sets)
    pp = np.full((H + 2, W + 2), L, dtype=np.int64)
    pp[1:-1, 1:-1] = pos

    vpos = np.minimum.reduce([pp[:-1, :-1], pp[:-1, 1:], pp[1:, :-1], pp[1:, 1:]])
    hpos = np.minimum(pp[:-1, 1:-1], pp[1:, 1:-1])
    epos = np.minimum(pp[1:-1, :-1], pp[1:-1, 1:])

    nv, nh, ne = (H + 1) * (W + 1), (H + 1) * W, H * (W + 1)
    vid = np.arange(nv).reshape(H + 1, W + 1)
    hid = nv + np.arange(nh).reshape(H + 1, W)
    eid = nv + nh + np.arange(ne).reshape(H, W + 1)
    sid = nv + nh + ne + np.arange(H * W).reshape(H, W)

    h_bnd = np.stack([vid[:, :-1], vid[:, 1:]], axis=-1).reshape(-1, 2)
    e_bnd = np.stack([vid[:-1, :], vid[1:, :]], axis=-1).reshape(-1, 2)
    s_bnd = np.stack([hid[:-1, :], hid[1:, :], eid[:, :-1], eid[:, 1:]], axis=-1).reshape(-1, 4)

    ids = np.concatenate([vid.ravel(), hid.ravel(), eid.ravel(), sid.ravel()])
    dims = np.concatenate([np.zeros(nv), np.ones(nh + ne), np.full(H * W, 2)]).astype(np.int64)
    positions = np.concatenate([vpos.ravel(), hpos.ravel(), epos.ravel(), pos.ravel()])
    boundary_of = [()] * nv + [tuple(b) for b in h_bnd.tolist()] \
        + [tuple(b) for b in e_bnd.tolist()] + [tuple(b) for b in s_bnd.tolist()]

    keep = positions < L
    ids, dims, positions = ids[keep], dims[keep], positions[keep]
    order = np.lexsort((ids, dims, positions))
    ids, dims, positions = ids[order], dims[order], positions[order]
    index_of = np.full(nv + nh + ne + H * W, -1, dtype=np.int64)
    index_of[ids] = np.arange(len(ids))
    boundaries = tuple(tuple(int(index_of[f]) for f in boundary_of[c]) for c in ids.tolist())
    return CubicalComplex((H, W), ids, dims, positions, boundaries, filt.labels)


def compute_persistence(cx: CubicalComplex) -> PersistenceDiagram:
    """Z/2 column reduction with clearing, top dimension first."""
    n = len(cx.dims)
    dims = cx.dims.tolist()
    pos = cx.positions.tolist()
    low_of: dict[int, int] = {}
    reduced: dict[int, set[int]] = {}
    negative: set[int] = set()
    for d in (2, 1):
        for j in range(n):
            if dims[j] != d or j in low_of:
                continue  # cleared: a positive cell already paired
            col = set(cx.boundaries[j])
            while col:
                k = low_of.get(max(col))
                if k is None:
                    break
                col ^= reduced[k]
            if col:
                low_of[max(col)] = j
                reduced[j] = col
                negative.add(j)
    pairs = []
    for i, j in low_of.items():
        if pos[i] != pos[j]:
            pairs.append((dims[i], pos[i], pos[j]))
    for i in range(n):
        if i not in negative and i not in low_of:
            pairs.append((dims[i], pos[i], INF))
    return PersistenceDiagram(tuple(pairs), cx.labels)


def _group_pairs(prev_lab, prev_n, lab):
    """Unique (current component, previous component) incidences."""
    sel = prev_lab > 0
    key = np.unique(lab[sel].astype(np.int64) * (prev_n + 1) + prev_lab[sel])
    return key // (prev_n + 1), key % (prev_n + 1)


def _h0_levelwise(sets) -> list[tuple[int, int, float]]:
    pairs = []
    prev = None
    for m, mask in enumerate(sets):
        lab, count = ndimage.label(mask, structure=_EIGHT)
        birth = np.full(count + 1, m, dtype=np.int64)
        if prev is not None and prev[1] > 0:
            plab, pn, pbirth = prev
            cur, old = _group_pairs(plab, pn, lab)
            ob = pbirth[old]
            order = np.lexsort((old, ob, cur))
            cur, ob = cur[order], ob[order]
            first = np.r_[True, cur[1:] != cur[:-1]]
            birth[cur[first]] = ob[first]
            pairs.extend((0, int(b), m) for b in ob[~first])
        prev = (lab, count, birth)
    lab, count, birth = prev
    pairs.extend((0, int(b), INF) for b in birth[1:])
    return pairs


def _h1_levelwise(sets) -> list[tuple[int, int, float]]:
    """Holes of the black sets as bounded white components, time reversed."""
    L = len(sets)
    outer_age = L + 1
    pairs = []
    prev = None

    def death(rb):
        return INF if rb >= L - 1 else int(rb) + 1

    for m in range(L - 1, -1, -1):
        white = np.pad(~sets[m], 1, constant_values=True)
        lab, count = ndimage.label(white, structure=_FOUR)
        rb = np.full(count + 1, m, dtype=np.int64)
        rb[lab[0, 0]] = outer_age
        if prev is not None:
            plab, pn, prb = prev
            cur, old = _group_pairs(plab, pn, lab)
            ob = prb[old]
            order = np.lexsort((old, -ob, cur))
            cur, ob = cur[order], ob[order]
            first = np.r_[True, cur[1:] != cur[:-1]]
            rb[cur[first]] = np.maximum(rb[cur[first]], ob[first])
            pairs.extend((1, m + 1, death(b)) for b in ob[~first])
        prev = (lab, count, rb)
    lab, count, rb = prev
    outer = lab[0, 0]
    pairs.extend((1, 0, death(rb[c])) for c in range(1, count + 1) if c != outer)
    return pairs


def levelwise_persistence(filt: OneParamFiltration, dims: Iterable[int] = (0, 1)) -> PersistenceDiagram:
    dims = set(dims)
    pairs = []
    if 0 in dims:
        pairs += _h0_levelwise(filt.sets)
    if 1 in dims:
        pairs += _h1_levelwise(filt.sets)
    return PersistenceDiagram(tuple(pairs), filt.labels)


def persistence_diagram(filt: OneParamFiltration, method: str = "levelwise") -> PersistenceDiagram:
    if method == "reduction":
        return compute_persistence(build_complex(filt))
    if method == "levelwise":
        return levelwise_persistence(filt)
    raise ValueError(f"unknown method {method!r}")


# --- Betti numbers -----------------------------------------------------------

def betti_at(diagram: PersistenceDiagram, m: int) -> BettiPair:
    """Count pairs with ``b <= m < d`` in each dimension."""
    counts = [0, 0]
    for k, b, d in diagram.pairs:
        if k < 2 and b <= m < d:
            counts[k] += 1
    return BettiPair(*counts)


def betti_numbers(mask: np.ndarray) -> BettiPair:
    """Betti numbers of a black set via component labelling."""
    mask = np.asarray(mask, dtype=bool)
    _, b0 = ndimage.label(mask, structure=_EIGHT)
    _, white = ndimage.label(np.pad(~mask, 1, constant_values=True), structure=_FOUR)
    return BettiPair(int(b0), int(white) - 1)


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def oracle_betti(mask: np.ndarray) -> BettiPair:
    """Independent check: union-find for beta0, Euler characteristic for beta1.

    Pure Python by design; only meant for small test images.
    """
    mask = np.asarray(mask, dtype=bool)
    black = {(int(r), int(c)) for r, c in zip(*np.nonzero(mask))}
    uf = _UnionFind()
    for p in black:
        uf.add(p)
    for r, c in black:
        for dr, dc in ((0, 1), (1, -1), (1, 0), (1, 1)):
            q = (r + dr, c + dc)
            if q in black:
                uf.union((r, c), q)
    b0 = len({uf.find(p) for p in black})
    verts, edges = set(), set()
    for r, c in black:
        verts.update({(r, c), (r + 1, c), (r, c + 1), (r + 1, c + 1)})
        edges.update({("h", r, c), ("h", r + 1, c), ("v", r, c), ("v", r, c + 1)})
    chi = len(verts) - len(edges) + len(black)
    return BettiPair(b0, b0 - chi)


# --- decompositions used by the denoiser --------------------------------------

def decompose_closing(diagram: PersistenceDiagram):
    """Split P_0 of a closing filtration (labels -n..0).

    Returns ``(essential, rest)``: essential components present in the
    original set, reported as ``(birth_label, 0)``, and the finite merge
    pairs ``(birth_label, death_label)``.
    """
    last = diagram.labels[-1]
    essential = [(diagram.label(b), last) for b, d in diagram.dim(0) if d == INF]
    rest = [(diagram.label(b), diagram.label(d)) for b, d in diagram.dim(0) if d != INF]
    return essential, rest


def decompose_opening(diagram: PersistenceDiagram):
    """Split P_1 of an opening filtration into birth-0 holes and the rest."""
    first = diagram.labels[0]
    born = [(diagram.label(b), diagram.label(d)) for b, d in diagram.dim(1)
            if diagram.label(b) == first]
    rest = [(diagram.label(b), diagram.label(d)) for b, d in diagram.dim(1)
            if diagram.label(b) != first]
    return born, rest


def gap_scale(scales: Iterable[float]):
    """Left end of the widest gap between consecutive distinct scales.

    Ties go to the smallest scale. None when fewer than two distinct values.
    """
    vals = sorted({s for s in scales if s != INF})
    if len(vals) < 2:
        return None
    gaps = [b - a for a, b in zip(vals, vals[1:])]
    return vals[gaps.index(max(gaps))]


# --- diagram CSV ----------------------------------------------------------------

def _fmt(x):
    return "inf" if x == INF else str(int(x))


def write_diagram_csv(diagram: PersistenceDiagram, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["dim", "birth_label", "death_label"])
        for k, b, d in diagram.labeled():
            w.writerow([k, _fmt(b), _fmt(d)])


def read_diagram_csv(path) -> list[tuple[int, int, float]]:
    out = []
    with open(path, newline="") as fh:
        r = csv.DictReader(fh)
        if r.fieldnames != ["dim", "birth_label", "death_label"]:
            raise ValueError(f"unexpected header {r.fieldnames}")
        for row in r:
            d = INF if row["death_label"] == "inf" else int(row["death_label"])
            out.append((int(row["dim"]), int(row["birth_label"]), d))
    return out
