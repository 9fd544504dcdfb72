"""One-parameter and multiparameter filtrations built from morphology.

A filtration is stored as a stack of boolean masks (one per index) so that
persistence can access every level directly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import morphology as mm
from .image import as_image, check_same_grid, is_binary, threshold

MultiIndex = tuple[int, ...]


class NestingError(ValueError):
    """A sequence of sets that should be nested is not."""


class UnsupportedFamilyError(ValueError):
    """Opening/closing based filtrations need the nested square family."""


class OrderError(ValueError):
    pass


@dataclass(frozen=True)
class OneParamFiltration:
    sets: np.ndarray  # (L, H, W) bool
    labels: tuple[int, ...]
    source: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        sets = np.asarray(self.sets, dtype=bool)
        if sets.ndim == 2:
            sets = sets[None]
        if sets.ndim != 3 or len(sets) == 0:
            raise ValueError("sets must be a non-empty (L, H, W) stack")
        labels = tuple(int(x) for x in self.labels)
        if len(labels) != len(sets):
            raise ValueError("one label per set is required")
        if any(a >= b for a, b in zip(labels, labels[1:])):
            raise ValueError("labels must be strictly increasing")
        bad = first_nesting_violation(sets)
        if bad is not None:
            raise NestingError(f"set at position {bad} is not contained in the next one")
        sets.setflags(write=False)
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.sets)

    @property
    def shape(self):
        return self.sets.shape[1:]

    def position(self, label: int) -> int:
        return self.labels.index(label)

    def at(self, label: int) -> np.ndarray:
        return self.sets[self.position(label)]


def first_nesting_violation(sets) -> int | None:
    for k in range(len(sets) - 1):
        if np.any(sets[k] & ~sets[k + 1]):
            return k
    return None


def is_alternating(u: Sequence[int]) -> bool:
    return all(a * b <= 0 for a, b in zip(u, u[1:]))


def index_le(u: Sequence[int], v: Sequence[int]) -> bool:
    """Componentwise order on Z^k."""
    return len(u) == len(v) and all(a <= b for a, b in zip(u, v))


# --- one-parameter constructions -------------------------------------------

def sublevel_filtration(g, thresholds: Sequence[int]) -> OneParamFiltration:
    g = as_image(g)
    ts = [int(t) for t in thresholds]
    if not ts:
        raise ValueError("at least one threshold is required")
    if any(a >= b for a, b in zip(ts, ts[1:])):
        raise OrderError("thresholds must be strictly increasing")
    sets = np.stack([g <= t for t in ts])
    return OneParamFiltration(sets, tuple(range(len(ts))),
                              {"kind": "sublevel", "thresholds": ts})


_KINDS = {
    # kind: (operator, grows with scale)
    "erosion": (mm.erode, True),
    "dilation": (mm.dilate, False),
    "opening": (mm.opening, True),
    "closing": (mm.closing, False),
    "wth": (mm.white_top_hat, False),
    "bth": (mm.black_top_hat, False),
    "sth": (mm.self_complementary_top_hat, False),
}
SQUARE_ONLY = {"opening", "closing", "wth", "bth", "sth"}


def _check_binary(f):
    f = as_image(f)
    if not is_binary(f):
        raise ValueError("morphological filtrations are defined for binary images")
    return f


def _check_family(kind, ses: mm.SESequence):
    if kind in SQUARE_ONLY and not ses.is_square_family():
        raise UnsupportedFamilyError(
            f"{kind} filtrations are only nested for the square family")


def morph_filtration(f, kind: str, ses: mm.SESequence) -> OneParamFiltration:
    """Level sets ``op_{B_i}(f)^{-1}(0)`` listed smallest first.

    Erosion and opening are indexed 0..n; dilation, closing and the three
    top-hats are indexed -n..0 with label ``-i`` holding scale ``i``.
    """
    if kind not in _KINDS:
        raise ValueError(f"unknown filtration kind {kind!r}")
    f = _check_binary(f)
    _check_family(kind, ses)
    op, grows = _KINDS[kind]
    masks = [op(f, B) == 0 for B in ses]
    n = ses.n
    if grows:
        labels = tuple(range(n + 1))
    else:
        masks = masks[::-1]
        labels = tuple(range(-n, 1))
    return OneParamFiltration(np.stack(masks), labels,
                              {"kind": kind, "se_max": n})


PAIRS = {"erosion/dilation": ("erosion", "dilation"),
         "opening/closing": ("opening", "closing")}


def extended_filtration(f, pair: str, ses: mm.SESequence) -> OneParamFiltration:
    """Contracting side at -n..-1, f^{-1}(0) at 0, expanding side at 1..n."""
    if pair not in PAIRS:
        raise ValueError(f"unknown pair {pair!r}")
    grow_kind, shrink_kind = PAIRS[pair]
    low = morph_filtration(f, shrink_kind, ses)
    high = morph_filtration(f, grow_kind, ses)
    sets = np.concatenate([low.sets, high.sets[1:]])
    n = ses.n
    return OneParamFiltration(sets, tuple(range(-n, n + 1)),
                              {"kind": "extended", "pair": pair, "se_max": n})


# --- the M operator and multiparameter families -----------------------------

Op = Callable[[np.ndarray, int], np.ndarray]


@dataclass(frozen=True)
class OperatorPair:
    """Indexed families E_i (applied for i >= 0) and D_i (for i < 0)."""

    name: str
    E: Op
    D: Op
    n: int

    @classmethod
    def from_ops(cls, name, e_op, d_op, ses: mm.SESequence) -> "OperatorPair":
        return cls(name, lambda g, i: e_op(g, ses[i]), lambda g, i: d_op(g, ses[i]), ses.n)

    @classmethod
    def opening_closing(cls, ses: mm.SESequence) -> "OperatorPair":
        if not ses.is_square_family():
            raise UnsupportedFamilyError("opening/closing pair needs the square family")
        return cls.from_ops("opening/closing", mm.opening, mm.closing, ses)

    @classmethod
    def erosion_dilation(cls, ses: mm.SESequence) -> "OperatorPair":
        return cls.from_ops("erosion/dilation", mm.erode, mm.dilate, ses)

    @classmethod
    def top_hats(cls, ses: mm.SESequence) -> "OperatorPair":
        # does not satisfy the axioms; used as a negative control
        return cls.from_ops("wth/bth", mm.white_top_hat, mm.black_top_hat, ses)


def apply_M(g, i: int, pair: OperatorPair) -> np.ndarray:
    if abs(i) > pair.n:
        raise ValueError(f"index {i} outside 0..±{pair.n}")
    if i >= 0:
        return pair.E(g, i)
    return pair.D(g, -i)


def apply_M_multi(g, u: Sequence[int], pair: OperatorPair) -> np.ndarray:
    """(M_{u_1} ∘ ... ∘ M_{u_k})(g): the last entry is applied first."""
    if len(u) == 0:
        raise ValueError("multi-index must have at least one entry")
    out = as_image(g)
    for i in reversed(u):
        out = apply_M(out, i, pair)
    return out


def level_set_multi(g, u: Sequence[int], pair: OperatorPair) -> np.ndarray:
    return apply_M_multi(g, u, pair) == 0


def alternating_indices(n: int, k: int) -> list[MultiIndex]:
    return [u for u in itertools.product(range(-n, n + 1), repeat=k) if is_alternating(u)]


@dataclass
class MultifiltrationReport:
    pairs_checked: int = 0
    inclusion_violations: list[tuple[MultiIndex, MultiIndex]] = field(default_factory=list)
    axiom_witnesses: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.inclusion_violations and not self.axiom_witnesses


def comparable_pairs(indices: Sequence[MultiIndex]):
    for u in indices:
        for v in indices:
            if u != v and index_le(u, v):
                yield u, v


def check_axioms(pair: OperatorPair, images: Iterable[np.ndarray],
                 rng: np.random.Generator) -> list[str]:
    """Spot-check increasing (A1), absorption order (A2) and identity (A3).

    For each image g a second image f <= g is drawn by lowering random
    pixels. Returns one description per violated instance.
    """
    out = []
    for g in images:
        g = as_image(g)
        f = np.where(rng.random(g.shape) < 0.3, 0, g).astype(g.dtype)
        for name, fam in (("E", pair.E), ("D", pair.D)):
            if not np.array_equal(fam(g, 0), g):
                out.append(f"A3: {name}_0(g) != g")
            for i in range(pair.n + 1):
                if not np.all(fam(f, i) <= fam(g, i)):
                    out.append(f"A1: {name}_{i} not increasing")
        for i in range(pair.n):
            if not np.all(pair.E(g, i + 1) <= pair.E(g, i)):
                out.append(f"A2: E_{i + 1}(g) > E_{i}(g)")
            if not np.all(pair.D(g, i) <= pair.D(g, i + 1)):
                out.append(f"A2: D_{i}(g) > D_{i + 1}(g)")
    return out


def verify_multifiltration(g, A: Iterable[Sequence[int]], pair: OperatorPair,
                           sample: int = 0, seed: int = 0,
                           axiom_images: int = 4) -> MultifiltrationReport:
    """Check X_u ⊆ X_v for comparable u <= v in A, plus axiom spot-checks.

    ``sample=0`` checks every comparable pair; otherwise that many pairs are
    drawn at random. Axioms are spot-checked on g and ``axiom_images``
    random binary images of the same shape.
    """
    g = as_image(g)
    indices = sorted({tuple(int(x) for x in u) for u in A})
    rng = np.random.default_rng(seed)
    pairs = list(comparable_pairs(indices))
    if sample and sample < len(pairs):
        pick = rng.choice(len(pairs), size=sample, replace=False)
        pairs = [pairs[i] for i in sorted(pick)]
    cache: dict[MultiIndex, np.ndarray] = {}

    def X(u):
        if u not in cache:
            cache[u] = level_set_multi(g, u, pair)
        return cache[u]

    report = MultifiltrationReport()
    for u, v in pairs:
        report.pairs_checked += 1
        if np.any(X(u) & ~X(v)):
            report.inclusion_violations.append((u, v))
    images = [g] + [rng.integers(0, 2, size=g.shape).astype(g.dtype)
                    for _ in range(axiom_images)]
    report.axiom_witnesses = check_axioms(pair, images, rng)
    return report


@dataclass(frozen=True)
class MultiFiltration:
    """Sets keyed by index tuples under the componentwise order."""

    sets: Mapping[tuple[int, ...], np.ndarray]
    source: dict = field(default_factory=dict, compare=False)

    def __getitem__(self, key):
        return self.sets[tuple(key)]

    def __contains__(self, key):
        return tuple(key) in self.sets

    def violations(self) -> list[tuple[tuple, tuple]]:
        keys = list(self.sets)
        return [(u, v) for u, v in comparable_pairs(keys)
                if np.any(self.sets[u] & ~self.sets[v])]


def multifiltration(g, A: Iterable[Sequence[int]], pair: OperatorPair) -> MultiFiltration:
    sets = {tuple(u): level_set_multi(g, u, pair) for u in A}
    return MultiFiltration(sets, {"kind": "multi", "pair": pair.name})


def grayscale_grid_filtration(g, u_axis: Sequence[Sequence[int]],
                              thresholds: Sequence[int], pair: OperatorPair,
                              route: str = "threshold-last") -> MultiFiltration:
    """X_{t,u} = M_u(g)_t^{-1}(0), keyed by ``(t, *u)``.

    ``route="threshold-first"`` computes M_u(g_t) instead; the two agree
    whenever the operators commute with thresholding.
    """
    g = as_image(g)
    ts = [int(t) for t in thresholds]
    if any(a >= b for a, b in zip(ts, ts[1:])):
        raise OrderError("thresholds must be strictly increasing")
    sets = {}
    for u in u_axis:
        u = tuple(int(x) for x in u)
        if route == "threshold-last":
            mu = apply_M_multi(g, u, pair)
            for t in ts:
                sets[(t, *u)] = mu <= t
        elif route == "threshold-first":
            for t in ts:
                sets[(t, *u)] = apply_M_multi(threshold(g, t), u, pair) == 0
        else:
            raise ValueError(f"unknown route {route!r}")
    return MultiFiltration(sets, {"kind": "grid", "pair": pair.name, "thresholds": ts})


def path_filtration(family: MultiFiltration | Mapping, path: Sequence[Sequence[int]]) -> OneParamFiltration:
    """Restrict a multifiltration to a nondecreasing path of indices."""
    sets_by_key = family.sets if isinstance(family, MultiFiltration) else family
    keys = [tuple(int(x) for x in p) for p in path]
    if not keys:
        raise ValueError("empty path")
    for a, b in zip(keys, keys[1:]):
        if not index_le(a, b):
            raise OrderError(f"path is not nondecreasing at {a} -> {b}")
    missing = [k for k in keys if k not in sets_by_key]
    if missing:
        raise KeyError(f"indices not in family: {missing}")
    first = sets_by_key[keys[0]]
    for k in keys[1:]:
        check_same_grid(first, sets_by_key[k])
    sets = np.stack([sets_by_key[k] for k in keys])
    return OneParamFiltration(sets, tuple(range(len(keys))),
                              {"kind": "path", "path": [list(k) for k in keys]})
