"""Persistence-guided alternating closing/opening denoiser.

Each round closes the current image by the smallest scale that removes a
black component, then opens it by the smallest scale that fills a hole.
Scales are read off persistence diagrams of the closing and opening
filtrations of the current image. A half-step whose selected scale exceeds
``size_tol`` is skipped; the loop stops once both selections exceed it on
the same image. With ``strict=True`` the first such selection stops the
loop, leaving the other half-step unexamined.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import morphology as mm
from .filtration import morph_filtration
from .image import N_LEVELS, as_image, is_binary, sum_binary_levels, threshold
from .persistence import decompose_closing, decompose_opening, levelwise_persistence

STOP_REASONS = ("size-tol-exceeded-closing", "size-tol-exceeded-opening",
                "max-iter", "degenerate-image")


@dataclass(frozen=True)
class DenoiseParams:
    size_tol: int = 5
    max_iter: int = 10
    se_max: int | None = None  # defaults to size_tol + 1
    open_first: bool = False
    strict: bool = False

    def __post_init__(self):
        if self.se_max is None:
            object.__setattr__(self, "se_max", self.size_tol + 1)
        if self.size_tol < 0:
            raise ValueError("size_tol must be >= 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.se_max <= self.size_tol:
            raise ValueError("se_max must exceed size_tol")


@dataclass
class DenoiseTrace:
    sequence: list[int] = field(default_factory=list)  # most recent first
    steps: list[dict] = field(default_factory=list)     # in application order
    iterations_run: int = 0
    stop_reason: str = "max-iter"

    def to_dict(self) -> dict:
        return asdict(self)


def closing_scale(f: np.ndarray, ses: mm.SESequence) -> float:
    """Smallest |birth| among components of f that survive to label 0."""
    dgm = levelwise_persistence(morph_filtration(f, "closing", ses), dims=(0,))
    essential, _ = decompose_closing(dgm)
    return min((abs(b) for b, _ in essential), default=math.inf)


def opening_scale(f: np.ndarray, ses: mm.SESequence) -> float:
    """Smallest finite death among holes already present in f."""
    dgm = levelwise_persistence(morph_filtration(f, "opening", ses), dims=(1,))
    born, _ = decompose_opening(dgm)
    return min((d for _, d in born if d != math.inf), default=math.inf)


def _degenerate(f):
    return bool(f.min() == f.max())


def _close_step(x, ses, tol, trace):
    i_c = closing_scale(x, ses)
    if i_c > tol:
        trace.steps.append({"op": "close", "selected": _json_num(i_c), "applied": None})
        return None
    scale = int(i_c) + 1
    _record(trace, -scale)
    trace.steps.append({"op": "close", "selected": int(i_c), "applied": scale})
    return mm.closing(x, ses[scale])


def _open_step(x, ses, tol, trace):
    i_o = opening_scale(x, ses)
    if i_o > tol:
        trace.steps.append({"op": "open", "selected": _json_num(i_o), "applied": None})
        return None
    scale = int(i_o)
    _record(trace, scale)
    trace.steps.append({"op": "open", "selected": scale, "applied": scale})
    return mm.opening(x, ses[scale])


def _record(trace, entry):
    # Two closings (or openings) in a row collapse to the larger one, since
    # C_b(C_a(f)) = C_b(f) for nested squares a <= b; this keeps the signs
    # of the sequence alternating.
    seq = trace.sequence
    if seq and seq[0] * entry > 0:
        seq[0] = entry if abs(entry) > abs(seq[0]) else seq[0]
    else:
        seq.insert(0, entry)


def _json_num(x):
    return "inf" if x == math.inf else int(x)


def denoise_binary(f, params: DenoiseParams = DenoiseParams()):
    """Run the alternating denoiser on a binary image.

    Returns the denoised image and a ``DenoiseTrace``. Closing scale i_c
    is applied as B_{i_c + 1}: a component born at label -i_c survives
    closing by B_{i_c} and is only removed one scale later.
    """
    x = as_image(f)
    if not is_binary(x):
        raise ValueError("denoise_binary needs a binary image")
    ses = mm.square_se_sequence(params.se_max)
    tol = params.size_tol
    trace = DenoiseTrace()
    half_steps = [("closing", _close_step), ("opening", _open_step)]
    if params.open_first:
        half_steps.reverse()
    failed = 0  # consecutive half-steps skipped on the current image
    for _ in range(params.max_iter):
        trace.iterations_run += 1
        for name, step in half_steps:
            if _degenerate(x):
                trace.stop_reason = "degenerate-image"
                return x, trace
            y = step(x, ses, tol, trace)
            if y is None:
                failed += 1
                if params.strict or failed == 2:
                    trace.stop_reason = f"size-tol-exceeded-{name}"
                    return x, trace
            else:
                failed = 0
                x = y
    trace.stop_reason = "max-iter"
    return x, trace


def _denoise_level(args):
    level, params = args
    out, _ = denoise_binary(level, params)
    return out


def denoise_gray(g, params: DenoiseParams = DenoiseParams(), workers: int = 1) -> np.ndarray:
    """Denoise every threshold level independently and sum the results.

    Identical threshold levels are denoised once.
    """
    g = as_image(g)
    if g.max() >= N_LEVELS:
        raise ValueError("grayscale denoising expects 8-bit values")
    levels = [threshold(g, t) for t in range(N_LEVELS)]
    unique: dict[bytes, int] = {}
    todo = []
    for lv in levels:
        key = lv.tobytes()
        if key not in unique:
            unique[key] = len(todo)
            todo.append(lv)
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(workers) as ex:
            done = list(ex.map(_denoise_level, [(lv, params) for lv in todo]))
    else:
        done = [_denoise_level((lv, params)) for lv in todo]
    out = sum_binary_levels([done[unique[lv.tobytes()]] for lv in levels])
    return out.astype(g.dtype)


def denoise_rgb(G, params: DenoiseParams = DenoiseParams(), workers: int = 1) -> np.ndarray:
    """Channelwise grayscale denoising of an (H, W, 3) image or a triple."""
    if isinstance(G, (list, tuple)):
        G = np.stack([np.asarray(c) for c in G], axis=-1)
    G = np.asarray(G)
    if G.ndim != 3 or G.shape[2] != 3:
        raise ValueError("expected an (H, W, 3) image")
    return np.stack([denoise_gray(G[..., c], params, workers) for c in range(3)], axis=-1)
