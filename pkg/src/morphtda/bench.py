"""Noise-density sweep: noisy vs denoised IOU and Betti numbers."""
from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .denoise import DenoiseParams, DenoiseTrace, denoise_binary
from .metrics import iou
from .netpbm import load_binary
from .noise import PRNG, NoiseSpec, add_salt_pepper
from .persistence import BettiPair, betti_numbers
from .synthetic import make_synthetic_truth

DEFAULT_DENSITIES = tuple(round(0.1 * k, 1) for k in range(1, 11))


@dataclass(frozen=True)
class ExperimentConfig:
    densities: tuple[float, ...] = DEFAULT_DENSITIES
    trials: int = 100
    params: DenoiseParams = DenoiseParams()
    truth: str = "synthetic"
    master_seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(not 0 <= d <= 1 for d in self.densities):
            raise ValueError("densities must lie in [0, 1]")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {"densities", "trials", "size_tol", "max_iter", "se_max",
                 "truth", "master_seed", "open_first", "strict"}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        params = DenoiseParams(size_tol=d.get("size_tol", 5), max_iter=d.get("max_iter", 10),
                               se_max=d.get("se_max"), open_first=d.get("open_first", False),
                               strict=d.get("strict", False))
        return cls(densities=tuple(float(x) for x in d.get("densities", DEFAULT_DENSITIES)),
                   trials=int(d.get("trials", 100)), params=params,
                   truth=d.get("truth", "synthetic"), master_seed=int(d.get("master_seed", 0)))

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def load_truth(self) -> np.ndarray:
        if self.truth == "synthetic":
            return make_synthetic_truth()
        return load_binary(self.truth)


@dataclass
class TrialResult:
    density: float
    trial: int
    trial_seed: int
    noisy_iou: float
    iou: float
    noisy_betti: BettiPair
    betti: BettiPair
    trace: DenoiseTrace


@dataclass
class BenchReport:
    config: ExperimentConfig
    trials: list[TrialResult] = field(default_factory=list)

    def by_density(self, density) -> list[TrialResult]:
        return [t for t in self.trials if t.density == density]

    def rows(self) -> list[dict]:
        out = []
        for dens in self.config.densities:
            ts = self.by_density(dens)
            row = {"density": dens, "trials": len(ts)}
            cols = {
                "noisy_iou": [t.noisy_iou for t in ts],
                "iou": [t.iou for t in ts],
                "noisy_beta0": [t.noisy_betti.beta0 for t in ts],
                "beta0": [t.betti.beta0 for t in ts],
                "noisy_beta1": [t.noisy_betti.beta1 for t in ts],
                "beta1": [t.betti.beta1 for t in ts],
            }
            for name, vals in cols.items():
                row[f"{name}_mean"], row[f"{name}_std"] = _mean_std(vals)
            (mode, count), = Counter(tuple(t.betti) for t in ts).most_common(1)
            row["modal_beta0"], row["modal_beta1"] = mode
            row["modal_fraction"] = count / len(ts)
            out.append(row)
        return out


def _mean_std(vals):
    a = np.asarray(vals, dtype=float)
    return float(a.mean()), float(a.std(ddof=1)) if len(a) > 1 else 0.0


def trial_seed(master_seed: int, density_index: int, trial: int) -> int:
    """64-bit seed for one trial, derived from the master seed by counter."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(density_index, trial))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def run_trial(truth, density, trial, seed, params) -> TrialResult:
    noisy = add_salt_pepper(truth, NoiseSpec(density, seed))
    out, trace = denoise_binary(noisy, params)
    ref = truth == 0
    return TrialResult(
        density=density, trial=trial, trial_seed=seed,
        noisy_iou=iou(ref, noisy == 0), iou=iou(ref, out == 0),
        noisy_betti=betti_numbers(noisy == 0), betti=betti_numbers(out == 0),
        trace=trace,
    )


def _run(args):
    return run_trial(*args)


def run_benchmark(config: ExperimentConfig, workers: int = 1) -> BenchReport:
    truth = config.load_truth()
    jobs = [(truth, dens, k, trial_seed(config.master_seed, di, k), config.params)
            for di, dens in enumerate(config.densities) for k in range(config.trials)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_run, jobs, chunksize=8))
    else:
        results = [_run(j) for j in jobs]
    results.sort(key=lambda t: (config.densities.index(t.density), t.trial))
    return BenchReport(config, results)


def traces_json(report: BenchReport) -> str:
    cfg = report.config
    doc = {
        "prng": PRNG,
        "master_seed": cfg.master_seed,
        "params": {"size_tol": cfg.params.size_tol, "max_iter": cfg.params.max_iter,
                   "se_max": cfg.params.se_max, "open_first": cfg.params.open_first,
                   "strict": cfg.params.strict},
        "trials": [
            {"density": t.density, "trial": t.trial, "seed": t.trial_seed,
             "iou": round(t.iou, 6), "betti": list(t.betti), **t.trace.to_dict()}
            for t in report.trials
        ],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"
