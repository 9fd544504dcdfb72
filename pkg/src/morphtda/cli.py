"""Command line entry point: ``morphtda <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import morphology as mm
from .bench import ExperimentConfig, run_benchmark, traces_json
from .denoise import DenoiseParams, denoise_binary, denoise_gray, denoise_rgb
from .filtration import PAIRS, OneParamFiltration, extended_filtration, morph_filtration
from .netpbm import load_binary, load_image, save_binary, save_image
from .noise import PRNG, NoiseSpec, add_salt_pepper
from .persistence import persistence_diagram, write_diagram_csv
from .report import emit_diagram_svg, emit_table_csv

MANIFEST = "manifest.json"
EXTENDED = {"extended-" + k.replace("/", "-"): k for k in PAIRS}


def parse_se(text: str) -> mm.StructuringElement:
    kind, _, arg = text.partition(":")
    if kind == "square" and arg.isdigit():
        return mm.square(int(arg))
    if kind == "file" and arg:
        return mm.StructuringElement.from_file(arg)
    raise argparse.ArgumentTypeError(f"bad structuring element {text!r}; use square:<i> or file:<path>")


def _load_any(path):
    img = load_image(path)
    if img.ndim == 2 and np.all((img == 0) | (img == 255)):
        return img, True
    return img, False


def cmd_morph(args):
    img, binary = _load_any(args.inp)
    if img.ndim != 2:
        raise SystemExit("morph expects a single-channel image")
    f = (img == 255).astype(np.uint8) if binary else img
    out = mm.OPERATORS[args.op](f, args.se)
    if binary:
        save_binary(out, args.out)
    else:
        save_image(out.astype(np.uint8), args.out)


def cmd_filtrate(args):
    f = load_binary(args.inp)
    ses = mm.square_se_sequence(args.se_max)
    if args.kind in EXTENDED:
        filt = extended_filtration(f, EXTENDED[args.kind], ses)
    else:
        filt = morph_filtration(f, args.kind, ses)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for label, mask in zip(filt.labels, filt.sets):
        name = f"level_{len(files):03d}.pgm"
        save_binary((~mask).astype(np.uint8), out / name)  # members are black
        files.append(name)
    manifest = {"labels": list(filt.labels), "files": files, "source": filt.source,
                "input": str(args.inp)}
    (out / MANIFEST).write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")


def load_filtration_dir(path) -> OneParamFiltration:
    path = Path(path)
    manifest = json.loads((path / MANIFEST).read_text())
    sets = np.stack([load_binary(path / name) == 0 for name in manifest["files"]])
    return OneParamFiltration(sets, tuple(manifest["labels"]), manifest.get("source", {}))


def cmd_persist(args):
    filt = load_filtration_dir(args.in_dir)
    dgm = persistence_diagram(filt, method=args.method)
    write_diagram_csv(dgm, args.out)
    if args.svg:
        emit_diagram_svg(dgm, args.svg)


def cmd_denoise(args):
    params = DenoiseParams(size_tol=args.size_tol, max_iter=args.max_iter,
                           open_first=args.open_first, strict=args.strict)
    if args.mode == "binary":
        f = load_binary(args.inp)
        out, trace = denoise_binary(f, params)
        save_binary(out, args.out)
        if args.trace:
            doc = {"params": vars_params(params), **trace.to_dict()}
            Path(args.trace).write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
        return
    if args.trace:
        raise SystemExit("--trace is only available in binary mode")
    img = load_image(args.inp)
    if args.mode == "gray":
        if img.ndim != 2:
            raise SystemExit("gray mode expects a PGM image")
        save_image(denoise_gray(img, params, args.workers), args.out)
    else:
        if img.ndim != 3:
            raise SystemExit("rgb mode expects a PPM image")
        save_image(denoise_rgb(img, params, args.workers), args.out, "ppm")


def vars_params(p: DenoiseParams) -> dict:
    return {"size_tol": p.size_tol, "max_iter": p.max_iter, "se_max": p.se_max,
            "open_first": p.open_first, "strict": p.strict}


def cmd_noise(args):
    img, binary = _load_any(args.inp)
    spec = NoiseSpec(args.density, args.seed)
    if binary:
        save_binary(add_salt_pepper((img == 255).astype(np.uint8), spec), args.out)
    else:
        fmt = "ppm" if img.ndim == 3 else "pgm"
        save_image(add_salt_pepper(img, spec), args.out, fmt)


def cmd_bench(args):
    cfg = ExperimentConfig.from_json(args.config)
    report = run_benchmark(cfg, workers=args.workers)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    emit_table_csv(report.rows(), out / "table.csv")
    (out / "traces.json").write_text(traces_json(report))
    print(f"wrote {out / 'table.csv'} and {out / 'traces.json'} (prng {PRNG})")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="morphtda")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("morph", help="apply a morphological operator")
    s.add_argument("--op", required=True, choices=sorted(mm.OPERATORS))
    s.add_argument("--se", required=True, type=parse_se)
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_morph)

    s = sub.add_parser("filtrate", help="write a morphological filtration of a binary image")
    s.add_argument("--kind", required=True,
                   choices=["erosion", "dilation", "opening", "closing", "wth", "bth", "sth",
                            *EXTENDED])
    s.add_argument("--se-max", type=int, required=True)
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out-dir", required=True)
    s.set_defaults(func=cmd_filtrate)

    s = sub.add_parser("persist", help="persistence diagram of a filtration directory")
    s.add_argument("--in-dir", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--svg")
    s.add_argument("--method", choices=["levelwise", "reduction"], default="reduction")
    s.set_defaults(func=cmd_persist)

    s = sub.add_parser("denoise", help="persistence-guided salt-and-pepper removal")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--mode", choices=["binary", "gray", "rgb"], default="binary")
    s.add_argument("--size-tol", type=int, default=5)
    s.add_argument("--max-iter", type=int, default=10)
    s.add_argument("--open-first", action="store_true")
    s.add_argument("--strict", action="store_true",
                   help="stop at the first selection above the size tolerance")
    s.add_argument("--trace")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_denoise)

    s = sub.add_parser("noise", help="add salt-and-pepper noise")
    s.add_argument("--density", type=float, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_noise)

    s = sub.add_parser("bench", help="run a noise-density benchmark sweep")
    s.add_argument("--config", required=True)
    s.add_argument("--out-dir", required=True)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ValueError, OSError) as exc:
        print(f"morphtda: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
