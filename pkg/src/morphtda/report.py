"""CSV tables and SVG persistence plots."""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path

from .persistence import PersistenceDiagram

TABLE_COLUMNS = [
    "density", "trials",
    "noisy_iou_mean", "noisy_iou_std", "iou_mean", "iou_std",
    "noisy_beta0_mean", "noisy_beta0_std", "beta0_mean", "beta0_std",
    "noisy_beta1_mean", "noisy_beta1_std", "beta1_mean", "beta1_std",
    "modal_beta0", "modal_beta1", "modal_fraction",
]

COLORS = {0: "#1f77b4", 1: "#d62728", 2: "#2ca02c"}


def table_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_COLUMNS)
    for row in rows:
        w.writerow([_cell(row[c]) for c in TABLE_COLUMNS])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, float):
        return f"{v:.4f}"
    return str(v)


def emit_table_csv(rows: list[dict], path) -> None:
    Path(path).write_text(table_csv(rows))


def read_table_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(fh)]


def diagram_svg(diagram: PersistenceDiagram, size: int = 320, margin: int = 40) -> str:
    """Birth on x, death on y, both in filtration labels; ``inf`` on a top row."""
    lo, hi = (min(diagram.labels), max(diagram.labels)) if diagram.labels else (0, 0)
    span = max(hi - lo + 1, 1)  # room for the inf row one step above hi
    plot = size - 2 * margin

    def sx(v):
        return margin + (v - lo) / span * plot

    def sy(v):
        return size - margin - (v - lo) / span * plot

    inf_y = sy(hi + 1)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="{margin}" y="{margin}" width="{plot}" height="{plot}" '
        f'fill="none" stroke="black"/>',
        f'<line class="diagonal" x1="{sx(lo):.2f}" y1="{sy(lo):.2f}" '
        f'x2="{sx(hi + 1):.2f}" y2="{sy(hi + 1):.2f}" stroke="gray"/>',
        f'<line class="inf-row" x1="{margin}" y1="{inf_y:.2f}" x2="{size - margin}" '
        f'y2="{inf_y:.2f}" stroke="gray" stroke-dasharray="4 3"/>',
        f'<text x="{margin - 30}" y="{inf_y + 4:.2f}" font-size="12">inf</text>',
        f'<text x="{size / 2}" y="{size - 8}" font-size="12" text-anchor="middle">birth</text>',
        f'<text x="12" y="{size / 2}" font-size="12" '
        f'transform="rotate(-90 12 {size / 2})" text-anchor="middle">death</text>',
    ]
    for k, b, d in diagram.labeled():
        y = inf_y if d == math.inf else sy(d)
        parts.append(f'<circle class="pt dim{k}" data-birth="{b}" data-death="{d}" '
                     f'cx="{sx(b):.2f}" cy="{y:.2f}" r="4" '
                     f'fill="{COLORS.get(k, "black")}" fill-opacity="0.7"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_diagram_svg(diagram: PersistenceDiagram, path) -> None:
    Path(path).write_text(diagram_svg(diagram))
