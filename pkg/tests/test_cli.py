import json
import subprocess
import sys

import numpy as np
import pytest

from conftest import blob_speck_hole
from morphtda import morphology as mm
from morphtda.cli import load_filtration_dir, main
from morphtda.filtration import morph_filtration
from morphtda.netpbm import load_binary, load_image, save_binary, save_image
from morphtda.persistence import persistence_diagram, read_diagram_csv


@pytest.fixture
def micro(tmp_path):
    f, clean = blob_speck_hole()
    save_binary(f, tmp_path / "in.pgm")
    return tmp_path, f, clean


def test_morph_binary_and_gray(micro, rng):
    d, f, _ = micro
    assert main(["morph", "--op", "close", "--se", "square:1",
                 "--in", str(d / "in.pgm"), "--out", str(d / "c.pgm")]) == 0
    assert np.array_equal(load_binary(d / "c.pgm"), mm.closing(f, mm.square(1)))
    g = rng.integers(1, 255, (9, 9)).astype(np.uint8)
    save_image(g, d / "g.pgm")
    (d / "se.txt").write_text("0 0\n1 0\n")
    assert main(["morph", "--op", "erode", "--se", f"file:{d / 'se.txt'}",
                 "--in", str(d / "g.pgm"), "--out", str(d / "e.pgm")]) == 0
    se = mm.StructuringElement.from_offsets([(0, 0), (1, 0)])
    assert np.array_equal(load_image(d / "e.pgm"), mm.erode(g, se))


def test_filtrate_and_persist(micro):
    d, f, _ = micro
    assert main(["filtrate", "--kind", "opening", "--se-max", "3",
                 "--in", str(d / "in.pgm"), "--out-dir", str(d / "filt")]) == 0
    manifest = json.loads((d / "filt" / "manifest.json").read_text())
    assert manifest["labels"] == [0, 1, 2, 3] and len(manifest["files"]) == 4
    filt = load_filtration_dir(d / "filt")
    assert np.array_equal(filt.sets, morph_filtration(f, "opening", mm.square_se_sequence(3)).sets)
    assert main(["persist", "--in-dir", str(d / "filt"), "--out", str(d / "p.csv"),
                 "--svg", str(d / "p.svg")]) == 0
    assert read_diagram_csv(d / "p.csv") == persistence_diagram(filt).labeled()
    assert (d / "p.svg").read_text().startswith("<svg")


def test_filtrate_extended(micro):
    d, _, _ = micro
    assert main(["filtrate", "--kind", "extended-opening-closing", "--se-max", "2",
                 "--in", str(d / "in.pgm"), "--out-dir", str(d / "ext")]) == 0
    assert load_filtration_dir(d / "ext").labels == (-2, -1, 0, 1, 2)


def test_denoise_binary_with_trace(micro):
    d, _, clean = micro
    assert main(["denoise", "--in", str(d / "in.pgm"), "--out", str(d / "o.pgm"),
                 "--mode", "binary", "--size-tol", "5", "--max-iter", "10",
                 "--trace", str(d / "t.json")]) == 0
    assert np.array_equal(load_binary(d / "o.pgm"), clean)
    trace = json.loads((d / "t.json").read_text())
    assert trace["sequence"] == [1, -1]
    assert trace["stop_reason"] == "size-tol-exceeded-opening"
    assert [s["selected"] for s in trace["steps"]][:2] == [0, 1]


def test_denoise_gray_and_rgb(tmp_path, rng):
    g = np.full((24, 24), 200, np.uint8)
    g[4:20, 4:20] = 50
    noisy = g.copy()
    noisy[2, 2] = 0
    save_image(noisy, tmp_path / "g.pgm")
    assert main(["denoise", "--in", str(tmp_path / "g.pgm"), "--out", str(tmp_path / "o.pgm"),
                 "--mode", "gray"]) == 0
    assert np.array_equal(load_image(tmp_path / "o.pgm"), g)
    save_image(np.stack([noisy] * 3, axis=-1), tmp_path / "c.ppm")
    assert main(["denoise", "--in", str(tmp_path / "c.ppm"), "--out", str(tmp_path / "o.ppm"),
                 "--mode", "rgb"]) == 0
    assert np.array_equal(load_image(tmp_path / "o.ppm"), np.stack([g] * 3, axis=-1))


def test_noise_command(micro):
    d, f, _ = micro
    args = ["noise", "--density", "0.3", "--seed", "4", "--in", str(d / "in.pgm")]
    assert main(args + ["--out", str(d / "n1.pgm")]) == 0
    assert main(args + ["--out", str(d / "n2.pgm")]) == 0
    assert (d / "n1.pgm").read_bytes() == (d / "n2.pgm").read_bytes()
    assert set(np.unique(load_image(d / "n1.pgm"))) <= {0, 255}
    assert main(["noise", "--density", "2", "--seed", "4", "--in", str(d / "in.pgm"),
                 "--out", str(d / "n3.pgm")]) == 1


def test_bench_command(tmp_path):
    cfg = {"densities": [0.1, 0.2], "trials": 2, "size_tol": 5, "max_iter": 10,
           "truth": "synthetic", "master_seed": 3}
    (tmp_path / "c.json").write_text(json.dumps(cfg))
    for out in ("a", "b"):
        assert main(["bench", "--config", str(tmp_path / "c.json"),
                     "--out-dir", str(tmp_path / out)]) == 0
    for name in ("table.csv", "traces.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    doc = json.loads((tmp_path / "a" / "traces.json").read_text())
    assert doc["prng"] == "numpy.random.PCG64" and len(doc["trials"]) == 4


def test_bad_inputs(tmp_path):
    (tmp_path / "bad.pgm").write_bytes(b"P5\n2 2\n65535\n\x00")
    assert main(["denoise", "--in", str(tmp_path / "bad.pgm"), "--out", str(tmp_path / "o.pgm")]) == 1
    with pytest.raises(SystemExit):
        main(["morph", "--op", "erode", "--se", "disk:3", "--in", "x", "--out", "y"])


def test_console_script(tmp_path):
    r = subprocess.run([sys.executable, "-m", "morphtda.cli", "--help"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    for cmd in ("morph", "filtrate", "persist", "denoise", "noise", "bench"):
        assert cmd in r.stdout
