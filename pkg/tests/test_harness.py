import math
import re

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import binary_images
from morphtda import morphology as mm
from morphtda.bench import ExperimentConfig, run_benchmark, trial_seed, traces_json
from morphtda.metrics import extended_iou, iou
from morphtda.noise import PRNG, NoiseSpec, add_salt_pepper
from morphtda.persistence import INF, PersistenceDiagram, betti_numbers, oracle_betti
from morphtda.report import TABLE_COLUMNS, diagram_svg, emit_table_csv, read_table_csv, table_csv
from morphtda.synthetic import TRUTH_BETTI, make_kanji_analogue, make_synthetic_truth


def test_noise_density_zero_is_identity(rng):
    g = rng.integers(0, 256, (20, 20)).astype(np.uint8)
    assert np.array_equal(add_salt_pepper(g, NoiseSpec(0.0, 5)), g)


def test_noise_density_one_salt_fraction():
    g = np.full((190, 190), 128, np.uint8)
    out = add_salt_pepper(g, NoiseSpec(1.0, 11))
    assert set(np.unique(out)) <= {0, 255}
    n = out.size
    salt = np.count_nonzero(out == 255)
    assert abs(salt - n / 2) <= 3 * math.sqrt(n * 0.25)


@pytest.mark.parametrize("density", [0.05, 0.3, 0.7])
def test_selected_fraction_within_binomial_bound(density):
    g = np.full((190, 190), 128, np.uint8)  # every selection changes the pixel
    out = add_salt_pepper(g, NoiseSpec(density, 3))
    n = g.size
    changed = np.count_nonzero(out != g)
    assert abs(changed - n * density) <= 4 * math.sqrt(n * density * (1 - density))


def test_noise_determinism_and_binary_white():
    f = make_synthetic_truth()
    a = add_salt_pepper(f, NoiseSpec(0.2, 99))
    assert np.array_equal(a, add_salt_pepper(f, NoiseSpec(0.2, 99)))
    assert not np.array_equal(a, add_salt_pepper(f, NoiseSpec(0.2, 100)))
    assert set(np.unique(a)) <= {0, 1}
    assert PRNG == "numpy.random.PCG64"


def test_noise_row_major_draws():
    g = np.full((4, 5), 128, np.uint8)
    u = np.random.Generator(np.random.PCG64(8)).random(20)
    out = add_salt_pepper(g, NoiseSpec(0.5, 8)).ravel()
    expect = np.where(u < 0.25, 0, np.where(u < 0.5, 255, 128))
    assert np.array_equal(out, expect)


@pytest.mark.parametrize("d", [-0.1, 1.5])
def test_noise_density_validation(d):
    with pytest.raises(ValueError):
        NoiseSpec(d, 0)


def test_iou_examples():
    a = np.zeros((4, 4), bool)
    a[1:3, 1:3] = True
    assert iou(a, a) == 1.0
    b = np.zeros((4, 4), bool)
    b[1:3, 2:4] = True
    assert iou(a, b) == pytest.approx(2 / 6)
    c = np.zeros((4, 4), bool)
    c[0, 0] = True
    assert iou(a, c) == 0.0
    assert iou(np.zeros((2, 2), bool), np.zeros((2, 2), bool)) == 1.0


@given(binary_images(), binary_images())
def test_iou_symmetric_in_range(f, g):
    g = np.resize(g, f.shape)
    a, b = f == 0, g == 0
    assert iou(a, b) == iou(b, a)
    assert 0.0 <= iou(a, b) <= 1.0
    assert iou(a, a) == 1.0


def test_extended_iou(rng):
    g = rng.integers(0, 256, (10, 10)).astype(np.uint8)
    assert extended_iou(g, g) == 1.0
    assert 0.0 <= extended_iou(g, 255 - g) < 1.0


def test_synthetic_truth():
    f = make_synthetic_truth()
    assert f.shape == (190, 190)
    assert oracle_betti(f == 0) == TRUTH_BETTI == betti_numbers(f == 0)
    assert np.array_equal(f, make_synthetic_truth())
    for i in (5, 11):
        B = mm.square(i)
        assert np.array_equal(mm.opening(f, B), f)
        assert np.array_equal(mm.closing(f, B), f)


def test_kanji_analogue_shape():
    f, holes = make_kanji_analogue(seed=1)
    assert holes == 3
    a, _ = make_kanji_analogue(seed=1)
    assert np.array_equal(a, f)
    assert betti_numbers(f == 0).beta1 > holes


def test_config_validation(tmp_path):
    with pytest.raises(ValueError):
        ExperimentConfig(trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig(densities=(0.1, 1.2))
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"trails": 3})
    cfg = ExperimentConfig.from_dict({"densities": [0.1], "trials": 2, "size_tol": 4,
                                      "max_iter": 3, "truth": "synthetic", "master_seed": 9})
    assert cfg.params.size_tol == 4 and cfg.params.se_max == 5 and cfg.trials == 2


def test_trial_seeds_distinct():
    seeds = {trial_seed(0, d, k) for d in range(10) for k in range(100)}
    assert len(seeds) == 1000
    assert trial_seed(3, 1, 2) == trial_seed(3, 1, 2) != trial_seed(4, 1, 2)


def test_benchmark_noise_free_trial():
    rep = run_benchmark(ExperimentConfig(densities=(0.0,), trials=1))
    (t,) = rep.trials
    assert t.iou == 1.0 and tuple(t.betti) == (6, 5)
    row = rep.rows()[0]
    assert row["iou_std"] == 0.0 and row["modal_fraction"] == 1.0


def test_benchmark_workers_and_csv(tmp_path):
    cfg = ExperimentConfig(densities=(0.1, 0.4), trials=3, master_seed=5)
    a, b = run_benchmark(cfg), run_benchmark(cfg, workers=2)
    assert table_csv(a.rows()) == table_csv(b.rows())
    assert traces_json(a) == traces_json(b)
    emit_table_csv(a.rows(), tmp_path / "t.csv")
    back = read_table_csv(tmp_path / "t.csv")
    assert list(back[0]) == TABLE_COLUMNS
    for row, parsed in zip(a.rows(), back):
        for k in TABLE_COLUMNS:
            assert parsed[k] == pytest.approx(row[k], abs=5e-5)
    line = (tmp_path / "t.csv").read_text().splitlines()[1]
    assert re.match(r"0\.1000,3,\d\.\d{4},", line)


def _circles(svg):
    return [dict(re.findall(r'(\w[\w-]*)="([^"]*)"', m))
            for m in re.findall(r"<circle[^>]*>", svg)]


def test_svg_empty_and_points():
    empty = diagram_svg(PersistenceDiagram((), (0, 1, 2, 3)))
    assert "<circle" not in empty and 'class="diagonal"' in empty
    assert diagram_svg(PersistenceDiagram((), ())).count("<line") == 2
    dgm = PersistenceDiagram(((1, 0, 1), (1, 0, 3), (0, 0, INF)), (0, 1, 2, 3))
    pts = _circles(diagram_svg(dgm))
    dim1 = [p for p in pts if "dim1" in p["class"]]
    assert len(dim1) == 2
    for p in dim1:
        # svg y grows downward; above the diagonal means death > birth
        assert float(p["cy"]) < 320 - float(p["cx"])
    inf_pt = [p for p in pts if p["data-death"] == "inf"]
    assert len(inf_pt) == 1 and float(inf_pt[0]["cy"]) < min(float(p["cy"]) for p in dim1)
