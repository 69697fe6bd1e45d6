import math

import numpy as np
import pytest

import prodlaw


def test_meijer_reductions():
    assert prodlaw.meijer_g(2.0, 1) == pytest.approx(math.exp(-2.0), rel=1e-12)
    assert prodlaw.meijer_g(1.0, 2) == pytest.approx(0.227787745499066871, rel=1e-10)


def test_mean_measure_agrees_with_series():
    for m in (1, 2):
        table = prodlaw.mean_ball_measure(0.8, 10, m)
        assert table == pytest.approx(prodlaw.mean_ball_measure_series(0.8, 10, m), rel=1e-9)
        assert table == pytest.approx(prodlaw.mean_ball_measure_contour(0.8, 10, m), rel=1e-8)


def test_sampling_and_spectra():
    a = prodlaw.sample_product(2, 20, "rademacher", 3)
    assert a.shape == (20, 20)
    assert np.iscomplexobj(a)
    ev = np.asarray(prodlaw.eigenvalues(a))
    ref = np.linalg.eigvals(a)
    # conjugate pairs sort unstably, so match each value to its nearest reference
    assert np.abs(ev[:, None] - ref[None, :]).min(axis=1).max() < 1e-9
    assert np.abs(ref[:, None] - ev[None, :]).min(axis=1).max() < 1e-9
    ks = prodlaw.radial_ks_distance(ev, 2)
    assert 0 <= ks["value"] <= 1


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        prodlaw.meijer_g(-1.0, 2)
    with pytest.raises(ValueError):
        prodlaw.run_plan("no-such-tag", [10])


def test_run_plan_and_report_files(tmp_path):
    rep = prodlaw.run_plan("esd-rate", [16, 32], m=1, trials=3, seed=5, output=str(tmp_path))
    assert rep["seed"] == 5
    assert rep["plan"]["tag"] == "esd-rate"
    cells = prodlaw.read_report_csv(tmp_path / "esd-rate.csv")
    assert len(cells) == 6
    assert prodlaw.read_report_json(tmp_path / "esd-rate.json") == rep


def test_fit_rate():
    slope, _, resid = prodlaw.fit_rate([(n, 4.0 / n) for n in (64, 256, 1024)])
    assert slope == pytest.approx(-1.0, abs=1e-12)
    assert resid < 1e-12


def test_matrix_file_round_trip(tmp_path):
    mats = prodlaw.sample_factors(2, 5, "complex-gaussian", 1)
    path = str(tmp_path / "f.plawmat")
    prodlaw.write_matrices_binary(path, mats)
    back = prodlaw.read_matrices_binary(path)
    assert all(np.array_equal(x, y) for x, y in zip(mats, back))
