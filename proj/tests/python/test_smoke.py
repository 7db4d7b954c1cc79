import json
import math
import os
from pathlib import Path

import pytest

import wdds

SOURCE = Path(os.environ.get("WDDS_SOURCE_DIR", Path(__file__).resolve().parents[2]))


def test_default_parameters():
    p = wdds.load_params()
    assert p["general"]["fcr"]["value"] == pytest.approx(0.108)
    assert wdds.params_checksum() == wdds.params_checksum(None)


def test_bundled_parameter_file_loads():
    p = wdds.load_params(str(SOURCE / "data" / "params_default.json"))
    assert p["pto"]["l2"]["value"] == pytest.approx(4.7)


def test_bad_parameters_raise_value_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"extends": "default", "general": {"depth": -1}}))
    with pytest.raises(ValueError):
        wdds.load_params(str(bad))


def test_designs_and_bounds():
    nominal = wdds.nominal_design()
    assert nominal["w"] == 18.0 and nominal["Qpmax"] == 3150.0
    bounds = wdds.design_bounds()
    assert set(bounds) == set(nominal)
    for name, value in wdds.reference_design().items():
        lo, hi = bounds[name]
        assert lo <= value <= hi


def test_plant_sizing():
    plant = wdds.size_plant(3150.0)
    assert plant["A_m"] == pytest.approx(4481.7, rel=1e-5)
    assert plant["P_relief"] == pytest.approx(6.202e6, rel=5e-4)


def test_spectrum_and_mesh():
    wp = 2 * math.pi / 9.86
    assert wdds.pm_spectrum(2.64, 9.86, wp, "verbatim") == pytest.approx(6.15, rel=5e-3)
    with pytest.raises(ValueError):
        wdds.pm_spectrum(2.64, 9.86, wp, "jonswap")
    assert wdds.mesh_resolution(18, 2, 9.1) == (2, 16, 8)


def test_evaluate_nominal():
    r = wdds.evaluate("nominal")
    assert r["schema"] == "wdds-evaluation/1"
    assert r["failed"] is False
    assert r["lcow"] > 0
    again = wdds.evaluate(wdds.nominal_design())
    assert again["lcow"] == r["lcow"]


def test_evaluate_rejects_partial_design():
    with pytest.raises(ValueError):
        wdds.evaluate({"w": 10.0})


def test_surrogate_coefficients_match_import_layout():
    c = wdds.surrogate_coefficients("nominal")
    assert c["schema"] == "wdds-hydro/1"
    assert len(c["omega"]) == len(c["radiation_damping"]) == 21
    assert all(b >= 0 for b in c["radiation_damping"])


def test_tiny_optimization():
    r = wdds.optimize("mdo", pop=8, gens=2, seed=3)
    assert r["schema"] == "wdds-optimization/1"
    assert r["best"]["objective"] <= r["nominal"]["objective"]
    with pytest.raises(ValueError):
        wdds.optimize("nope", pop=8, gens=2)


def test_kmeans_identity():
    pts = [(9.0, 1.2), (12.5, 2.2), (6.0, 0.8)]
    r = wdds.kmeans(pts, 3, seed=1)
    assert sorted(r["centers"]) == sorted(pts)
    assert r["monotone"]


def test_parse_ndbc():
    text = (SOURCE / "tests" / "fixtures" / "ndbc" / "46221h2015.txt").read_text()
    r = wdds.parse_ndbc(text, "46221")
    assert r["ledger"]["kept"] == 570
    assert r["ledger"]["sentinel"] == 30
    with pytest.raises(ValueError):
        wdds.parse_ndbc("no header here\n1 2 3\n")
