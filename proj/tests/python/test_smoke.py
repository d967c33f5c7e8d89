"""Smoke tests for the python extension module."""

import math

import cmclab


def test_roundtrip_error_is_tiny():
    assert cmclab.roundtrip_error(12, seed=3) < 1e-12


def test_sscmc_jets_closed_forms():
    j = cmclab.sscmc_jets(1.0, 1.0, 2.0)
    assert math.isclose(j["f1"], -0.5, abs_tol=1e-13)
    assert abs(j["f2"]) < 1e-13
    assert math.isclose(j["f3"], 0.75, abs_tol=1e-13)
    assert math.isclose(j["f4"], 12.0 - 4.5, abs_tol=1e-12)
    for k in range(1, 5):
        assert abs(j[f"check_f{k}"] - j[f"f{k}"]) < 1e-5


def test_hyperboloid_is_exact_cmc():
    d = cmclab.hyperboloid_deviation([0.3, 0.0, 0.4], 0.2)
    assert d["H_dev"] < 1e-9
    assert d["A_ring_sup"] < 1e-10
    assert d["S_dev"] < 1e-8


def test_compat_residual_vanishes_for_linear_data():
    assert cmclab.compat_sup(0.7) < 1e-8


def test_run_experiment_round_trips_names():
    names = cmclab.experiment_names()
    assert "sscmc-jets" in names and "custom" in names
    res = cmclab.run_experiment("sscmc-jets")
    assert res["name"] == "sscmc-jets"
    assert res["pass"] is True
    assert any(row["criterion"] == 1 for row in res["checks"])
