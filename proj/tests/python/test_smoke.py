import json
import math
import os
import subprocess

import pytest

import twisted_eig as te


def test_linear_ball_is_pi_in_three_dimensions():
    ball = te.ball_lambda(2, 2, 3)
    assert ball["lambda"] == pytest.approx(math.pi, rel=1e-9)
    assert ball["r"][0] == 0.0 and ball["r"][-1] == pytest.approx(1.0)
    assert ball["u"][-1] == pytest.approx(0.0, abs=1e-12)
    assert ball["energy_residual"] < 1e-8


def test_scaling_exponent_matches_formula():
    assert te.scaling_exponent(2, 3, 2) == pytest.approx(2 / 2 - 1 - 2 / 3)


def test_direct_oracle_agrees_with_shooting():
    assert te.ball_lambda_direct(3, 2, 2) == pytest.approx(te.ball_lambda(3, 2, 2)["lambda"], rel=1e-3)


def test_equal_pair_value():
    r = math.sqrt(0.5)
    pair = te.twisted(2, 2, 2, r, r)
    assert pair["lambda"] == pytest.approx(3.40092, abs=1e-4)
    assert abs(pair["m"]) < 1e-8
    assert pair["method"] == "structured"


def test_unequal_pair_multiplier_is_shared_with_direct():
    structured = te.twisted(2, 2, 2, 0.6, 0.8)
    direct = te.twisted(2, 2, 2, 0.6, 0.8, method="direct")
    assert direct["lambda"] == pytest.approx(structured["lambda"], rel=1e-3)
    assert structured["m"] > 0.0


def test_sweep_minimum_is_at_the_middle():
    rows = te.sweep(2, 2, 2, steps=9)
    assert len(rows) == 9 and all(r["status"] == "ok" for r in rows)
    lambdas = [r["lambda"] for r in rows]
    assert lambdas.index(min(lambdas)) == 4


def test_wirtinger_and_curves():
    assert te.wirtinger_lambda(2, 2) == pytest.approx(math.pi, rel=1e-9)
    assert abs(te.curve_defect("circle", 2)) < 1e-5
    assert te.curve_defect("random", 3, seed=4) > 0.0


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        te.ball_lambda(2, 7, 3)
    with pytest.raises(ValueError):
        te.curve_defect("square", 2)


@pytest.mark.skipif("TWISTED_EIG_BINARY" not in os.environ, reason="cli binary not provided")
def test_cli_json_agrees_with_module():
    out = subprocess.run(
        [os.environ["TWISTED_EIG_BINARY"], "ball", "--p", "3", "--q", "2", "--dim", "2", "--reproducible"],
        check=True, capture_output=True, text=True,
    ).stdout
    report = json.loads(out)
    assert report["result"]["lambda"] == pytest.approx(te.ball_lambda(3, 2, 2)["lambda"], rel=1e-12)
