"""Smoke tests for the python bindings: each core operation is reachable and
returns sane values; heavy numerics live in the C++ suites."""

import math

import pytest

import hbargeo as hg


def test_template_potential_evaluates():
    sep = hg.make_template("separable")
    assert hg.eval_potential(sep, (0.0, 0.0)) == pytest.approx(0.0, abs=1e-14)
    assert hg.eval_potential(sep, (0.5, 0.5)) == pytest.approx(-4.0, abs=1e-14)
    with pytest.raises(hg.ConfigError):
        hg.make_template("nope")


def test_potential_json_roundtrip():
    spec = hg.make_template("perturbed-separable")
    text = hg.potential_to_json(spec)
    back = hg.potential_from_json(text)
    assert hg.potential_to_json(back) == text


def test_lambda_constants():
    assert hg.lambda_statement(1.0, 2.0) == pytest.approx(0.28867513459481287, abs=1e-15)
    assert hg.lambda_proof(1.0, 2.0) == pytest.approx(0.20412414523193151, abs=1e-15)


def test_near_origin_action_closed_form():
    assert hg.near_origin_action(1.0, 2.0, -1.0, 1.0, 0.2, 0.2) == pytest.approx(1.08, abs=1e-15)
    with pytest.raises(hg.ConfigError):
        hg.near_origin_action(1.0, 2.0, -1.0, 1.0, 0.5, 0.5)


def test_cell_solver_flat_region():
    sep = hg.make_template("separable")
    field = hg.solve_cell(sep, (0.0, 0.0), grid_n=64, tol=1e-4)
    assert field.hbar == 0.0
    assert field.grid_n == 64
    assert math.isfinite(field.residual)
    assert field.value_at((0.25, 0.25)) == pytest.approx(field.value_at((1.25, -0.75)), abs=1e-12)


def test_separable_oracle_matches_flat_set():
    sep_l = 4.0 / math.pi
    assert hg.hbar_separable_oracle(1.0, 1.0, (0.5 * sep_l, 0.0)) == 0.0
    assert hg.hbar_separable_oracle(1.0, 1.0, (1.1 * sep_l, 0.0)) > 0.0


def test_support_table_and_polygon():
    sep = hg.make_template("separable")
    table = hg.build_support_table(sep, window=1, resolution=48)
    sigma = table.lookup(1, 0)
    assert sigma == pytest.approx(4.0 / math.pi, rel=0.05)
    poly = hg.build_f0(table)
    assert len(poly.edges) == 4
    assert poly.area() == pytest.approx((2 * 4.0 / math.pi) ** 2, rel=0.08)
    assert poly.contains((0.0, 0.0))

    fan = hg.homology_fan((poly.max_support(1, 0), 0.0), table, 1e-3)
    assert [1, 0] in [list(c) for c in fan["classes"]]


def test_lp_demo_contracts():
    res = hg.lp_demo(a=1.0, b=2.0, alpha=3.0, theta=0.1)
    assert res["contraction_factor"] <= 0.5
    assert res["final_gap"] <= 1e-10
    assert res["iterations"] >= 1


def test_homoclinic_record_shape():
    sep = hg.make_template("separable")
    rec = hg.shoot_homoclinic(sep, 1, 0, r0=1e-3, tol=1e-6, dt=2e-3)
    assert rec.m == 1 and rec.n == 0
    assert rec.action == pytest.approx(4.0 / math.pi, abs=5e-3)
    assert len(rec.orbit) > 100
    with pytest.raises(hg.ConfigError):
        hg.shoot_homoclinic(sep, 0, 0)
