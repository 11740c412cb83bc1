import math

import numpy as np
import pytest

import isoembed as ie


def test_sigma_and_phi():
    assert ie.sigma(2, [1.0, 2.0, 3.0, 4.0]) == 35.0
    assert ie.sigma_all([1.0, 2.0, 3.0]) == [1.0, 6.0, 11.0, 6.0]
    a = np.diag([1.0, 2.0, 3.0])
    b = ie.phi(a)
    # tr(A) A - A^2
    np.testing.assert_allclose(b, 6.0 * a - a @ a, atol=1e-14)
    np.testing.assert_allclose(ie.phi_inverse(b), a, atol=1e-12)
    np.testing.assert_allclose(ie.phi_inverse(b, method="newton"), a, atol=1e-10)
    report = ie.cone_report(b)
    assert report["member"]
    assert report["eps_gap"] == pytest.approx(22.0 - 2 * 9.0)


def test_outside_cone_raises():
    with pytest.raises(ie.DomainError):
        ie.phi_inverse(np.diag([6.0, 2.0, 2.0]))
    with pytest.raises(ValueError):
        ie.phi_inverse(np.eye(4), method="closed_form")


def test_round_sphere_point():
    p = ie.evaluate(ie.Family.round_sphere(3, 2.0), "north", [0.3, -0.1, 0.2])
    assert np.linalg.norm(p["position"]) == pytest.approx(2.0)
    assert p["mean_curvature"] == pytest.approx(1.5)
    assert p["scalar_curvature"] == pytest.approx(6.0 / 4.0)
    assert p["sectional_min"] == pytest.approx(0.25)
    assert p["gauss_residual"] < 1e-10


def test_bounds_on_unit_sphere():
    b = ie.bounds(ie.Family.round_sphere(3), resolution=5, diameter=math.pi)
    assert b["weyl"]["lhs"] == pytest.approx(9.0)
    assert b["weyl"]["rhs"] == pytest.approx(12.0)
    assert b["c2bound"]["lhs"] == pytest.approx(math.sqrt(3.0))
    assert all(r["pass"] for r in b.values())


def test_solve_matches_embedding():
    fam = ie.Family.ellipsoid([1.0, 1.3, 0.8, 1.1])
    pts = ie.random_chart_points(3, 8, seed=3)
    out = ie.solve_contracted_gauss(fam, pts)
    assert out["embeddable"]
    for (chart, y), chi in zip(pts, out["chi"]):
        truth = ie.evaluate(fam, chart, y)["chi"]
        np.testing.assert_allclose(chi, truth, rtol=1e-6, atol=1e-9)
    bad = ie.solve_contracted_gauss(fam, pts, perturbation=0.05, threshold=out["threshold"])
    assert not bad["embeddable"]


def test_reconstruct_and_align():
    rec = ie.reconstruct(ie.Family.ellipsoid([1.0, 1.3, 0.8, 1.1]), half_width=1)
    assert rec["rms"] < 1e-4
    assert rec["holonomy_residual"] < 1e-6
    x = rec["X"]
    q, t, rms, unstable = ie.align_rigid(x, x)
    assert rms < 1e-12
    np.testing.assert_allclose(q, np.eye(4), atol=1e-10)


def test_run_commands():
    cfg = {"family": {"type": "round_sphere", "dim": 3}, "resolution": 5, "checks": ["weyl", "gauss-residual"]}
    report = ie.run("verify", cfg)
    assert report["pass"]
    assert [c["name"] for c in report["checks"]] == ["weyl", "gauss-residual"]
    assert ie.strip_timing(report) == ie.strip_timing(ie.run("verify", cfg))
    assert "PASS" in ie.format_report(report)
    with pytest.raises(ie.ConfigError):
        ie.run("verify", {"resolution": 4})
    fam = ie.run("family")
    assert fam["pass"]


def test_epsilon_family():
    base = ie.Family.radial_graph(3, 1.0)
    shifted = base.epsilon(0.5)
    p = ie.evaluate(shifted, "south", [0.0, 0.0, 0.0])
    assert np.linalg.norm(p["position"]) == pytest.approx(2.0 / 3.0)
    assert p["mean_curvature"] == pytest.approx(4.5)
