import math

import pytest

import umbilic_lab as ul


@pytest.mark.parametrize("K", [-1, 0, 1])
def test_sphere_deficits_vanish(K):
    M = ul.geodesic_sphere(ul.Spaceform(K), 0.8, (32, 64))
    assert abs(ul.hk_deficit(M)["value"]) < 1e-8
    assert abs(ul.cmc_deficit(M)["value"]) < 1e-8
    assert abs(ul.cfc_deficit(M, 1, 0)["value"]) < 1e-8


def test_euclidean_sphere_geometry():
    M = ul.geodesic_sphere(ul.Spaceform(0), 2.0, (32, 64))
    assert M.area() == pytest.approx(16 * math.pi, rel=1e-12)
    assert M.volume() == pytest.approx(32 * math.pi / 3, rel=1e-12)
    curv = M.curvature()
    assert max(abs(k - 0.5) for k in curv["kappa1"]) < 1e-10


def test_ellipsoid_deficit_positive():
    M = ul.ellipsoid(ul.Spaceform(0), 1.2, 1.0, 1.0, (32, 64))
    assert ul.hk_deficit(M)["value"] > 1e-3
    dist, radius, _ = ul.sphere_distance(M)
    assert 0 < dist < 0.2
    assert 1.0 < radius < 1.2


def test_hsiung_and_reilly():
    space = ul.Spaceform(-1)
    M = ul.perturbed_sphere(space, 1.0, 0.1, resolution=(32, 64))
    assert ul.hsiung(M, 1)[2] < 1e-8
    ball = ul.geodesic_sphere(ul.Spaceform(0), 1.0, (32, 64))
    lhs, rhs, _ = ul.reilly(ball, ul.torsion_ball_field(ul.Spaceform(0), 1.0))
    assert lhs == pytest.approx(8 * math.pi / 9, rel=1e-10)
    assert rhs == pytest.approx(8 * math.pi / 9, rel=1e-10)


def test_newton_n2_ratio():
    assert ul.newton_gap([0.3, 1.7], 1)["ratio"] == pytest.approx(0.5, rel=1e-12)
    est = ul.newton_constant_estimate(3, 2, 20000, seed=5)
    assert est["min_gap"] >= 0
    assert est["min_hk1n1"] > 0


def test_torsion_and_serrin():
    grad, hopf = ul.torsion_ball(ul.Spaceform(-1), 1.0)
    assert grad == pytest.approx(math.tanh(1.0) / 3, rel=1e-12)
    assert hopf
    assert ul.serrin("quartic")[1] < 1e-8


def test_level_set_pipeline():
    res = ul.levelset_pipeline(ul.Spaceform(0), ul.anisotropic_quartic_field())
    assert res["slice_holds"]
    assert res["dist"] > 0


def test_flow_short_run():
    M = ul.ellipsoid(ul.Spaceform(0), 1.1, 1.0, 0.95, (16, 32))
    run = ul.flow_run(M, 1, t_max=0.2)
    assert run["max_wk_drift"] < 1e-6
    w2 = run["W2"]
    assert all(b <= a + 1e-12 for a, b in zip(w2, w2[1:]))


def test_errors_map_to_python():
    with pytest.raises(ul.Error):
        ul.flow_run(ul.geodesic_sphere(ul.Spaceform(1), 0.5, (16, 32)), 1)
    with pytest.raises(ul.ConfigError):
        ul.run_config('command = "deficit"\nbogus = 1\n')


def test_run_config_json():
    text = """
command = "deficit"
[surface]
kind = "ellipsoid"
axes = [1.2, 1.0, 1.0]
[resolution]
n_theta = 24
n_phi = 48
"""
    code, out, _ = ul.run_config(text)
    assert code == 0
    assert '"value"' in out
