import math

import numpy as np
import pytest

import clab


def test_time_map():
    assert abs(clab.gamma(clab.r_f()) - 2 * math.pi / 3) < 1e-12
    assert abs(clab.lambda_star(math.pi / 2) - 16 / 9) < 1e-12
    assert clab.classify(0.5, 1.0, math.pi / 2)["regime"] == "NoSolution"
    flat = clab.classify(clab.lambda_star(1.0), 1.0, 1.0)
    assert flat["regime"] == "Flat"


def test_solve1d():
    fb = clab.solve1d(16 / 9)
    assert fb["regime"] == "FreeBoundary"
    assert fb["xi"] == 0.5
    assert fb["u"][-1] == pytest.approx(1.0)
    sub = clab.solve1d(0.2)
    assert sub["slope0"] > 0
    with pytest.raises(ValueError):
        clab.solve1d(-1.0)
    assert clab.lambda_q_star(1.0) == 2.0


def test_shoot_matches_flat_norm():
    ls = clab.lambda_star(math.pi / 2)
    p = clab.shoot(1.0, ls, math.pi / 2)
    assert max(p["v"]) == pytest.approx((4 / ls) ** (2 / 3), rel=1e-9)


def test_solve2d_small():
    r = clab.solve2d(beta=0.25, Nx=32, Ny=16)
    u = r["u_min"]
    assert u.shape == (17, 33)
    assert r["ordered"]
    assert r["gap"] < 1e-8
    assert np.all(u >= r["sub"] - 1e-12)
    assert r["nondegeneracy"] > 0


def test_infeasible_beta():
    with pytest.raises(RuntimeError):
        clab.subsolution(0.49)
    with pytest.raises(RuntimeError):
        clab.solve2d(beta=0.25, A=1.0, Nx=32, Ny=16)


def test_parabolic_small():
    r = clab.parabolic(Nx=32, Ny=16, T=0.5)
    assert r["order_violations"] == 0
    assert r["distance_nonincreasing"]
    assert r["distance"][-1] < r["distance"][0]
