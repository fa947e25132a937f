import math

import numpy as np
import pytest

import curvevar as cv


def test_sphere_willmore_energy():
    s = cv.Surface("sphere", {"r": 1.0})
    assert cv.energy(s, "willmore") == pytest.approx(4 * math.pi, rel=1e-10)


def test_pwillmore_scaling():
    s = cv.Surface("sphere", {"r": 2.0})
    assert cv.energy(s, "pwillmore", {"p": 3}) == pytest.approx(2 * math.pi, rel=1e-10)


def test_curvature_arrays():
    c = cv.Surface("torus", {"R": 2.0, "a": 1.0}).curvature()
    assert c["H"].shape == c["K"].shape
    assert np.all(c["kappa1"] >= c["kappa2"])


def test_first_variation_against_fd():
    s = cv.Surface("torus", {"R": 2.0, "a": 1.0})
    rep = cv.fd_check(s, s.field("random:seed=3"), 1, "helfrich", {"c0": 0.3, "kbar": 0.5})
    assert rep["rel_error"] < 1e-5
    assert rep["convergence_order"] > 1.9


def test_second_variation_requires_critical_surface():
    s = cv.Surface("torus")
    with pytest.raises(cv.NumericalError):
        cv.second_variation(s, s.field("random:seed=1"), "helfrich")


def test_sphere_index_form():
    s = cv.stability_sphere(1.0)
    assert cv.sphere_index_form(3, 1, s, s.field("harmonic:1,0")) == pytest.approx(-8 * math.pi / 3, rel=1e-8)


def test_stability_verdict():
    rep = cv.sphere_stability(3, 1, 4)
    assert rep["verdict"] == "unstable in first eigenspace"
    assert rep["sign_summary"] == "-+++"


def test_validation_error():
    with pytest.raises(cv.ValidationError):
        cv.Surface("blob")
    with pytest.raises(ValueError):
        cv.Surface("torus", {"R": 1.0, "a": 2.0})


def test_clifford_torus():
    s = cv.Surface("clifford_torus_S3")
    assert s.k0 == 1.0
    assert cv.energy(s, "willmore") == pytest.approx(2 * math.pi**2, rel=1e-10)
    assert cv.el_residual(s, "willmore").max_abs() < 1e-6
