import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from algstar.catalog import catalog, functions_basis
from algstar.forms import FourierForm, basis_convert
from algstar.radial import ModelParams, RadialSymbol
from algstar.weighted import (ZERO_PROFILE, WeightSpec, bump_profile, circle_poincare_check, claim2_check,
                              decay_membership, divergence_probe, hardy_check, radius_for_V, weight,
                              weighted_norm_mode)

P = ModelParams()
R = P.R


def test_weight():
    for x in (R, 20.0, 1e5):
        assert weight(WeightSpec(-1), x, P) == pytest.approx(1)
    flat = ModelParams(nu=0, kappa0=1.0, R=1.0)
    assert weight(0, 7.0, flat) == pytest.approx(1 / 7)
    xs = np.geomspace(R, 1e6, 30)
    assert np.all(np.diff(weight(0.5, xs, P)) < 0)
    with pytest.raises(ValueError):
        WeightSpec(float("nan"))


def test_norm_closed_form():
    a = FourierForm.basis_form((0,), 1, 0, "E")
    for R1, R2 in ((R, 50.0), (20.0, 1e6)):
        exact = math.sqrt(8 * math.pi**3 * math.log(R2 / R1))
        assert weighted_norm_mode(a, 0, (R1, R2), P) == pytest.approx(exact, rel=1e-8)


def test_norm_zero_and_scaling():
    assert weighted_norm_mode(FourierForm.zero(1, "E"), 0.5, (R, 30.0), P) == 0
    a = FourierForm.basis_form((1, 2), RadialSymbol.r(-1) * RadialSymbol.V(Fraction(1, 2)), 2, "E")
    n = weighted_norm_mode(a, 0.5, (R, 30.0), P)
    c = Fraction(-5, 2)
    assert weighted_norm_mode(a * c, 0.5, (R, 30.0), P) == pytest.approx(abs(c) * n, rel=1e-10)
    with pytest.raises(ValueError):
        weighted_norm_mode(a, 0.5, (R, math.inf), P)


@given(st.sampled_from(catalog(1, 0) + catalog(2, -1)), st.sampled_from([-1.5, 0.5]))
def test_norm_basis_invariant(ent, mu):
    w = (R, 40.0)
    a = basis_convert(ent.form, "E")
    b = basis_convert(basis_convert(a, "e"), "E")
    assert weighted_norm_mode(b, mu, w, P) == pytest.approx(weighted_norm_mode(a, mu, w, P), rel=1e-10)
    assert weighted_norm_mode(ent.form, mu, w, P) == pytest.approx(weighted_norm_mode(a, mu, w, P), rel=1e-10)


def test_profile_endpoints():
    f = bump_profile(2 * R, 4 * R, 1 + 1j, 0.5, 2.0)
    assert f.check_endpoints()
    fd = f.derivative(1)
    x = 3.1 * R
    h = 1e-4 * R
    assert fd(x) == pytest.approx((f(x + h) - f(x - h)) / (2 * h), rel=1e-6)


def test_hardy_examples():
    assert tuple(hardy_check(ZERO_PROFILE, 1, 0, R, P)) == (0.0, 0.0, True)
    res = hardy_check(bump_profile(2 * R, 4 * R), 1, 0, R, P)
    assert res.passed and res.ratio >= 1
    with pytest.raises(ValueError, match="threshold"):
        hardy_check(bump_profile(2 * R, 4 * R), 1, 20, R, P)
    with pytest.raises(ValueError, match="alpha = -1"):
        hardy_check(bump_profile(2 * R, 4 * R), -1, 0, R, P)


def test_claim2_examples():
    assert tuple(claim2_check({}, 3, 0.5, R, P)) == (0.0, 0.0, True)
    assert claim2_check({0: bump_profile(2 * R, 4 * R)}, 3, 0.5, R, P).passed
    Rb = radius_for_V(2 * 0.9 * P.tau / 0.1, P)
    f = bump_profile(2 * Rb, 4 * Rb)
    near = claim2_check({0: f}, 1, 0.9, Rb, P)
    far = claim2_check({0: f}, 1, 0.5, Rb, P)
    assert near.passed and far.passed
    with pytest.raises(ValueError, match="integer"):
        claim2_check({0: f}, 1, 1.0, Rb, P)
    with pytest.raises(ValueError, match="threshold"):
        claim2_check({0: bump_profile(2 * R, 4 * R)}, 1, 0.9, R, P)


def test_poincare_examples():
    first = circle_poincare_check(lambda x: np.exp(1j * x), "theta2", 2 * R, P)
    assert first.passed and first.ratio == pytest.approx(1, rel=1e-10)
    second = circle_poincare_check(lambda x: np.exp(2j * x), "theta3", 2 * R, P)
    assert second.passed and second.ratio == pytest.approx(4, rel=1e-10)
    with pytest.raises(ValueError, match="zero average"):
        circle_poincare_check(lambda x: np.ones_like(x), "theta2", 2 * R, P)


def test_membership_examples():
    for k in (1, 2, 3):
        assert decay_membership((k, Fraction(0)), k + 0.5)
        assert not decay_membership((k, Fraction(0)), k - 0.5)
    Vent = functions_basis(0)[1]
    assert not decay_membership(Vent, 0)
    assert decay_membership((-1, Fraction(-1)), 0.5) is True


@pytest.mark.parametrize("mu", [-0.5, 1.5])
def test_probe_agrees_small_sample(mu):
    for ent in catalog(1, -1) + catalog(2, 1):
        assert decay_membership(ent, mu) == divergence_probe(ent, mu, P)["finite"]
