import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from algstar.radial import (IM, ModelParams, RadialSymbol, ScalarCoeff, rs_derivative, rs_eval, rs_leading_order,
                            rs_mul, to_gauss)
from conftest import symbols

r = RadialSymbol.r
V = RadialSymbol.V
tau = RadialSymbol.tau()
half = Fraction(1, 2)


def test_mul_examples():
    assert rs_mul(r(1), r(-1)) == RadialSymbol.const(1)
    assert rs_mul(r(1) * V(half), r(-1) * V(half)) == V(1)
    assert rs_mul(tau + V(1), V(-1)) == tau * V(-1) + 1


def test_derivative_examples():
    assert rs_derivative(V(1)) == tau * r(-1)
    assert rs_derivative(r(2) * V(1)) == 2 * r(1) * V(1) + tau * r(1)
    assert rs_derivative(V(Fraction(3, 2))) == Fraction(3, 2) * tau * r(-1) * V(half)


def test_eval_examples():
    assert rs_eval(V(1), 1.0, ModelParams.unchecked(nu=2, kappa0=2)) == pytest.approx(2)
    val = (r(2) * V(half)).evaluate(math.e, tau=1.0, kappa0=0.0)
    assert val == pytest.approx(math.e**2)
    assert rs_eval(RadialSymbol.zero(), 3.0, ModelParams()) == 0


def test_eval_domain_error():
    with pytest.raises(ValueError):
        V(half).evaluate(0.5, tau=1.0, kappa0=0.0)


def test_leading_order_examples():
    assert rs_leading_order(V(Fraction(3, 2)) + V(-half)) == (0, Fraction(3, 2))
    assert rs_leading_order(r(2) + r(1) * V(5)) == (2, 0)
    assert rs_leading_order(r(-1) * V(Fraction(-3, 2))) == (-1, Fraction(-3, 2))
    with pytest.raises(ValueError, match="no leading order"):
        rs_leading_order(RadialSymbol.zero())


def test_canonical_no_zero_terms():
    a = V(1) + r(2)
    assert len(a - V(1)) == 1
    assert (a - a).is_zero()
    assert ScalarCoeff({0: 0, 1: 2}).terms == {1: to_gauss(2)}


def test_params_radius_constraint():
    with pytest.raises(ValueError, match="V\\(R\\) > 1"):
        ModelParams(nu=4, kappa0=-1, R=2.0)
    p = ModelParams(nu=4, kappa0=-1, R=30.0)
    assert p.V(p.R) > 1
    grid = np.geomspace(p.R, 1e9, 50)
    assert all(p.V(x) > 1 for x in grid)
    ModelParams(nu=0, kappa0=0.5, R=0.1)  # flat mode skips the bound
    with pytest.raises(ValueError):
        ModelParams(nu=-1)


def test_json_format_roundtrip():
    a = Fraction(3, 7) * r(2) * V(-half) * tau + IM * V(Fraction(3, 2))
    data = a.to_json()
    assert {"m", "s2", "re", "im", "tau_pow"} <= set(data[0])
    assert RadialSymbol.from_json(json.loads(json.dumps(data))) == a


@given(symbols(), symbols(), symbols())
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(symbols(), symbols())
def test_leibniz(a, b):
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


@given(symbols(), symbols())
def test_eval_homomorphism(a, b):
    p = ModelParams()
    for x in (p.R * 1.5, 40.0, 1e4):
        lhs = rs_eval(a * b, x, p)
        rhs = rs_eval(a, x, p) * rs_eval(b, x, p)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rs_eval(a, x, p)) * abs(rs_eval(b, x, p)))


@given(symbols())
def test_derivative_matches_central_difference(a):
    p = ModelParams()
    x = 3 * p.R
    exact = rs_eval(a.derivative(), x, p)
    errs = []
    for h in (1e-2 * x, 5e-3 * x, 2.5e-3 * x):
        fd = (rs_eval(a, x + h, p) - rs_eval(a, x - h, p)) / (2 * h)
        errs.append(abs(fd - exact))
    scale = max(abs(rs_eval(a, x, p)) / x, 1e-300)
    if errs[-1] > 1e-9 * scale:
        assert math.log2(errs[0] / errs[1]) == pytest.approx(2, abs=0.3)
        assert math.log2(errs[1] / errs[2]) == pytest.approx(2, abs=0.3)


def test_half_powers_and_inverse():
    assert V(half) ** 2 == V(1)
    assert (r(2) * V(-half)).inverse() == r(-2) * V(half)
    with pytest.raises(ValueError):
        (r(1) + V(1)).inverse()
