from fractions import Fraction

import numpy as np
import pytest

from algstar.calculus import coframe_d
from algstar.forms import FourierForm, hodge_star, omega_minus, omega_plus, wedge
from algstar.geometry import (CoframeIndex, bianchi_residual, connection_forms, curvature_forms, gauge_s,
                              geometry_report, hodge_star_basis, ricci_contraction, structure_residual, volume_form)
from algstar.radial import ModelParams, RadialSymbol

r = RadialSymbol.r
V = RadialSymbol.V
tau = RadialSymbol.tau()
FLAT = ModelParams(nu=0, kappa0=1.0, R=1.0)


def test_gauge_function():
    s = gauge_s()
    assert s.leading_order() == (1, Fraction(1, 2))
    assert s.evaluate(1.0, tau=0.5, kappa0=4.0) == pytest.approx(2)
    p = ModelParams()
    ds = s.derivative()
    assert all(ds.evaluate(x, p).real > 0 for x in np.geomspace(p.R, 1e8, 40))


def test_coframe_d_examples():
    assert coframe_d(0).is_zero()
    c = tau * Fraction(1, 2) * r(-1) * V(Fraction(-3, 2))
    assert coframe_d(2) == FourierForm.basis_form((0, 2), c)
    assert coframe_d(3) == FourierForm.basis_form((0, 3), -c) + FourierForm.basis_form((1, 2), tau * r(-1) * V(Fraction(-3, 2)))
    lhs = coframe_d(1)
    assert lhs == FourierForm.basis_form((0, 1), (r(1) * V(Fraction(1, 2))).derivative() * V(-1) * r(-1))


def test_star_basis_examples():
    assert hodge_star_basis((0, 1)) == ((2, 3), 1)
    assert hodge_star_basis(()) == ((0, 1, 2, 3), 1)
    assert hodge_star_basis((0, 3)) == ((1, 2), 1)
    for i in (1, 2, 3):
        assert hodge_star(omega_plus(i)) == omega_plus(i)
        assert hodge_star(omega_minus(i)) == -omega_minus(i)


def test_coframe_index():
    assert CoframeIndex("E", 4).form() == FourierForm.basis_form((3,), basis="E")
    with pytest.raises(ValueError):
        CoframeIndex("e", 4)
    with pytest.raises(ValueError):
        CoframeIndex("x", 0)


@pytest.mark.parametrize("basis", ["e", "E"])
def test_connection_and_structure(basis):
    w = connection_forms(basis=basis)
    assert all((w[i][j] + w[j][i]).is_zero() for i in range(4) for j in range(4))
    assert all(x.is_zero() for x in structure_residual(basis=basis))
    assert all(x.is_zero() for row in bianchi_residual(basis=basis) for x in row)


def test_connection_decay():
    w = connection_forms(basis="E")
    assert all(w[i][j].leading_order() <= (-1, Fraction(-3, 2)) for i in range(4) for j in range(4) if w[i][j])
    # rotating frame keeps the flat polar term r^{-1} V^{-1/2}
    we = connection_forms(basis="e")
    assert max(x.leading_order() for row in we for x in row if x) == (-1, Fraction(-1, 2))


@pytest.mark.parametrize("basis", ["e", "E"])
def test_curvature(basis):
    W = curvature_forms(basis=basis)
    assert all(W[i][j].leading_order() <= (-2, Fraction(-2)) for i in range(4) for j in range(4) if W[i][j])
    assert all(x.is_zero() for row in ricci_contraction(W) for x in row)


def test_flat_mode_zero():
    assert all(x.is_zero() for row in connection_forms(FLAT, "E") for x in row)
    for basis in ("e", "E"):
        assert all(x.is_zero() for row in curvature_forms(FLAT, basis) for x in row)


def test_volume_form():
    vol = volume_form()
    assert vol.component(0, (0, 1, 2, 3)) == RadialSymbol.const(1)
    assert hodge_star(vol) == FourierForm.scalar(1)
    assert wedge(omega_plus(1), omega_plus(1)) == vol * 2


def test_report_flags():
    rep = geometry_report(ModelParams())
    for b in ("e", "E"):
        assert rep[b]["ricci_flat"] and rep[b]["bianchi_zero"] and rep[b]["first_structure_equation_zero"]
        assert rep[b]["curvature_decay_ok"]
    assert rep["E"]["connection_decay_ok"] and rep["double_star_sign_ok"]
