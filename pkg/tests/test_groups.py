import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from algstar.calculus import exterior_derivative
from algstar.catalog import dtheta2
from algstar.forms import FourierForm
from algstar.groups import (GroupElement, apply_exact, group_apply, group_pullback, invariant_subspace,
                            isometry_check, maps_equal, maps_equal_mod_lattice, orbit_closure, parse_generators,
                            random_rational_points, relation_table)
from algstar.hyperkahler import hk_triple
from algstar.radial import IM, ModelParams, RadialSymbol
from conftest import forms

V = RadialSymbol.V
half = Fraction(1, 2)
PTS = random_rational_points(20, np.random.default_rng(5))


def test_iota_action():
    g = GroupElement.iota(2)
    out = group_apply(g, (5.0, 0.3, 1.2, -0.7))
    assert out == pytest.approx((5.0, 0.3 + math.pi, -1.2, 0.7))


@pytest.mark.parametrize("nu,k,l,m", [(2, 1, 1, 0), (4, 2, 3, 5), (6, 3, 2, 4)])
def test_power_relations(nu, k, l, m):
    xi, z = GroupElement.xi(l, nu), GroupElement.zeta(k, l, m, nu)
    assert maps_equal(xi**l, GroupElement.sigma3(nu), PTS)
    assert maps_equal(z**k, xi**m * GroupElement.sigma2(nu), PTS)


@pytest.mark.parametrize("tup", [(2, 1, 1, 0, 0, 0), (4, 2, 2, 3, 1, "1/3"), (6, 3, 2, 5, 3, "2/7"),
                                 (4, 4, 1, 3, 2, "5"), (8, 2, 3, 1, 4, "-3/4")])
def test_relation_table(tup):
    nu, k, l, m, n, t = tup
    for name, (a, b) in relation_table(nu, k, l, m, n, Fraction(t)).items():
        assert maps_equal_mod_lattice(a, b, PTS), name


def test_constraints():
    with pytest.raises(ValueError, match="k \\| nu"):
        GroupElement.zeta(3, 1, 0, 4)
    with pytest.raises(ValueError, match="kl - 1"):
        GroupElement.zeta(2, 1, 2, 4)
    with pytest.raises(ValueError, match="nu even"):
        GroupElement.iota(3)
    with pytest.raises(ValueError, match="n\\*l even"):
        GroupElement.iota(4, 1, 0, l=1)
    with pytest.raises(ValueError):
        GroupElement.xi(1, 0)


def test_exact_inverse():
    g = GroupElement.zeta(2, 2, 3, 4) * GroupElement.iota(4, 2, Fraction(1, 3))
    assert maps_equal(g * g.inverse(), GroupElement.identity(4), PTS)
    p = PTS[0]
    assert apply_exact(g.inverse(), apply_exact(g, p)) == apply_exact(GroupElement.identity(4), p)


def test_pullback_examples():
    io = GroupElement.iota(2)
    e2 = FourierForm.basis_form((2,))
    assert group_pullback(io, e2) == -e2
    assert group_pullback(io, hk_triple().omega1) == hk_triple().omega1
    z = GroupElement.zeta(1, 1, 0, 2)
    assert group_pullback(z, dtheta2()) == dtheta2()
    assert group_pullback(io, dtheta2()) == -dtheta2()


GENS = [GroupElement.iota(4, 2, Fraction(1, 3)), GroupElement.zeta(2, 1, 1, 4), GroupElement.xi(3, 4),
        GroupElement.sigma2(4)]


@given(forms(), st.sampled_from(GENS), st.sampled_from(GENS))
def test_pullback_functorial(a, g, h):
    assert group_pullback(g * h, a) == group_pullback(h, group_pullback(g, a))


@given(forms(), st.sampled_from(GENS))
def test_d_commutes_with_pullback(a, g):
    if a.degree < 4:
        assert exterior_derivative(group_pullback(g, a)) == group_pullback(g, exterior_derivative(a))


def test_isometry():
    p = ModelParams()
    rng = np.random.default_rng(2)
    pts = [(p.R * rng.uniform(1, 5), *rng.uniform(-4, 4, size=3)) for _ in range(6)]
    assert isometry_check(GroupElement.iota(2), p, pts)
    assert isometry_check(GroupElement.xi(3, 2), p, pts)
    assert isometry_check(GroupElement.zeta(2, 1, 1, 2), p, pts)
    stretch = lambda r, t1, t2, t3: (r, t1, 2 * t2, t3)
    assert not isometry_check(stretch, p, pts)


def test_invariant_subspace_examples():
    dz = FourierForm.basis_form((0,), V(-half), 1) + FourierForm.basis_form((1,), V(-half) * IM, 1)
    consts = [dz, dz.conj(), dtheta2()]
    assert dtheta2() in invariant_subspace(consts, [GroupElement.zeta(1, 1, 0, 2)])
    assert dtheta2() not in invariant_subspace(consts, [GroupElement.iota(2)])
    assert invariant_subspace(consts, []) == consts


def test_parse_generators():
    spec = parse_generators("xi:2,zeta:1,2,1,iota:0,1/2", 2)
    names = [g.word[0].name for g in spec.generators()]
    assert names == ["xi", "zeta", "iota"] and spec.has_iota() and spec.level() == 2
    assert parse_generators("iota", 2).generators()[0].word[0].params == (0, Fraction(0))
    for bad in ("bogus", "zeta:1,1", "xi:a"):
        with pytest.raises(ValueError):
            parse_generators(bad, 2)


def test_float_t_is_exact_dyadic():
    g = GroupElement.iota(2, 0, 0.25)
    assert g.word[0].params[1] == Fraction(1, 4)


def test_orbit_closure():
    start = (Fraction(1, 3), Fraction(2, 5), Fraction(1, 7))
    rep = orbit_closure([GroupElement.iota(2), GroupElement.xi(2, 2)], start)
    assert rep["closed"] and rep["orbit_size"] == 4
    rep = orbit_closure([GroupElement.iota(2, 0, Fraction(1, 3))], start, cap=50)
    assert rep["closed"]
