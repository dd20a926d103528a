from fractions import Fraction

import pytest

from algstar.calculus import codifferential, exterior_derivative, fd_laplacian_oracle, hodge_laplacian, scalar_sampler
from algstar.catalog import (basis_Z, catalog, decay_order, full_catalog, functions_basis, is_closed_coclosed,
                             oneforms_typeI, oneforms_typeII, perturbed_entry, span_rank, twoforms_asd, twoforms_sd,
                             verify_harmonic, w1_space)
from algstar.forms import FourierForm, omega_minus
from algstar.groups import GroupElement
from algstar.hyperkahler import hk_triple, jstar
from algstar.radial import IM, ModelParams, RadialSymbol

r = RadialSymbol.r
V = RadialSymbol.V
half = Fraction(1, 2)
IOTA = GroupElement.iota(2)


def forms_of(entries):
    return [e.form for e in entries]


def test_functions_basis():
    f0 = forms_of(functions_basis(0))
    assert f0 == [FourierForm.scalar(1), FourierForm.scalar(V(1))]
    f1 = functions_basis(1)
    assert {e.form for e in f1} == {FourierForm.scalar(r(1), 1), FourierForm.scalar(r(1), -1)}
    assert all(verify_harmonic(e).is_zero() for e in f1)
    p = ModelParams()
    S = scalar_sampler(functions_basis(2)[0].form, p)
    assert abs(fd_laplacian_oracle(S, (4 * p.R, 0.3, 0.1, 0.2), p)) < 1e-5
    with pytest.raises(ValueError):
        functions_basis(-1)


def test_typeI():
    dz = FourierForm.basis_form((0,), V(-half), 1) + FourierForm.basis_form((1,), V(-half) * IM, 1)
    A0 = next(e for e in oneforms_typeI(0) if e.family == "TypeI-A")
    assert A0.form == dz and exterior_derivative(dz).is_zero() and codifferential(dz).is_zero()
    B0 = next(e for e in oneforms_typeI(0) if e.family == "TypeI-B")
    assert B0.form == (FourierForm.basis_form((0,), V(Fraction(3, 2)), 1)
                       + FourierForm.basis_form((1,), V(Fraction(3, 2)) * IM, 1))
    assert verify_harmonic(B0).is_zero()
    assert not codifferential(B0.form).is_zero() and not exterior_derivative(B0.form).is_zero()
    assert decay_order(B0) == (0, Fraction(3, 2))


def test_typeII():
    for q in (-2, 0, 1, 2):
        for ent in oneforms_typeII(q):
            assert all(I[0] in (2, 3) for (_, I), _f in ent.form.items())
            assert verify_harmonic(ent).is_zero()
    A = next(e for e in oneforms_typeI(0) if e.family == "TypeI-A")
    assert jstar(A.form) == -(FourierForm.basis_form((2,), V(-half)) - FourierForm.basis_form((3,), V(-half) * IM))
    assert jstar(jstar(A.form)) == -A.form


def test_sd_examples():
    t = hk_triple()
    assert verify_harmonic(next(e for e in twoforms_sd(0) if e.family == "SD-I-A")).is_zero()
    assert hodge_laplacian(t.omega2 * V(1)).is_zero()
    assert hodge_laplacian((t.omega3 * r(1)).shift_mode(1)).is_zero()
    sq = (t.omega1 * r(2))
    assert hodge_laplacian(sq) == t.omega1 * (-4 * V(-1))


def test_asd_examples():
    fams = {e.family: e for e in twoforms_asd(0)}
    assert fams["ASD-w1-A"].form == omega_minus(1) and fams["ASD-w1-B"].form == omega_minus(1) * V(1)
    assert hodge_laplacian(omega_minus(2) * r(1)).is_zero()
    assert hodge_laplacian(omega_minus(2) * r(-1)).is_zero()
    assert hodge_laplacian(omega_minus(3) * (V(-2) * r(-1))).is_zero()
    assert decay_order(fams["ASD-w1-B"]) == (0, Fraction(1))


@pytest.mark.parametrize("q", [-4, -2, 2, 5])
def test_asd_counts_generic(q):
    fams = [e.family for e in twoforms_asd(q)]
    assert sum("w23" in f for f in fams) == 4
    assert sum("w1" in f for f in fams) == 2


def test_counts_and_rank():
    for q in range(-5, 6):
        for p, n in ((0, 2), (1, 8), (2, 12)):
            ents = catalog(p, q)
            assert len(ents) == n
            assert span_rank(forms_of(ents)) == n


def test_every_entry_harmonic_and_ordered():
    for ent in full_catalog():
        assert verify_harmonic(ent).is_zero(), ent.family
        assert decay_order(ent)[0] == ent.order


def test_function_decay_order():
    for k in range(0, 4):
        for ent in functions_basis(k):
            if k:
                assert decay_order(ent) == (k, 0)


def test_closed_coclosed_families():
    for q in (-3, -1, 0, 2):
        A = [e for e in oneforms_typeI(q) if e.family in ("TypeI-A", "TypeI-conj-A")]
        assert A and all(is_closed_coclosed(e) for e in A)
        closed = [e for e in twoforms_asd(q) if "closed" in e.family]
        assert all(is_closed_coclosed(e) for e in closed)


def test_perturbed_entry_fails():
    assert not verify_harmonic(perturbed_entry()).is_zero()


def test_basis_Z_examples():
    assert [e.family for e in basis_Z(0, 0)] == ["Fn-A", "Fn-B"]
    assert basis_Z(2, 1, [IOTA]) == []
    fams = [e.family for e in basis_Z(1, 0, [IOTA])]
    assert not any(f.startswith("TypeII") for f in fams)


def test_w1_dichotomy():
    plain = w1_space([GroupElement.zeta(1, 1, 0, 2)])
    assert plain["dimension"] == 1 and plain["contains_dtheta2"]
    assert w1_space([IOTA])["dimension"] == 0
    assert w1_space([GroupElement.iota(4, 2, Fraction(1, 3)), GroupElement.zeta(2, 1, 1, 4)])["dimension"] == 0


def test_entry_json():
    ent = catalog(2, -1)[0]
    data = ent.to_json()
    assert data["degree"] == 2 and data["order"] == -1
    assert FourierForm.from_json(data["form"]) == ent.form
