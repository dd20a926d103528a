"""Closed-form harmonic functions, 1-forms and 2-forms on the model end.

Entries are graded by their order: the leading ``r``-exponent of the
orthonormal-frame coefficients.  Free constants are set to 1 and overall
positive scalars are dropped, so spans rather than normalizations matter.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .calculus import codifferential, exterior_derivative, hodge_laplacian
from .forms import FourierForm, basis_convert, omega_minus, wedge
from .hyperkahler import hk_triple, jstar
from .radial import ModelParams, RadialSymbol

R = RadialSymbol.r
V = RadialSymbol.V
TAU = RadialSymbol.tau()
I = RadialSymbol.i()
HALF = Fraction(1, 2)
F = Fraction


@dataclass(frozen=True)
class CatalogEntry:
    degree: int
    order: int
    family: str
    form: FourierForm = field(compare=False)
    constants: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"degree": self.degree, "order": self.order, "family": self.family,
                "constants": list(self.constants), "form": self.form.to_json()}


def _conj_entry(ent: CatalogEntry) -> CatalogEntry | None:
    form = ent.form.conj()
    if form == ent.form:
        return None
    return CatalogEntry(ent.degree, ent.order, ent.family + "-conj", form, ent.constants)


def _with_conj(entries: list[CatalogEntry]) -> list[CatalogEntry]:
    out = []
    for ent in entries:
        out.append(ent)
        c = _conj_entry(ent)
        if c is not None:
            out.append(c)
    return out


# functions ---------------------------------------------------------------------

def _function_symbols(q: int) -> list[tuple[str, RadialSymbol, int]]:
    if q == 0:
        return [("Fn-A", RadialSymbol.const(1), 0), ("Fn-B", V(1), 0)]
    return [("Fn-A", R(q), q), ("Fn-B", R(q), -q)]


def _functions(q: int) -> list[CatalogEntry]:
    return [CatalogEntry(0, q, tag, FourierForm.scalar(f, k), ("A" if tag.endswith("A") else "B",))
            for tag, f, k in _function_symbols(q)]


def functions_basis(k: int) -> list[CatalogEntry]:
    """Harmonic functions of growth order ``k >= 0``: ``{1, V}`` or ``r^k e^{+-ik theta1}``."""
    if k < 0:
        raise ValueError("functions_basis takes k >= 0; decaying solutions r^{-k} live at order -k")
    return _functions(k)


# 1-forms -------------------------------------------------------------------------

def _holo_frame(u: RadialSymbol, mode: int) -> FourierForm:
    """``u e^{i mode theta1} V^{1/2} dz`` with ``V^{1/2} dz = e^{i theta1}(e^0 + i e^1)``."""
    return FourierForm(1, {(mode + 1, (0,)): u, (mode + 1, (1,)): u * I})


def _type1_raw(q: int) -> list[CatalogEntry]:
    a = CatalogEntry(1, q, "TypeI-A", _holo_frame(V(-HALF) * R(q), q), ("A",))
    if q == 0:
        b = CatalogEntry(1, q, "TypeI-B", _holo_frame(V(F(3, 2)), 0), ("B",))
    else:
        u = R(q) * (TAU * V(-HALF) - 2 * q * V(HALF))
        b = CatalogEntry(1, q, "TypeI-B", _holo_frame(u, -q), ("B",))
    return [a, b]


def oneforms_typeI(k: int) -> list[CatalogEntry]:
    """Type I harmonic 1-forms of order ``k`` and their conjugates."""
    out = []
    for ent in _type1_raw(k):
        out.append(ent)
        fam = ent.family.replace("TypeI-", "TypeI-conj-")
        out.append(CatalogEntry(1, k, fam, ent.form.conj(), ent.constants))
    return out


def oneforms_typeII(k: int) -> list[CatalogEntry]:
    """``J^*`` images of the Type I entries; the order is unchanged."""
    return [CatalogEntry(1, k, ent.family.replace("TypeI", "TypeII"), jstar(ent.form), ent.constants)
            for ent in oneforms_typeI(k)]


# 2-forms -------------------------------------------------------------------------

def twoforms_sd(k: int) -> list[CatalogEntry]:
    """``h w_i`` for harmonic ``h`` of order ``k`` and the hyperkähler triple."""
    triple = hk_triple()
    out = []
    for name, w in zip("IJK", triple):
        for fn in _functions(k):
            tag = f"SD-{name}-{fn.family[-1]}"
            out.append(CatalogEntry(2, k, tag, wedge(fn.form, w), fn.constants))
    return out


def _asd_w23(b: RadialSymbol, c: RadialSymbol, mode: int) -> FourierForm:
    return (omega_minus(2) * b + omega_minus(3) * c).shift_mode(mode)


def _generic_w23(q: int) -> FourierForm:
    qq = F(q)
    b = I / (q - 1) * R(q) * (-(qq - 1) / (2 * qq) * V(1) + (2 * qq - 1) / (2 * qq**2) * TAU
                              + (qq - 1) ** 2 / (4 * qq**3) * TAU**2 * V(-1))
    c = R(q) * (-1 / (2 * qq) * V(1) + 1 / (2 * qq**2) * TAU - (qq + 1) / (4 * qq**3) * TAU**2 * V(-1)
                + 1 / (4 * qq**3) * TAU**3 * V(-2))
    return _asd_w23(b, c, 1 - q)


def _closed_w23(q: int) -> FourierForm:
    b = V(-1) * R(q)
    c = V(-2) * R(q) * ((q + 1) * V(1) - TAU) / (I * (q + 1))
    return _asd_w23(b, c, q + 1)


def twoforms_asd(k: int) -> list[CatalogEntry]:
    """Anti-self-dual harmonic 2-forms of order ``k`` (with conjugates)."""
    q = k
    w1 = omega_minus(1)
    out = [CatalogEntry(2, q, "ASD-w1-" + fn.family[-1], wedge(fn.form, w1), fn.constants) for fn in _functions(q)]
    lines: list[CatalogEntry] = []
    if q not in (0, 1):
        lines.append(CatalogEntry(2, q, "ASD-w23-generic", _generic_w23(q), ("C1",)))
    if q == 0:
        b = I * (F(1, 3) * TAU**-1 * V(2) + V(1) / 2 + TAU / 2)
        c = F(1, 3) * TAU**-1 * V(2) + V(1) / 6
        lines.append(CatalogEntry(2, q, "ASD-w23-k0", _asd_w23(b, c, 1), ("C1",)))
    if q == 1:
        lines.append(CatalogEntry(2, q, "ASD-w23-k1a", _asd_w23(R(1), RadialSymbol.zero(), 0), ("C2",)))
        c = R(1) * (V(2) / 2 - TAU * V(1) + F(3, 2) * TAU**2 - F(3, 2) * TAU**3 * V(-1) + F(3, 4) * TAU**4 * V(-2))
        lines.append(CatalogEntry(2, q, "ASD-w23-k1b", _asd_w23(RadialSymbol.zero(), c, 0), ("C1",)))
    if q != -1:
        lines.append(CatalogEntry(2, q, "ASD-w23-closed", _closed_w23(q), ("A1",)))
    if q == -1:
        lines.append(CatalogEntry(2, q, "ASD-w23-km1a", _asd_w23(R(-1), RadialSymbol.zero(), 0), ("A2",)))
        lines.append(CatalogEntry(2, q, "ASD-w23-km1b", _asd_w23(RadialSymbol.zero(), V(-2) * R(-1), 0), ("A2",)))
    return out + _with_conj(lines)


# queries -------------------------------------------------------------------------

def catalog(degree: int, order: int) -> list[CatalogEntry]:
    """All catalog entries of one degree and order (any integer order)."""
    if degree == 0:
        return _functions(order)
    if degree == 1:
        return oneforms_typeI(order) + oneforms_typeII(order)
    if degree == 2:
        return twoforms_sd(order) + twoforms_asd(order)
    raise ValueError(f"catalog covers degrees 0, 1, 2; got {degree}")


def full_catalog(orders: Sequence[int] = range(-5, 6), degrees: Sequence[int] = (0, 1, 2)) -> list[CatalogEntry]:
    return [ent for p in degrees for q in orders for ent in catalog(p, q)]


def verify_harmonic(entry: CatalogEntry | FourierForm, params: ModelParams | None = None) -> FourierForm:
    """Laplacian residual; the catalog contract is the zero form."""
    form = getattr(entry, "form", entry)
    return hodge_laplacian(form, params)


def decay_order(entry: CatalogEntry | FourierForm) -> tuple[int, Fraction]:
    """Largest coefficient leading order in the orthonormal e frame."""
    form = getattr(entry, "form", entry)
    if form.basis != "e":
        form = basis_convert(form, "e")
    order = form.leading_order()
    if order is None:
        raise ValueError("zero form has no decay order")
    return order


def basis_Z(p: int, q0: int, generators: Sequence = ()) -> list[CatalogEntry]:
    """Order-``q0`` degree-``p`` entries fixed by every generator."""
    from .groups import invariant_subspace
    return invariant_subspace(catalog(p, q0), list(generators))


def is_closed_coclosed(entry: CatalogEntry | FourierForm) -> bool:
    form = getattr(entry, "form", entry)
    return exterior_derivative(form).is_zero() and codifferential(form).is_zero()


def perturbed_entry() -> CatalogEntry:
    """A deliberately wrong entry (``V^{5/2}`` in place of ``V^{3/2}``) for negative controls."""
    return CatalogEntry(1, 0, "TypeI-B-perturbed", _holo_frame(V(F(5, 2)), 0), ("B",))


# linear algebra on spans -----------------------------------------------------------

def _coordinates(forms: Sequence[FourierForm], tags: Sequence[str] | None = None):
    tags = tags or [""] * len(forms)
    keys = sorted({(tag, k, I) + mono for f, tag in zip(forms, tags) for (k, I), s in f.items() for mono in s.raw_terms})
    return {key: i for i, key in enumerate(keys)}


def form_matrix(columns: Sequence[Sequence[FourierForm]]):
    """Exact coefficient matrix; each column is a tuple of forms stacked vertically."""
    from sympy.polys.domains import QQ_I
    from sympy.polys.matrices import DomainMatrix

    flat = [(str(slot), f) for col in columns for slot, f in enumerate(col)]
    keys = _coordinates([f for _, f in flat], [t for t, _ in flat])
    rows = [[QQ_I(0)] * len(columns) for _ in range(max(len(keys), 1))]
    for j, col in enumerate(columns):
        for slot, f in enumerate(col):
            for (k, I), s in f.items():
                for mono, c in s.raw_terms.items():
                    rows[keys[(str(slot), k, I) + mono]][j] = c
    return DomainMatrix(rows, (max(len(keys), 1), len(columns)), QQ_I)


def span_rank(forms: Sequence[FourierForm]) -> int:
    forms = [basis_convert(f, "e") for f in forms]
    if not forms:
        return 0
    return form_matrix([(f,) for f in forms]).rank()


def closed_coclosed_span(forms: Sequence[FourierForm]) -> list[FourierForm]:
    """Basis of the closed and co-closed forms inside ``span(forms)``."""
    forms = [basis_convert(f, "e") for f in forms]
    if not forms:
        return []
    M = form_matrix([(exterior_derivative(f), codifferential(f)) for f in forms])
    out = []
    for row in M.nullspace().to_list():
        acc = FourierForm.zero(forms[0].degree)
        for c, f in zip(row, forms):
            if c:
                acc = acc + f * RadialSymbol.const(c)
        if acc:
            out.append(acc)
    return out


def dtheta2() -> FourierForm:
    """``d theta2 = V^{-1/2} e^2``."""
    return FourierForm.basis_form((2,), V(-HALF))


def w1_space(generators: Sequence = ()) -> dict:
    """Bounded closed and co-closed invariant 1-forms of order 0 modulo differentials of order-1 functions.

    Returns the quotient dimension and whether ``d theta2`` represents a
    nonzero class in it.
    """
    ones = [e.form for e in basis_Z(1, 0, generators)]
    exact = [exterior_derivative(e.form) for e in basis_Z(0, 1, generators)]
    harmonic = closed_coclosed_span(ones)
    r_ex = span_rank(exact)
    r_all = span_rank(harmonic + exact)
    dth = dtheta2()
    in_space = span_rank(harmonic + exact + [dth]) == r_all
    nontrivial = span_rank(exact + [dth]) > r_ex
    return {"dimension": r_all - r_ex, "contains_dtheta2": bool(in_space and nontrivial),
            "closed_coclosed_dimension": span_rank(harmonic), "exact_dimension": r_ex}
