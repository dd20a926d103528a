"""Coframe geometry of the model end: structure equations, connection, curvature."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .calculus import coframe_d, exterior_derivative
from .forms import FourierForm, basis_convert, hodge_star, hodge_star_basis, wedge
from .radial import ModelParams, RadialSymbol

__all__ = [
    "CoframeIndex", "gauge_s", "coframe_d", "hodge_star_basis", "frame_differentials",
    "connection_forms", "curvature_forms", "ricci_contraction", "volume_form",
    "structure_residual", "bianchi_residual", "geometry_report",
]

Matrix = list[list[FourierForm]]


@dataclass(frozen=True)
class CoframeIndex:
    """A coframe 1-form label: ``e`` uses 0..3, ``E`` uses 1..4."""

    basis: str
    index: int

    def __post_init__(self):
        rng = range(4) if self.basis == "e" else range(1, 5) if self.basis == "E" else None
        if rng is None:
            raise ValueError(f"unknown basis {self.basis!r}")
        if self.index not in rng:
            raise ValueError(f"index {self.index} out of range for basis {self.basis}")

    def form(self) -> FourierForm:
        slot = self.index if self.basis == "e" else self.index - 1
        return FourierForm.basis_form((slot,), basis=self.basis)


def gauge_s(params: ModelParams | None = None) -> RadialSymbol:
    """The gauge function ``s = r V^{1/2}``."""
    return RadialSymbol.monomial(1, Fraction(1, 2))


@lru_cache(maxsize=None)
def frame_differentials(basis: str = "e") -> tuple[FourierForm, ...]:
    """``d b^i`` for the four coframe forms of ``basis``, written in that basis."""
    if basis == "e":
        return tuple(coframe_d(i) for i in range(4))
    out = []
    for i in range(4):
        Ei = FourierForm.basis_form((i,), basis="E")
        out.append(exterior_derivative(Ei))
    return tuple(out)


def _zero_matrix(degree: int, basis: str) -> Matrix:
    return [[FourierForm.zero(degree, basis) for _ in range(4)] for _ in range(4)]


@lru_cache(maxsize=None)
def _connection(basis: str) -> tuple[tuple[FourierForm, ...], ...]:
    # d b^i = 1/2 D_ijk b^j ^ b^k, Gamma_ijk = 1/2 (D_ijk - D_jik - D_kij), w^i_j = Gamma_ijk b^k
    D = [[[FourierForm.zero(0, basis) for _ in range(4)] for _ in range(4)] for _ in range(4)]
    for i, dbi in enumerate(frame_differentials(basis)):
        for (mode, (a, b)), f in dbi.items():
            piece = FourierForm.scalar(f, mode, basis)
            D[i][a][b] = D[i][a][b] + piece
            D[i][b][a] = D[i][b][a] - piece
    omega = _zero_matrix(1, basis)
    for i in range(4):
        for j in range(4):
            acc = FourierForm.zero(1, basis)
            for k in range(4):
                gamma = (D[i][j][k] - D[j][i][k] - D[k][i][j]) / 2
                if gamma:
                    acc = acc + wedge(gamma, FourierForm.basis_form((k,), basis=basis))
            omega[i][j] = acc
    return tuple(tuple(row) for row in omega)


def _specialize(M, params: ModelParams | None) -> Matrix:
    return [[x.specialize(params) for x in row] for row in M]


def connection_forms(params: ModelParams | None = None, basis: str = "e") -> Matrix:
    """Levi-Civita connection 1-forms ``w[i][j]`` with ``d b^i = -w^i_j ^ b^j``.

    In the rotating e-frame the entries carry the flat polar term
    ``r^{-1} V^{-1/2}``; the Cartesian E-frame entries decay like
    ``r^{-1} V^{-3/2}``.
    """
    return _specialize(_connection(basis), params)


@lru_cache(maxsize=None)
def _curvature(basis: str) -> tuple[tuple[FourierForm, ...], ...]:
    w = _connection(basis)
    out = _zero_matrix(2, basis)
    for i in range(4):
        for j in range(4):
            acc = exterior_derivative(w[i][j])
            for k in range(4):
                acc = acc + wedge(w[i][k], w[k][j])
            out[i][j] = acc
    return tuple(tuple(row) for row in out)


def curvature_forms(params: ModelParams | None = None, basis: str = "e") -> Matrix:
    """Curvature 2-forms ``W = dw + w ^ w``."""
    return _specialize(_curvature(basis), params)


def _pair(two_form: FourierForm, a: int, b: int) -> FourierForm:
    """``W(b_a, b_b)`` as a 0-form."""
    if a == b:
        return FourierForm.zero(0, two_form.basis)
    lo, hi = min(a, b), max(a, b)
    sign = 1 if a < b else -1
    terms = {(k, ()): f * sign for (k, I), f in two_form.items() if I == (lo, hi)}
    return FourierForm(0, terms, two_form.basis)


def ricci_contraction(curv: Matrix) -> Matrix:
    """``Ric_ij = sum_k W^k_i(b_k, b_j)``."""
    basis = curv[0][0].basis
    out = [[FourierForm.zero(0, basis) for _ in range(4)] for _ in range(4)]
    for i in range(4):
        for j in range(4):
            acc = FourierForm.zero(0, basis)
            for k in range(4):
                acc = acc + _pair(curv[k][i], k, j)
            out[i][j] = acc
    return out


def volume_form(params: ModelParams | None = None, basis: str = "e") -> FourierForm:
    return FourierForm.basis_form((0, 1, 2, 3), basis=basis)


def structure_residual(params: ModelParams | None = None, basis: str = "e") -> list[FourierForm]:
    """``d b^i + w^i_j ^ b^j`` for each ``i`` (exact zero expected)."""
    w = connection_forms(params, basis)
    dfr = [x.specialize(params) for x in frame_differentials(basis)]
    out = []
    for i in range(4):
        acc = dfr[i]
        for j in range(4):
            acc = acc + wedge(w[i][j], FourierForm.basis_form((j,), basis=basis))
        out.append(acc)
    return out


def bianchi_residual(params: ModelParams | None = None, basis: str = "e") -> Matrix:
    """``dW + w ^ W - W ^ w`` entrywise."""
    w = connection_forms(params, basis)
    W = curvature_forms(params, basis)
    out = _zero_matrix(3, basis)
    for i in range(4):
        for j in range(4):
            acc = exterior_derivative(W[i][j]).specialize(params)
            for k in range(4):
                acc = acc + wedge(w[i][k], W[k][j]) - wedge(W[i][k], w[k][j])
            out[i][j] = acc
    return out


def _order_str(order) -> list | None:
    if order is None:
        return None
    m, s = order
    return [m, str(s)]


def geometry_report(params: ModelParams) -> dict:
    """Exact structure checks and decay data for the JSON report."""
    out: dict = {}
    for basis in ("e", "E"):
        w = connection_forms(params, basis)
        W = curvature_forms(params, basis)
        antisym = all((w[i][j] + w[j][i]).is_zero() for i in range(4) for j in range(4))
        struct = all(x.is_zero() for x in structure_residual(params, basis))
        bianchi = all(x.is_zero() for row in bianchi_residual(params, basis) for x in row)
        ric = ricci_contraction(W)
        ricci_flat = all(x.is_zero() for row in ric for x in row)
        conn_orders = {f"{i}{j}": _order_str(w[i][j].leading_order()) for i in range(4) for j in range(i + 1, 4)}
        curv_orders = {f"{i}{j}": _order_str(W[i][j].leading_order()) for i in range(4) for j in range(i + 1, 4)}
        curv_max = max((W[i][j].leading_order() for i in range(4) for j in range(4) if W[i][j]), default=None)
        conn_max = max((w[i][j].leading_order() for i in range(4) for j in range(4) if w[i][j]), default=None)
        out[basis] = {
            "connection_antisymmetric": antisym,
            "first_structure_equation_zero": struct,
            "bianchi_zero": bianchi,
            "ricci_flat": ricci_flat,
            "connection_leading_orders": conn_orders,
            "connection_max_order": _order_str(conn_max),
            "curvature_leading_orders": curv_orders,
            "curvature_max_order": _order_str(curv_max),
            "curvature_decay_ok": curv_max is None or curv_max <= (-2, Fraction(-2)),
        }
    out["E"]["connection_decay_ok"] = (
        out["E"]["connection_max_order"] is None
        or connection_max(params, "E") <= (-1, Fraction(-3, 2))
    )
    star_ok = all(hodge_star(hodge_star(FourierForm.basis_form(I))) ==
                  FourierForm.basis_form(I) * ((-1) ** (len(I) * (4 - len(I))))
                  for I in _all_indices())
    out["double_star_sign_ok"] = star_ok
    return out


def connection_max(params: ModelParams | None, basis: str):
    w = connection_forms(params, basis)
    return max((w[i][j].leading_order() for i in range(4) for j in range(4) if w[i][j]), default=None)


def _all_indices():
    from .forms import ALL_INDICES
    return ALL_INDICES
