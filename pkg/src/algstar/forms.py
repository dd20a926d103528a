"""Fourier-mode differential forms over an orthonormal coframe.

A :class:`FourierForm` of degree ``p`` is a finite sum

    sum_{k, I} f_{k,I}(r) e^{i k theta1} b^I

with ``f`` a :class:`RadialSymbol`, ``I`` a strictly increasing subset of
``{0,1,2,3}`` and ``b`` either the rotating coframe ``e`` (``e^0 = V^{1/2} dr``,
``e^1 = V^{1/2} r dtheta1``, ``e^2 = V^{1/2} dtheta2``, ``e^3 = V^{-1/2} Theta``)
or the Cartesian coframe ``E`` (``E^1 = V^{1/2} dx`` ... ``E^4 = e^3``).
E-indices are stored zero-based, so index ``0`` means ``E^1``.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Mapping

from sympy.polys.domains import QQ, QQ_I

from .radial import ModelParams, RadialSymbol

Index = tuple[int, ...]
TermKey = tuple[int, Index]

BASES = ("e", "E")
ALL_INDICES: list[Index] = [c for p in range(5) for c in combinations(range(4), p)]


def _perm_sign(seq: Iterable[int]) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def wedge_basis(I: Index, J: Index) -> tuple[int, Index]:
    """``b^I ^ b^J = sign * b^K``; sign 0 when the sets overlap."""
    if set(I) & set(J):
        return 0, ()
    return _perm_sign(I + J), tuple(sorted(I + J))


@lru_cache(maxsize=None)
def hodge_star_basis(I: Index) -> tuple[Index, int]:
    """Complement index and sign, orientation ``b^0123``."""
    I = tuple(I)
    if list(I) != sorted(set(I)) or any(i not in range(4) for i in I):
        raise ValueError(f"not a basis index: {I}")
    J = tuple(i for i in range(4) if i not in I)
    return J, _perm_sign(I + J)


def _check_index(I: Iterable[int]) -> Index:
    I = tuple(int(i) for i in I)
    if list(I) != sorted(set(I)) or any(i not in range(4) for i in I):
        raise ValueError(f"basis index must be strictly increasing in 0..3, got {I}")
    return I


class FourierForm:
    """Immutable Fourier-mode form; see the module docstring."""

    __slots__ = ("degree", "basis", "_terms", "_hash")

    def __init__(self, degree: int, terms: Mapping[TermKey, RadialSymbol] | None = None,
                 basis: str = "e", *, _trusted: bool = False):
        if degree not in range(5):
            raise ValueError(f"degree must be in 0..4, got {degree}")
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        self.degree = degree
        self.basis = basis
        if _trusted:
            self._terms = terms
        else:
            out: dict[TermKey, RadialSymbol] = {}
            for (k, I), f in (terms or {}).items():
                I = _check_index(I)
                if len(I) != degree:
                    raise ValueError(f"index {I} does not match degree {degree}")
                f = RadialSymbol._coerce(f)
                key = (int(k), I)
                out[key] = out[key] + f if key in out else f
            self._terms = {k: v for k, v in out.items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, degree: int, d: dict, basis: str) -> "FourierForm":
        return cls(degree, {k: v for k, v in d.items() if v}, basis, _trusted=True)

    # constructors
    @classmethod
    def zero(cls, degree: int, basis: str = "e") -> "FourierForm":
        return cls._raw(degree, {}, basis)

    @classmethod
    def scalar(cls, f=1, k: int = 0, basis: str = "e") -> "FourierForm":
        return cls(0, {(k, ()): RadialSymbol._coerce(f)}, basis)

    @classmethod
    def basis_form(cls, I: Iterable[int], coeff=1, k: int = 0, basis: str = "e") -> "FourierForm":
        I = _check_index(I)
        return cls(len(I), {(k, I): RadialSymbol._coerce(coeff)}, basis)

    # structure
    @property
    def terms(self) -> dict[TermKey, RadialSymbol]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def modes(self) -> set[int]:
        return {k for k, _ in self._terms}

    def component(self, k: int, I: Iterable[int]) -> RadialSymbol:
        return self._terms.get((k, tuple(I)), RadialSymbol.zero())

    def symbols(self) -> list[RadialSymbol]:
        return list(self._terms.values())

    # arithmetic
    def _same(self, other: "FourierForm") -> None:
        if not isinstance(other, FourierForm):
            raise TypeError("expected a FourierForm")
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch {self.degree} vs {other.degree}")
        if other.basis != self.basis:
            raise ValueError(f"basis mismatch {self.basis} vs {other.basis}; convert first")

    def __add__(self, other: "FourierForm") -> "FourierForm":
        if isinstance(other, int) and other == 0:
            return self
        self._same(other)
        out = dict(self._terms)
        for key, f in other._terms.items():
            out[key] = out[key] + f if key in out else f
        return FourierForm._raw(self.degree, out, self.basis)

    def __radd__(self, other) -> "FourierForm":
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    def __neg__(self) -> "FourierForm":
        return FourierForm._raw(self.degree, {k: -f for k, f in self._terms.items()}, self.basis)

    def __sub__(self, other: "FourierForm") -> "FourierForm":
        return self + (-other)

    def __mul__(self, c) -> "FourierForm":
        """Multiply every coefficient by a scalar or RadialSymbol (mode 0)."""
        if isinstance(c, FourierForm):
            return wedge(self, c)
        c = RadialSymbol._coerce(c)
        return FourierForm._raw(self.degree, {k: f * c for k, f in self._terms.items()}, self.basis)

    def __rmul__(self, c) -> "FourierForm":
        if isinstance(c, FourierForm):
            return wedge(c, self)
        return self * c

    def __truediv__(self, c) -> "FourierForm":
        return self * (RadialSymbol.const(1) / c)

    def __xor__(self, other: "FourierForm") -> "FourierForm":
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FourierForm):
            return NotImplemented
        if self.degree != other.degree:
            return False
        if self.basis != other.basis:
            return basis_convert(other, self.basis)._terms == self._terms
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            canon = self if self.basis == "e" else basis_convert(self, "e")
            self._hash = hash((self.degree, frozenset(canon._terms.items())))
        return self._hash

    def shift_mode(self, n: int) -> "FourierForm":
        """Multiply by ``e^{i n theta1}``."""
        return FourierForm._raw(self.degree, {(k + n, I): f for (k, I), f in self._terms.items()}, self.basis)

    def conj(self) -> "FourierForm":
        """Complex conjugate: conjugate coefficients and negate modes (basis forms are real)."""
        return FourierForm._raw(self.degree, {(-k, I): f.conj() for (k, I), f in self._terms.items()}, self.basis)

    def map_symbols(self, fn: Callable[[RadialSymbol], RadialSymbol]) -> "FourierForm":
        return FourierForm._raw(self.degree, {k: fn(f) for k, f in self._terms.items()}, self.basis)

    def specialize(self, params: ModelParams | None) -> "FourierForm":
        """Set ``tau = 0`` when ``params.nu == 0``; otherwise unchanged."""
        if params is not None and params.nu == 0:
            return self.map_symbols(RadialSymbol.scale_tau_zero)
        return self

    def leading_order(self):
        """Max of the coefficient leading orders (``None`` for the zero form)."""
        if not self._terms:
            return None
        return max(f.leading_order() for f in self._terms.values())

    def evaluate(self, r: float, theta1: float, params: ModelParams) -> dict[Index, complex]:
        """Numeric frame components at ``(r, theta1)``."""
        import cmath

        out: dict[Index, complex] = {}
        for (k, I), f in self._terms.items():
            out[I] = out.get(I, 0j) + f.evaluate(r, params) * cmath.exp(1j * k * theta1)
        return out

    # serialization
    def to_json(self) -> dict:
        terms = [{"k": k, "I": list(I), "symbol": f.to_json()}
                 for (k, I), f in sorted(self._terms.items())]
        out = {"degree": self.degree, "terms": terms}
        if self.basis != "e":
            out["basis"] = self.basis
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "FourierForm":
        terms = {(int(t["k"]), tuple(t["I"])): RadialSymbol.from_json(t["symbol"]) for t in data["terms"]}
        return cls(int(data["degree"]), terms, data.get("basis", "e"))

    def __repr__(self) -> str:
        if not self._terms:
            return f"FourierForm({self.degree}, 0, basis={self.basis})"
        name = "e" if self.basis == "e" else "E"
        parts = []
        for (k, I), f in sorted(self._terms.items()):
            idx = "".join(str(i if self.basis == "e" else i + 1) for i in I)
            parts.append(f"e^(i*{k}*th1) * {f!r}" + (f" {name}^{idx}" if idx else ""))
        return f"FourierForm({self.degree}, basis={self.basis}: " + " + ".join(parts) + ")"


def wedge(a: FourierForm, b: FourierForm) -> FourierForm:
    if a.degree + b.degree > 4:
        raise ValueError(f"wedge degree overflow: {a.degree} + {b.degree} > 4")
    if a.basis != b.basis:
        b = basis_convert(b, a.basis)
    out: dict[TermKey, RadialSymbol] = {}
    for (k1, I), f in a._terms.items():
        for (k2, J), g in b._terms.items():
            sign, K = wedge_basis(I, J)
            if not sign:
                continue
            fg = f * g
            key = (k1 + k2, K)
            term = fg if sign > 0 else -fg
            out[key] = out[key] + term if key in out else term
    return FourierForm._raw(a.degree + b.degree, out, a.basis)


def wedge_all(forms: Iterable[FourierForm]) -> FourierForm:
    forms = list(forms)
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def hodge_star(a: FourierForm) -> FourierForm:
    out: dict[TermKey, RadialSymbol] = {}
    for (k, I), f in a._terms.items():
        J, sign = hodge_star_basis(I)
        out[(k, J)] = f if sign > 0 else -f
    return FourierForm._raw(4 - a.degree, out, a.basis)


# self-dual / anti-self-dual basis
def omega_plus(i: int, basis: str = "e") -> FourierForm:
    return _omega(i, +1, basis)


def omega_minus(i: int, basis: str = "e") -> FourierForm:
    return _omega(i, -1, basis)


def _omega(i: int, eps: int, basis: str) -> FourierForm:
    # w1 = b01 + eps b23, w2 = b02 - eps b13, w3 = b03 + eps b12
    pairs = {1: ((0, 1), (2, 3), 1), 2: ((0, 2), (1, 3), -1), 3: ((0, 3), (1, 2), 1)}
    if i not in pairs:
        raise ValueError("omega index must be 1, 2 or 3")
    A, B, s = pairs[i]
    return FourierForm(2, {(0, A): 1, (0, B): s * eps}, basis)


def sd_asd_split(a: FourierForm) -> tuple[FourierForm, FourierForm]:
    if a.degree != 2:
        raise ValueError(f"sd_asd_split needs a 2-form, got degree {a.degree}")
    s = hodge_star(a)
    return (a + s) / 2, (a - s) / 2


# e <-> E conversion
_HALF = QQ_I(QQ(1, 2), 0)
_IHALF = QQ_I(0, QQ(1, 2))


@lru_cache(maxsize=None)
def _convert_one(i: int, target: str) -> FourierForm:
    """A single source 1-form written in the target basis."""
    terms: dict[TermKey, RadialSymbol] = {}

    def put(k, j, c):
        terms[(k, (j,))] = RadialSymbol.const(c)

    if i >= 2:
        put(0, i, 1)
    elif target == "E":
        # e0 = cos E1 + sin E2, e1 = -sin E1 + cos E2
        if i == 0:
            put(1, 0, _HALF); put(-1, 0, _HALF); put(1, 1, -_IHALF); put(-1, 1, _IHALF)
        else:
            put(1, 0, _IHALF); put(-1, 0, -_IHALF); put(1, 1, _HALF); put(-1, 1, _HALF)
    else:
        # E1 = cos e0 - sin e1, E2 = sin e0 + cos e1
        if i == 0:
            put(1, 0, _HALF); put(-1, 0, _HALF); put(1, 1, _IHALF); put(-1, 1, -_IHALF)
        else:
            put(1, 0, -_IHALF); put(-1, 0, _IHALF); put(1, 1, _HALF); put(-1, 1, _HALF)
    return FourierForm(1, terms, target)


@lru_cache(maxsize=None)
def _convert_basis_elem(I: Index, target: str) -> FourierForm:
    if not I:
        return FourierForm.scalar(1, basis=target)
    return wedge_all(_convert_one(i, target) for i in I)


def basis_convert(a: FourierForm, target: str) -> FourierForm:
    """Re-express ``a`` in the ``e`` or ``E`` coframe (modes shift by one per planar index)."""
    if target not in BASES:
        raise ValueError(f"unknown basis {target!r}")
    if a.basis == target:
        return a
    out: dict[TermKey, RadialSymbol] = {}
    for (k, I), f in a._terms.items():
        for (k2, J), c in _convert_basis_elem(I, target)._terms.items():
            key = (k + k2, J)
            term = f * c
            out[key] = out[key] + term if key in out else term
    return FourierForm._raw(a.degree, out, target)


def e(i: int, coeff=1, k: int = 0) -> FourierForm:
    """The e-basis 1-form ``coeff * e^{ik theta1} e^i``."""
    return FourierForm.basis_form((i,), coeff, k, "e")


def E(i: int, coeff=1, k: int = 0) -> FourierForm:
    """The E-basis 1-form ``coeff * e^{ik theta1} E^i`` with ``i`` in 1..4."""
    if i not in (1, 2, 3, 4):
        raise ValueError("E index runs over 1..4")
    return FourierForm.basis_form((i - 1,), coeff, k, "E")
