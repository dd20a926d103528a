"""Exact radial coefficient ring.

Elements are finite sums ``sum c * r**m * V**s`` with ``m`` an integer, ``s`` a
half-integer and ``c`` a Laurent polynomial in the formal parameter
``tau = nu / (2 pi)`` over the Gaussian rationals.  Because ``V' = tau / r``
the ring is closed under ``d/dr``.

Internally a symbol is a flat dict ``(m, s2, t) -> QQ_I`` where ``s2 = 2 s``
and ``t`` is the power of ``tau``.  Values are immutable once built.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from sympy.polys.domains import QQ, QQ_I

Key = tuple[int, int, int]

_ZERO = QQ_I(0)
_ONE = QQ_I(1)
_I = QQ_I(0, 1)


def _qq(x) -> object:
    """Convert an exact rational-like value into a QQ element."""
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    if isinstance(x, int):
        return QQ(x)
    if isinstance(x, str):
        f = Fraction(x)
        return QQ(f.numerator, f.denominator)
    return QQ.convert(x)


def to_gauss(x) -> object:
    """Coerce ``x`` into an exact Gaussian rational.

    Accepts ints, Fractions, ``"p/q"`` strings, QQ_I elements and complex
    numbers whose parts are integral (``1j``, ``2-3j``).  Floats with a
    fractional part are refused so exactness is never lost silently.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Fraction, str)):
        return QQ_I(_qq(x), 0)
    if isinstance(x, complex):
        if x.real != int(x.real) or x.imag != int(x.imag):
            raise TypeError(f"inexact complex scalar {x!r}")
        return QQ_I(int(x.real), int(x.imag))
    if isinstance(x, float):
        if x != int(x):
            raise TypeError(f"inexact float scalar {x!r}")
        return QQ_I(int(x), 0)
    if QQ_I.of_type(x):
        return x
    return QQ_I.convert(x)


def gauss_conj(c):
    return QQ_I(c.x, -c.y)


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def gauss_complex(c) -> complex:
    return complex(float(_frac(c.x)), float(_frac(c.y)))


def _canon(d: Mapping) -> dict:
    return {k: v for k, v in d.items() if v}


class ScalarCoeff:
    """Laurent polynomial in ``tau`` with Gaussian-rational coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        self._terms = _canon({int(t): to_gauss(c) for t, c in (terms or {}).items()})

    @classmethod
    def const(cls, c) -> "ScalarCoeff":
        return cls({0: c})

    @classmethod
    def tau(cls, power: int = 1) -> "ScalarCoeff":
        return cls({power: 1})

    @property
    def terms(self) -> dict[int, object]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other) -> "ScalarCoeff":
        other = _as_scalar(other)
        out = dict(self._terms)
        for t, c in other._terms.items():
            out[t] = out.get(t, _ZERO) + c
        return ScalarCoeff(out)

    __radd__ = __add__

    def __neg__(self) -> "ScalarCoeff":
        return ScalarCoeff({t: -c for t, c in self._terms.items()})

    def __sub__(self, other) -> "ScalarCoeff":
        return self + (-_as_scalar(other))

    def __mul__(self, other) -> "ScalarCoeff":
        other = _as_scalar(other)
        out: dict[int, object] = {}
        for t1, c1 in self._terms.items():
            for t2, c2 in other._terms.items():
                out[t1 + t2] = out.get(t1 + t2, _ZERO) + c1 * c2
        return ScalarCoeff(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        try:
            other = _as_scalar(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def conj(self) -> "ScalarCoeff":
        return ScalarCoeff({t: gauss_conj(c) for t, c in self._terms.items()})

    def evaluate(self, tau: float) -> complex:
        if tau == 0 and any(t < 0 for t in self._terms):
            raise ZeroDivisionError("negative tau power at tau = 0")
        return sum((gauss_complex(c) * tau**t for t, c in self._terms.items()), 0j)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"({gauss_complex(c)})*tau^{t}" for t, c in sorted(self._terms.items()))


def _as_scalar(x) -> ScalarCoeff:
    if isinstance(x, ScalarCoeff):
        return x
    return ScalarCoeff.const(x)


@dataclass(frozen=True)
class ModelParams:
    """Model-space parameters ``(nu, kappa0, L, R)``.

    ``nu = 0`` is a flat sanity mode with ``V == kappa0``.  For ``nu >= 1``
    the inner radius must satisfy ``V(R) > 1``.
    """

    nu: int = 2
    kappa0: float = 1.0
    L: float = 1.0
    R: float = math.e**2

    def __post_init__(self):
        if isinstance(self.nu, bool) or int(self.nu) != self.nu or self.nu < 0:
            raise ValueError(f"nu must be a nonnegative integer, got {self.nu!r}")
        object.__setattr__(self, "nu", int(self.nu))
        if not (self.L > 0):
            raise ValueError("L must be positive")
        if not (self.R > 0):
            raise ValueError("R must be positive")
        if self.nu >= 1 and not self.V(self.R) > 1:
            bound = self.radius_bound()
            raise ValueError(
                f"inner radius R={self.R} violates R > exp(2*pi*(1 - kappa0)/nu) = {bound:.6g}"
                " (equivalently V(R) > 1)"
            )

    @property
    def tau(self) -> float:
        return self.nu / (2 * math.pi)

    def radius_bound(self) -> float:
        if self.nu == 0:
            return 0.0
        return math.exp(2 * math.pi * (1 - self.kappa0) / self.nu)

    def V(self, r):
        return self.kappa0 + self.tau * math.log(r)

    def to_dict(self) -> dict:
        return {"nu": self.nu, "kappa0": self.kappa0, "L": self.L, "R": self.R}

    @classmethod
    def unchecked(cls, nu: int, kappa0: float, L: float = 1.0, R: float = 1.0) -> "ModelParams":
        """Build params without the inner-radius check (symbolic use only)."""
        obj = object.__new__(cls)
        for k, v in dict(nu=int(nu), kappa0=kappa0, L=L, R=R).items():
            object.__setattr__(obj, k, v)
        return obj


def _half(s) -> int:
    s2 = Fraction(s) * 2
    if s2.denominator != 1:
        raise ValueError(f"V exponent must be a half-integer, got {s}")
    return int(s2)


class RadialSymbol:
    """Finite sum ``sum c_{m,s}(tau) r^m V^s``.

    Build with the helpers :meth:`r`, :meth:`V`, :meth:`tau`, :meth:`const`
    and ordinary arithmetic, e.g. ``RadialSymbol.V(Fraction(3, 2)) * RadialSymbol.r(-1)``.
    Integer and half-integer powers of single-term symbols are supported via
    ``**``.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Key, object] | None = None, *, _trusted: bool = False):
        if _trusted:
            self._terms = terms  # type: ignore[assignment]
        else:
            self._terms = _canon({(int(m), int(s2), int(t)): to_gauss(c) for (m, s2, t), c in (terms or {}).items()})
        self._hash = None

    @classmethod
    def _raw(cls, d: dict) -> "RadialSymbol":
        return cls(_canon(d), _trusted=True)

    # constructors
    @classmethod
    def zero(cls) -> "RadialSymbol":
        return cls._raw({})

    @classmethod
    def const(cls, c=1) -> "RadialSymbol":
        if isinstance(c, ScalarCoeff):
            return cls._raw({(0, 0, t): v for t, v in c.terms.items()})
        return cls._raw({(0, 0, 0): to_gauss(c)})

    @classmethod
    def monomial(cls, m: int = 0, s=0, coeff=1, tau_pow: int = 0) -> "RadialSymbol":
        if isinstance(coeff, ScalarCoeff):
            return cls._raw({(m, _half(s), tau_pow + t): v for t, v in coeff.terms.items()})
        return cls._raw({(m, _half(s), tau_pow): to_gauss(coeff)})

    @classmethod
    def r(cls, m: int = 1) -> "RadialSymbol":
        return cls.monomial(m=m)

    @classmethod
    def V(cls, s=1) -> "RadialSymbol":
        return cls.monomial(s=s)

    @classmethod
    def tau(cls, power: int = 1) -> "RadialSymbol":
        return cls.monomial(tau_pow=power)

    @classmethod
    def i(cls) -> "RadialSymbol":
        return cls.const(_I)

    # structure
    @property
    def raw_terms(self) -> dict[Key, object]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficients(self) -> dict[tuple[int, Fraction], ScalarCoeff]:
        """Group by ``(m, s)`` into ScalarCoeff values."""
        groups: dict[tuple[int, int], dict[int, object]] = {}
        for (m, s2, t), c in self._terms.items():
            groups.setdefault((m, s2), {})[t] = c
        return {(m, Fraction(s2, 2)): ScalarCoeff(g) for (m, s2), g in groups.items()}

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    # arithmetic
    @staticmethod
    def _coerce(x) -> "RadialSymbol":
        if isinstance(x, RadialSymbol):
            return x
        return RadialSymbol.const(x)

    def __add__(self, other) -> "RadialSymbol":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, _ZERO) + c
        return RadialSymbol._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "RadialSymbol":
        return RadialSymbol._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "RadialSymbol":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RadialSymbol":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RadialSymbol":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out: dict[Key, object] = {}
        for (m1, s1, t1), c1 in self._terms.items():
            for (m2, s2, t2), c2 in other._terms.items():
                k = (m1 + m2, s1 + s2, t1 + t2)
                out[k] = out.get(k, _ZERO) + c1 * c2
        return RadialSymbol._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RadialSymbol":
        if isinstance(other, RadialSymbol):
            return self * other.inverse()
        c = to_gauss(other)
        if not c:
            raise ZeroDivisionError("division by zero scalar")
        inv = _ONE / c
        return RadialSymbol._raw({k: v * inv for k, v in self._terms.items()})

    def __rtruediv__(self, other) -> "RadialSymbol":
        return self._coerce(other) * self.inverse()

    def inverse(self) -> "RadialSymbol":
        """Inverse of a single-term symbol."""
        if len(self._terms) != 1:
            raise ValueError("only single-term symbols are invertible")
        ((m, s2, t), c), = self._terms.items()
        return RadialSymbol._raw({(-m, -s2, -t): _ONE / c})

    def __pow__(self, n) -> "RadialSymbol":
        if len(self._terms) == 1:
            ((m, s2, t), c), = self._terms.items()
            if c == _ONE:
                e = Fraction(n)
                pm, ps, pt = e * m, e * s2, e * t
                if pm.denominator == 1 and ps.denominator == 1 and pt.denominator == 1:
                    return RadialSymbol._raw({(int(pm), int(ps), int(pt)): _ONE})
                raise ValueError(f"power {n} leaves the ring for this monomial")
        if isinstance(n, int) and n >= 0:
            out = RadialSymbol.const(1)
            for _ in range(n):
                out = out * self
            return out
        if isinstance(n, int) and len(self._terms) == 1:
            return self.inverse() ** (-n)
        raise ValueError(f"unsupported power {n} of a multi-term symbol")

    def __eq__(self, other) -> bool:
        if not isinstance(other, RadialSymbol):
            try:
                other = RadialSymbol.const(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def conj(self) -> "RadialSymbol":
        return RadialSymbol._raw({k: gauss_conj(c) for k, c in self._terms.items()})

    def derivative(self) -> "RadialSymbol":
        """``d/dr`` using ``d(r^m V^s) = m r^{m-1} V^s + s tau r^{m-1} V^{s-1}``."""
        out: dict[Key, object] = {}
        for (m, s2, t), c in self._terms.items():
            if m:
                k = (m - 1, s2, t)
                out[k] = out.get(k, _ZERO) + c * m
            if s2:
                k = (m - 1, s2 - 2, t + 1)
                out[k] = out.get(k, _ZERO) + c * QQ_I(QQ(s2, 2))
        return RadialSymbol._raw(out)

    def scale_tau_zero(self) -> "RadialSymbol":
        """Specialize ``tau -> 0`` (flat mode)."""
        out: dict[Key, object] = {}
        for (m, s2, t), c in self._terms.items():
            if t < 0:
                raise ZeroDivisionError("symbol has a negative tau power; cannot set tau = 0")
            if t == 0:
                out[(m, s2, 0)] = c
        return RadialSymbol._raw(out)

    def max_r_power(self) -> int:
        return max(m for m, _, _ in self._terms)

    def leading_order(self) -> tuple[int, Fraction]:
        """Dominant ``(m, s)`` as ``r -> oo``; ``m`` beats any ``V`` power.

        Exponent pairs whose tau-coefficients cancel are already absent, so
        the answer does not depend on the value of ``tau > 0``.
        """
        if not self._terms:
            raise ValueError("no leading order: zero symbol")
        m, s2 = max((m, s2) for m, s2, _ in self._terms)
        return m, Fraction(s2, 2)

    def evaluate(self, r, params: ModelParams | None = None, *, tau: float | None = None,
                 kappa0: float | None = None):
        """Numeric value at ``r`` (scalar or numpy array)."""
        if params is not None:
            tau = params.tau if tau is None else tau
            kappa0 = params.kappa0 if kappa0 is None else kappa0
        if tau is None or kappa0 is None:
            raise ValueError("need params or explicit tau and kappa0")
        import numpy as np

        r_arr = np.asarray(r, dtype=float)
        V = kappa0 + tau * np.log(r_arr)
        needs_sqrt = any(s2 % 2 for _, s2, _ in self._terms)
        if needs_sqrt and np.any(V <= 0):
            raise ValueError("domain error: V <= 0 with a half-odd V power")
        if any(s2 < 0 for _, s2, _ in self._terms) and np.any(V == 0):
            raise ValueError("domain error: V = 0 with a negative V power")
        sqrtV = np.sqrt(np.where(V > 0, V, 1.0)) if needs_sqrt else None
        total = np.zeros(r_arr.shape, dtype=complex)
        for (m, s2, t), c in self._terms.items():
            if t < 0 and tau == 0:
                raise ZeroDivisionError("negative tau power at tau = 0")
            val = gauss_complex(c) * (tau**t if t else 1.0) * r_arr**m
            if s2 % 2:
                val = val * sqrtV**s2
            else:
                val = val * V ** (s2 // 2)
            total = total + val
        if total.ndim == 0:
            return complex(total)
        return total

    # serialization
    def to_json(self) -> list[dict]:
        out = []
        for (m, s2, t), c in sorted(self._terms.items()):
            out.append({"m": m, "s2": s2, "re": str(_frac(c.x)), "im": str(_frac(c.y)), "tau_pow": t})
        return out

    @classmethod
    def from_json(cls, data: Iterable[Mapping]) -> "RadialSymbol":
        out: dict[Key, object] = {}
        for term in data:
            k = (int(term["m"]), int(term["s2"]), int(term.get("tau_pow", 0)))
            c = QQ_I(_qq(term.get("re", "0")), _qq(term.get("im", "0")))
            out[k] = out.get(k, _ZERO) + c
        return cls._raw(out)

    def __repr__(self) -> str:
        if not self._terms:
            return "RadialSymbol(0)"
        parts = []
        for (m, s2, t), c in sorted(self._terms.items(), reverse=True):
            z = gauss_complex(c)
            coef = f"{z.real:g}" if z.imag == 0 else f"({z.real:g}{z.imag:+g}i)"
            parts.append(f"{coef}*tau^{t}*r^{m}*V^{Fraction(s2, 2)}")
        return "RadialSymbol(" + " + ".join(parts) + ")"


# module-level conveniences
def rs_mul(a: RadialSymbol, b: RadialSymbol) -> RadialSymbol:
    return a * b


def rs_derivative(a: RadialSymbol) -> RadialSymbol:
    return a.derivative()


def rs_eval(a: RadialSymbol, r: float, params: ModelParams) -> complex:
    return a.evaluate(r, params)


def rs_leading_order(a: RadialSymbol) -> tuple[int, Fraction]:
    return a.leading_order()


def compare_orders(a: tuple[int, Fraction], b: tuple[int, Fraction]) -> int:
    """Sign of ``a - b`` in the lexicographic decay grading."""
    return (a > b) - (a < b)


R1 = RadialSymbol.r()
V1 = RadialSymbol.V()
TAU = RadialSymbol.tau()
IM = RadialSymbol.i()
ONE = RadialSymbol.const(1)
