"""Quotient group actions on the nilmanifold coordinates.

Every atom acts by an affine map ``theta -> A theta + b`` on
``(theta1, theta2, theta3)`` whose entries live in ``Q[pi]``, so compositions
and the relations between generators can be checked with exact arithmetic.
A word ``[g1, g2, ..., gn]`` denotes the composition ``g1 o g2 o ... o gn``
(``gn`` acts first on points).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from .calculus import metric_matrix
from .forms import FourierForm, basis_convert
from .radial import ModelParams

QPI, PI = ring("pi", QQ)

Affine = tuple[tuple[tuple, ...], tuple]   # (3x3 matrix, translation) over QPI


def _c(x) -> object:
    """Exact rational constant of Q[pi]."""
    f = Fraction(x)
    return QPI(QQ(f.numerator, f.denominator))


def to_float(p) -> float:
    return float(sum(float(c) * math.pi**k[0] for k, c in p.terms()))


_ID = ((QPI(1), QPI(0), QPI(0)), (QPI(0), QPI(1), QPI(0)), (QPI(0), QPI(0), QPI(1)))
_ZERO3 = (QPI(0), QPI(0), QPI(0))


def _compose(f: Affine, g: Affine) -> Affine:
    """``f o g``."""
    A, b = f
    B, c = g
    AB = tuple(tuple(sum((A[i][k] * B[k][j] for k in range(3)), QPI(0)) for j in range(3)) for i in range(3))
    Ac_b = tuple(sum((A[i][k] * c[k] for k in range(3)), QPI(0)) + b[i] for i in range(3))
    return AB, Ac_b


def _invert(f: Affine) -> Affine:
    A, b = f
    # det is +-1 for every atom, so the adjugate gives an exact inverse
    det = (A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
           - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
           + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]))
    if det not in (QPI(1), QPI(-1)):
        raise ValueError("affine map is not unimodular")
    cof = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != i]
            cols = [c for c in range(3) if c != j]
            minor = A[rows[0]][cols[0]] * A[rows[1]][cols[1]] - A[rows[0]][cols[1]] * A[rows[1]][cols[0]]
            cof[i][j] = minor if (i + j) % 2 == 0 else -minor
    inv = tuple(tuple(cof[j][i] * det for j in range(3)) for i in range(3))
    binv = tuple(-sum((inv[i][k] * b[k] for k in range(3)), QPI(0)) for i in range(3))
    return inv, binv


def _power(f: Affine, n: int) -> Affine:
    if n < 0:
        return _power(_invert(f), -n)
    out: Affine = (_ID, _ZERO3)
    for _ in range(n):
        out = _compose(f, out)
    return out


@dataclass(frozen=True)
class Atom:
    """One generator: ``name`` in sigma1/sigma2/sigma3/xi/zeta/iota plus integer or rational data."""

    name: str
    nu: int
    params: tuple = ()
    power: int = 1

    def base_map(self) -> Affine:
        nu = self.nu
        two_pi = 2 * PI
        if self.name == "sigma1":
            return _ID, (two_pi, QPI(0), QPI(0))
        if self.name == "sigma2":
            A = (_ID[0], _ID[1], (two_pi, QPI(0), QPI(1)))
            return A, (QPI(0), two_pi, QPI(0))
        if self.name == "sigma3":
            return _ID, (QPI(0), QPI(0), 4 * PI**2 / nu)
        if self.name == "xi":
            (l,) = self.params
            return _ID, (QPI(0), QPI(0), 4 * PI**2 / (l * nu))
        if self.name == "zeta":
            k, l, m = self.params
            A = (_ID[0], _ID[1], (two_pi / k, QPI(0), QPI(1)))
            return A, (QPI(0), two_pi / k, 4 * PI**2 * m / (l * k * nu))
        if self.name == "iota":
            n, t = self.params
            c = two_pi * n / nu
            A = ((QPI(1), QPI(0), QPI(0)), (QPI(0), QPI(-1), QPI(0)), (c, QPI(0), QPI(-1)))
            return A, (PI, c, _c(t))
        if self.name == "affine":
            return self.params[0]
        raise ValueError(f"unknown generator {self.name!r}")

    def affine(self) -> Affine:
        return _power(self.base_map(), self.power)

    def label(self) -> str:
        args = ",".join(str(p) for p in self.params) if self.name != "affine" else ""
        base = f"{self.name}({args})" if args else self.name
        return base if self.power == 1 else f"{base}^{self.power}"


class GroupElement:
    """A word in the generators; composition is ``g * h = g o h``."""

    __slots__ = ("word", "nu", "_affine")

    def __init__(self, word: Sequence[Atom], nu: int):
        self.word = tuple(word)
        self.nu = int(nu)
        self._affine = None

    # constructors with validation
    @classmethod
    def identity(cls, nu: int) -> "GroupElement":
        return cls((), nu)

    @classmethod
    def sigma1(cls, nu: int) -> "GroupElement":
        return cls((Atom("sigma1", nu),), nu)

    @classmethod
    def sigma2(cls, nu: int) -> "GroupElement":
        return cls((Atom("sigma2", nu),), nu)

    @classmethod
    def sigma3(cls, nu: int) -> "GroupElement":
        _need_nu(nu, "sigma3")
        return cls((Atom("sigma3", nu),), nu)

    @classmethod
    def xi(cls, l: int, nu: int) -> "GroupElement":
        _need_nu(nu, "xi")
        _positive_int(l, "l")
        return cls((Atom("xi", nu, (int(l),)),), nu)

    @classmethod
    def zeta(cls, k: int, l: int, m: int, nu: int) -> "GroupElement":
        _need_nu(nu, "zeta")
        _positive_int(k, "k")
        _positive_int(l, "l")
        if nu % k:
            raise ValueError(f"zeta needs k | nu, got k={k}, nu={nu}")
        if not (isinstance(m, int) and 0 <= m <= k * l - 1):
            raise ValueError(f"zeta needs 0 <= m <= kl - 1 = {k * l - 1}, got m={m}")
        return cls((Atom("zeta", nu, (int(k), int(l), int(m))),), nu)

    @classmethod
    def iota(cls, nu: int, n: int = 0, t=0, l: int | None = None) -> "GroupElement":
        _need_nu(nu, "iota")
        if nu % 2:
            raise ValueError(f"iota needs nu even, got nu={nu}")
        if not (isinstance(n, int) and 0 <= n <= nu - 1):
            raise ValueError(f"iota needs 0 <= n <= nu - 1, got n={n}")
        if l is not None and (n * l) % 2:
            raise ValueError(f"iota needs n*l even, got n={n}, l={l}")
        return cls((Atom("iota", nu, (int(n), Fraction(t))),), nu)

    @classmethod
    def from_affine(cls, affine: Affine, nu: int, name: str = "affine") -> "GroupElement":
        return cls((Atom("affine", nu, (affine,)),), nu)

    # algebra
    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.nu != other.nu:
            raise ValueError("cannot compose elements for different nu")
        return GroupElement(self.word + other.word, self.nu)

    def __pow__(self, n: int) -> "GroupElement":
        if n == 0:
            return GroupElement.identity(self.nu)
        base = self if n > 0 else self.inverse()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    def inverse(self) -> "GroupElement":
        return GroupElement(tuple(Atom(a.name, a.nu, a.params, -a.power) for a in reversed(self.word)), self.nu)

    def affine(self) -> Affine:
        if self._affine is None:
            out: Affine = (_ID, _ZERO3)
            for atom in self.word:
                out = _compose(out, atom.affine())
            self._affine = out
        return self._affine

    def linear_part(self) -> np.ndarray:
        A, _ = self.affine()
        return np.array([[to_float(x) for x in row] for row in A])

    def label(self) -> str:
        return "*".join(a.label() for a in self.word) or "id"

    def __repr__(self) -> str:
        return f"GroupElement({self.label()}, nu={self.nu})"


def _need_nu(nu: int, name: str) -> None:
    if nu < 1:
        raise ValueError(f"{name} references 1/nu and needs nu >= 1")


def _positive_int(x, name: str) -> None:
    if not (isinstance(x, int) and x >= 1):
        raise ValueError(f"{name} must be a positive integer, got {x!r}")


def _exact_point(pt) -> tuple:
    return tuple(_c(x) for x in pt)


def apply_exact(g: GroupElement, angles: Sequence) -> tuple:
    """Image of rational angles ``(theta1, theta2, theta3)`` as elements of Q[pi]."""
    A, b = g.affine()
    x = [p if not isinstance(p, (int, Fraction, str)) else _c(p) for p in angles]
    return tuple(sum((A[i][k] * x[k] for k in range(3)), QPI(0)) + b[i] for i in range(3))


def group_apply(g: GroupElement, pt: Sequence[float]) -> tuple[float, float, float, float]:
    """Numeric action on ``(r, theta1, theta2, theta3)``; ``r`` is unchanged."""
    r, *angles = pt
    A, b = g.affine()
    Af = np.array([[to_float(x) for x in row] for row in A])
    bf = np.array([to_float(x) for x in b])
    out = Af @ np.asarray(angles, dtype=float) + bf
    return (float(r), float(out[0]), float(out[1]), float(out[2]))


def lattice_offset(P: Sequence, Q: Sequence, nu: int):
    """Integers ``(a, b, c)`` with ``P = L_{a,b,c}(Q)``, or ``None``.

    ``L_{a,b,c}(theta) = (theta1 + 2 pi b, theta2 + 2 pi a, theta3 + 2 pi a theta1 + 4 pi^2 c / nu)``.
    """
    def integer_multiple(d, unit):
        q, rem = d.div(unit)
        if rem != 0 or q.degree() > 0:
            return None
        val = q.LC if q != 0 else QQ(0)
        if QQ.denom(val) != 1:
            return None
        return int(val)

    b = integer_multiple(P[0] - Q[0], 2 * PI)
    a = integer_multiple(P[1] - Q[1], 2 * PI)
    if a is None or b is None:
        return None
    c = integer_multiple((P[2] - Q[2] - 2 * PI * a * Q[0]) * nu, 4 * PI**2)
    if c is None:
        return None
    return a, b, c


def maps_equal_mod_lattice(g: GroupElement, h: GroupElement, points: Iterable[Sequence]) -> bool:
    """Exact check that ``g(p)`` and ``h(p)`` differ by a lattice element at every point."""
    return all(lattice_offset(apply_exact(g, p), apply_exact(h, p), g.nu) is not None for p in points)


def maps_equal(g: GroupElement, h: GroupElement, points: Iterable[Sequence]) -> bool:
    """Exact pointwise equality on the universal cover."""
    return all(apply_exact(g, p) == apply_exact(h, p) for p in points)


def random_rational_points(n: int, rng: np.random.Generator, denom: int = 97) -> list[tuple]:
    return [tuple(Fraction(int(rng.integers(-20 * denom, 20 * denom)), denom) for _ in range(3)) for _ in range(n)]


# pullback --------------------------------------------------------------------

def _atom_pullback(atom: Atom, a: FourierForm) -> FourierForm:
    if atom.name in ("sigma1", "sigma2", "sigma3", "xi", "zeta"):
        return a
    if atom.name == "iota":
        if atom.power % 2 == 0:
            return a
        out = {}
        for (k, I), f in a.items():
            flips = sum(1 for i in I if i >= 2) + k
            out[(k, I)] = -f if flips % 2 else f
        return FourierForm._raw(a.degree, out, a.basis)
    raise ValueError(f"no form pullback for {atom.name!r}")


def group_pullback(g: GroupElement, a: FourierForm) -> FourierForm:
    """``g^* a`` on the T^2-invariant sector.

    For ``g = g1 o ... o gn`` we have ``g^* = gn^* o ... o g1^*``, so atoms are
    applied left to right.  The E frame is handled by converting through e.
    """
    basis = a.basis
    out = basis_convert(a, "e")
    for atom in g.word:
        out = _atom_pullback(atom, out)
    return basis_convert(out, basis)


def is_invariant(a: FourierForm, gens: Iterable[GroupElement]) -> bool:
    return all(group_pullback(g, a) == a for g in gens)


def invariant_subspace(entries: Sequence, gens: Sequence[GroupElement]) -> list:
    """Sub-list of entries (CatalogEntry or FourierForm) fixed by every generator."""
    gens = list(gens)
    out = []
    for ent in entries:
        form = getattr(ent, "form", ent)
        if is_invariant(form, gens):
            out.append(ent)
    return out


# isometry --------------------------------------------------------------------

def isometry_check(g: GroupElement | Callable, params: ModelParams, sample_points: Sequence[Sequence[float]],
                   tol: float = 1e-10) -> bool:
    """Compare ``J^T g(phi(p)) J`` with ``g(p)`` at each sample point.

    ``g`` may be a GroupElement (exact linear part) or any callable on
    ``(r, theta1, theta2, theta3)`` (Jacobian by central differences).
    """
    return isometry_defect(g, params, sample_points) <= tol


def isometry_defect(g, params: ModelParams, sample_points) -> float:
    worst = 0.0
    for p in sample_points:
        p = np.asarray(p, dtype=float)
        if isinstance(g, GroupElement):
            phi = lambda q, g=g: np.array(group_apply(g, q))
            J = np.eye(4)
            J[1:, 1:] = g.linear_part()
        else:
            phi = lambda q, g=g: np.asarray(g(*q), dtype=float)
            J = np.zeros((4, 4))
            for j in range(4):
                h = 1e-5 * max(1.0, abs(p[j]))
                dp = np.zeros(4)
                dp[j] = h
                J[:, j] = (phi(p + dp) - phi(p - dp)) / (2 * h)
        pulled = J.T @ metric_matrix(phi(p), params) @ J
        base = metric_matrix(p, params)
        worst = max(worst, float(np.max(np.abs(pulled - base)) / np.max(np.abs(base))))
    return worst


# group specs -------------------------------------------------------------------

@dataclass(frozen=True)
class GroupSpec:
    """Generators parsed from ``"xi:l,zeta:k,l,m,iota:n,t"`` style strings."""

    nu: int
    atoms: tuple = field(default_factory=tuple)   # tuples like ("xi", (l,))

    def __post_init__(self):
        self.generators()  # validates

    def level(self) -> int:
        for name, args in self.atoms:
            if name == "xi":
                return int(args[0])
            if name == "zeta":
                return int(args[1])
        return 1

    def generators(self) -> list[GroupElement]:
        out = []
        l = self.level()
        for name, args in self.atoms:
            if name == "xi":
                out.append(GroupElement.xi(*_ints(args, 1, name), nu=self.nu))
            elif name == "zeta":
                out.append(GroupElement.zeta(*_ints(args, 3, name), nu=self.nu))
            elif name == "iota":
                n = int(args[0]) if args else 0
                t = Fraction(args[1]) if len(args) > 1 else Fraction(0)
                if len(args) > 2:
                    raise ValueError("iota takes at most two parameters n,t")
                out.append(GroupElement.iota(self.nu, n, t, l=l))
            elif name in ("sigma1", "sigma2", "sigma3"):
                out.append(getattr(GroupElement, name)(self.nu))
            else:
                raise ValueError(f"unknown generator {name!r}")
        return out

    def has_iota(self) -> bool:
        return any(name == "iota" for name, _ in self.atoms)

    def to_dict(self) -> dict:
        return {"nu": self.nu, "generators": [{"name": n, "params": [str(a) for a in args]} for n, args in self.atoms]}


def _ints(args, count: int, name: str) -> list[int]:
    if len(args) != count:
        raise ValueError(f"{name} takes {count} integer parameter(s), got {len(args)}")
    try:
        vals = [int(a) for a in args]
    except (TypeError, ValueError):
        raise ValueError(f"{name} parameters must be integers, got {args}") from None
    if any(str(v) != str(a).strip() for v, a in zip(vals, args)):
        raise ValueError(f"{name} parameters must be integers, got {args}")
    return vals


_NAMES = ("xi", "zeta", "iota", "sigma1", "sigma2", "sigma3")


def parse_generators(spec: str, nu: int) -> GroupSpec:
    """Parse ``"xi:2,zeta:1,1,0,iota:0,0"``; a bare ``iota`` means ``iota_{0,0}``."""
    spec = (spec or "").strip()
    if not spec:
        return GroupSpec(nu, ())
    atoms = []
    for token in re.split(r"\s*,\s*", spec):
        head, sep, rest = token.partition(":")
        if head in _NAMES:
            atoms.append([head, [rest] if rest else []])
        elif atoms and not sep and head:
            atoms[-1][1].append(head)
        else:
            raise ValueError(f"cannot parse generator token {token!r}")
    return GroupSpec(nu, tuple((n, tuple(a)) for n, a in atoms))


# relations ---------------------------------------------------------------------

def relation_table(nu: int, k: int, l: int, m: int, n: int | None = None, t=0) -> dict[str, tuple[GroupElement, GroupElement]]:
    """Left and right sides of the generator relations for one parameter tuple."""
    s1, s2, s3 = GroupElement.sigma1(nu), GroupElement.sigma2(nu), GroupElement.sigma3(nu)
    x = GroupElement.xi(l, nu)
    z = GroupElement.zeta(k, l, m, nu)
    rel = {
        "xi^l = sigma3": (x**l, s3),
        "zeta^k = xi^m sigma2": (z**k, x**m * s2),
        "xi sigma1 xi^-1 = sigma1": (x * s1 * x.inverse(), s1),
        "xi sigma2 xi^-1 = sigma2": (x * s2 * x.inverse(), s2),
        "xi sigma3 xi^-1 = sigma3": (x * s3 * x.inverse(), s3),
        "zeta sigma1 zeta^-1 = sigma1 sigma3^(nu/k)": (z * s1 * z.inverse(), s1 * s3 ** (nu // k)),
        "zeta sigma2 zeta^-1 = sigma2": (z * s2 * z.inverse(), s2),
        "zeta sigma3 zeta^-1 = sigma3": (z * s3 * z.inverse(), s3),
    }
    if n is not None:
        io = GroupElement.iota(nu, n, t, l=l)
        rel.update({
            "iota^2 = xi^(nl/2) sigma1": (io**2, x ** (n * l // 2) * s1),
            "iota sigma1 iota^-1 = sigma1 sigma3^n": (io * s1 * io.inverse(), s1 * s3**n),
            "iota sigma2 iota^-1 = sigma3^(nu/2) sigma2^-1": (io * s2 * io.inverse(), s3 ** (nu // 2) * s2.inverse()),
            "iota sigma3 iota^-1 = sigma3^-1": (io * s3 * io.inverse(), s3.inverse()),
        })
    return rel


def orbit_closure(gens: Sequence[GroupElement], start: Sequence, cap: int = 4096) -> dict:
    """Breadth-first orbit of a rational point modulo the lattice.

    Reports whether the orbit closes within ``cap`` points; this probes
    finiteness of the generated group without deciding it.
    """
    if not gens:
        return {"closed": True, "orbit_size": 1}
    nu = gens[0].nu
    two_pi = 2 * PI
    fiber = 4 * PI**2 / nu

    def reduce(p):
        t1, t2, t3 = p
        b = math.floor(to_float(t1) / (2 * math.pi))
        t1 = t1 - two_pi * b
        a = math.floor(to_float(t2) / (2 * math.pi))
        t2 = t2 - two_pi * a
        t3 = t3 - two_pi * a * t1
        c = math.floor(to_float(t3) / to_float(fiber))
        t3 = t3 - fiber * c
        return (t1, t2, t3)

    seen = {reduce(_exact_point(start))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = reduce(apply_exact(g, p))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
                    if len(seen) > cap:
                        return {"closed": False, "orbit_size": len(seen)}
        frontier = nxt
    return {"closed": True, "orbit_size": len(seen)}
