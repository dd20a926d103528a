"""Hyperkähler triple, the quadratic defect operator and the complex structure J."""
from __future__ import annotations

from dataclasses import dataclass

from .calculus import exterior_derivative
from .forms import FourierForm, basis_convert, hodge_star, wedge
from .radial import ModelParams


@dataclass(frozen=True)
class HKTriple:
    omega1: FourierForm
    omega2: FourierForm
    omega3: FourierForm

    def __iter__(self):
        return iter((self.omega1, self.omega2, self.omega3))

    def scaled(self, c) -> "HKTriple":
        return HKTriple(self.omega1 * c, self.omega2 * c, self.omega3 * c)


def _E2(pairs: dict) -> FourierForm:
    # pairs keyed by one-based E indices
    return FourierForm(2, {(0, (a - 1, b - 1)): s for (a, b), s in pairs.items()}, "E")


def hk_triple(params: ModelParams | None = None, basis: str = "e") -> HKTriple:
    """``w_I = E12 + E34``, ``w_J = E13 - E24``, ``w_K = E14 + E23``."""
    forms = (_E2({(1, 2): 1, (3, 4): 1}), _E2({(1, 3): 1, (2, 4): -1}), _E2({(1, 4): 1, (2, 3): 1}))
    return HKTriple(*(basis_convert(f, basis) for f in forms))


def _need_two_forms(*forms: FourierForm) -> None:
    for f in forms:
        if not isinstance(f, FourierForm) or f.degree != 2:
            raise ValueError("defect operators take 2-forms")


def hk_defect(w1: FourierForm, w2: FourierForm, w3: FourierForm) -> tuple[FourierForm, ...]:
    """``(w1^w2, w1^w3, w2^w3, w1^w1 - w2^w2, w1^w1 - w3^w3)``."""
    _need_two_forms(w1, w2, w3)
    w11 = wedge(w1, w1)
    return (wedge(w1, w2), wedge(w1, w3), wedge(w2, w3), w11 - wedge(w2, w2), w11 - wedge(w3, w3))


def is_self_dual(a: FourierForm) -> bool:
    return a.degree == 2 and hodge_star(a) == a


def ebundle_defect(triple: HKTriple, th1: FourierForm, th2: FourierForm, th3: FourierForm):
    """Linearized conditions for a triple of SD forms to lie in the E-bundle.

    Returns ``(w1^t2 + w2^t1, w1^t3 + w3^t1, w2^t3 + w3^t2, (w1^t1 - w2^t2, w1^t1 - w3^t3))``.
    """
    w1, w2, w3 = triple
    _need_two_forms(th1, th2, th3)
    for t in (th1, th2, th3):
        if not is_self_dual(t):
            raise ValueError("E-bundle defect needs self-dual inputs")
    d11 = wedge(w1, th1)
    return (
        wedge(w1, th2) + wedge(w2, th1),
        wedge(w1, th3) + wedge(w3, th1),
        wedge(w2, th3) + wedge(w3, th2),
        (d11 - wedge(w2, th2), d11 - wedge(w3, th3)),
    )


# J^*E1 = -E3, J^*E2 = E4, J^*E3 = E1, J^*E4 = -E2 (zero-based slots)
_JSTAR = {0: (2, -1), 1: (3, 1), 2: (0, 1), 3: (1, -1)}


def jstar(a: FourierForm) -> FourierForm:
    """Dual complex structure ``J^*`` on 1-forms, computed in the E frame."""
    if a.degree != 1:
        raise ValueError(f"J^* acts on 1-forms, got degree {a.degree}")
    aE = basis_convert(a, "E")
    out: dict = {}
    for (k, (i,)), f in aE.items():
        j, s = _JSTAR[i]
        key = (k, (j,))
        term = f if s > 0 else -f
        out[key] = out[key] + term if key in out else term
    return basis_convert(FourierForm._raw(1, out, "E"), a.basis)


def hk_closed(triple: HKTriple) -> bool:
    return all(exterior_derivative(w).is_zero() for w in triple)
