"""Exterior derivative, codifferential and Hodge Laplacian on Fourier-mode forms.

Everything is computed in the rotating ``e`` coframe, where the structure
functions are mode free.  E-basis inputs are converted in and out.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .forms import FourierForm, basis_convert, hodge_star, wedge
from .radial import ModelParams, RadialSymbol

_R = RadialSymbol.r
_V = RadialSymbol.V
_TAU = RadialSymbol.tau()
_HALF = Fraction(1, 2)

# e^i = a_i(r) * beta_i with beta = (dr, dtheta1, dtheta2, Theta)
_AMPLITUDES = (_V(_HALF), _R(1) * _V(_HALF), _V(_HALF), _V(-_HALF))


@lru_cache(maxsize=None)
def coframe_d(i: int) -> FourierForm:
    """``d e^i`` as an exact e-basis 2-form.

    Uses ``d(a beta) = a' dr ^ beta + a d beta`` with ``dr = V^{-1/2} e^0``,
    ``beta_i = e^i / a_i`` and ``d Theta = tau dtheta1 ^ dtheta2 = tau V^{-1} r^{-1} e^{12}``.
    """
    if i not in range(4):
        raise ValueError("e-basis index runs over 0..3")
    terms: dict = {}
    if i:
        a = _AMPLITUDES[i]
        terms[(0, (0, i))] = a.derivative() * _V(-_HALF) * a.inverse()
    if i == 3:
        terms[(0, (1, 2))] = _TAU * _V(-Fraction(3, 2)) * _R(-1)
    return FourierForm(2, terms)


@lru_cache(maxsize=None)
def _d_basis(I: tuple[int, ...]) -> FourierForm:
    """``d(e^I)`` by the graded Leibniz rule."""
    if not I:
        return FourierForm.zero(1)
    head = FourierForm.basis_form((I[0],))
    rest = FourierForm.basis_form(I[1:])
    return wedge(coframe_d(I[0]), rest) - wedge(head, _d_basis(I[1:]))


_DR = _V(-_HALF)                  # dr = V^{-1/2} e^0
_DTHETA1 = _V(-_HALF) * _R(-1)    # dtheta1 = V^{-1/2} r^{-1} e^1


def exterior_derivative(a: FourierForm) -> FourierForm:
    if a.degree > 3:
        raise ValueError("d of a 4-form leaves dimension 4")
    if a.basis != "e":
        return basis_convert(exterior_derivative(basis_convert(a, "e")), a.basis)
    out: dict = {}

    def add(key, val):
        if val:
            out[key] = out[key] + val if key in out else val

    for (k, I), f in a.items():
        if 0 not in I:
            sign, K = _insert_sign(0, I)
            add((k, K), f.derivative() * _DR * sign)
        if k and 1 not in I:
            sign, K = _insert_sign(1, I)
            add((k, K), f * _DTHETA1 * RadialSymbol.const(complex(0, k * sign)))
        for (k2, K), g in _d_basis(I).items():
            add((k + k2, K), f * g)
    return FourierForm._raw(a.degree + 1, out, "e")


def _insert_sign(i: int, I: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """``e^i ^ e^I = sign e^K``."""
    sign = -1 if sum(1 for j in I if j < i) % 2 else 1
    return sign, tuple(sorted(I + (i,)))


def codifferential(a: FourierForm) -> FourierForm:
    """``delta = - * d *`` (valid in every degree in dimension 4)."""
    if a.degree == 0:
        return FourierForm.zero(0, a.basis)
    return -hodge_star(exterior_derivative(hodge_star(a)))


def hodge_laplacian(a: FourierForm, params: ModelParams | None = None) -> FourierForm:
    """``Delta = d delta + delta d``; ``params`` with ``nu = 0`` sets ``tau = 0``."""
    out = FourierForm.zero(a.degree, a.basis)
    if a.degree > 0:
        out = out + exterior_derivative(codifferential(a))
    if a.degree < 4:
        out = out + codifferential(exterior_derivative(a))
    return out.specialize(params)


def _single_mode(a: FourierForm, j: int) -> None:
    if a.basis != "E":
        raise ValueError("mode operator expects an E-basis form")
    bad = a.modes() - {j}
    if bad:
        raise ValueError(f"mixed modes {sorted(a.modes())}; expected only mode {j}")


def flat_mode_laplacian(a: FourierForm, j: int) -> FourierForm:
    """Componentwise ``w'' + w'/r - j^2 w / r^2`` on a single-mode E-basis form."""
    _single_mode(a, j)
    r1, r2 = _R(-1), _R(-2)
    jj = RadialSymbol.const(j * j)

    def L(f: RadialSymbol) -> RadialSymbol:
        f1 = f.derivative()
        return f1.derivative() + f1 * r1 - jj * f * r2

    return a.map_symbols(L)


def expansion_residual(a: FourierForm, j: int, params: ModelParams | None = None) -> FourierForm:
    """``Delta a + V^{-1} L_j a`` for a single-mode E-basis form."""
    La = flat_mode_laplacian(a, j)
    return (hodge_laplacian(a) + La * _V(-1)).specialize(params)


# numeric oracle -------------------------------------------------------------

def metric_matrix(pt: Sequence[float], params: ModelParams) -> np.ndarray:
    """Coordinate metric in ``(r, theta1, theta2, theta3)``."""
    r, _, t2, _ = pt
    tau = params.tau
    V = params.kappa0 + tau * math.log(r)
    g = np.zeros((4, 4))
    g[0, 0] = V
    g[1, 1] = V * r * r + tau * tau * t2 * t2 / V
    g[2, 2] = V
    g[3, 3] = tau * tau / V
    g[1, 3] = g[3, 1] = -tau * tau * t2 / V
    return g


def _inverse_metric(pt: Sequence[float], params: ModelParams) -> np.ndarray:
    # dual frame: e_0 = V^-1/2 d_r, e_1 = V^-1/2 r^-1 (d_1 + t2 d_3), e_2 = V^-1/2 d_2, e_3 = V^1/2 tau^-1 d_3
    r, _, t2, _ = pt
    tau = params.tau
    V = params.kappa0 + tau * math.log(r)
    frames = np.zeros((4, 4))
    frames[0, 0] = V**-0.5
    frames[1, 1] = V**-0.5 / r
    frames[1, 3] = V**-0.5 / r * t2
    frames[2, 2] = V**-0.5
    frames[3, 3] = V**0.5 / tau
    return frames.T @ frames


def fd_laplacian_oracle(f: Callable[[float, float, float, float], complex], point: Sequence[float],
                        params: ModelParams, h: float | None = None) -> complex:
    """Nested central differences of ``-(1/sqrt g) d_mu (sqrt g g^{mu nu} d_nu f)``.

    Steps are ``(h, h/r0, h, h)``; the stencil reaches ``r0 +- 2h``.
    """
    if params.nu < 1:
        raise ValueError("finite-difference oracle needs nu >= 1 (nondegenerate Theta)")
    p0 = np.asarray(point, dtype=float)
    r0 = p0[0]
    h = 5e-4 * r0 if h is None else float(h)
    if h <= 0:
        raise ValueError("step must be positive")
    if r0 - 2 * h <= params.R:
        raise ValueError(f"step too large: stencil r0 - 2h = {r0 - 2 * h:.6g} leaves the domain r > R = {params.R:.6g}")
    steps = np.array([h, h / r0, h, h])
    tau = params.tau

    def sqrt_g(p):
        return (params.kappa0 + tau * math.log(p[0])) * p[0] * tau

    def grad(p):
        out = np.zeros(4, dtype=complex)
        for nu in range(4):
            dp = np.zeros(4)
            dp[nu] = steps[nu]
            out[nu] = (f(*(p + dp)) - f(*(p - dp))) / (2 * steps[nu])
        return out

    def flux(p, mu):
        return sqrt_g(p) * (_inverse_metric(p, params)[mu] @ grad(p))

    div = 0j
    for mu in range(4):
        dp = np.zeros(4)
        dp[mu] = steps[mu]
        div += (flux(p0 + dp, mu) - flux(p0 - dp, mu)) / (2 * steps[mu])
    return complex(-div / sqrt_g(p0))


def scalar_sampler(a: FourierForm, params: ModelParams) -> Callable[[float, float, float, float], complex]:
    """Turn a 0-form into a pointwise sampler for the oracle."""
    if a.degree != 0:
        raise ValueError("sampler needs a 0-form")
    a = basis_convert(a, "e")
    items = [(k, f) for (k, _), f in a.items()]

    def sample(r, t1, t2=0.0, t3=0.0):
        return sum(f.evaluate(r, params) * complex(math.cos(k * t1), math.sin(k * t1)) for k, f in items)

    return sample
