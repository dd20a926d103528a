"""Weighted L^2 norms and numeric checks of the Hardy-type, mode and circle inequalities."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy import integrate

from .calculus import codifferential, exterior_derivative
from .forms import FourierForm, basis_convert, hodge_star, wedge
from .radial import ModelParams, RadialSymbol, gauss_complex

EIGHT_PI3 = 8 * math.pi**3
QUAD_EPSREL = 1e-10
QUAD_LIMIT = 2000   # subintervals; 21 nodes each keeps evaluations far below 1e6


@dataclass(frozen=True)
class WeightSpec:
    mu: float

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise ValueError("mu must be finite")


def weight(mu: WeightSpec | float, r, params: ModelParams):
    """``rho_mu = (r V^{1/2})^{-mu-1}``."""
    mu = getattr(mu, "mu", mu)
    r = np.asarray(r, dtype=float)
    V = params.kappa0 + params.tau * np.log(r)
    out = (r * np.sqrt(V)) ** (-mu - 1.0)
    return float(out) if out.ndim == 0 else out


def symbol_callable(f: RadialSymbol, params: ModelParams) -> Callable:
    """Vectorized numeric evaluation of a symbol."""
    terms = [(gauss_complex(c) * (params.tau**t if t else 1.0), m, s2) for (m, s2, t), c in f.items()]

    def fn(r):
        r = np.asarray(r, dtype=float)
        V = params.kappa0 + params.tau * np.log(r)
        out = np.zeros(r.shape, dtype=complex)
        for c, m, s2 in terms:
            out = out + c * r**m * (np.sqrt(V) ** s2 if s2 % 2 else V ** (s2 // 2))
        return out

    return fn


def _quad(fn: Callable[[float], float], a: float, b: float) -> float:
    """Adaptive quadrature in ``u = log r`` (smooth for power-log integrands)."""
    if not b > a:
        return 0.0
    g = lambda u: fn(math.exp(u)) * math.exp(u)
    val, _ = integrate.quad(g, math.log(a), math.log(b), epsabs=0.0, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT)
    return float(val)


def weighted_norm_mode(a: FourierForm, mu: WeightSpec | float, window: tuple[float, float],
                       params: ModelParams) -> float:
    """``(8 pi^3 sum_{k,I} int |w_{kI}|^2 r^{-2mu-1} V^{-mu} dr)^{1/2}`` over a finite window."""
    mu = getattr(mu, "mu", mu)
    R1, R2 = map(float, window)
    if not (math.isfinite(R1) and math.isfinite(R2)):
        raise ValueError("weighted_norm_mode needs a finite window; use decay_membership for infinite ones")
    if params.nu >= 1 and R1 < params.R:
        raise ValueError(f"window starts below the inner radius R={params.R}")
    if not R2 > R1:
        raise ValueError("window must satisfy R1 < R2")
    fns = [symbol_callable(f, params) for f in a.symbols()]
    if not fns:
        return 0.0

    def integrand(r):
        V = params.kappa0 + params.tau * math.log(r)
        s = sum(abs(complex(fn(r))) ** 2 for fn in fns)
        return s * r ** (-2 * mu - 1) * V ** (-mu)

    return math.sqrt(EIGHT_PI3 * _quad(integrand, R1, R2))


# profiles ------------------------------------------------------------------------

@dataclass(frozen=True)
class RadialProfile:
    """Compactly supported test function on ``[a, b]`` with optional analytic derivatives."""

    sampler: Callable
    support: tuple[float, float]
    d1: Callable | None = None
    d2: Callable | None = None
    symbol: RadialSymbol | None = None

    def __call__(self, r):
        a, b = self.support
        r = np.asarray(r, dtype=float)
        inside = (r > a) & (r < b)
        out = np.where(inside, self.sampler(np.clip(r, a, b)), 0.0)
        return complex(out) if out.ndim == 0 else out

    def derivative(self, order: int = 1) -> Callable:
        an = {1: self.d1, 2: self.d2}.get(order)
        a, b = self.support
        if an is not None:
            def d(r, an=an):
                r = np.asarray(r, dtype=float)
                out = np.where((r > a) & (r < b), an(np.clip(r, a, b)), 0.0)
                return complex(out) if out.ndim == 0 else out
            return d
        h = 1e-3 * (b - a)
        prev = self if order == 1 else self.derivative(order - 1)
        return lambda r: (-prev(r + 2 * h) + 8 * prev(r + h) - 8 * prev(r - h) + prev(r - 2 * h)) / (12 * h)

    def check_endpoints(self, tol: float = 1e-8) -> bool:
        a, b = self.support
        vals = [self(x) for x in (a, b)]
        vals += [self.derivative(1)(x) for x in (a, b)]
        vals += [self.derivative(2)(x) for x in (a, b)]
        return all(abs(v) <= tol for v in vals)


def bump_profile(a: float, b: float, c0: complex = 1.0, c1: complex = 0.0, omega: float = 0.0) -> RadialProfile:
    """``exp(-1/(1-x^2)) (c0 + c1 e^{i omega r})`` with ``x`` the affine image of ``r`` in (-1, 1)."""
    if not b > a:
        raise ValueError("bump support needs a < b")
    s = 2.0 / (b - a)
    mid = 0.5 * (a + b)

    def parts(r):
        x = np.clip(s * (np.asarray(r, dtype=float) - mid), -1 + 1e-300, 1 - 1e-300)
        w = 1.0 - x * x
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            phi = np.where(w > 1e-12, np.exp(-1.0 / np.maximum(w, 1e-12)), 0.0)
            g1 = -2 * x / np.maximum(w, 1e-12) ** 2
            g2 = -(2 + 6 * x * x) / np.maximum(w, 1e-12) ** 3
        p1 = np.where(w > 1e-12, g1 * phi, 0.0) * s
        p2 = np.where(w > 1e-12, (g2 + g1 * g1) * phi, 0.0) * s * s
        rr = np.asarray(r, dtype=float)
        e = np.exp(1j * omega * rr)
        m0, m1, m2 = c0 + c1 * e, 1j * omega * c1 * e, -(omega**2) * c1 * e
        return phi, p1, p2, m0, m1, m2

    def f(r):
        phi, _, _, m0, _, _ = parts(r)
        return phi * m0

    def f1(r):
        phi, p1, _, m0, m1, _ = parts(r)
        return p1 * m0 + phi * m1

    def f2(r):
        phi, p1, p2, m0, m1, m2 = parts(r)
        return p2 * m0 + 2 * p1 * m1 + phi * m2

    return RadialProfile(f, (float(a), float(b)), f1, f2)


ZERO_PROFILE = RadialProfile(lambda r: np.zeros_like(np.asarray(r, dtype=float)), (1.0, 2.0),
                             lambda r: np.zeros_like(np.asarray(r, dtype=float)),
                             lambda r: np.zeros_like(np.asarray(r, dtype=float)))


def _profile_quad(fn: Callable, profiles: Sequence[RadialProfile]) -> float:
    """Integrate over the union of supports, split at support endpoints."""
    supports = [p.support for p in profiles if p is not ZERO_PROFILE]
    if not supports:
        return 0.0
    lo = min(a for a, _ in supports)
    hi = max(b for _, b in supports)
    pts = sorted({x for s in supports for x in s if lo < x < hi})
    val, _ = integrate.quad(fn, lo, hi, points=pts or None, epsabs=0.0, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT)
    return float(val)


@dataclass(frozen=True)
class CheckResult:
    lhs: float
    rhs: float
    passed: bool

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def ratio(self) -> float:
        return self.rhs / self.lhs if self.lhs > 0 else math.inf

    def __iter__(self):
        return iter((self.lhs, self.rhs, self.passed))

    def to_json(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "margin": self.margin, "pass": self.passed}


def _verdict(lhs: float, rhs: float, tol: float = 1e-8) -> CheckResult:
    return CheckResult(lhs, rhs, bool(lhs <= rhs + tol * max(abs(lhs), abs(rhs))))


def hardy_threshold_ok(alpha: float, beta: float, R: float, params: ModelParams) -> bool:
    return abs(beta * params.tau / params.V(R)) <= abs(alpha + 1) / 2


def hardy_check(f: RadialProfile, alpha: float, beta: float, R: float, params: ModelParams,
                tol: float = 1e-8) -> CheckResult:
    """``int |f|^2 r^a V^b <= 16/(a+1)^2 int |f'|^2 r^{a+2} V^b`` for ``f`` supported in ``[R, oo)``."""
    if alpha == -1:
        raise ValueError("alpha = -1 is excluded from the Hardy-type inequality")
    if params.nu >= 1 and R < params.R:
        raise ValueError(f"R={R} lies below the model inner radius {params.R}")
    if not hardy_threshold_ok(alpha, beta, R, params):
        raise ValueError(
            f"threshold violated: |beta*tau/V(R)| = {abs(beta * params.tau / params.V(R)):.6g}"
            f" > |alpha+1|/2 = {abs(alpha + 1) / 2:.6g}")
    if f is not ZERO_PROFILE and f.support[0] < R:
        raise ValueError("profile support must lie inside [R, oo)")
    df = f.derivative(1)
    V = params.V
    lhs = _profile_quad(lambda r: abs(f(r)) ** 2 * r**alpha * V(r) ** beta, [f])
    rhs = 16.0 / (alpha + 1) ** 2 * _profile_quad(lambda r: abs(df(r)) ** 2 * r ** (alpha + 2) * V(r) ** beta, [f])
    return _verdict(lhs, rhs, tol)


def claim2_threshold_ok(j: int, mu: float, R: float, params: ModelParams) -> bool:
    return abs(2 * mu * params.tau / params.V(R)) <= min(abs(j + mu), abs(j - mu))


def claim2_check(coeffs: Mapping[object, RadialProfile] | Sequence[RadialProfile], j: int, mu: float, R: float,
                 params: ModelParams, tol: float = 1e-8) -> CheckResult:
    """``||w||^2_mu <= 16 (j+mu)^-2 (j-mu)^-2 ||r^2 L_j w||^2_mu`` for a single-mode form."""
    if float(mu).is_integer():
        raise ValueError("mu must not be an integer")
    if params.nu >= 1 and R < params.R:
        raise ValueError(f"R={R} lies below the model inner radius {params.R}")
    if not claim2_threshold_ok(j, mu, R, params):
        raise ValueError(
            f"threshold violated: |2 mu tau / V(R)| = {abs(2 * mu * params.tau / params.V(R)):.6g}"
            f" > min(|j+mu|, |j-mu|) = {min(abs(j + mu), abs(j - mu)):.6g}")
    profiles = list(coeffs.values()) if isinstance(coeffs, Mapping) else list(coeffs)
    for p in profiles:
        if p is not ZERO_PROFILE and p.support[0] < R:
            raise ValueError("profile support must lie inside [R, oo)")
    V = params.V
    derivs = [(p, p.derivative(1), p.derivative(2)) for p in profiles]

    def lhs_fn(r):
        return sum(abs(p(r)) ** 2 for p, _, _ in derivs) * r ** (-2 * mu - 1) * V(r) ** (-mu)

    def rhs_fn(r):
        tot = 0.0
        for p, d1, d2 in derivs:
            L = d2(r) + d1(r) / r - j * j * p(r) / r**2
            tot += abs(L) ** 2
        return tot * r ** (-2 * mu + 3) * V(r) ** (-mu)

    lhs = EIGHT_PI3 * _profile_quad(lhs_fn, profiles)
    const = 16.0 / ((j + mu) ** 2 * (j - mu) ** 2)
    rhs = const * EIGHT_PI3 * _profile_quad(rhs_fn, profiles)
    return _verdict(lhs, rhs, tol)


def circle_poincare_check(u: Callable, which: str, r: float, params: ModelParams, n: int = 512) -> CheckResult:
    """Poincaré inequality on a circle fiber with metric-derived constants.

    ``u`` is sampled on ``[0, 2 pi)``: the angle ``theta2`` itself, or the
    normalized fiber angle ``psi = tau * theta3`` for ``which='theta3'``.
    With ``grad`` the unit-speed derivative, the checked inequalities are
    ``int |u|^2 <= V int |grad u|^2`` (theta2) and
    ``int |u|^2 <= V^{-1} int |grad u|^2`` (theta3).
    """
    if which not in ("theta2", "theta3"):
        raise ValueError("which must be 'theta2' or 'theta3'")
    if params.nu < 1:
        raise ValueError("circle checks need nu >= 1")
    x = 2 * np.pi * np.arange(n) / n
    vals = np.asarray(u(x), dtype=complex) * np.ones(n)
    scale = max(1.0, float(np.max(np.abs(vals))))
    if abs(vals.mean()) > 1e-8 * scale:
        raise ValueError("u must have zero average over the circle")
    k = np.fft.fftfreq(n, d=1.0 / n)
    du = np.fft.ifft(1j * k * np.fft.fft(vals))
    V = params.V(r)
    lhs = float(np.mean(np.abs(vals) ** 2) * 2 * np.pi)
    raw = float(np.mean(np.abs(du) ** 2) * 2 * np.pi)
    if which == "theta2":
        grad2 = raw / V           # |e_2 u|^2 = V^{-1} |d_theta2 u|^2
        rhs = V * grad2
    else:
        grad2 = raw * V           # |e_3 u|^2 = V |d_psi u|^2
        rhs = grad2 / V
    return _verdict(lhs, rhs, tol=1e-10)


# membership ------------------------------------------------------------------------

def decay_membership(entry, mu: float, R: float | None = None) -> bool:
    """Whether ``int_R^oo r^a V^b dr`` is finite for ``(a, b) = (2m - 2mu - 1, 2s - mu)``."""
    from .catalog import decay_order

    m, s = entry if isinstance(entry, tuple) else decay_order(entry)
    a = 2 * m - 2 * mu - 1
    b = 2 * float(s) - mu
    return bool(a < -1 or (a == -1 and b < -1))


def _abs2_integrand(form: FourierForm, mu: float, params: ModelParams) -> Callable:
    form = basis_convert(form, "e")
    fns = [symbol_callable(f, params) for f in form.symbols()]

    def g(r):
        r = np.asarray(r, dtype=float)
        V = params.kappa0 + params.tau * np.log(r)
        tot = sum(np.abs(fn(r)) ** 2 for fn in fns)
        return tot * r ** (-2 * mu - 1) * V ** (-mu)

    return g


def log_gauss_integral(g: Callable, a: float, b: float, panels_per_unit: int = 1, nodes: int = 24) -> float:
    """Gauss-Legendre in ``u = log r`` on unit-width panels."""
    ua, ub = math.log(a), math.log(b)
    n_pan = max(1, int(math.ceil((ub - ua) * panels_per_unit)))
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(ua, ub, n_pan + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        u = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
        r = np.exp(u)
        total += 0.5 * (hi - lo) * float(np.sum(w * g(r) * r))
    return total


def divergence_probe(entry, mu: float, params: ModelParams, near: float = 1e6, far: float = 1e12) -> dict:
    """Compare ``I(far)`` with ``I(near)`` for ``I(X) = int_R^X |w|^2 rho_mu^2 dvol``.

    The relative growth ``G = (I(far) - I(near)) / I(near)`` is large for a
    divergent integral and tiny for a convergent one; ``G > 1`` is read as
    divergence.
    """
    form = getattr(entry, "form", entry)
    g = _abs2_integrand(form, mu, params)
    R = params.R
    I_near = log_gauss_integral(g, R, near)
    I_far = I_near + log_gauss_integral(g, near, far)
    growth = (I_far - I_near) / I_near if I_near > 0 else math.inf
    return {"I_near": I_near, "I_far": I_far, "growth": growth, "finite": bool(growth <= 1.0)}


# adjointness -----------------------------------------------------------------------

@dataclass(frozen=True)
class ProfiledForm:
    """Finite sum ``sum_j phi_j(r) A_j`` of numeric profiles times symbolic forms."""

    parts: tuple[tuple[Callable, FourierForm], ...]

    @property
    def degree(self) -> int:
        return self.parts[0][1].degree

    def d(self) -> "ProfiledForm":
        # d(phi A) = phi' V^{-1/2} e^0 ^ A + phi dA
        out = []
        e0 = FourierForm.basis_form((0,), RadialSymbol.V(Fraction(-1, 2)))
        for phi, A in self.parts:
            A = basis_convert(A, "e")
            out.append((_deriv(phi), wedge(e0, A)))
            out.append((_value(phi), exterior_derivative(A)))
        return ProfiledForm(tuple(out))

    def delta(self) -> "ProfiledForm":
        # delta(psi B) = psi delta B - psi' *(V^{-1/2} e^0 ^ *B)
        out = []
        e0 = FourierForm.basis_form((0,), RadialSymbol.V(Fraction(-1, 2)))
        for psi, B in self.parts:
            B = basis_convert(B, "e")
            out.append((_value(psi), codifferential(B)))
            out.append((_neg(_deriv(psi)), hodge_star(wedge(e0, hodge_star(B)))))
        return ProfiledForm(tuple(out))

    def components(self, r: np.ndarray, params: ModelParams) -> dict:
        out: dict = {}
        for phi, A in self.parts:
            pv = phi(r)
            for key, f in basis_convert(A, "e").items():
                out[key] = out.get(key, 0) + pv * symbol_callable(f, params)(r)
        return out


def _value(p: RadialProfile | Callable) -> Callable:
    return p


def _deriv(p) -> Callable:
    if isinstance(p, RadialProfile):
        return p.derivative(1)
    if hasattr(p, "derivative"):
        return p.derivative(1)
    raise TypeError("profile needs a derivative")


def _neg(fn: Callable) -> Callable:
    return lambda r: -fn(r)


def l2_pairing(X: ProfiledForm, Y: ProfiledForm, params: ModelParams, support: tuple[float, float]) -> complex:
    """``<X, Y> = 8 pi^3 int sum_{k,I} X_{kI} conj(Y_{kI}) V r dr``."""
    a, b = support

    def part(r, which):
        cx = X.components(np.array([r]), params)
        cy = Y.components(np.array([r]), params)
        s = sum(cx[k][0] * np.conj(cy[k][0]) for k in cx if k in cy)
        s = complex(s) * params.V(r) * r
        return s.real if which == 0 else s.imag

    re, _ = integrate.quad(lambda r: part(r, 0), a, b, epsabs=0.0, epsrel=1e-10, limit=QUAD_LIMIT)
    im, _ = integrate.quad(lambda r: part(r, 1), a, b, epsabs=1e-14, epsrel=1e-10, limit=QUAD_LIMIT)
    return EIGHT_PI3 * complex(re, im)


# randomized suites -------------------------------------------------------------------

HARDY_ALPHAS = (-3, -2, 1, 2)
HARDY_BETAS = (-2, 0, 2)
CLAIM2_JS = tuple(range(-3, 4))
CLAIM2_MUS = (-1.5, -0.5, 0.5, 1.5)


def radius_for_V(v_min: float, params: ModelParams) -> float:
    """Smallest admissible radius with ``V(R) >= v_min`` (at least the model's R)."""
    if params.tau == 0 or v_min <= params.V(params.R):
        return params.R
    return max(params.R, math.exp((v_min - params.kappa0) / params.tau) * 1.01)


def _random_bump(rng: np.random.Generator, R: float) -> dict:
    a = R * rng.uniform(1.05, 3.0)
    b = a * rng.uniform(1.3, 4.0)
    c0 = complex(rng.normal(), rng.normal())
    c1 = complex(rng.normal(), rng.normal()) * rng.uniform(0, 1)
    omega = rng.uniform(0, 6 * math.pi / (b - a))
    return {"support": [a, b], "c0": [c0.real, c0.imag], "c1": [c1.real, c1.imag], "omega": omega}


def profile_from_case(spec: dict) -> RadialProfile:
    a, b = spec["support"]
    return bump_profile(a, b, complex(*spec["c0"]), complex(*spec["c1"]), spec["omega"])


def hardy_cases(params: ModelParams, seed: int, n: int = 50, alphas=HARDY_ALPHAS, betas=HARDY_BETAS) -> list[dict]:
    rng = np.random.default_rng(seed)
    combos = [(a, b) for b in betas for a in alphas]
    cases = []
    for i in range(n):
        alpha, beta = combos[i % len(combos)]
        if alpha == -1:
            raise ValueError("alpha = -1 is excluded from the Hardy-type inequality")
        R = radius_for_V(2 * abs(beta) * params.tau / abs(alpha + 1), params)
        cases.append({"case": i, "alpha": alpha, "beta": beta, "R": R, "profile": _random_bump(rng, R)})
    return cases


def run_hardy_case(case: dict, params: ModelParams, tol: float = 1e-8) -> dict:
    res = hardy_check(profile_from_case(case["profile"]), case["alpha"], case["beta"], case["R"], params, tol)
    return {**case, **res.to_json()}


def claim2_cases(params: ModelParams, seed: int, n: int = 32, js=CLAIM2_JS, mus=CLAIM2_MUS) -> list[dict]:
    rng = np.random.default_rng(seed)
    combos = [(j, mu) for mu in mus for j in js]
    cases = []
    for i in range(n):
        j, mu = combos[i] if i < len(combos) else combos[int(rng.integers(len(combos)))]
        if float(mu).is_integer():
            raise ValueError("mu must not be an integer")
        R = radius_for_V(2 * abs(mu) * params.tau / min(abs(j + mu), abs(j - mu)), params)
        k = int(rng.integers(1, 5))
        slots = sorted(int(x) for x in rng.choice(4, size=k, replace=False))
        cases.append({"case": i, "j": j, "mu": mu, "R": R,
                      "coefficients": {str(s): _random_bump(rng, R) for s in slots}})
    return cases


def run_claim2_case(case: dict, params: ModelParams, tol: float = 1e-8) -> dict:
    coeffs = {k: profile_from_case(v) for k, v in case["coefficients"].items()}
    res = claim2_check(coeffs, case["j"], case["mu"], case["R"], params, tol)
    return {**case, **res.to_json()}


def poincare_cases(params: ModelParams, seed: int, modes=(1, 2, 3, 4)) -> list[dict]:
    rng = np.random.default_rng(seed)
    cases = []
    for which in ("theta2", "theta3"):
        for n in modes:
            cases.append({"which": which, "coefficients": {str(n): [1.0, 0.0]}})
        mix = {str(n): [float(rng.normal()), float(rng.normal())] for n in (-3, -1, 2, 5)}
        cases.append({"which": which, "coefficients": mix})
    r = 2 * params.R
    return [{"case": i, "r": r, **c} for i, c in enumerate(cases)]


def run_poincare_case(case: dict, params: ModelParams, tol: float = 1e-8) -> dict:
    coeffs = [(int(k), complex(*v)) for k, v in case["coefficients"].items()]
    u = lambda x: sum(c * np.exp(1j * k * x) for k, c in coeffs)
    res = circle_poincare_check(u, case["which"], case["r"], params)
    return {**case, **res.to_json(), "ratio": res.ratio}
