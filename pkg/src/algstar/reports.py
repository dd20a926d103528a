"""Report builders behind the command-line front end."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import weighted as W
from .calculus import exterior_derivative, fd_laplacian_oracle, hodge_laplacian, scalar_sampler
from .catalog import (catalog, decay_order, dtheta2, full_catalog, perturbed_entry, span_rank, verify_harmonic,
                      w1_space)
from .forms import FourierForm, wedge
from .geometry import geometry_report, volume_form
from .groups import (GroupElement, GroupSpec, isometry_defect, maps_equal_mod_lattice, orbit_closure,
                     random_rational_points, relation_table)
from .hyperkahler import hk_closed, hk_defect, hk_triple, is_self_dual
from .radial import ModelParams, RadialSymbol

SCHEMA = 1
DEFAULT_TOLERANCES = {"quadrature": 1e-8, "fd_oracle": 1e-5, "isometry": 1e-10}


def thread_count() -> int:
    raw = os.environ.get("ALGSTAR_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


def parallel_map(fn: Callable, items: Sequence, threads: int | None = None) -> list:
    """Order-preserving map over independent cases."""
    threads = threads or thread_count()
    if threads == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _order_pair(order) -> list:
    m, s = order
    return [m, str(s)]


# catalog ------------------------------------------------------------------------------

def entry_record(entry, params: ModelParams) -> dict:
    residual = verify_harmonic(entry, params)
    return {
        "family": entry.family,
        "degree": entry.degree,
        "order": entry.order,
        "decay_order": _order_pair(decay_order(entry)),
        "residual_terms": len(residual.items()),
        "residual_zero": residual.is_zero(),
        "form": entry.form.to_json(),
    }


def catalog_report(params: ModelParams, degree: int, order: int, gens: GroupSpec | None) -> dict:
    from .catalog import basis_Z

    generators = gens.generators() if gens else []
    entries = basis_Z(degree, order, generators)
    out = {
        "schema": SCHEMA,
        "command": "catalog",
        "params": params.to_dict(),
        "degree": degree,
        "order": order,
        "generators": gens.to_dict()["generators"] if gens else [],
        "entries": [entry_record(e, params) for e in entries],
    }
    if degree == 1:
        forms = [e.form for e in entries]
        out["contains_dtheta2"] = bool(forms) and span_rank(forms + [dtheta2()]) == span_rank(forms)
    return out


def catalog_residuals(params: ModelParams, orders: Iterable[int] = range(-5, 6), inject: bool = False) -> dict:
    entries = full_catalog(list(orders))
    if inject:
        entries = entries + [perturbed_entry()]
    failures = [f"{e.degree}:{e.order}:{e.family}" for e in entries if not verify_harmonic(e, params).is_zero()]
    counts: dict = {}
    for e in entries:
        key = f"degree{e.degree}"
        counts[key] = counts.get(key, 0) + 1
    return {"entries": len(entries), "counts": counts, "failures": failures, "ok": not failures}


# hyperkahler ------------------------------------------------------------------------

def hyperkahler_report(params: ModelParams) -> dict:
    out = {}
    for basis in ("e", "E"):
        t = hk_triple(params, basis)
        Q = hk_defect(*t)
        half_sq = wedge(t.omega1, t.omega1) * Fraction(1, 2)
        out[basis] = {
            "closed": hk_closed(t),
            "self_dual": all(is_self_dual(w) for w in t),
            "defect_zero": all(q.is_zero() for q in Q),
            "half_square_is_volume": half_sq == volume_form(params, basis),
        }
    out["ok"] = all(all(v.values()) for v in out.values())
    return out


# groups -----------------------------------------------------------------------------

def valid_tuples(nu: int, count: int = 5) -> list[tuple]:
    """Deterministic admissible ``(k, l, m, n, t)`` tuples; ``n`` is None for odd ``nu``."""
    if nu < 1:
        return []
    out = []
    ts = (Fraction(0), Fraction(1, 3), Fraction(2, 7))
    for l in (1, 2, 3):
        for k in [d for d in range(1, nu + 1) if nu % d == 0][::-1]:
            for m in sorted({0, k * l - 1, (k * l) // 2}):
                if nu % 2:
                    out.append((k, l, m, None, Fraction(0)))
                else:
                    ns = [n for n in range(nu) if (n * l) % 2 == 0]
                    n = ns[len(out) % len(ns)]
                    out.append((k, l, m, n, ts[len(out) % len(ts)]))
                if len(out) == count:
                    return out
    return out


def relation_report(nu: int, tuples: Sequence[tuple], seed: int, n_points: int = 20) -> dict:
    rng = np.random.default_rng(seed)
    pts = random_rational_points(n_points, rng)
    rows = []
    ok = True
    for k, l, m, n, t in tuples:
        table = relation_table(nu, k, l, m, n, t)
        res = {name: maps_equal_mod_lattice(a, b, pts) for name, (a, b) in table.items()}
        ok &= all(res.values())
        rows.append({"k": k, "l": l, "m": m, "n": n, "t": str(t), "relations": res})
    return {"points": n_points, "tuples": rows, "ok": ok}


def _sample_points(params: ModelParams, rng: np.random.Generator, n: int = 5) -> list[list[float]]:
    return [[params.R * rng.uniform(1.5, 10), *rng.uniform(-6, 6, size=3)] for _ in range(n)]


def quotient_report(params: ModelParams, gens: GroupSpec, seed: int, tol: float,
                    orders: Sequence[int] = range(-2, 3)) -> dict:
    rng = np.random.default_rng(seed)
    generators = gens.generators()
    pts = _sample_points(params, rng)
    iso = {g.label(): isometry_defect(g, params, pts) for g in generators}
    k, l, m = 1, gens.level(), 0
    n, t = None, Fraction(0)
    for name, args in gens.atoms:
        if name == "zeta":
            k, l, m = (int(a) for a in args)
        elif name == "iota":
            n = int(args[0]) if args else 0
            t = Fraction(args[1]) if len(args) > 1 else Fraction(0)
    relations = relation_report(params.nu, [(k, l, m, n, t)], seed)
    from .catalog import basis_Z
    table = {}
    for p in (0, 1, 2):
        for q in orders:
            inv = basis_Z(p, q, generators)
            table[f"degree{p}_order{q}"] = {"total": len(catalog(p, q)), "invariant": [e.family for e in inv]}
    start = [Fraction(int(x), 97) for x in rng.integers(0, 600, size=3)]
    return {
        "schema": SCHEMA,
        "command": "quotient",
        "params": params.to_dict(),
        "group": gens.to_dict(),
        "constraints_ok": True,
        "isometry_defects": iso,
        "isometry_ok": all(v <= tol for v in iso.values()),
        "relations": relations,
        "invariance": table,
        "w1": w1_space(generators),
        "orbit": orbit_closure(generators, start),
        "ok": relations["ok"] and all(v <= tol for v in iso.values()),
    }


# numeric oracle ---------------------------------------------------------------------

def fd_oracle_report(params: ModelParams, seed: int, tol: float, n_funcs: int = 3, n_points: int = 3) -> dict:
    if params.nu < 1:
        return {"skipped": "needs nu >= 1", "ok": True}
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_funcs):
        m = int(rng.integers(-3, 4))
        s = Fraction(int(rng.integers(-4, 5)), 2)
        k = int(rng.integers(-3, 4))
        f = FourierForm.scalar(RadialSymbol.monomial(m, s, 1), k) + FourierForm.scalar(RadialSymbol.monomial(m + 1, s, 1), k)
        S, SL = scalar_sampler(f, params), scalar_sampler(hodge_laplacian(f, params), params)
        for _ in range(n_points):
            r0 = params.R * rng.uniform(1.5, 10)
            pt = (r0, *rng.uniform(0, 2 * np.pi, size=3))
            exact = SL(*pt[:2])
            approx = fd_laplacian_oracle(S, pt, params)
            worst = max(worst, abs(approx - exact) / max(abs(exact), 1e-300))
    return {"max_relative_error": worst, "tolerance": tol, "ok": worst <= tol}


# top level --------------------------------------------------------------------------

def verify_all_report(params: ModelParams, seed: int, tolerances: dict | None = None, inject: bool = False) -> dict:
    tol = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    geo = geometry_report(params)
    geo_ok = all(geo[b][flag] for b in ("e", "E") for flag in
                 ("connection_antisymmetric", "first_structure_equation_zero", "bianchi_zero", "ricci_flat",
                  "curvature_decay_ok")) and geo["E"]["connection_decay_ok"] and geo["double_star_sign_ok"]
    dd_ok = all(exterior_derivative(exterior_derivative(e.form)).is_zero()
                for e in full_catalog(range(-2, 3), (0, 1)))
    sections = {
        "catalog": catalog_residuals(params, inject=inject),
        "geometry": {**geo, "ok": geo_ok},
        "hyperkahler": hyperkahler_report(params),
        "d_squared": {"ok": dd_ok},
        "fd_oracle": fd_oracle_report(params, seed, tol["fd_oracle"]),
    }
    if params.nu >= 1:
        sections["groups"] = relation_report(params.nu, valid_tuples(params.nu), seed)
        rng = np.random.default_rng(seed)
        pts = _sample_points(params, rng)
        gens = [GroupElement.sigma1(params.nu), GroupElement.sigma2(params.nu), GroupElement.sigma3(params.nu)]
        gens += [GroupElement.zeta(k, l, m, params.nu) for k, l, m, _, _ in valid_tuples(params.nu)]
        if params.nu % 2 == 0:
            gens.append(GroupElement.iota(params.nu, 0, Fraction(1, 3)))
        worst = max(isometry_defect(g, params, pts) for g in gens)
        sections["isometry"] = {"max_defect": worst, "tolerance": tol["isometry"], "ok": worst <= tol["isometry"]}
        sections["w1"] = {"plain": w1_space([])}
        if params.nu % 2 == 0:
            sections["w1"]["iota"] = w1_space([GroupElement.iota(params.nu)])
        w1_ok = sections["w1"]["plain"]["contains_dtheta2"] and sections["w1"]["plain"]["dimension"] == 1
        if "iota" in sections["w1"]:
            w1_ok = w1_ok and sections["w1"]["iota"]["dimension"] == 0
        sections["w1"]["ok"] = w1_ok
    ok = all(sec["ok"] for sec in sections.values())
    return {"schema": SCHEMA, "command": "verify-all", "params": params.to_dict(), "seed": seed,
            "tolerances": tol, "sections": sections, "ok": ok}


def geometry_command_report(params: ModelParams) -> dict:
    geo = geometry_report(params)
    ok = all(geo[b]["ricci_flat"] and geo[b]["first_structure_equation_zero"] and geo[b]["bianchi_zero"]
             for b in ("e", "E"))
    return {"schema": SCHEMA, "command": "geometry", "params": params.to_dict(), "report": geo, "ok": ok}


SUITES = {
    "hardy": (W.hardy_cases, W.run_hardy_case),
    "claim2": (W.claim2_cases, W.run_claim2_case),
    "poincare": (W.poincare_cases, W.run_poincare_case),
}


def inequality_report(params: ModelParams, suite: str, seed: int, tol: float, options: dict | None = None,
                      threads: int | None = None) -> dict:
    options = {k: v for k, v in (options or {}).items() if v is not None}
    names = list(SUITES) if suite == "all" else [suite]
    out = {"schema": SCHEMA, "command": "inequalities", "params": params.to_dict(), "seed": seed,
           "suites": {}}
    for name in names:
        make, run = SUITES[name]
        kwargs = {}
        if name == "hardy":
            if "alpha" in options:
                kwargs["alphas"] = (options["alpha"],)
            if "beta" in options:
                kwargs["betas"] = (options["beta"],)
            if "cases" in options:
                kwargs["n"] = options["cases"]
        elif name == "claim2":
            if "mu" in options:
                kwargs["mus"] = (options["mu"],)
            if "j" in options:
                kwargs["js"] = (options["j"],)
            if "cases" in options:
                kwargs["n"] = options["cases"]
        cases = make(params, seed, **kwargs)
        results = parallel_map(lambda c: run(c, params, tol), cases, threads)
        out["suites"][name] = {"cases": results, "all_pass": all(r["pass"] for r in results)}
    out["ok"] = all(s["all_pass"] for s in out["suites"].values())
    return out
