"""Command-line front end: ``algstar verify-all | catalog | inequalities | geometry | quotient``.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields

from .radial import ModelParams

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
COMMANDS = ("verify-all", "catalog", "inequalities", "geometry", "quotient")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    nu: int = 2
    kappa0: float = 1.0
    R: float = math.e**2
    L: float = 1.0
    out: str | None = None
    seed: int = 0
    fmt: str = "json"
    quadrature_tol: float = 1e-8
    fd_tol: float = 1e-5
    isometry_tol: float = 1e-10
    options: dict = field(default_factory=dict)

    def params(self) -> ModelParams:
        return ModelParams(nu=self.nu, kappa0=self.kappa0, L=self.L, R=self.R)

    def tolerances(self) -> dict:
        return {"quadrature": self.quadrature_tol, "fd_oracle": self.fd_tol, "isometry": self.isometry_tol}

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise UsageError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.fmt not in ("json", "csv"):
            raise UsageError("format must be json or csv")
        try:
            self.params()
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        for name in ("quadrature_tol", "fd_tol", "isometry_tol"):
            if not getattr(self, name) > 0:
                raise UsageError(f"{name} must be positive")
        opt = self.options
        if self.command == "catalog":
            if opt.get("degree") not in (0, 1, 2):
                raise UsageError("--degree must be 0, 1 or 2")
            if not isinstance(opt.get("order"), int):
                raise UsageError("--order is required")
            self.group()
        if self.command == "quotient":
            if not opt.get("gens"):
                raise UsageError("--gens is required")
            self.group()
        if self.command == "inequalities":
            if opt.get("suite") not in ("hardy", "claim2", "poincare", "all"):
                raise UsageError("--suite must be hardy, claim2, poincare or all")
            if opt.get("alpha") == -1:
                raise UsageError("alpha = -1 is excluded from the Hardy-type inequality")
            mu = opt.get("mu")
            if mu is not None and float(mu).is_integer():
                raise UsageError("mu must not be an integer")
            if opt.get("cases") is not None and opt["cases"] < 1:
                raise UsageError("--cases must be positive")
            if opt.get("mu") is not None and opt.get("j") is not None:
                j, mu = opt["j"], opt["mu"]
                if min(abs(j + mu), abs(j - mu)) == 0:
                    raise UsageError("j = +-mu makes the mode constant infinite")

    def group(self):
        from .groups import parse_generators

        spec = self.options.get("gens") or ""
        try:
            return parse_generators(spec, self.nu) if spec else None
        except ValueError as exc:
            raise UsageError(f"bad generator spec {spec!r}: {exc}") from None


def _add_common(p: argparse.ArgumentParser) -> None:
    sup = argparse.SUPPRESS
    p.add_argument("--nu", type=int, default=sup)
    p.add_argument("--kappa0", type=float, default=sup)
    p.add_argument("--R", type=float, default=sup, help="inner radius (default e^2)")
    p.add_argument("--L", type=float, default=sup)
    p.add_argument("--out", default=sup, help="write the report here instead of stdout")
    p.add_argument("--seed", type=int, default=sup)
    p.add_argument("--config", default=None, help="JSON file with RunConfig fields")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="fmt", action="store_const", const="json", default=sup)
    g.add_argument("--csv", dest="fmt", action="store_const", const="csv", default=sup)
    p.add_argument("--quadrature-tol", dest="quadrature_tol", type=float, default=sup)
    p.add_argument("--fd-tol", dest="fd_tol", type=float, default=sup)
    p.add_argument("--isometry-tol", dest="isometry_tol", type=float, default=sup)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="algstar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-all", help="exact identities, catalog residuals, group relations")
    _add_common(p)
    p.add_argument("--inject-perturbation", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("catalog", help="harmonic catalog entries fixed by a group")
    p.add_argument("action", nargs="?", choices=["list"], default="list")
    _add_common(p)
    p.add_argument("--degree", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--gens", "--invariant-under", dest="gens", default="")

    p = sub.add_parser("inequalities", help="randomized Hardy, mode and circle suites")
    p.add_argument("action", nargs="?", choices=["run"], default="run")
    _add_common(p)
    p.add_argument("--suite", help="hardy, claim2, poincare or all (default)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--j", type=int)
    p.add_argument("--cases", type=int)

    p = sub.add_parser("geometry", help="structure equations and curvature decay")
    p.add_argument("action", nargs="?", choices=["report"], default="report")
    _add_common(p)

    p = sub.add_parser("quotient", help="group relations, isometry and invariance tables")
    p.add_argument("action", nargs="?", choices=["check"], default="check")
    _add_common(p)
    p.add_argument("--gens", "--invariant-under", dest="gens", default="")
    return parser


_OPTION_KEYS = ("degree", "order", "gens", "suite", "alpha", "beta", "mu", "j", "cases", "inject_perturbation")
_FIELD_KEYS = ("nu", "kappa0", "R", "L", "out", "seed", "fmt", "quadrature_tol", "fd_tol", "isometry_tol")


def config_from_args(argv: list[str] | None = None) -> RunConfig:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        raise UsageError("bad arguments") if exc.code else exc
    data: dict = {"command": ns.command}
    if ns.config:
        try:
            with open(ns.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {ns.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        loaded.pop("command", None)
        data.update(loaded)
    for key in _FIELD_KEYS:
        if hasattr(ns, key):
            data[key] = getattr(ns, key)
    options = dict(data.get("options") or {})
    for key in _OPTION_KEYS:
        val = getattr(ns, key, None)
        if val is not None and val is not False and val != "":
            options[key] = val
    if "alpha" in options and float(options["alpha"]).is_integer():
        options["alpha"] = int(options["alpha"])
    if "beta" in options and float(options["beta"]).is_integer():
        options["beta"] = int(options["beta"])
    if ns.command == "inequalities":
        options.setdefault("suite", "all")
    data["options"] = options
    try:
        cfg = RunConfig.from_dict(data)
    except TypeError as exc:
        raise UsageError(str(exc)) from None
    cfg.validate()
    return cfg


def flatten(obj, prefix: str = "") -> list[tuple[str, object]]:
    if isinstance(obj, dict):
        rows = []
        for k in sorted(obj):
            rows += flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
        return rows
    if isinstance(obj, list):
        rows = []
        for i, v in enumerate(obj):
            rows += flatten(v, f"{prefix}[{i}]")
        return rows
    return [(prefix, obj)]


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in flatten(report):
        w.writerow([k, json.dumps(v) if isinstance(v, (bool, type(None))) else v])
    return buf.getvalue()


def execute(cfg: RunConfig) -> dict:
    from . import reports

    params = cfg.params()
    opt = cfg.options
    if cfg.command == "verify-all":
        return reports.verify_all_report(params, cfg.seed, cfg.tolerances(), inject=bool(opt.get("inject_perturbation")))
    if cfg.command == "catalog":
        rep = reports.catalog_report(params, opt["degree"], opt["order"], cfg.group())
        rep["ok"] = all(e["residual_zero"] for e in rep["entries"])
        return rep
    if cfg.command == "geometry":
        return reports.geometry_command_report(params)
    if cfg.command == "quotient":
        return reports.quotient_report(params, cfg.group(), cfg.seed, cfg.isometry_tol)
    return reports.inequality_report(params, opt.get("suite", "all"), cfg.seed, cfg.quadrature_tol, opt)


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except UsageError as exc:
        print(f"algstar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        report = execute(cfg)
    except ValueError as exc:
        print(f"algstar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(report, cfg.fmt)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.get("ok", False) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
