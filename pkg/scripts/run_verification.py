"""Run the full verification report over a few parameter tuples and summarize each section."""
import argparse
import json
import math

from algstar.radial import ModelParams
from algstar.reports import DEFAULT_TOLERANCES, inequality_report, verify_all_report

TUPLES = ((1, 0.0), (2, 1.0), (4, -1.0))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--inequalities", action="store_true", help="also run the randomized inequality suites")
    ap.add_argument("--json", action="store_true", help="dump full reports instead of a summary")
    args = ap.parse_args()

    all_ok = True
    for nu, k0 in TUPLES:
        bound = ModelParams.unchecked(nu, k0).radius_bound()
        p = ModelParams(nu=nu, kappa0=k0, R=max(2 * bound, math.e**2))
        rep = verify_all_report(p, args.seed, DEFAULT_TOLERANCES)
        if args.inequalities:
            rep["sections"]["inequalities"] = inequality_report(p, "all", args.seed, DEFAULT_TOLERANCES["quadrature"], {})
            rep["ok"] = rep["ok"] and rep["sections"]["inequalities"]["ok"]
        all_ok &= rep["ok"]
        if args.json:
            print(json.dumps(rep, sort_keys=True, indent=2))
            continue
        print(f"nu={nu} kappa0={k0:+.1f} R={p.R:.3f}: {'ok' if rep['ok'] else 'FAILED'}")
        for name, sec in rep["sections"].items():
            print(f"    {name:<14}{'ok' if sec['ok'] else 'FAILED'}")
    return 0 if all_ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
