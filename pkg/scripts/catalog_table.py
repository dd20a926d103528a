"""Print the harmonic catalog as a table: family, degree, order, decay order, membership per weight."""
import argparse

from algstar.catalog import decay_order, full_catalog
from algstar.weighted import decay_membership


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--orders", type=int, nargs=2, default=(-2, 2), metavar=("LO", "HI"))
    ap.add_argument("--degrees", type=int, nargs="+", default=(0, 1, 2))
    ap.add_argument("--mu", type=float, nargs="+", default=(-1.5, -0.5, 0.5, 1.5))
    args = ap.parse_args()

    entries = full_catalog(range(args.orders[0], args.orders[1] + 1), tuple(args.degrees))
    head = f"{'family':<28}{'deg':>4}{'ord':>5}{'decay':>12}  " + " ".join(f"mu={m:+.1f}" for m in args.mu)
    print(head)
    print("-" * len(head))
    for ent in entries:
        m, s = decay_order(ent)
        marks = " ".join(f"{'L2' if decay_membership(ent, mu) else '--':>7}" for mu in args.mu)
        print(f"{ent.family:<28}{ent.degree:>4}{ent.order:>5}{f'({m}, {s})':>12}  {marks}")
    print(f"\n{len(entries)} entries")


if __name__ == "__main__":
    main()
