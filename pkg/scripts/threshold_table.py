#!/usr/bin/env python3
"""
threshold_table.py

Tabulate the closed-form separability thresholds of all eight EC-family
variants over a (D, N) grid.  Class-a rows carry a single threshold in
|p|; class-b rows carry the window pair (p_th1, p_th2) per |m|.

Usage examples:
    python threshold_table.py                          # D 2..6, N 2..4
    python threshold_table.py --d-max 12 --n-max 6
    python threshold_table.py --out thresholds.csv
"""
import argparse
import csv
import sys

from causal_sep.ec_family import ECClass, all_variants, threshold, variant_name


def parse_args(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[3])
    ap.add_argument("--d-min", type=int, default=2)
    ap.add_argument("--d-max", type=int, default=6)
    ap.add_argument("--n-min", type=int, default=2)
    ap.add_argument("--n-max", type=int, default=4)
    ap.add_argument("--out", default=None, help="CSV file (default: stdout)")
    return ap.parse_args(argv)


def rows_for(D, N):
    for ec_class, mixing, coupling in all_variants():
        name = variant_name(ec_class, mixing, coupling)
        if ec_class is ECClass.A:
            th = threshold(ec_class, mixing, coupling, D, N)
            yield [name, D, N, "", repr(th.p_th1), repr(th.p_th2), th.separable_region]
        else:
            for m_abs in range(1, N):
                th = threshold(ec_class, mixing, coupling, D, N, m_abs)
                yield [
                    name, D, N, m_abs,
                    repr(th.p_th1), repr(th.p_th2), th.separable_region,
                ]


def main(argv=None):
    args = parse_args(argv)
    if args.d_min < 2 or args.n_min < 2:
        print("error: D and N start at 2", file=sys.stderr)
        return 1
    sink = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(["variant", "D", "N", "m_abs", "p_th1", "p_th2", "separable_region"])
    count = 0
    for D in range(args.d_min, args.d_max + 1):
        for N in range(args.n_min, args.n_max + 1):
            for row in rows_for(D, N):
                writer.writerow(row)
                count += 1
    if args.out:
        sink.close()
        print(f"wrote {count} rows to {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
