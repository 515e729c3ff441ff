#!/usr/bin/env python3
"""Print the W(p) profile of one EC variant: closed form next to the
matrix-level evaluation at the probe configuration (0,...,0), with the
threshold row marked."""
import argparse

from causal_sep.config_calculus import CouplingMode
from causal_sep.criterion import causal_W
from causal_sep.density import PartySubset
from causal_sep.ec_family import (
    ECClass,
    ECParams,
    Mixing,
    build_ec_matrix,
    closed_form_W,
    threshold,
    variant_name,
)


def main(argv=None):
    ap = argparse.ArgumentParser(description="W(p) profile for one EC variant")
    ap.add_argument("--class", dest="ec_class", choices=["a", "b"], default="a")
    ap.add_argument("--mixing", choices=["weak", "strong"], default="strong")
    ap.add_argument("--coupling", choices=["free", "coupled"], default="free")
    ap.add_argument("--D", type=int, default=3)
    ap.add_argument("--N", type=int, default=2)
    ap.add_argument("--m-abs", type=int, default=None, help="b-class only")
    ap.add_argument("--steps", type=int, default=21)
    args = ap.parse_args(argv)

    ec_class = ECClass(args.ec_class)
    mixing = Mixing(args.mixing)
    coupling = CouplingMode(args.coupling)
    if ec_class is ECClass.B and args.m_abs is None:
        ap.error("--m-abs is required for --class b")

    if ec_class is ECClass.A:
        th = threshold(ec_class, mixing, coupling, args.D, args.N)
    else:
        th = threshold(ec_class, mixing, coupling, args.D, args.N, args.m_abs)
    subset = PartySubset((0,), args.N)
    j0 = (0,) * args.N

    print(f"# {variant_name(ec_class, mixing, coupling)}  D={args.D} N={args.N}")
    print(f"# separable region: {th.separable_region}")
    print(f"{'p':>8} {'W_closed':>24} {'W_matrix':>24}")
    crossed = False
    for i in range(args.steps):
        p = i / (args.steps - 1) if args.steps > 1 else 0.0
        params = ECParams(ec_class, mixing, coupling, args.D, args.N, p)
        if ec_class is ECClass.A:
            w_closed = closed_form_W(params)
        else:
            # binding branch: the more negative of the two signed offsets
            branches = []
            for m in (args.m_abs, -args.m_abs):
                try:
                    branches.append(closed_form_W(params, m_j=args.N, m=m))
                except ValueError:
                    pass  # endpoint divergence; drop the branch
            w_closed = min(branches)
        w_matrix = causal_W(build_ec_matrix(params), j0, subset, coupling).W
        # mark the first row past each closed-form boundary
        mark = ""
        if not crossed and p > th.p_th1:
            mark = "  <- p_th1"
            crossed = True
        print(f"{p:>8.3f} {w_closed:>24.16e} {w_matrix:>24.16e}{mark}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
