#!/usr/bin/env python3
"""Cross-validate the causal criterion against the partial-transpose
oracle over the class-a parameter grid.

For every (mixing, coupling) pair the script sweeps p over [0, 1],
classifies the EC matrix with both methods and reports the disagreement
count plus where each method places the separable/entangled boundary.
On 2x2 systems the partial-transpose check is conclusive, so any
disagreement there is a real defect; for larger systems the column is
labelled "ppt_consistent" because PPT only ever certifies the entangled
side (Peres, PRL 77, 1413 (1996))."""
import argparse
import sys

from causal_sep.config_calculus import CouplingMode
from causal_sep.criterion import OverallVerdict, classify
from causal_sep.ec_family import (
    ECClass,
    ECParams,
    Mixing,
    build_ec_matrix,
    threshold,
    variant_name,
)
from causal_sep.ppt import any_npt, ppt_report


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def boundary(flags):
    """Index of the first True in a False->True verdict sequence, or None."""
    for i, f in enumerate(flags):
        if f:
            return i
    return None


def run_variant(mixing, coupling, D, N, steps):
    causal_flags = []
    npt_flags = []
    for i in range(steps):
        p = i / (steps - 1) if steps > 1 else 0.0
        rho = build_ec_matrix(ECParams(ECClass.A, mixing, coupling, D, N, p))
        report = classify(rho, coupling)
        causal_flags.append(report.overall is OverallVerdict.ENTANGLED)
        npt_flags.append(any_npt(ppt_report(rho)))
    disagreements = sum(a != b for a, b in zip(causal_flags, npt_flags))
    return causal_flags, npt_flags, disagreements


def main(argv=None):
    ap = argparse.ArgumentParser(
        description="causal criterion vs PPT oracle on the class-a grid"
    )
    ap.add_argument("--D", type=int, default=2)
    ap.add_argument("--N", type=int, default=2)
    ap.add_argument("--steps", type=int, default=101)
    args = ap.parse_args(argv)
    if args.D ** args.N > 256:
        print(
            f"error: D^N = {args.D ** args.N} makes the eigensolver sweep "
            "unreasonably slow; keep D^N <= 256",
            file=sys.stderr,
        )
        return 1

    conclusive = args.D == 2 and args.N == 2
    ppt_label = "ppt" if conclusive else "ppt_consistent"
    print(f"D = {args.D}, N = {args.N}, {args.steps} grid points")
    print(f"{'variant':<18} {'th(closed)':>12} {'causal@':>10} {ppt_label + '@':>16} {'disagree':>9}")
    worst = 0
    for mixing in (Mixing.WEAK, Mixing.STRONG):
        for coupling in (CouplingMode.N_FREE, CouplingMode.N_COUPLED):
            name = variant_name(ECClass.A, mixing, coupling)
            th = threshold(ECClass.A, mixing, coupling, args.D, args.N)
            causal_flags, npt_flags, bad = run_variant(
                mixing, coupling, args.D, args.N, args.steps
            )
            to_p = lambda idx: "-" if idx is None else f"{idx / (args.steps - 1):.3f}"
            print(
                f"{name:<18} {th.p_th:>12.6f} {to_p(boundary(causal_flags)):>10} "
                f"{to_p(boundary(npt_flags)):>16} {bad:>9}"
            )
            worst = max(worst, bad)
    if conclusive and worst:
        print("DISAGREEMENT on a conclusive grid -- investigate", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
