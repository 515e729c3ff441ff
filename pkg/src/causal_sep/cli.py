"""Command-line interface: ``causal-sep <command> [flags]``.

Machine payloads (JSON with a "schema" tag, or CSV with a fixed header)
go to stdout or --out; human diagnostics go to stderr.  Output is
deterministic for identical inputs, with floats printed as shortest
round-trip decimals.  Exit codes: 0 success, 1 domain error, 2 I/O or
parse error (argparse usage errors also exit 2).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .config_calculus import CouplingMode, count_configurations, partition_distinct
from .criterion import OverallVerdict, causal_W, classify
from .density import (
    DensityMatrix,
    MatrixFormatError,
    PartySubset,
    hermitian_eigenvalues,
    load_matrix,
    matrix_to_payload,
)
from .ec_family import (
    ECClass,
    ECParams,
    Mixing,
    all_variants,
    build_ec_matrix,
    classify_ec,
    closed_form_W,
    crossover_N,
    duality_residuals,
    threshold,
    variant_name,
)
from .ppt import any_npt, ppt_check, ppt_report

SCHEMA = "causal-sep/1"
GREEDY_REPORT_CAP = 1024


# ---------------------------------------------------------------------------
# output formatting
# ---------------------------------------------------------------------------

def _json_payload(payload: dict) -> str:
    return json.dumps(payload, separators=(",", ":")) + "\n"


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _csv_payload(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(x) for x in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# flag parsing helpers
# ---------------------------------------------------------------------------

def _parse_p(text: str) -> complex:
    try:
        return complex(float(text))
    except ValueError:
        pass
    try:
        return complex(text)
    except ValueError:
        raise ValueError(f"cannot parse mixing parameter {text!r}")


def _parse_subset(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"cannot parse party subset {text!r}; expected i,j,...")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None, help="write the payload to this file")


def _add_dims(p: argparse.ArgumentParser) -> None:
    p.add_argument("--D", type=int, required=True, help="levels per party")
    p.add_argument("--N", type=int, required=True, help="number of parties")


def _add_variant_flags(p: argparse.ArgumentParser, *, required: bool) -> None:
    p.add_argument("--class", dest="ec_class", choices=["a", "b"], required=required)
    p.add_argument("--mixing", choices=["weak", "strong"], required=required)
    default = None if not required else "free"
    p.add_argument("--coupling", choices=["free", "coupled"], default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causal-sep",
        description="Causal separability criterion, EC state family, PPT oracle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("config-count", help="distinct/orthogonal configuration census")
    _add_dims(p)
    p.add_argument("--coupling", choices=["free", "coupled"], default="free")
    _add_output_flags(p)
    p.set_defaults(func=cmd_config_count)

    ec = sub.add_parser("ec", help="equally-connected family commands")
    ec_sub = ec.add_subparsers(dest="ec_command", required=True)

    p = ec_sub.add_parser("build", help="materialize an EC matrix as matrix JSON")
    _add_variant_flags(p, required=True)
    _add_dims(p)
    p.add_argument("--p", type=_parse_p, required=True, help="mixing parameter")
    _add_output_flags(p)
    p.set_defaults(func=cmd_ec_build)

    p = ec_sub.add_parser("threshold", help="closed-form separability thresholds")
    _add_variant_flags(p, required=False)
    _add_dims(p)
    p.add_argument("--m-abs", type=int, default=None, help="|m| for b-class windows")
    _add_output_flags(p)
    p.set_defaults(func=cmd_ec_threshold)

    p = ec_sub.add_parser("sweep", help="W and verdict over a p grid")
    _add_variant_flags(p, required=True)
    _add_dims(p)
    p.add_argument("--m-abs", type=int, default=None)
    p.add_argument("--steps", type=int, default=101, help="number of grid points")
    p.add_argument("--p-start", type=float, default=0.0)
    p.add_argument("--p-end", type=float, default=1.0)
    _add_output_flags(p)
    p.set_defaults(func=cmd_ec_sweep)

    p = sub.add_parser("classify", help="causal-criterion report for a matrix file")
    p.add_argument("--input", required=True, help="matrix JSON file")
    p.add_argument("--coupling", choices=["free", "coupled"], default="free")
    _add_output_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("ppt", help="partial-transpose eigenvalue oracle")
    p.add_argument("--input", required=True, help="matrix JSON file")
    p.add_argument("--subset", type=_parse_subset, default=None, help="parties i,j,...")
    _add_output_flags(p)
    p.set_defaults(func=cmd_ppt)

    p = sub.add_parser("compare", help="causal criterion vs PPT over a p grid")
    _add_variant_flags(p, required=True)
    _add_dims(p)
    p.add_argument("--m-abs", type=int, default=None)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--p-start", type=float, default=0.0)
    p.add_argument("--p-end", type=float, default=1.0)
    _add_output_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("duality", help="threshold duality residuals")
    _add_dims(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_duality)

    p = sub.add_parser("crossover", help="crossover party number ln(D-1)")
    p.add_argument("--D", type=int, required=True)
    _add_output_flags(p)
    p.set_defaults(func=cmd_crossover)

    return parser


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_config_count(args) -> str:
    census = count_configurations(args.D, args.N, CouplingMode(args.coupling))
    if args.format == "csv":
        return _csv_payload(
            ["D", "N", "coupling", "K", "K_bar"],
            [[census.D, census.N, args.coupling, census.K, census.K_bar]],
        )
    payload = {
        "schema": SCHEMA,
        "command": "config-count",
        "D": census.D,
        "N": census.N,
        "coupling": args.coupling,
        "K": census.K,
        "K_bar": census.K_bar,
    }
    # For D > 2 the greedy pick can disagree with the ceiling count; report
    # both rather than hiding it (cheap only while D^N stays small).
    if args.coupling == "free" and args.D > 2 and args.D**args.N <= GREEDY_REPORT_CAP:
        part = partition_distinct(args.D, args.N)
        payload["greedy_distinct"] = len(part.distinct)
        payload["greedy_matches_K"] = len(part.distinct) == census.K
    return _json_payload(payload)


def _params_from_args(args, p: complex) -> ECParams:
    return ECParams(
        ec_class=ECClass(args.ec_class),
        mixing=Mixing(args.mixing),
        coupling=CouplingMode(args.coupling or "free"),
        D=args.D,
        N=args.N,
        p=p,
    )


def cmd_ec_build(args) -> str:
    if args.format != "json":
        raise ValueError("ec build emits the matrix JSON format only")
    params = _params_from_args(args, args.p)
    rho = build_ec_matrix(params)
    min_eig = float(hermitian_eigenvalues(rho)[0])
    psd = min_eig >= -1e-10
    print(
        f"note: {params.variant_key()} D={params.D} N={params.N} p={args.p!r}: "
        f"trace = {rho.trace()!r}, normalized = {rho.normalized}, "
        f"min eigenvalue = {min_eig!r} ({'PSD' if psd else 'not PSD'})",
        file=sys.stderr,
    )
    return _json_payload(matrix_to_payload(rho))


def _threshold_rows(ec_class: ECClass, mixing: Mixing, coupling: CouplingMode,
                    D: int, N: int, m_abs: int | None) -> list[list]:
    name = variant_name(ec_class, mixing, coupling)
    if ec_class is ECClass.A:
        th = threshold(ec_class, mixing, coupling, D, N)
        return [[name, D, N, None, th.p_th1, th.p_th2]]
    m_values = [m_abs] if m_abs is not None else list(range(1, N))
    rows = []
    for m in m_values:
        th = threshold(ec_class, mixing, coupling, D, N, m)
        rows.append([name, D, N, m, th.p_th1, th.p_th2])
    return rows


def cmd_ec_threshold(args) -> str:
    header = ["variant", "D", "N", "m_abs", "p_th1", "p_th2"]
    if args.ec_class is None:
        if args.mixing is not None or args.coupling is not None:
            raise ValueError(
                "pass all of --class/--mixing/--coupling for one variant, "
                "or none of them for the full table"
            )
        if args.format != "csv":
            raise ValueError("the all-variant threshold table is CSV only")
        rows = []
        for c, mx, cp in all_variants():
            rows.extend(_threshold_rows(c, mx, cp, args.D, args.N, args.m_abs))
        return _csv_payload(header, rows)

    if args.mixing is None or args.coupling is None:
        raise ValueError("--mixing and --coupling are required alongside --class")
    ec_class = ECClass(args.ec_class)
    mixing = Mixing(args.mixing)
    coupling = CouplingMode(args.coupling)
    if args.format == "csv":
        rows = _threshold_rows(ec_class, mixing, coupling, args.D, args.N, args.m_abs)
        return _csv_payload(header, rows)

    name = variant_name(ec_class, mixing, coupling)
    if ec_class is ECClass.A:
        th = threshold(ec_class, mixing, coupling, args.D, args.N)
        return _json_payload(
            {
                "schema": SCHEMA,
                "command": "ec-threshold",
                "variant": name,
                "D": args.D,
                "N": args.N,
                "kind": th.kind.value,
                "p_th": th.p_th,
                "p_th1": th.p_th1,
                "p_th2": th.p_th2,
                "separable_region": th.separable_region,
            }
        )
    if args.m_abs is None:
        raise ValueError("b-class JSON threshold needs --m-abs (use CSV for all values)")
    th = threshold(ec_class, mixing, coupling, args.D, args.N, args.m_abs)
    return _json_payload(
        {
            "schema": SCHEMA,
            "command": "ec-threshold",
            "variant": name,
            "D": args.D,
            "N": args.N,
            "m_abs": th.m_abs,
            "kind": th.kind.value,
            "p_th1": th.p_th1,
            "p_th2": th.p_th2,
            "window": list(th.window) if th.window is not None else None,
            "separable_region": th.separable_region,
        }
    )


def _grid(args) -> list[float]:
    if args.steps < 0:
        raise ValueError(f"--steps must be non-negative, got {args.steps}")
    if args.steps == 0:
        return []
    return [float(p) for p in np.linspace(args.p_start, args.p_end, args.steps)]


def _b_closed_W_binding(params: ECParams, m_abs: int) -> float | None:
    """min over the signed branches m = +-m_abs; None where the closed form
    diverges (zero base under a negative power at a p endpoint)."""
    m_j = sum(params.b_sites)
    values = []
    for m in (m_abs, -m_abs):
        p = params.p_real
        if (p == 0.0 and params.N - m_j + m < 0) or (p == 1.0 and m_j - m < 0):
            continue
        values.append(closed_form_W(params, m_j=m_j, m=m))
    return min(values) if values else None


def cmd_ec_sweep(args) -> str:
    ec_class = ECClass(args.ec_class)
    name = variant_name(ec_class, Mixing(args.mixing), CouplingMode(args.coupling or "free"))
    if ec_class is ECClass.B and args.m_abs is None:
        raise ValueError("b-class sweeps need --m-abs")
    if ec_class is ECClass.A:
        th = threshold(ec_class, Mixing(args.mixing), CouplingMode(args.coupling or "free"),
                       args.D, args.N)
    else:
        th = threshold(ec_class, Mixing(args.mixing), CouplingMode(args.coupling or "free"),
                       args.D, args.N, args.m_abs)
    subset = PartySubset((0,), args.N)
    j0 = (0,) * args.N
    rows = []
    for p in _grid(args):
        params = _params_from_args(args, complex(p))
        if ec_class is ECClass.A:
            w_closed = closed_form_W(params)
            verdict = classify_ec(params)
        else:
            w_closed = _b_closed_W_binding(params, args.m_abs)
            verdict = classify_ec(params, args.m_abs)
        rho = build_ec_matrix(params)
        w_matrix = causal_W(rho, j0, subset, params.coupling).W
        rows.append(
            [name, args.D, args.N, p, w_closed, w_matrix, th.p_th1, th.p_th2, verdict.value]
        )
    header = ["variant", "D", "N", "p", "W_closed", "W_matrix", "p_th1", "p_th2", "verdict"]
    if args.format == "csv":
        return _csv_payload(header, rows)
    return _json_payload(
        {
            "schema": SCHEMA,
            "command": "ec-sweep",
            "variant": name,
            "D": args.D,
            "N": args.N,
            "rows": [dict(zip(header, row)) for row in rows],
        }
    )


def cmd_classify(args) -> str:
    rho = load_matrix(args.input)
    report = classify(rho, CouplingMode(args.coupling))
    if args.format == "csv":
        rows = [
            [
                ";".join(str(x) for x in s.config),
                ";".join(str(x) for x in s.subset.members),
                s.P_ignorance,
                s.P_transition,
                s.W,
                s.verdict.value,
            ]
            for s in report.scores
        ]
        return _csv_payload(
            ["config", "subset", "P_ignorance", "P_transition", "W", "verdict"], rows
        )
    payload = {"schema": SCHEMA, "command": "classify", "D": rho.D, "N": rho.N}
    payload.update(report.to_dict())
    return _json_payload(payload)


def cmd_ppt(args) -> str:
    rho = load_matrix(args.input)
    if args.subset is not None:
        checks = [ppt_check(rho, PartySubset(args.subset, rho.N))]
    else:
        checks = ppt_report(rho)
    overall = "npt_entangled" if any_npt(checks) else "ppt_separable_consistent"
    if args.format == "csv":
        rows = [
            [
                ";".join(str(x) for x in v.subset.members),
                v.min_eigenvalue,
                v.verdict.value,
                v.conclusive,
            ]
            for v in checks
        ]
        return _csv_payload(["subset", "min_eigenvalue", "verdict", "conclusive"], rows)
    return _json_payload(
        {
            "schema": SCHEMA,
            "command": "ppt",
            "D": rho.D,
            "N": rho.N,
            "checks": [v.to_dict() for v in checks],
            "overall": overall,
        }
    )


def cmd_compare(args) -> str:
    ec_class = ECClass(args.ec_class)
    if ec_class is ECClass.B and args.m_abs is None:
        raise ValueError("b-class comparisons need --m-abs")
    name = variant_name(ec_class, Mixing(args.mixing), CouplingMode(args.coupling or "free"))
    mode = CouplingMode(args.coupling or "free")
    rows = []
    disagreements = 0
    for p in _grid(args):
        params = _params_from_args(args, complex(p))
        rho = build_ec_matrix(params)
        if rho.normalized:
            rho_n = rho
        else:
            tr = rho.trace()
            if tr <= 1e-300:
                raise ValueError(
                    f"matrix trace vanishes at p={p!r}; shrink the p range"
                )
            rho_n = DensityMatrix(rho.D, rho.N, rho.matrix / tr, normalized=True)
        causal = classify(rho_n, mode).overall
        npt = any_npt(ppt_report(rho_n))
        ppt_side = "npt_entangled" if npt else "ppt_separable_consistent"
        agree = (causal is OverallVerdict.ENTANGLED) == npt
        if not agree:
            disagreements += 1
        rows.append([name, args.D, args.N, p, causal.value, ppt_side, agree])
    header = ["variant", "D", "N", "p", "causal", "ppt", "agree"]
    if args.format == "csv":
        return _csv_payload(header, rows)
    return _json_payload(
        {
            "schema": SCHEMA,
            "command": "compare",
            "variant": name,
            "D": args.D,
            "N": args.N,
            "disagreements": disagreements,
            "rows": [dict(zip(header, row)) for row in rows],
        }
    )


def cmd_duality(args) -> str:
    r_a, r_b = duality_residuals(args.D, args.N)
    if args.format == "csv":
        return _csv_payload(["D", "N", "r_a", "r_b"], [[args.D, args.N, r_a, r_b]])
    return _json_payload(
        {
            "schema": SCHEMA,
            "command": "duality",
            "D": args.D,
            "N": args.N,
            "r_a": r_a,
            "r_b": r_b,
        }
    )


def cmd_crossover(args) -> str:
    n_cr = crossover_N(args.D)
    if args.format == "csv":
        return _csv_payload(["D", "N_cr"], [[args.D, n_cr]])
    return _json_payload(
        {"schema": SCHEMA, "command": "crossover", "D": args.D, "N_cr": n_cr}
    )


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.func(args)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(payload)
        else:
            sys.stdout.write(payload)
    except (MatrixFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
