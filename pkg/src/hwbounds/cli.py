"""Command-line front end.

Exit codes: 0 success, 1 failed self-test, 2 invalid input, 3 answered
but degenerate (terminals disconnected).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .capacity import (
    FiniteSizeParams,
    channel_bounds,
    finite_rate_bound,
    finite_rate_limit,
)
from .errors import NetworkError, ParameterError
from .measures import Measure, rppt_ncopy_numeric, rppt_regularised
from .network import (
    AUTO_ENUM_NODES,
    QuantumNetwork,
    chain_bounds,
    multi_path_bound,
    single_path_bound,
)
from .werner import WernerParams

SWEEP_COLUMNS = [
    "eta", "d", "E_R", "E_R2", "E_P_inf", "Esq_tilde", "Esq_star", "k_bound", "k_source", "q2_bound",
]
AGREEMENT_TOL = 1e-9


class InputError(Exception):
    pass


def fmt(x: float) -> str:
    """Stable textual form: at most 10 significant digits."""
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    out = f"{x:.10g}"
    return "0" if out == "-0" else out


def _num(x: float) -> float:
    return float(fmt(x))


def _params(eta: float, d: int) -> WernerParams:
    try:
        return WernerParams(eta, d)
    except ParameterError as exc:
        raise InputError(str(exc)) from None


def bounds_row(p: WernerParams) -> dict:
    r = channel_bounds(p)
    return {
        "eta": _num(p.eta),
        "d": p.d,
        "E_R": _num(r.e_r),
        "E_R2": _num(r.e_r2),
        "E_P_inf": _num(r.e_p_inf),
        "Esq_tilde": _num(r.esq_tilde),
        "Esq_star": _num(r.esq_star),
        "k_bound": _num(r.k_bound),
        "k_source": r.k_bound_source.value,
        "q2_bound": _num(r.q2_bound),
    }


def _emit_rows(rows: list[dict], columns: list[str], out_format: str, out) -> None:
    if out_format == "json":
        out.write(json.dumps([{c: r[c] for c in columns} for r in rows], indent=2) + "\n")
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([fmt(r[c]) if isinstance(r[c], float) else r[c] for c in columns])
    out.write(buf.getvalue())


def _emit_mapping(data: dict, out_format: str, out) -> None:
    if out_format == "json":
        out.write(json.dumps(data, indent=2) + "\n")
        return
    width = max(len(k) for k in data)
    for k, v in data.items():
        if isinstance(v, float):
            v = fmt(v)
        elif isinstance(v, (list, tuple)):
            v = " ".join(str(x) for x in v)
        out.write(f"{k:<{width}}  {v}\n")


def cmd_bounds(args, out) -> int:
    row = bounds_row(_params(args.eta, args.d))
    if args.format == "csv":
        _emit_rows([row], SWEEP_COLUMNS, "csv", out)
    else:
        _emit_mapping(row, args.format, out)
    return 0


def eta_grid(start: float, end: float, step: float) -> list[float]:
    if not step > 0:
        raise InputError("eta step must be positive")
    if not start < end:
        raise InputError("eta start must be below eta end")
    if start < -1 or end > 1:
        raise InputError("eta range must lie within [-1, 1]")
    count = int(math.floor((end - start) / step + 1e-9))
    return [round(start + i * step, 12) for i in range(count + 1)]


def cmd_sweep(args, out) -> int:
    etas = eta_grid(args.eta_start, args.eta_end, args.eta_step)
    columns = SWEEP_COLUMNS
    if args.measures:
        unknown = set(args.measures) - set(SWEEP_COLUMNS[2:])
        if unknown:
            raise InputError(f"unknown measure columns: {sorted(unknown)}")
        columns = SWEEP_COLUMNS[:2] + [c for c in SWEEP_COLUMNS[2:] if c in args.measures]
    rows = [bounds_row(_params(eta, d)) for d in args.d for eta in etas]
    _emit_rows(rows, columns, args.format, out)
    return 0


def cmd_chain(args, out) -> int:
    if not args.etas:
        raise InputError("a chain needs at least one edge")
    for eta in args.etas:
        _params(eta, args.d)
    res = chain_bounds(args.etas, args.d)
    data = {
        "edges": len(args.etas),
        "d": args.d,
        "bottleneck_index": res.bottleneck_index,
        "bottleneck_eta": _num(args.etas[res.bottleneck_index]),
        "k_bound": _num(res.k_bound),
        "k_source": res.k_source.value if res.k_source else "none",
        "q2_bound": _num(res.q2_bound),
    }
    _emit_mapping(data, args.format, out)
    return 0


def _default_measure(target: str) -> Measure:
    return Measure.K_BEST if target == "k" else Measure.E_P_INF


def cmd_network(args, out) -> int:
    try:
        net = QuantumNetwork.load(args.file)
    except OSError as exc:
        raise InputError(f"{args.file}: {exc.strerror}") from None
    except NetworkError as exc:
        raise InputError(f"{args.file}: {exc}") from None
    measure = Measure(args.measure) if args.measure else _default_measure(args.target)
    try:
        if args.routing == "single":
            res = single_path_bound(net, measure)
        else:
            res = multi_path_bound(net, measure)
    except ParameterError as exc:
        raise InputError(str(exc)) from None

    connected = net.terminals_connected()
    enumerated = connected and len(net.inner_nodes) <= AUTO_ENUM_NODES
    agree = None
    if enumerated:
        agree = bool(abs(res.cut_value - res.certificate) <= AGREEMENT_TOL)
    data = {
        "routing": args.routing,
        "target": args.target,
        "measure": measure.value,
        "bound": _num(res.cut_value),
        "connected": connected,
        "partition_A": sorted(res.partition[0]),
        "partition_B": sorted(res.partition[1]),
        "cut_edges": [
            f"{net.edges[i].u}-{net.edges[i].v}" for i in res.cut_edges
        ],
        ("maxflow_certificate" if args.routing == "multi" else "widest_path_certificate"): _num(
            res.certificate
        ),
        "certificate_agrees": "n/a" if agree is None else agree,
    }
    if args.routing == "single":
        data["widest_path"] = list(res.path)
        if measure in (Measure.E_R2, Measure.K_BEST, Measure.E_P_INF):
            data["note"] = "single-path composite derived from repeater-chain bounds"
    _emit_mapping(data, args.format, out)
    if agree is False:
        print("error: enumeration and graph-algorithm values disagree", file=sys.stderr)
        return 1
    return 0 if connected else 3


def cmd_finite(args, out) -> int:
    p = _params(args.eta, args.d)
    try:
        fs = FiniteSizeParams(args.epsilon, args.d, args.n)
    except ParameterError as exc:
        raise InputError(str(exc)) from None
    if p.eta >= 0:
        per_copy, source = 0.0, "separable"
    elif args.n <= 3:
        per_copy, source = rppt_ncopy_numeric(args.n, p), f"numeric {args.n}-copy RPPT"
    else:
        per_copy, source = rppt_regularised(p), "regularised RPPT proxy"
    data = {
        "epsilon": _num(args.epsilon),
        "d": args.d,
        "n": args.n,
        "eta": _num(p.eta),
        "e_p_n_source": source,
        "rate_eps0": _num(per_copy),
        "rate_bound": _num(finite_rate_bound(fs, args.n * per_copy)),
        "large_n_limit": _num(finite_rate_limit(fs, rppt_regularised(p))),
    }
    _emit_mapping(data, args.format, out)
    return 0


def cmd_selftest(args, out) -> int:
    from . import selftest

    results = selftest.run_all()
    for name, ok, detail in results:
        out.write(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}\n")
    return 0 if all(ok for _, ok, _ in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hwbounds",
        description="Converse bounds on two-way capacities of Holevo-Werner channels and networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="all bounds for one channel")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sweep", help="bounds over an eta grid, plot-ready")
    p.add_argument("--d", type=int, nargs="+", required=True)
    p.add_argument("--eta-start", type=float, default=-1.0)
    p.add_argument("--eta-end", type=float, default=0.0)
    p.add_argument("--eta-step", type=float, default=0.01)
    p.add_argument("--measures", nargs="+", help="subset of measure columns to keep")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("chain", help="repeater chain of iso-dimensional channels")
    p.add_argument("--etas", type=float, nargs="+", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("network", help="cut-set bounds for a network JSON file")
    p.add_argument("file")
    p.add_argument("--routing", choices=["single", "multi"], default="single")
    p.add_argument("--target", choices=["k", "q2"], default="k")
    p.add_argument("--measure", choices=[m.value for m in Measure])
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_network)

    p = sub.add_parser("finite", help="finite-size weak-converse rate bound")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_finite)

    p = sub.add_parser("selftest", help="run the oracle-agreement checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
