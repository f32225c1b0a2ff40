"""Command-line front end.

Exit codes: 0 success (including "equal"/"member"), 1 checked negative
result (unequal, non-member, failed check), 2 usage or input errors,
3 budget or resource limits.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .circuit import evaluate, prune_dead, validate
from .embed import build_reduction, embed, parse_tau, serialize_tau
from .equivalence import DEFAULT_PIT_PRIME, DEFAULT_TRIALS, dense_expand, pit_equal
from .errors import BudgetExceeded, ResourceLimit, ToolkitError
from .families import (
    gen_point_family,
    gen_resultant_incidence,
    gen_universal_poly,
    pair_index,
    segre_minors,
    segre_transform,
    ucr_membership,
    unpair,
)
from .field import GF, QQ
from .normal_form import CONDITIONS, check_normal_form, normalize
from .projspace import (
    DEFAULT_POINT_BUDGET,
    enumerate_points,
    parse_point_set,
    project,
    serialize_point_set,
    zero_set,
)
from .slp import export_dot, parse_slp, serialize_slp
from .universal import (
    ControlTable,
    build_universal,
    build_universal_alldeg,
    controlize,
    plan_universal,
    serialize_layout,
    ucr_params,
)

DEFAULT_MAX_GATES = 50_000_000


@dataclass
class RunConfig:
    """Resolved global options shared by the subcommands."""

    seed: int = 0
    trials: int = DEFAULT_TRIALS
    max_points: int = DEFAULT_POINT_BUDGET
    max_gates: int = DEFAULT_MAX_GATES
    threads: int = 1


def _parse_field(text: str):
    if text == "q":
        return QQ()
    if text.startswith("gf:"):
        return GF(int(text[3:]))
    raise ToolkitError(f"bad field spec {text!r} (use gf:P or q)")


def _read_circuit(path: str):
    with open(path) as f:
        return parse_slp(f.read())


def _write(path: str, text: str):
    with open(path, "w") as f:
        f.write(text)


def _parse_point_arg(text: str):
    """Semicolon-separated blocks of comma-separated coordinates."""
    return [[v.strip() for v in blk.split(",")] for blk in text.split(";")]


def _add_universal_args(sp, with_alldeg=True):
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--r1", type=int)
    sp.add_argument("--r2", type=int)
    sp.add_argument("--s", type=int, required=True)
    if with_alldeg:
        sp.add_argument("--alldeg", action="store_true")
        sp.add_argument("--r", type=int, help="degree bound for --alldeg")
    sp.add_argument("--lean", action="store_true", help="build only live gates")
    sp.add_argument("--field", default=f"gf:{DEFAULT_PIT_PRIME}")


def _build_from_args(args, cfg: RunConfig):
    field = _parse_field(args.field)
    if getattr(args, "alldeg", False):
        if args.r is None:
            raise ToolkitError("--alldeg needs --r")
        pairs = sorted(
            (
                (r1, r2)
                for r1 in range(args.r + 1)
                for r2 in range(args.r + 1)
                if (r1, r2) != (0, 0) and not (args.m == 0 and r2 > 0)
            ),
            key=lambda p: (p[0] + p[1], p),
        )
        gates, _ = plan_universal(args.n, args.m, args.s, pairs, args.lean)
        if gates > cfg.max_gates:
            raise ResourceLimit(f"{gates} gates exceed budget {cfg.max_gates}")
        return build_universal_alldeg(args.n, args.m, args.r, args.s, field=field, lean=args.lean)
    if args.r1 is None or args.r2 is None:
        raise ToolkitError("need --r1 and --r2 (or --alldeg with --r)")
    gates, _ = plan_universal(args.n, args.m, args.s, [(args.r1, args.r2)], args.lean)
    if gates > cfg.max_gates:
        raise ResourceLimit(f"{gates} gates exceed budget {cfg.max_gates}")
    return build_universal(args.n, args.m, args.r1, args.r2, args.s, field=field, lean=args.lean)


def _rebuild_from_tau_params(params: dict, field):
    if params.get("alldeg"):
        return build_universal_alldeg(
            params["n"], params["m"], params["r"], params["s"],
            field=field, lean=bool(params.get("lean")),
        )
    return build_universal(
        params["n"], params["m"], params["r1"], params["r2"], params["s"],
        field=field, lean=bool(params.get("lean")),
    )


def _cmd_validate(args, cfg):
    c = _read_circuit(args.file)
    report = validate(c)
    degs = " ".join(",".join(str(x) for x in d) for d in report.output_degrees)
    print(f"size={report.size} homogeneous={'yes' if report.homogeneous else 'no'} outputs={degs}")
    for g, conflict in report.offenders:
        print(f"inhomogeneous sum gate {g}: {conflict}")
    return 0 if report.homogeneous else 1


def _cmd_normalize(args, cfg):
    c = _read_circuit(args.file)
    n = normalize(c)
    _write(args.output, serialize_slp(n))
    print(f"size {c.size} -> {n.size}")
    return 0


def _cmd_check_nf(args, cfg):
    c = _read_circuit(args.file)
    report = check_normal_form(c)
    for cond in CONDITIONS:
        tag = "pass" if report.passed[cond] else f"FAIL {report.offenders[cond][:5]}"
        print(f"condition {cond}: {tag}")
    return 0 if report.ok else 1


def _cmd_universal(args, cfg):
    phi, layout = _build_from_args(args, cfg)
    _write(args.output, serialize_slp(phi))
    if args.layout:
        _write(args.layout, serialize_layout(layout, phi))
    print(f"gates={phi.ngates} edges={phi.nedges} outputs={len(phi.outputs)}")
    return 0


def _cmd_controlize(args, cfg):
    phi, layout = _build_from_args(args, cfg)
    if phi.ngates + 2 * phi.nedges > cfg.max_gates:
        raise ResourceLimit(
            f"controlled circuit would have {phi.ngates + 2 * phi.nedges} gates"
        )
    phi_prime, table = controlize(phi, layout)
    _write(args.output, serialize_slp(phi_prime))
    print(f"N={table.n_controls} gates={phi_prime.ngates} edges={phi_prime.nedges}")
    return 0


def _cmd_embed(args, cfg):
    c = _read_circuit(args.file)
    if not check_normal_form(c).ok:
        c = normalize(c)
    phi, layout = _build_from_args(args, cfg)
    if c.field != phi.field:
        c = c.with_field(phi.field)
    tau = embed(c, phi, layout)
    _write(args.output, serialize_tau(tau))
    print(f"N={tau.n_controls} nonzero={sum(1 for v in tau.values if v != 0)}")
    return 0


def _cmd_reduce(args, cfg):
    c = _read_circuit(args.file)
    red = build_reduction(c, args.n1, args.n2)
    os.makedirs(args.output, exist_ok=True)
    _write(os.path.join(args.output, "tau"), serialize_tau(red.tau))
    _write(
        os.path.join(args.output, "reduction.json"),
        json.dumps(
            {
                "q": red.q,
                "n_controls": red.n_controls,
                "n1": args.n1,
                "n2": args.n2,
                "rho": {
                    "component_0": f"pad {args.n1} coordinates into P^{red.q - 1} with zeros",
                    "component_1": "the constant point tau (see the tau file)",
                },
            },
            indent=2,
        ),
    )
    print(f"q={red.q} N={red.n_controls}")
    return 0


def _cmd_eval(args, cfg):
    c = _read_circuit(args.file)
    vals = evaluate(c, _parse_point_arg(args.point))
    print(" ".join(str(v) for v in vals))
    return 0


def _cmd_pit(args, cfg):
    a, b = _read_circuit(args.a), _read_circuit(args.b)
    verdict = pit_equal(a, b, trials=cfg.trials, modulus=args.modulus, seed=cfg.seed)
    print(verdict.record())
    return 0 if verdict.equal else 1


def _cmd_expand(args, cfg):
    c = _read_circuit(args.file)
    for i, poly in enumerate(dense_expand(c)):
        terms = " ".join(
            f"{coeff}*x^{','.join(str(e) for e in exps)}"
            for exps, coeff in sorted(poly.coeffs.items(), reverse=True)
        )
        print(f"output {i}: {terms if terms else '0'}")
    return 0


def _cmd_enumerate(args, cfg):
    dims = tuple(int(a) for a in args.ambient.split(","))
    S = enumerate_points(dims, args.q, budget=cfg.max_points)
    _write(args.output, serialize_point_set(S))
    print(f"points={len(S)}")
    return 0


def _cmd_zeroset(args, cfg):
    c = _read_circuit(args.file)
    S = zero_set(c, args.q, budget=cfg.max_points)
    _write(args.output, serialize_point_set(S))
    print(f"points={len(S)}")
    return 0


def _cmd_project(args, cfg):
    with open(args.file) as f:
        S = parse_point_set(f.read())
    keep = [int(k) for k in args.keep.split(",")]
    P = project(S, keep)
    _write(args.output, serialize_point_set(P))
    print(f"points={len(P)}")
    return 0


def _cmd_member_ucr(args, cfg):
    with open(args.tau) as f:
        tau = parse_tau(f.read())
    field = GF(args.q)
    phi, layout = _rebuild_from_tau_params(tau.layout_params, field)
    table = ControlTable(phi, layout)
    coords = [int(v) for v in args.x.split(",")]
    member = ucr_membership(coords, tau, table, args.q, budget=cfg.max_points)
    print("member" if member else "non-member")
    return 0 if member else 1


def _cmd_segre_minors(args, cfg):
    c = segre_minors(args.a, args.b, field=_parse_field(args.field))
    _write(args.output, serialize_slp(c))
    print(f"outputs={len(c.outputs)}")
    return 0


def _cmd_segre_transform(args, cfg):
    c = _read_circuit(args.file)
    out = segre_transform(c)
    _write(args.output, serialize_slp(out))
    print(f"outputs={len(out.outputs)} blocks={out.blocks.counts}")
    return 0


def _cmd_family(args, cfg):
    field = _parse_field(args.field)
    if args.which == "point":
        fi = gen_point_family(args.n, field=field)
    elif args.which == "unipoly":
        fi = gen_universal_poly(args.n, args.d, field=field)
    elif args.which == "resultant":
        fi = gen_resultant_incidence(args.d, args.n, field=field)
    else:
        raise ToolkitError(f"unknown family {args.which!r}")
    _write(args.output, serialize_slp(fi.circuit))
    _write(args.output + ".meta.jsonl", fi.metadata() + "\n")
    print(f"family={fi.family} size={fi.circuit.size}")
    return 0


def _cmd_pair(args, cfg):
    if args.k is not None:
        n, m = unpair(args.k)
        print(f"n={n} m={m}")
    else:
        if args.n is None or args.m is None:
            raise ToolkitError("need either --k or both --n and --m")
        print(f"k={pair_index(args.n, args.m)}")
    return 0


def _cmd_stats(args, cfg):
    from .report import plot_growth, plot_level_profile, universal_stats, universal_totals, write_stats_csv

    if args.ucr:
        params, phi, layout, _ = ucr_params(args.n, args.m, max_gates=cfg.max_gates)
        print(
            f"r={params.r} s={params.s} N={params.n_controls} M={params.n_outputs} "
            f"ambient=P^{params.ambient[0]}xP^{params.ambient[1]}"
        )
        print(
            f"estimated-output-count={params.output_count_estimate} measured-M={params.n_outputs}"
        )
    else:
        phi, layout = _build_from_args(args, cfg)
    rows = universal_stats(phi, layout)
    totals = universal_totals(phi, layout)
    print(
        f"gates={totals['gates']} edges={totals['edges']} "
        f"N={totals['n_controls']} M={totals['n_outputs']}"
    )
    print("output degrees:", " ".join(f"{d[0]},{d[1]}" for d in totals["output_degree_profile"]))
    print("output t-degrees:", " ".join(str(t) for t in totals["output_t_degrees"]))
    if args.csv:
        write_stats_csv(rows, args.csv)
    if args.plots:
        os.makedirs(args.plots, exist_ok=True)
        plot_level_profile(rows, os.path.join(args.plots, "level_profile.png"))
        sweep = []
        for s in sorted({args.s, max(args.s // 2, args.n + args.m), args.s * 2}):
            if getattr(args, "alldeg", False):
                pairs = layout.copy_order
            else:
                pairs = layout.copy_order
            g, e = plan_universal(args.n, args.m, s, pairs, args.lean)
            sweep.append({"x": s, "gates": g, "edges": e})
        plot_growth(sweep, os.path.join(args.plots, "growth.png"))
    return 0


def _cmd_export_dot(args, cfg):
    c = _read_circuit(args.file)
    _write(args.output, export_dot(c))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="projcirc",
        description="multi-homogeneous circuits, universal circuits and projective geometry oracles",
        allow_abbrev=False,
    )
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    ap.add_argument("--max-points", type=int, default=DEFAULT_POINT_BUDGET)
    ap.add_argument("--max-gates", type=int, default=DEFAULT_MAX_GATES)
    ap.add_argument("--threads", type=int, default=1, help="accepted for compatibility; single process")
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("validate");  sp.add_argument("file");  sp.set_defaults(fn=_cmd_validate)
    sp = sub.add_parser("normalize"); sp.add_argument("file"); sp.add_argument("-o", "--output", required=True); sp.set_defaults(fn=_cmd_normalize)
    sp = sub.add_parser("check-nf");  sp.add_argument("file");  sp.set_defaults(fn=_cmd_check_nf)

    sp = sub.add_parser("universal"); _add_universal_args(sp)
    sp.add_argument("-o", "--output", required=True); sp.add_argument("--layout")
    sp.set_defaults(fn=_cmd_universal)

    sp = sub.add_parser("controlize"); _add_universal_args(sp)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(fn=_cmd_controlize)

    sp = sub.add_parser("embed"); sp.add_argument("file"); _add_universal_args(sp)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(fn=_cmd_embed)

    sp = sub.add_parser("reduce"); sp.add_argument("file")
    sp.add_argument("--n1", type=int, required=True); sp.add_argument("--n2", type=int, required=True)
    sp.add_argument("-o", "--output", required=True, help="output directory")
    sp.set_defaults(fn=_cmd_reduce)

    sp = sub.add_parser("eval"); sp.add_argument("file"); sp.add_argument("--point", required=True)
    sp.set_defaults(fn=_cmd_eval)

    sp = sub.add_parser("pit"); sp.add_argument("a"); sp.add_argument("b")
    sp.add_argument("--modulus", type=int, default=DEFAULT_PIT_PRIME)
    sp.set_defaults(fn=_cmd_pit)

    sp = sub.add_parser("expand"); sp.add_argument("file"); sp.set_defaults(fn=_cmd_expand)

    sp = sub.add_parser("enumerate"); sp.add_argument("--ambient", required=True)
    sp.add_argument("--q", type=int, required=True); sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(fn=_cmd_enumerate)

    sp = sub.add_parser("zeroset"); sp.add_argument("file")
    sp.add_argument("--q", type=int, required=True); sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(fn=_cmd_zeroset)

    sp = sub.add_parser("project"); sp.add_argument("file")
    sp.add_argument("--keep", required=True); sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(fn=_cmd_project)

    sp = sub.add_parser("member-ucr")
    sp.add_argument("--x", required=True, help="comma-separated x coordinates")
    sp.add_argument("--tau", required=True); sp.add_argument("--q", type=int, required=True)
    sp.set_defaults(fn=_cmd_member_ucr)

    sp = sub.add_parser("segre-minors")
    sp.add_argument("--a", type=int, required=True); sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--field", default="q"); sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(fn=_cmd_segre_minors)

    sp = sub.add_parser("segre-transform"); sp.add_argument("file")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(fn=_cmd_segre_transform)

    sp = sub.add_parser("family")
    sp.add_argument("which", choices=["point", "unipoly", "resultant"])
    sp.add_argument("--n", type=int, required=True); sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--field", default="q"); sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(fn=_cmd_family)

    sp = sub.add_parser("pair")
    sp.add_argument("--n", type=int); sp.add_argument("--m", type=int); sp.add_argument("--k", type=int)
    sp.set_defaults(fn=_cmd_pair)

    sp = sub.add_parser("stats"); _add_universal_args(sp)
    sp.add_argument("--ucr", action="store_true", help="use the standard resultant parameters for (n, m)")
    sp.add_argument("--csv"); sp.add_argument("--plots", help="directory for rendered figures")
    sp.set_defaults(fn=_cmd_stats)

    sp = sub.add_parser("export-dot"); sp.add_argument("file")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(fn=_cmd_export_dot)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    cfg = RunConfig(
        seed=args.seed,
        trials=args.trials,
        max_points=args.max_points,
        max_gates=args.max_gates,
        threads=args.threads,
    )
    try:
        return args.fn(args, cfg)
    except (BudgetExceeded, ResourceLimit) as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return 3
    except (ToolkitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
