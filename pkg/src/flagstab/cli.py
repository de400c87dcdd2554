"""Command line interface.

Subcommands: list, show-space, analyze, stability, solve, table, fn,
f5-metrics.  Metrics are comma-separated coordinates; fraction literals like
3/2 are accepted.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import report as report_mod
from .curvature import (einstein_residual_exact, normalized_scalar_curvature,
                        ricci_eigenvalues, ricci_eigenvalues_exact,
                        scalar_curvature, scalar_curvature_exact)
from .errors import FlagstabError
from .flags import build_fn, classic_metric, f5_new_metrics
from .solver import Ansatz, solve_einstein, solve_with_ansatz
from .spaces import (InvariantMetric, catalog_ids, catalog_space, load_space,
                     space_to_json)
from .stability import stability_report


def _parse_metric(space, text: str) -> InvariantMetric:
    coords = tuple(Fraction(tok.strip()) for tok in text.split(","))
    return InvariantMetric(space, coords)


def _report_json(rep) -> dict:
    return {
        "two_rho": rep.two_rho,
        "lambda_p": rep.lambda_p,
        "lambda_p_max": rep.lambda_p_max,
        "coindex": rep.coindex,
        "flags": rep.flags,
        "eigenvalues": [[v, m] for v, m in rep.eigenvalues],
        "extremal_ratio": None if math.isinf(rep.extremal_ratio) else rep.extremal_ratio,
    }


def _cmd_list(args) -> int:
    out = {"spaces": catalog_ids(), "cases": report_mod.case_ids()}
    if args.json:
        print(json.dumps(out, indent=2))
    else:
        print("spaces:", ", ".join(out["spaces"]))
        print("cases: ", ", ".join(out["cases"]))
    return 0


def _cmd_show_space(args) -> int:
    space = load_space(args.space)
    print(json.dumps(space_to_json(space), indent=2))
    return 0


def _cmd_analyze(args) -> int:
    space = load_space(args.space)
    metric = _parse_metric(space, args.metric)
    if args.exact:
        rho = ricci_eigenvalues_exact(metric)
        two = [2 * v for v in rho]
        out = {
            "rho": [str(v) for v in rho],
            "two_rho": str(sum(two) / len(two)),
            "residual": str(einstein_residual_exact(metric)),
            "sc": str(scalar_curvature_exact(metric)),
            "sc_n": normalized_scalar_curvature(metric),
        }
    else:
        data = ricci_eigenvalues(metric)
        out = {
            "rho": list(data.rho),
            "two_rho": data.two_rho_mean,
            "residual": data.residual,
            "sc": scalar_curvature(metric),
            "sc_n": normalized_scalar_curvature(metric),
        }
    print(json.dumps(out, indent=2))
    return 0


def _cmd_stability(args) -> int:
    space = load_space(args.space)
    metric = _parse_metric(space, args.metric)
    rep = stability_report(metric)
    if args.md:
        flags = ", ".join(k for k, v in rep.flags.items() if v) or "none"
        print(f"| 2rho | lambda_p | lambda_p_max | coindex | flags |")
        print(f"| --- | --- | --- | --- | --- |")
        print(f"| {rep.two_rho:.6g} | {rep.lambda_p:.6g} | {rep.lambda_p_max:.6g} "
              f"| {rep.coindex} | {flags} |")
    else:
        print(json.dumps(_report_json(rep), indent=2))
    return 0


def _cmd_solve(args) -> int:
    space = catalog_space(args.space)
    kwargs = dict(seed=args.seed)
    if args.starts is not None:
        kwargs["starts"] = args.starts
    if args.ansatz:
        classes = tuple(tuple(int(i) for i in grp.split(",")) for grp in args.ansatz.split("|"))
        result = solve_with_ansatz(space, Ansatz(classes), **kwargs)
    else:
        result = solve_einstein(space, **kwargs)
    payload = {
        "space": space.name,
        "classes": [
            {"coordinates": sol.metric.as_array().tolist(),
             "residual": sol.residual,
             "report": _report_json(sol.report)}
            for sol in result.solutions
        ],
        "normalization": result.normalization,
        "symmetry_order": result.dedup_group.order,
    }
    if not result.solutions:
        payload["note"] = "no solutions found (reported, not fatal)"
    print(json.dumps(payload, indent=2) if args.json else
          json.dumps(payload, indent=2))
    return 0


def _cmd_table(args) -> int:
    bundle = report_mod.build_case(args.case)
    text = report_mod.render(bundle, "json" if args.format == "json" else "markdown")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return 0 if bundle.certified() else 1


def _cmd_fn(args) -> int:
    metric = classic_metric(args.n, args.family)
    print(json.dumps({
        "space": metric.space.name,
        "family": args.family,
        "coordinates": [str(v) for v in metric.x],
    }, indent=2))
    return 0


def _cmd_f5_metrics(args) -> int:
    bundle = report_mod.build_case("f5")
    print(report_mod.render(bundle, "json"))
    return 0 if bundle.certified() else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="flagstab",
        description="Curvature and stability of invariant metrics on "
                    "multiplicity-free homogeneous spaces")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="catalog spaces and table cases")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_list)

    p = sub.add_parser("show-space", help="print a space definition as JSON")
    p.add_argument("space", help="catalog id or definition file path")
    p.set_defaults(func=_cmd_show_space)

    p = sub.add_parser("analyze", help="Ricci/scalar curvature of one metric")
    p.add_argument("--space", required=True)
    p.add_argument("--metric", required=True, help="comma separated coordinates")
    p.add_argument("--exact", action="store_true", help="exact rational evaluation")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("stability", help="spectral stability report")
    p.add_argument("--space", required=True)
    p.add_argument("--metric", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--json", action="store_true", default=True)
    group.add_argument("--md", action="store_true")
    p.set_defaults(func=_cmd_stability)

    p = sub.add_parser("solve", help="Einstein multistart solver")
    p.add_argument("--space", required=True)
    p.add_argument("--starts", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ansatz", default=None, help='partition like "1,2,3|4,5,6"')
    p.add_argument("--json", action="store_true", default=True)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("table", help="rebuild one published table case")
    p.add_argument("--case", required=True, choices=report_mod.case_ids())
    p.add_argument("--format", choices=["md", "json"], default="md")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("fn", help="classic metric family on f(n)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--family", required=True,
                   choices=["standard", "arvanitoyeorgos", "senda", "kahler"])
    p.set_defaults(func=_cmd_fn)

    p = sub.add_parser("f5-metrics", help="all seven f5 rows as JSON")
    p.add_argument("--json", action="store_true", default=True)
    p.set_defaults(func=_cmd_f5_metrics)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FlagstabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
