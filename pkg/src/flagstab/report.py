"""Case bundles: recompute every row of the published stability tables from
catalog coordinates (refine, then analyze), compare against the published
reference cells, and render markdown or JSON.

Cells are always recomputed, never copied; whenever a recomputed value
disagrees with the published reference cell beyond its print precision, the
row carries an annotation with both values (several reference cells are
known misprints; the annotations make them visible instead of silently
propagating them).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from fractions import Fraction

import numpy as np

from .curvature import einstein_residual, normalized_scalar_curvature
from .errors import UnknownSpace
from .flags import classic_metric, f5_new_metrics
from .solver import refine
from .spaces import InvariantMetric, catalog_space
from .stability import distinguish, distinguishing_reason, stability_report

__all__ = ["CaseRow", "CaseBundle", "case_ids", "build_case", "render", "parse"]

_SQRT6 = math.sqrt(6.0)

# catalog starting coordinates per case row
_CASS = {
    "g2": ("g2-t2", [
        ("gK", (3, 1, 4, 5, 6, 9)),
        ("g1", (1, 0.2762, 1.0347, 1.0347, 1, 1.7895)),
        ("g2", (1, 0.2173, 1.0234, 1.0234, 1, 0.7440)),
    ]),
    "so5": ("so5-t2", [
        ("gK", (2, 4, 1, 3)),
        # scale chosen to match the published row (the two positive-root
        # listings are homothetic; this one reproduces the lambda cells)
        ("g1", ((24 - 4 * _SQRT6) / 15, (24 - 4 * _SQRT6) / 15, 1, (7 - 2 * _SQRT6) / 5)),
    ]),
    "so6": ("so6-t3", [
        ("gS", (1, 1, 1, 1, 1, 1)),
        ("g1", (5, 5, 5, 3, 3, 3)),
    ]),
    "sp3": ("sp3-t3", [
        ("gK", (1, 0.25, 0.5, 0.75, 0.5, 0.25, 1.25, 1, 1.5)),
        ("g1", (1, 0.4311, 1.0381, 1.0381, 1, 1.0381, 0.4311, 0.4312, 1)),
        ("g2", (1, 0.3430, 0.9326, 0.9326, 0.8101, 1.0567, 0.5477, 0.3430, 1)),
        ("g3", (1, 0.3149, 0.8524, 0.9092, 0.7740, 0.9896, 0.5185, 0.3298, 0.8708)),
    ]),
    "f3": ("f3", [
        ("gS", (1, 1, 1)),
        ("gA", (1, 1, 2)),
    ]),
    "f4": ("f4", [
        ("gS", (1, 1, 1, 1, 1, 1)),
        ("gA", (3, 3, 3, 5, 5, 5)),
        ("gK", (1, 2, 3, 1, 2, 1)),
        ("g1", (1, 1.9436, 1.9436, 1.1867, 1.1867, 1.2815)),
    ]),
}

# published reference cells: row -> column -> (value, tolerance);
# exact-form cells carry 1e-9, printed decimals 5e-3, integers 0
_X = 1e-9
_P = 5e-3


def _ref(value, tol):
    return (float(value), tol)


REFERENCE_TABLES = {
    "g2": {
        "gK": {"two_rho": _ref(Fraction(1, 6), _X), "sc_n": _ref(3.8467, _P),
               "coindex": (2, 0), "lambda_p": _ref(0, _X), "lambda_p_max": _ref(1.028, _P)},
        "g1": {"two_rho": _ref(0.7120, _P), "sc_n": _ref(3.8423, _P), "coindex": (3, 0),
               "lambda_p": _ref(0.2394, _P), "lambda_p_max": _ref(3.5930, _P)},
        "g2": {"two_rho": _ref(0.8538, _P), "sc_n": _ref(3.8106, _P), "coindex": (2, 0),
               "lambda_p": _ref(0.1727, _P), "lambda_p_max": _ref(4.6410, _P)},
    },
    "so5": {
        "gK": {"two_rho": _ref(Fraction(1, 6), _X), "sc_n": _ref(2.9511, _P),
               "coindex": (1, 0), "lambda_p": _ref(0, _X), "lambda_p_max": _ref(1.0654, _P)},
        "g1": {"two_rho": _ref(0.4694, _P), "sc_n": _ref(2.9420, _P), "coindex": (2, 0),
               "lambda_p": _ref(0.3755, _P), "lambda_p_max": _ref(2.3470, _P)},
    },
    "so6": {
        "gS": {"two_rho": _ref(Fraction(3, 4), _X), "sc_n": _ref(Fraction(9, 4), _X),
               "coindex": (3, 0), "lambda_p": _ref(Fraction(1, 2), _X),
               "lambda_p_max": _ref(Fraction(3, 4), _X)},
        "g1": {"two_rho": _ref(Fraction(7, 36), _X),
               "sc_n": _ref(0.55 * math.sqrt(15.0), _X), "coindex": (2, 0),
               "lambda_p": _ref((53 - math.sqrt(1201.0)) / 360, _X),
               "lambda_p_max": _ref(Fraction(5, 18), _X)},
    },
    "sp3": {
        "gK": {"two_rho": _ref(Fraction(1, 2), _X), "sc_n": _ref(5.8885, _P),
               "coindex": (2, 0), "lambda_p": _ref(0, _X), "lambda_p_max": _ref(1.028, _P)},
        "g1": {"two_rho": _ref(0.8528, _P), "sc_n": _ref(5.8711, _P), "coindex": (3, 0),
               "lambda_p": _ref(0.3790, _P), "lambda_p_max": _ref(2.2931, _P)},
        "g2": {"two_rho": _ref(0.9149, _P), "sc_n": _ref(5.8759, _P), "coindex": (2, 0),
               "lambda_p": _ref(0.3552, _P), "lambda_p_max": _ref(2.8374, _P)},
        "g3": {"two_rho": _ref(0.9719, _P), "sc_n": _ref(5.8759, _P), "coindex": (3, 0),
               "lambda_p": _ref(0.3420, _P), "lambda_p_max": _ref(3.0463, _P)},
    },
    "f3": {
        "gS": {"two_rho": _ref(Fraction(5, 6), _X), "sc_n": _ref(Fraction(5, 2), _X),
               "coindex": (2, 0), "lambda_p": _ref(Fraction(1, 2), _X),
               "lambda_p_max": _ref(Fraction(1, 2), _X)},
        "gA": {"two_rho": _ref(Fraction(2, 3), _X), "sc_n": _ref(2.5198, _P),
               "coindex": (1, 0), "lambda_p": _ref(0, _X), "lambda_p_max": _ref(1, _X)},
    },
    "f4": {
        "gS": {"two_rho": _ref(Fraction(3, 4), _X), "sc_n": _ref(Fraction(9, 2), _X),
               "coindex": (3, 0), "lambda_p": _ref(Fraction(1, 2), _X),
               "lambda_p_max": _ref(Fraction(3, 4), _X)},
        "gA": {"two_rho": _ref(Fraction(7, 36), _X), "sc_n": _ref(4.5184, _P),
               "coindex": (2, 0), "lambda_p": _ref(0.0509, _P), "lambda_p_max": _ref(0.2778, _P)},
        "gK": {"two_rho": _ref(Fraction(1, 2), _X), "sc_n": _ref(4.5392, _P),
               "coindex": (2, 0), "lambda_p": _ref(0, _X), "lambda_p_max": _ref(1.1371, _P)},
        "g1": {"two_rho": _ref(0.5462, _P), "sc_n": _ref(4.5136, _P), "coindex": (3, 0),
               "lambda_p": _ref(0.0875, _P), "lambda_p_max": _ref(0.8731, _P)},
    },
    "f5": {
        "gS": {"two_rho": _ref(Fraction(7, 10), _X), "sc_n": _ref(7, _X), "coindex": (4, 0)},
        "gA": {"two_rho": _ref(Fraction(11, 80), _X), "sc_n": _ref(7.0148, _P), "coindex": (3, 0)},
        "gK": {"two_rho": _ref(Fraction(2, 5), _X), "sc_n": _ref(7.0469, _P), "coindex": (3, 0)},
        "g1": {"two_rho": _ref(Fraction(1, 10), _X), "sc_n": _ref(7.0041, _P), "coindex": (6, 0)},
        "g2": {"two_rho": _ref(Fraction(1, 10), _X), "sc_n": _ref(6.9985, _P), "coindex": (5, 0)},
        "g3": {"two_rho": _ref(Fraction(1, 10), _X), "sc_n": _ref(6.9988, _P), "coindex": (5, 0)},
        "g4": {"two_rho": _ref(1, _X), "sc_n": _ref(7.0044, _P), "coindex": (4, 0)},
    },
}


@dataclass
class CaseRow:
    name: str
    coordinates: list
    refined: list
    residual: float
    two_rho: float
    sc_n: float
    coindex: int
    lambda_p: float
    lambda_p_max: float
    extremal_ratio: float | None
    flags: dict
    fingerprint: dict
    annotations: list = field(default_factory=list)


@dataclass
class CaseBundle:
    case_id: str
    space_id: str
    rows: list
    distinctness: list

    def row(self, name: str) -> CaseRow:
        for r in self.rows:
            if r.name == name:
                return r
        raise KeyError(name)

    def certified(self, tol: float = 1e-12) -> bool:
        return all(r.residual < tol for r in self.rows)

    def to_json(self) -> dict:
        return {"case_id": self.case_id, "space_id": self.space_id,
                "rows": [asdict(r) for r in self.rows],
                "distinctness": self.distinctness}


def case_ids() -> list:
    return sorted(_CASS) + ["f5"]


def _case_rows(case_id: str):
    if case_id in _CASS:
        space = catalog_space(_CASS[case_id][0])
        return space, [(name, InvariantMetric(space, tuple(float(v) for v in coords)))
                       for name, coords in _CASS[case_id][1]]
    if case_id == "f5":
        rows = [("gS", classic_metric(5, "standard")),
                ("gA", classic_metric(5, "arvanitoyeorgos")),
                ("gK", classic_metric(5, "kahler"))]
        rows += [(name, metric) for name, metric in f5_new_metrics() if name != "g5"]
        space = rows[0][1].space
        rows = [(name, InvariantMetric(space, tuple(float(v) for v in m.x)))
                for name, m in rows]
        return space, rows
    raise UnknownSpace(f"unknown case {case_id!r}; known: {', '.join(case_ids())}")


def build_case(case_id: str) -> CaseBundle:
    """Recompute one table: refine each catalog metric, analyze it, compare
    against the published reference cells, and record pairwise distinctness
    with the discriminating reason."""
    space, seeds = _case_rows(case_id)
    refs = REFERENCE_TABLES.get(case_id, {})
    rows, reports = [], {}
    for name, metric in seeds:
        refined = refine(metric, tol=1e-13)
        rep = stability_report(refined, rel_tol=1e-8)
        sc_n = normalized_scalar_curvature(refined)
        coindex, mults, ratios, zero, degen = rep.fingerprint
        ratio = rep.extremal_ratio
        row = CaseRow(
            name=name,
            coordinates=[float(v) for v in metric.x],
            refined=[float(v) for v in refined.x],
            residual=einstein_residual(refined),
            two_rho=rep.two_rho,
            sc_n=sc_n,
            coindex=rep.coindex,
            lambda_p=rep.lambda_p,
            lambda_p_max=rep.lambda_p_max,
            extremal_ratio=None if math.isinf(ratio) else ratio,
            flags=dict(rep.flags),
            fingerprint={"coindex": coindex, "multiplicities": list(mults),
                         "ratios": list(ratios), "zero": zero, "degenerate": degen},
        )
        computed = {"two_rho": rep.two_rho, "sc_n": sc_n, "coindex": rep.coindex,
                    "lambda_p": rep.lambda_p, "lambda_p_max": rep.lambda_p_max}
        for column, (ref_value, tol) in refs.get(name, {}).items():
            got = computed[column]
            if abs(got - ref_value) > tol:
                row.annotations.append({"column": column, "reference": ref_value,
                                        "computed": float(got)})
        rows.append(row)
        reports[name] = rep
    distinctness = []
    names = [name for name, _ in seeds]
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            verdict = distinguish(reports[a], reports[b])
            distinctness.append({"a": a, "b": b, "verdict": verdict,
                                 "reason": distinguishing_reason(reports[a], reports[b])})
    return CaseBundle(case_id, space.name, rows, distinctness)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, int):
        return str(v)
    return f"{v:.6g}"


def _properties(flags: dict) -> str:
    deg = "Deg." if flags["degenerate"] else "Non-deg."
    if flags["local_minimum"]:
        return f"{deg}, local minimum"
    if flags["unstable"] and flags["degenerate"]:
        return "Deg. and unstable (saddle)"
    if flags["unstable"]:
        return f"{deg} and unstable"
    if flags["stable"]:
        return f"{deg} and stable"
    return deg


def render(bundle: CaseBundle, fmt: str = "markdown") -> str:
    """Markdown mirrors the published column layout; json is lossless."""
    if fmt == "json":
        return json.dumps(bundle.to_json(), indent=2, sort_keys=True)
    if fmt not in ("markdown", "md"):
        raise ValueError(f"format must be markdown or json, got {fmt!r}")
    lines = [f"## Case {bundle.case_id} (space {bundle.space_id})", "",
             "| Name | Properties | 2rho | Sc_N | coindex | lambda_p | lambda_p_max |",
             "| --- | --- | --- | --- | --- | --- | --- |"]
    for r in bundle.rows:
        lines.append("| " + " | ".join([
            r.name, _properties(r.flags), _fmt(r.two_rho), _fmt(r.sc_n),
            _fmt(r.coindex), _fmt(r.lambda_p), _fmt(r.lambda_p_max)]) + " |")
    notes = [(r.name, a) for r in bundle.rows for a in r.annotations]
    if notes:
        lines += ["", "Reference discrepancies (computed value kept):"]
        for name, a in notes:
            lines.append(f"- {name}.{a['column']}: computed {_fmt(a['computed'])}, "
                         f"reference prints {_fmt(a['reference'])}")
    lines += ["", "Pairwise distinctness:"]
    for e in bundle.distinctness:
        why = f" ({e['reason']})" if e["reason"] else ""
        lines.append(f"- {e['a']} vs {e['b']}: {e['verdict']}{why}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> CaseBundle:
    """Inverse of render(..., 'json')."""
    data = json.loads(text)
    rows = [CaseRow(**r) for r in data["rows"]]
    return CaseBundle(data["case_id"], data["space_id"], rows, data["distinctness"])
