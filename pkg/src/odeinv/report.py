"""Query dispatch and report emission.

A run produces one report: a structured document (stable except for the
timing block) plus a human-readable rendering.  Reports are written
atomically so concurrent corpus runs never interleave partial files.
"""

from __future__ import annotations

import json
import os
import tempfile
import time

from . import __version__
from .algorithms import (
    FAILS,
    HOLDS,
    Precondition,
    check_invariant_ideal,
    check_safety,
    post,
    pre,
)
from .groebner import Ideal
from .numcheck import verify_from_analysis
from .sysspec import BuiltSystem


def run(built: BuiltSystem, *, numeric: bool | None = None, **overrides) -> "RunReport":
    """Execute the spec's query and assemble the report.

    `numeric` forces the trajectory cross-check on or off; other keyword
    overrides replace the spec's options (max_iterations, pair_budget,
    max_degree, precondition mode).
    """
    spec = built.spec
    t_start = time.perf_counter()
    caps = {
        "max_iterations": overrides.get("max_iterations", spec.max_iterations),
        "pair_budget": overrides.get("pair_budget", spec.pair_budget),
        "max_degree": overrides.get("max_degree", spec.max_degree),
    }
    mode = overrides.get("mode")
    precondition = built.precondition
    if mode is not None and mode != precondition.mode:
        precondition = Precondition(precondition.generators, mode)
    gb_caps = {"pair_budget": caps["pair_budget"], "max_degree": caps["max_degree"]}

    timings = {}
    t0 = time.perf_counter()
    analysis = precondition.analyze(built.universe, **gb_caps)
    timings["precondition_analysis"] = time.perf_counter() - t0

    report = {
        "tool": "odeinv",
        "version": __version__,
        "query": spec.query_kind,
        "spec": built.canonical_echo(),
        "precondition_analysis": {
            "requested_mode": analysis.requested_mode,
            "effective_mode": analysis.effective_mode,
            "exact": analysis.exact,
            "reduced_groebner_basis": [str(g) for g in analysis.basis],
        },
    }

    t0 = time.perf_counter()
    exit_code = 0
    numeric_polys = []
    numeric_analysis = analysis
    if spec.query_kind == "post":
        res = post(analysis, built.template, built.field, **caps)
        gb = res.ideal.reduced_groebner_basis()
        report["result"] = {
            "iterations": res.iterations,
            "template_parameters": len(built.template.params),
            "space_dimension": res.space.dim,
            "result_template": {
                "parameters": [p.name for p in res.result.params],
                "instances": [str(p) for p in res.result.unit_instances()],
            },
            "ideal": {
                "generator_count": len(res.ideal.generators),
                "reduced_groebner_basis": [str(g) for g in gb],
            },
            "chain_trace": list(res.trace),
            "weakest_precondition": {
                "applies": res.mode_exact,
                "note": (
                    "the ideal's variety is the weakest precondition of the "
                    "result template's variety, and the largest algebraic "
                    "invariant inside it"
                    if res.mode_exact
                    else "sound mode only: inclusions hold, maximality is not guaranteed"
                ),
            },
        }
        numeric_polys = [p for p in res.result.unit_instances() if not p.is_zero()]
        numeric_polys += [g for g in gb if g not in numeric_polys]
    elif spec.query_kind == "pre":
        res = pre(built.postcondition, built.field, **caps)
        gb = res.ideal.reduced_groebner_basis()
        report["result"] = {
            "iterations": res.iterations,
            "derivative_closure": [str(p) for p in res.derivative_closure],
            "ideal": {
                "generator_count": len(res.ideal.generators),
                "reduced_groebner_basis": [str(g) for g in gb],
            },
        }
        numeric_polys = list(res.derivative_closure)
        numeric_analysis = Precondition(list(gb)).analyze(built.universe, **gb_caps)
    elif spec.query_kind == "check":
        res = check_safety(analysis, built.postcondition, built.field, **caps)
        witness = None
        if res.witness is not None:
            point = res.witness["point"]
            witness = {
                "point": {
                    s.name: str(point[s]) for s in built.universe.symbols
                },
                "polynomial": str(res.witness["polynomial"]),
                "derivative_order": res.witness["derivative_order"],
                "value": str(res.witness["value"]),
            }
        report["result"] = {
            "verdict": res.verdict,
            "iterations": res.post_result.iterations,
            "space_dimension": res.post_result.space.dim,
            "template_parameters": len(res.postcondition),
            "witness": witness,
        }
        exit_code = {HOLDS: 0, FAILS: 1}.get(res.verdict, 2)
        if res.verdict == HOLDS:
            numeric_polys = list(res.postcondition)
    else:  # invariant
        ideal = Ideal(built.universe, built.ideal_generators, **gb_caps)
        ok = check_invariant_ideal(ideal, built.field)
        gb = ideal.reduced_groebner_basis()
        report["result"] = {
            "invariant": ok,
            "reduced_groebner_basis": [str(g) for g in gb],
        }
        exit_code = 0 if ok else 1
        numeric_polys = list(gb)
        numeric_analysis = Precondition(list(gb)).analyze(built.universe, **gb_caps)
    timings["query"] = time.perf_counter() - t0

    run_numeric = spec.numeric.enabled if numeric is None else numeric
    if run_numeric:
        t0 = time.perf_counter()
        points = spec.numeric.points
        records, note = verify_from_analysis(
            numeric_polys,
            built.field,
            numeric_analysis,
            samples=spec.numeric.samples,
            horizon=spec.numeric.horizon,
            step=spec.numeric.step,
            tolerance=spec.numeric.tolerance,
            points=[{k: str(v) for k, v in p.items()} for p in points]
            if points is not None
            else None,
        )
        ok = all(r["passed"] for r in records)
        report["numeric_check"] = {
            "passed": ok,
            "checked": len(records),
            "note": note,
            "failures": [r for r in records if not r["passed"]],
        }
        timings["numeric_check"] = time.perf_counter() - t0
        if not ok and exit_code == 0:
            exit_code = 1
    timings["total"] = time.perf_counter() - t_start
    report["timings"] = {k: round(v, 6) for k, v in timings.items()}
    return RunReport(report, exit_code)


class RunReport:
    """Structured report plus exit status."""

    def __init__(self, data: dict, exit_code: int):
        self.data = data
        self.exit_code = exit_code

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=False) + "\n"

    def comparable(self) -> dict:
        return strip_timings(self.data)

    def write(self, path):
        write_json_atomic(path, self.data)

    def human_text(self) -> str:
        d = self.data
        lines = [f"{d['spec']['name']}: {d['query']} query"]
        pa = d["precondition_analysis"]
        lines.append(
            f"  precondition mode: {pa['effective_mode']}"
            f" ({'exact' if pa['exact'] else 'sound only'})"
        )
        r = d["result"]
        q = d["query"]
        if q == "post":
            lines.append(
                f"  stabilized at m={r['iterations']}; valuation space dimension "
                f"{r['space_dimension']} of {r['template_parameters']}"
            )
            lines.append("  result template instances:")
            for inst in r["result_template"]["instances"] or ["0"]:
                lines.append(f"    {inst}")
            lines.append("  invariant ideal reduced Groebner basis:")
            for g in r["ideal"]["reduced_groebner_basis"] or ["0"]:
                lines.append(f"    {g}")
            if r["weakest_precondition"]["applies"]:
                lines.append(f"  note: {r['weakest_precondition']['note']}")
        elif q == "pre":
            lines.append(f"  stabilized at m={r['iterations']}")
            lines.append("  weakest precondition ideal reduced Groebner basis:")
            for g in r["ideal"]["reduced_groebner_basis"] or ["0"]:
                lines.append(f"    {g}")
        elif q == "check":
            lines.append(f"  verdict: {r['verdict']} (m={r['iterations']})")
            if r["witness"]:
                w = r["witness"]
                lines.append(
                    f"  witness: {w['polynomial']} has derivative of order "
                    f"{w['derivative_order']} equal to {w['value']} at "
                    + ", ".join(f"{k}={v}" for k, v in w["point"].items())
                )
        else:
            lines.append(f"  invariant ideal: {r['invariant']}")
        nc = d.get("numeric_check")
        if nc:
            status = "passed" if nc["passed"] else "FAILED"
            extra = f" ({nc['note']})" if nc.get("note") else ""
            lines.append(
                f"  numeric cross-check: {status}, {nc['checked']} trajectories{extra}"
            )
        return "\n".join(lines) + "\n"


def strip_timings(data: dict) -> dict:
    out = dict(data)
    out.pop("timings", None)
    return out


def write_json_atomic(path, data: dict):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2, sort_keys=False)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def lie_chain(built: BuiltSystem, steps: int):
    """Debug view: iterated Lie derivatives of the query's polynomials, or
    of the template when the query carries one."""
    from .dynamics import lie_derivative

    chains = []
    if built.template is not None:
        t = built.template
        chain = [str(t)]
        for _ in range(steps):
            t = t.lie(built.field)
            chain.append(str(t))
        chains.append({"subject": "template", "chain": chain})
    else:
        polys = built.postcondition or built.ideal_generators or []
        for p in polys:
            q = p
            chain = [str(q)]
            for _ in range(steps):
                q = lie_derivative(q, built.field)
                chain.append(str(q))
            chains.append({"subject": str(p), "chain": chain})
    return chains
