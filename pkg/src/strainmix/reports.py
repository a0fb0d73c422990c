"""Report serialization to JSON and CSV.

Both formats are byte-deterministic: floats are written with 17 significant
digits (enough to round-trip IEEE doubles), keys keep insertion order, and
lines end with "\\n" regardless of platform.  CSV files carry tabular rows
first, then scalar summary rows whose first field starts with "#".
"""

from __future__ import annotations

import csv
import io
import json

from .exact import (
    ContrastReport,
    DriftReport,
    IrrelevanceReport,
    TransportReport,
)
from .scenario import ValidationReport
from .simulate import EstimateReport, McSummary, StrainAwareReport

FLOAT_DIGITS = ".17g"


def format_float(value: float) -> str:
    return format(float(value), FLOAT_DIGITS)


def _json_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _json_emit(value, indent: int, out: list[str]) -> None:
    # hand-rolled so float formatting is under our control; json.dumps
    # offers no hook for that
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, item) in enumerate(value.items()):
            out.append(f"{inner}{json.dumps(str(key), ensure_ascii=False)}: ")
            _json_emit(item, indent + 1, out)
            out.append(",\n" if i < len(value) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(value, (list, tuple)):
        if not value:
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(value):
            out.append(inner)
            _json_emit(item, indent + 1, out)
            out.append(",\n" if i < len(value) - 1 else "\n")
        out.append(pad + "]")
    else:
        out.append(_json_scalar(value))


def json_bytes(value) -> bytes:
    out: list[str] = []
    _json_emit(value, 0, out)
    out.append("\n")
    return "".join(out).encode("utf-8")


def to_mapping(report) -> dict:
    """Plain dict view of any report type, suitable for JSON emission."""
    if isinstance(report, ContrastReport):
        return {
            "scenario": report.scenario,
            "outcome": report.outcome,
            "contrast": report.contrast,
            "arm1_mean": report.arm1_mean,
            "arm0_mean": report.arm0_mean,
            "terms": [
                {"stratum": t.stratum, "version": t.version, "effect": t.effect,
                 "weight": t.weight, "contribution": t.contribution}
                for t in report.terms
            ],
        }
    if isinstance(report, TransportReport):
        return {
            "scenario": report.scenario,
            "outcome": report.outcome,
            "source_contrast": report.source_contrast,
            "target_contrast": report.target_contrast,
            "mixture_divergence": dict(report.mixture_divergence),
            "weight_divergence": report.weight_divergence,
        }
    if isinstance(report, DriftReport):
        return {
            "scenario": report.scenario,
            "outcome": report.outcome,
            "points": [
                {"time": p.time, "contrast": p.contrast,
                 "mixtures": {l: dict(m) for l, m in p.mixtures.items()}}
                for p in report.points
            ],
        }
    if isinstance(report, IrrelevanceReport):
        return {
            "scenario": report.scenario,
            "outcome": report.outcome,
            "tolerance": report.tolerance,
            "irrelevant": report.irrelevant,
            "strata": [
                {"stratum": s.stratum, "spread": s.spread, "irrelevant": s.irrelevant}
                for s in report.strata
            ],
        }
    if isinstance(report, ValidationReport):
        return {
            "ok": report.ok,
            "violations": [
                {"rule": v.rule, "where": v.where, "message": v.message}
                for v in report.violations
            ],
        }
    if isinstance(report, EstimateReport):
        return {
            "estimand": report.estimand,
            "outcome": report.outcome,
            "estimate": report.estimate,
            "n": report.n,
            "cells": [
                {"stratum": c.stratum, "n": c.n, "exposed": c.exposed,
                 "unexposed": c.unexposed}
                for c in report.cells
            ],
            "warnings": list(report.warnings),
        }
    if isinstance(report, StrainAwareReport):
        return {
            "outcome": report.outcome,
            "n": report.n,
            "contrast": report.contrast,
            "effects": [
                {"stratum": e.stratum, "version": e.version, "effect": e.effect}
                for e in report.effects
            ],
            "cells": [
                {"stratum": c.stratum, "version": c.version, "count": c.count}
                for c in report.cells
            ],
            "warnings": list(report.warnings),
        }
    if isinstance(report, McSummary):
        return {
            "outcome": report.outcome,
            "reps": report.reps,
            "n": report.n,
            "mean_estimate": report.mean_estimate,
            "empirical_se": report.empirical_se,
            "exact_value": report.exact_value,
            "mean_bias": report.mean_bias,
        }
    raise TypeError(f"no report mapping for {type(report).__name__}")


def _csv_field(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _csv_bytes(header: list[str], rows: list[list], summary: list[tuple]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_field(v) for v in row])
    for name, value in summary:
        writer.writerow([f"# {name}", _csv_field(value)])
    return buf.getvalue().encode("utf-8")


def csv_bytes(report) -> bytes:
    if isinstance(report, ContrastReport):
        return _csv_bytes(
            ["stratum", "version", "effect", "weight", "contribution"],
            [[t.stratum, t.version, t.effect, t.weight, t.contribution]
             for t in report.terms],
            [("contrast", report.contrast),
             ("arm1_mean", report.arm1_mean),
             ("arm0_mean", report.arm0_mean)],
        )
    if isinstance(report, DriftReport):
        return _csv_bytes(
            ["time", "contrast"],
            [[p.time, p.contrast] for p in report.points],
            [],
        )
    if isinstance(report, TransportReport):
        return _csv_bytes(
            ["stratum", "mixture_divergence"],
            [[label, d] for label, d in report.mixture_divergence.items()],
            [("source_contrast", report.source_contrast),
             ("target_contrast", report.target_contrast),
             ("weight_divergence", report.weight_divergence)],
        )
    if isinstance(report, IrrelevanceReport):
        return _csv_bytes(
            ["stratum", "spread", "irrelevant"],
            [[s.stratum, s.spread, s.irrelevant] for s in report.strata],
            [("irrelevant", report.irrelevant), ("tolerance", report.tolerance)],
        )
    if isinstance(report, ValidationReport):
        return _csv_bytes(
            ["rule", "where", "message"],
            [[v.rule, v.where, v.message] for v in report.violations],
            [("ok", report.ok)],
        )
    if isinstance(report, EstimateReport):
        return _csv_bytes(
            ["stratum", "n", "exposed", "unexposed"],
            [[c.stratum, c.n, c.exposed, c.unexposed] for c in report.cells],
            [("estimand", report.estimand),
             ("outcome", report.outcome),
             ("estimate", report.estimate),
             ("n", report.n)]
            + [("warning", w) for w in report.warnings],
        )
    if isinstance(report, StrainAwareReport):
        effects = {(e.stratum, e.version): e.effect for e in report.effects}
        rows = []
        for c in report.cells:
            effect = effects.get((c.stratum, c.version))
            rows.append([c.stratum, c.version,
                         "" if effect is None else format_float(effect), c.count])
        return _csv_bytes(
            ["stratum", "version", "effect", "count"],
            rows,
            [("outcome", report.outcome),
             ("contrast", report.contrast),
             ("n", report.n)]
            + [("warning", w) for w in report.warnings],
        )
    if isinstance(report, McSummary):
        return _csv_bytes(
            ["outcome", "reps", "n", "mean_estimate", "empirical_se",
             "exact_value", "mean_bias"],
            [[report.outcome, report.reps, report.n, report.mean_estimate,
              report.empirical_se, report.exact_value, report.mean_bias]],
            [],
        )
    raise TypeError(f"no CSV layout for {type(report).__name__}")


def write_report(report, fmt: str) -> bytes:
    """Serialize a report; ``fmt`` is "json" or "csv"."""
    if fmt == "json":
        return json_bytes(to_mapping(report))
    if fmt == "csv":
        return csv_bytes(report)
    raise ValueError(f"unknown format {fmt!r}")
