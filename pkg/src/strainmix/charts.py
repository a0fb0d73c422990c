"""Deterministic SVG charts for contrast and drift reports.

A contrast report renders one stacked bar per stratum showing the
infection-conditional version shares, annotated with the overall contrast.
A drift report renders one group of stacked bars per schedule time.  Output
bytes depend only on the report contents: coordinates are fixed-point,
colors are assigned to sorted version labels, and no timestamps or random
ids are embedded.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .errors import EmptyReportError
from .exact import ContrastReport, DriftReport

# Tableau 10
PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
)

_BAR_W = 56.0
_BAR_GAP = 28.0
_BAR_H = 180.0
_TOP = 42.0
_LEFT = 24.0
_LABEL_H = 18.0
_LEGEND_ROW = 18.0


def _num(value: float) -> str:
    return format(value, ".2f")


def _color_map(versions: list[str]) -> dict[str, str]:
    return {v: PALETTE[i % len(PALETTE)] for i, v in enumerate(sorted(versions))}


def _stacked_bar(out: list[str], x: float, shares: list[tuple[str, float, str]]) -> None:
    # shares: (version, share in [0,1], fill color); stack bottom-up
    y = _TOP + _BAR_H
    for version, share, fill in shares:
        h = share * _BAR_H
        y -= h
        out.append(
            f'<rect x="{_num(x)}" y="{_num(y)}" width="{_num(_BAR_W)}" '
            f'height="{_num(h)}" fill="{fill}">'
            f"<title>{escape(version)}: {format(share, 'g')}</title></rect>"
        )


def _text(out: list[str], x: float, y: float, content: str, size: int = 12,
          anchor: str = "middle") -> None:
    out.append(
        f'<text x="{_num(x)}" y="{_num(y)}" font-size="{size}" '
        f'font-family="sans-serif" text-anchor="{anchor}">{escape(content)}</text>'
    )


def _legend(out: list[str], colors: dict[str, str], y: float) -> float:
    for i, (version, fill) in enumerate(colors.items()):
        row = y + i * _LEGEND_ROW
        out.append(
            f'<rect x="{_num(_LEFT)}" y="{_num(row)}" width="12.00" height="12.00" '
            f'fill="{fill}"/>'
        )
        _text(out, _LEFT + 18.0, row + 10.0, version, size=11, anchor="start")
    return y + len(colors) * _LEGEND_ROW


def _document(out: list[str], width: float, height: float) -> bytes:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(width)}" '
        f'height="{_num(height)}" viewBox="0 0 {_num(width)} {_num(height)}">'
    )
    return "\n".join([head, *out, "</svg>", ""]).encode("utf-8")


def _contrast_svg(report: ContrastReport) -> bytes:
    if not report.terms:
        raise EmptyReportError("contrast report has no terms to draw")
    by_stratum: dict[str, list] = {}
    for t in report.terms:
        by_stratum.setdefault(t.stratum, []).append(t)
    colors = _color_map([t.version for t in report.terms])

    out: list[str] = []
    x = _LEFT
    drawn = 0
    for label, terms in by_stratum.items():
        total = sum(t.weight for t in terms)
        if total <= 0.0:
            continue
        shares = [(t.version, t.weight / total, colors[t.version])
                  for t in sorted(terms, key=lambda t: t.version)]
        _stacked_bar(out, x, shares)
        _text(out, x + _BAR_W / 2, _TOP + _BAR_H + _LABEL_H, label)
        x += _BAR_W + _BAR_GAP
        drawn += 1
    if drawn == 0:
        raise EmptyReportError("contrast report has no positive-share strata")

    width = max(x - _BAR_GAP + _LEFT, 260.0)
    _text(out, _LEFT, 18.0, f"{report.scenario}: {report.outcome}", anchor="start")
    _text(out, _LEFT, 34.0, f"contrast = {format(report.contrast, 'g')}", anchor="start")
    legend_end = _legend(out, colors, _TOP + _BAR_H + 2 * _LABEL_H)
    return _document(out, width, legend_end + 12.0)


def _drift_svg(report: DriftReport) -> bytes:
    if not report.points:
        raise EmptyReportError("drift report has no points to draw")
    versions = sorted({v for p in report.points
                       for mix in p.mixtures.values() for v in mix})
    colors = _color_map(versions)

    out: list[str] = []
    x = _LEFT
    for p in report.points:
        group_start = x
        for label in sorted(p.mixtures):
            mix = p.mixtures[label]
            shares = [(v, mix[v], colors[v]) for v in sorted(mix)]
            _stacked_bar(out, x, shares)
            _text(out, x + _BAR_W / 2, _TOP + _BAR_H + _LABEL_H, label, size=10)
            x += _BAR_W + _BAR_GAP / 2
        center = (group_start + x - _BAR_GAP / 2) / 2
        _text(out, center, _TOP + _BAR_H + 2 * _LABEL_H,
              f"t={p.time}: {format(p.contrast, 'g')}", size=11)
        x += _BAR_GAP

    width = max(x - _BAR_GAP + _LEFT, 260.0)
    _text(out, _LEFT, 18.0, f"{report.scenario}: {report.outcome}", anchor="start")
    legend_end = _legend(out, colors, _TOP + _BAR_H + 2 * _LABEL_H + 10.0)
    return _document(out, width, legend_end + 12.0)


def render_chart(report) -> bytes:
    """SVG for a :class:`ContrastReport` or :class:`DriftReport`."""
    if isinstance(report, ContrastReport):
        return _contrast_svg(report)
    if isinstance(report, DriftReport):
        return _drift_svg(report)
    raise TypeError(f"no chart for {type(report).__name__}")
