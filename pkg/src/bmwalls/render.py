"""Deterministic text, CSV, JSON and SVG output.

Rationals are written as ``p/q`` in lowest terms.  Decimals only occur in
SVG geometry, rounded to ``SVG_DIGITS`` places as stated in the file's
header comment.
"""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .lattice import ChernCharacter, Divisor
from .walls import WallRecord, frame_data, sq_line_of_wall

CSV_SCHEMA = "walls/1"
CSV_COLUMNS = ("C", "D", "radius_sq", "ch0'", "c1", "c2", "chi'", "divisor_expr", "model")
SVG_DIGITS = 6


def rat(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Divisor):
        return "(" + ", ".join(rat(c) for c in x.coords) + ")"
    if isinstance(x, ChernCharacter):
        return f"({rat(x.ch0)}, {rat(x.ch1)}, {rat(x.ch2)})"
    return str(x)


def jsonable(x):
    if isinstance(x, (Fraction, Divisor, ChernCharacter)):
        return rat(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"


def wall_rows(walls: Sequence[WallRecord], divisors: Sequence[str]) -> list[dict]:
    rows = []
    for w, div in zip(walls, divisors):
        data = [frame_data(c, w.frame) for c in w.destabilizers]
        rows.append({
            "C": rat(w.C),
            "D": rat(w.D),
            "radius_sq": rat(w.radius_sq),
            "ch0'": ";".join(rat(d[0]) for d in data),
            "c1": ";".join(rat(d[1]) for d in data),
            "c2": ";".join(rat(d[2]) for d in data),
            "chi'": ";".join(rat(d[3]) for d in data),
            "divisor_expr": div,
            "model": w.model,
        })
    return rows


def walls_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write(f"#schema={CSV_SCHEMA}\n")
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def walls_json(rows: list[dict], meta: dict) -> str:
    return dumps({"schema": CSV_SCHEMA, "meta": meta, "walls": rows})


def table(rows: list[dict], columns: Sequence[str]) -> str:
    widths = [max([len(c)] + [len(str(r[c])) for r in rows]) for c in columns]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(str(r[c]).ljust(w) for c, w in zip(columns, widths)).rstrip())
    return "\n".join(lines) + "\n"


def key_values(pairs: Iterable[tuple]) -> str:
    return "".join(f"{k}: {rat(v)}\n" for k, v in pairs)


# --- SVG ---------------------------------------------------------------------

def _num(x: float) -> str:
    s = f"{x:.{SVG_DIGITS}f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Panel:
    def __init__(self, x0, y0, w, h, xmin, xmax, ymin, ymax):
        self.x0, self.y0, self.w, self.h = x0, y0, w, h
        self.xmin, self.xmax, self.ymin, self.ymax = xmin, xmax, ymin, ymax

    def X(self, s):
        return self.x0 + (float(s) - self.xmin) / (self.xmax - self.xmin) * self.w

    def Y(self, t):
        return self.y0 + self.h - (float(t) - self.ymin) / (self.ymax - self.ymin) * self.h

    def scale_x(self, r):
        return float(r) / (self.xmax - self.xmin) * self.w

    def scale_y(self, r):
        return float(r) / (self.ymax - self.ymin) * self.h


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def walls_svg(ch: ChernCharacter, walls: Sequence[WallRecord], title: str,
              annotation: Optional[str] = None, s0: Optional[Fraction] = None) -> str:
    """Two panels: semicircles in (s, t) and wall lines in (s, q)."""
    W, Hh, pad = 400, 300, 40
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- bmwalls wall diagram; precision: exact rationals converted to decimals "
        f"rounded to {SVG_DIGITS} places at render time -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{2 * W + 3 * pad}" '
        f'height="{Hh + 2 * pad + 20}" viewBox="0 0 {2 * W + 3 * pad} {Hh + 2 * pad + 20}">',
        f'<text x="{pad}" y="20" font-family="monospace" font-size="12">{_esc(title)}</text>',
    ]
    live = [w for w in walls if w.radius_sq > 0]
    if live:
        lo = min(float(w.C) - w.radius for w in live)
        hi = max(float(w.C) + w.radius for w in live)
        top = max(w.radius for w in live)
    else:
        lo, hi, top = -1.0, 1.0, 1.0
    if s0 is not None:
        lo, hi = min(lo, float(s0)), max(hi, float(s0))
    margin = 0.1 * (hi - lo) or 1.0
    lo, hi = lo - margin, hi + margin
    st = _Panel(pad, pad + 20, W, Hh, lo, hi, 0.0, top * 1.15)

    # (s, q) ranges: lines between their two parabola crossings
    lines = [(w, sq_line_of_wall(w)) for w in live]
    qvals = [lo * lo / 2, hi * hi / 2, 0.0]
    for w, l in lines:
        for s in (float(w.C) - w.radius, float(w.C) + w.radius):
            qvals.append(float(l.slope) * s + float(l.intercept))
        if l.pivot is not None:
            qvals.append(float(l.pivot[1]))
    qmin, qmax = min(qvals), max(qvals)
    qpad = 0.1 * (qmax - qmin) or 1.0
    sq = _Panel(2 * pad + W, pad + 20, W, Hh, lo, hi, qmin - qpad, qmax + qpad)

    for p, label in ((st, "t"), (sq, "q")):
        out.append(f'<rect x="{p.x0}" y="{p.y0}" width="{p.w}" height="{p.h}" fill="none" stroke="#888"/>')
        out.append(f'<text x="{p.x0 + p.w - 10}" y="{p.y0 + p.h + 15}" font-family="monospace" '
                   f'font-size="11">s</text>')
        out.append(f'<text x="{p.x0 - 15}" y="{p.y0 + 10}" font-family="monospace" font-size="11">{label}</text>')
    if sq.ymin < 0 < sq.ymax:
        out.append(f'<line x1="{_num(sq.X(lo))}" y1="{_num(sq.Y(0))}" x2="{_num(sq.X(hi))}" '
                   f'y2="{_num(sq.Y(0))}" stroke="#ccc"/>')

    for w in live:
        R = w.radius
        x1, x2, y = st.X(float(w.C) - R), st.X(float(w.C) + R), st.Y(0)
        out.append(f'<path d="M {_num(x1)} {_num(y)} A {_num(st.scale_x(R))} {_num(st.scale_y(R))} 0 0 1 '
                   f'{_num(x2)} {_num(y)}" fill="none" stroke="#1f5fa8"><title>C={rat(w.C)} '
                   f'R^2={rat(w.radius_sq)}</title></path>')
    if s0 is not None:
        out.append(f'<line x1="{_num(st.X(s0))}" y1="{_num(st.Y(0))}" x2="{_num(st.X(s0))}" '
                   f'y2="{_num(st.Y(st.ymax))}" stroke="#a33" stroke-dasharray="4 3"/>')

    # parabola q = s^2/2
    steps = 80
    pts = []
    for i in range(steps + 1):
        s = lo + (hi - lo) * i / steps
        q = s * s / 2
        if sq.ymin <= q <= sq.ymax:
            pts.append(f"{_num(sq.X(s))},{_num(sq.Y(q))}")
    if len(pts) > 1:
        out.append(f'<polyline points="{" ".join(pts)}" fill="none" stroke="#999"/>')
    pivots = set()
    for w, l in lines:
        a, b = float(w.C) - w.radius, float(w.C) + w.radius
        out.append(f'<line x1="{_num(sq.X(a))}" y1="{_num(sq.Y(float(l.at(0)) + float(l.slope) * a))}" '
                   f'x2="{_num(sq.X(b))}" y2="{_num(sq.Y(float(l.at(0)) + float(l.slope) * b))}" '
                   f'stroke="#1f5fa8"/>')
        if l.pivot is not None:
            pivots.add(l.pivot)
    for px, py in sorted(pivots):
        out.append(f'<circle cx="{_num(sq.X(px))}" cy="{_num(sq.Y(py))}" r="3" fill="#a33">'
                   f'<title>pivot ({rat(px)}, {rat(py)})</title></circle>')

    if annotation is None and not live:
        annotation = "no walls in the search bounds"
    if annotation:
        out.append(f'<text x="{pad + 10}" y="{pad + 45}" font-family="monospace" font-size="14">'
                   f'{_esc(annotation)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
