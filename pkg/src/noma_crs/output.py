"""CSV and SVG emitters for sweep tables."""
from __future__ import annotations

import csv
import io
from pathlib import Path
from xml.sax.saxutils import escape

from .explore import SweepTable

_FIELDS = ("c1", "c2", "sum")
_COLOURS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
            "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")
_AXIS_LABELS = {"snr_db": "total SNR P_t/N0 (dB)", "rho": "rho", "xi": "xi", "alpha": "alpha"}


def _fmt(x):
    return f"{x:.9g}"


def csv_header(table: SweepTable):
    return [table.swept_name] + [f"{label}_{method}_{field}"
                                 for label, method in table.series for field in _FIELDS]


def csv_text(table: SweepTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(csv_header(table))
    for row in table.rows:
        cells = [_fmt(row.value)]
        for key in table.series:
            rates = row.rates[key]
            cells += [_fmt(rates.r1), _fmt(rates.r2), _fmt(rates.sum)]
        writer.writerow(cells)
    return buf.getvalue()


def emit_csv(table: SweepTable, path) -> None:
    Path(path).write_bytes(csv_text(table).encode("utf-8"))


def svg_text(table: SweepTable, width=720, height=440) -> str:
    """Line chart of sum rate against the swept parameter, one polyline per series."""
    left, right, top, bottom = 70, 200, 20, 50
    pw, ph = width - left - right, height - top - bottom
    xs = [row.value for row in table.rows]
    ys = [row.rates[key].sum for row in table.rows for key in table.series]
    x0, x1 = (min(xs), max(xs)) if xs else (0.0, 1.0)
    y0, y1 = (min(0.0, min(ys)), max(ys)) if ys else (0.0, 1.0)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (1.0 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for i in range(5):
        xv = x0 + (x1 - x0) * i / 4
        yv = y0 + (y1 - y0) * i / 4
        out.append(f'<text x="{px(xv):.2f}" y="{top + ph + 16}" font-size="11" '
                   f'text-anchor="middle">{xv:.4g}</text>')
        out.append(f'<text x="{left - 6}" y="{py(yv) + 4:.2f}" font-size="11" '
                   f'text-anchor="end">{yv:.4g}</text>')
    xlabel = escape(_AXIS_LABELS.get(table.swept_name, table.swept_name))
    out.append(f'<text x="{left + pw / 2:.2f}" y="{height - 10}" font-size="13" '
               f'text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="16" y="{top + ph / 2:.2f}" font-size="13" text-anchor="middle" '
               f'transform="rotate(-90 16 {top + ph / 2:.2f})">sum rate (bits/s/Hz)</text>')
    for k, key in enumerate(table.series):
        colour = _COLOURS[k % len(_COLOURS)]
        dash = ' stroke-dasharray="5,3"' if key[1] == "mc" else ""
        pts = " ".join(f"{px(row.value):.2f},{py(row.rates[key].sum):.2f}" for row in table.rows)
        out.append(f'<polyline class="series" fill="none" stroke="{colour}" stroke-width="1.8"'
                   f'{dash} points="{pts}"/>')
        ly = top + 14 + 18 * k
        out.append(f'<line x1="{left + pw + 12}" y1="{ly}" x2="{left + pw + 36}" y2="{ly}" '
                   f'stroke="{colour}" stroke-width="1.8"{dash}/>')
        out.append(f'<text x="{left + pw + 42}" y="{ly + 4}" font-size="11">'
                   f'{escape(key[0])} [{key[1]}]</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(table: SweepTable, path) -> None:
    Path(path).write_bytes(svg_text(table).encode("utf-8"))
