"""Minimal deterministic SVG polyline charts.

Presentation aid only; the CSV files are the data contract. No external
plotting dependency, no timestamps, fixed float formatting, so identical
inputs give byte-identical files.
"""

import math

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 16, 28, 44


def _transform(vals, log):
    out = []
    for v in vals:
        if log:
            out.append(math.log10(v) if v > 0 else None)
        else:
            out.append(float(v))
    return out


def _ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def _fmt(v, log):
    return f"{10**v:.3g}" if log else f"{v:.4g}"


def polyline_chart(path, series, xlabel="", ylabel="", title="",
                   logx=False, logy=False):
    """Write a line chart; series is a list of (label, xs, ys)."""
    pts = []
    for _, xs, ys in series:
        tx, ty = _transform(xs, logx), _transform(ys, logy)
        pts.append([(a, b) for a, b in zip(tx, ty) if a is not None and b is not None])
    finite = [p for line in pts for p in line if math.isfinite(p[0]) and math.isfinite(p[1])]
    if not finite:
        raise ValueError("nothing plottable")
    x_lo = min(p[0] for p in finite)
    x_hi = max(p[0] for p in finite)
    y_lo = min(p[1] for p in finite)
    y_hi = max(p[1] for p in finite)
    if x_hi == x_lo:
        x_hi = x_lo + 1
    if y_hi == y_lo:
        y_hi = y_lo + 1
    pad = 0.04 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def sx(v):
        return MARGIN_L + (v - x_lo) / (x_hi - x_lo) * (WIDTH - MARGIN_L - MARGIN_R)

    def sy(v):
        return HEIGHT - MARGIN_B - (v - y_lo) / (y_hi - y_lo) * (HEIGHT - MARGIN_T - MARGIN_B)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{WIDTH - MARGIN_L - MARGIN_R}" '
        f'height="{HEIGHT - MARGIN_T - MARGIN_B}" fill="none" stroke="#444"/>',
    ]
    if title:
        parts.append(f'<text x="{WIDTH / 2:.1f}" y="18" text-anchor="middle" '
                     f'font-size="13" font-family="sans-serif">{title}</text>')
    for tv in _ticks(x_lo, x_hi):
        x = sx(tv)
        parts.append(f'<line x1="{x:.1f}" y1="{HEIGHT - MARGIN_B}" x2="{x:.1f}" '
                     f'y2="{HEIGHT - MARGIN_B + 4}" stroke="#444"/>')
        parts.append(f'<text x="{x:.1f}" y="{HEIGHT - MARGIN_B + 17}" text-anchor="middle" '
                     f'font-size="11" font-family="sans-serif">{_fmt(tv, logx)}</text>')
    for tv in _ticks(y_lo, y_hi):
        y = sy(tv)
        parts.append(f'<line x1="{MARGIN_L - 4}" y1="{y:.1f}" x2="{MARGIN_L}" '
                     f'y2="{y:.1f}" stroke="#444"/>')
        parts.append(f'<text x="{MARGIN_L - 7}" y="{y + 4:.1f}" text-anchor="end" '
                     f'font-size="11" font-family="sans-serif">{_fmt(tv, logy)}</text>')
    if xlabel:
        parts.append(f'<text x="{(MARGIN_L + WIDTH - MARGIN_R) / 2:.1f}" '
                     f'y="{HEIGHT - 8}" text-anchor="middle" font-size="12" '
                     f'font-family="sans-serif">{xlabel}</text>')
    if ylabel:
        x, y = 14, (MARGIN_T + HEIGHT - MARGIN_B) / 2
        parts.append(f'<text x="{x}" y="{y:.1f}" text-anchor="middle" font-size="12" '
                     f'font-family="sans-serif" transform="rotate(-90 {x} {y:.1f})">'
                     f'{ylabel}</text>')
    for i, ((label, _, _), line) in enumerate(zip(series, pts)):
        color = COLORS[i % len(COLORS)]
        coords = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in line)
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                     f'points="{coords}"/>')
        ly = MARGIN_T + 16 + 15 * i
        parts.append(f'<line x1="{WIDTH - 150}" y1="{ly - 4}" x2="{WIDTH - 130}" '
                     f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{WIDTH - 125}" y="{ly}" font-size="11" '
                     f'font-family="sans-serif">{label}</text>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
