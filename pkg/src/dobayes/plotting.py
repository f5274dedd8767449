"""Minimal hand-rolled SVG writer for risk-vs-sample-size summaries.

One polyline per method, stderr bars, legend, log-scaled KL axis.  No
plotting dependency; the output is plain XML.
"""

from __future__ import annotations

import math

from .errors import EmptyInput

WIDTH, HEIGHT = 640, 440
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 150, 30, 50
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;"))


def plot_emit(summary_rows, path) -> None:
    """Render summary rows (scenario, method, n, mean_kl, stderr) to SVG."""
    rows = list(summary_rows)
    if not rows:
        raise EmptyInput("no summary rows to plot")
    by_method: dict[str, list[tuple[int, float, float]]] = {}
    for _, method, n, mean_kl, stderr in rows:
        by_method.setdefault(method, []).append((int(n), float(mean_kl),
                                                 float(stderr)))
    methods = sorted(by_method)
    ns = sorted({n for pts in by_method.values() for n, _, _ in pts})
    floor = 1e-12
    kl_lo = min(max(mean - se, floor) for pts in by_method.values()
                for _, mean, se in pts)
    kl_hi = max(mean + se for pts in by_method.values() for _, mean, se in pts)
    kl_lo, kl_hi = max(kl_lo, floor), max(kl_hi, floor * 10)
    if kl_hi <= kl_lo:
        kl_hi = kl_lo * 10

    x_lo, x_hi = min(ns), max(ns)
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def sx(n):
        if x_hi == x_lo:
            return MARGIN_L + plot_w / 2
        return MARGIN_L + plot_w * (n - x_lo) / (x_hi - x_lo)

    def sy(kl):
        kl = max(kl, floor)
        frac = (math.log10(kl) - math.log10(kl_lo)) / (
            math.log10(kl_hi) - math.log10(kl_lo))
        return MARGIN_T + plot_h * (1.0 - frac)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{MARGIN_L}" y1="{HEIGHT - MARGIN_B}" '
        f'x2="{WIDTH - MARGIN_R}" y2="{HEIGHT - MARGIN_B}" stroke="black"/>',
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" '
        f'y2="{HEIGHT - MARGIN_B}" stroke="black"/>',
        f'<text x="{MARGIN_L + plot_w / 2:.1f}" y="{HEIGHT - 12}" '
        'text-anchor="middle" font-size="14">n</text>',
        f'<text x="18" y="{MARGIN_T + plot_h / 2:.1f}" text-anchor="middle" '
        f'font-size="14" transform="rotate(-90 18 {MARGIN_T + plot_h / 2:.1f})"'
        '>mean KL</text>',
    ]
    for n in ns:
        parts.append(f'<text x="{sx(n):.1f}" y="{HEIGHT - MARGIN_B + 18}" '
                     f'text-anchor="middle" font-size="11">{n}</text>')
    decade = math.floor(math.log10(kl_lo))
    while 10.0 ** decade <= kl_hi:
        tick = 10.0 ** decade
        if tick >= kl_lo:
            parts.append(f'<text x="{MARGIN_L - 8}" y="{sy(tick):.1f}" '
                         f'text-anchor="end" font-size="11">1e{decade}</text>')
        decade += 1

    for i, method in enumerate(methods):
        color = PALETTE[i % len(PALETTE)]
        pts = sorted(by_method[method])
        coords = " ".join(f"{sx(n):.2f},{sy(mean):.2f}" for n, mean, _ in pts)
        parts.append(f'<polyline points="{coords}" fill="none" '
                     f'stroke="{color}" stroke-width="2"/>')
        for n, mean, se in pts:
            x = sx(n)
            parts.append(f'<circle cx="{x:.2f}" cy="{sy(mean):.2f}" r="3" '
                         f'fill="{color}"/>')
            if se > 0:
                parts.append(f'<line x1="{x:.2f}" y1="{sy(mean - se):.2f}" '
                             f'x2="{x:.2f}" y2="{sy(mean + se):.2f}" '
                             f'stroke="{color}" stroke-width="1"/>')
        ly = MARGIN_T + 18 * (i + 1)
        lx = WIDTH - MARGIN_R + 12
        parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" '
                     f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{lx + 30}" y="{ly}" font-size="12">'
                     f'{_escape(method)}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
