"""Dependency-free SVG charts: line charts over scale and histogram panels.

Output is plain SVG markup built from fixed templates; everything is
deterministic (no timestamps, no random ids), so rendered files are
byte-stable across runs.
"""

from __future__ import annotations

import math

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 70, 20, 40, 55


def _esc(text: str) -> str:
    return (
        str(text).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def _fnum(v: float) -> str:
    return format(float(v), ".6g")


def _ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if not math.isfinite(lo) or not math.isfinite(hi):
        return []
    if hi == lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 5, 10):
        step = mult * mag
        if raw <= step:
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + step * 1e-9:
        out.append(0.0 if abs(t) < step * 1e-9 else t)
        t += step
    return out


class _Frame:
    """Maps data coordinates into the fixed plot rectangle."""

    def __init__(self, xlo, xhi, ylo, yhi):
        if xhi == xlo:
            xhi = xlo + 1.0
        if yhi == ylo:
            yhi = ylo + 1.0
        self.xlo, self.xhi = xlo, xhi
        self.ylo, self.yhi = ylo, yhi

    def px(self, x):
        span = _W - _ML - _MR
        return _ML + (x - self.xlo) / (self.xhi - self.xlo) * span

    def py(self, y):
        span = _H - _MT - _MB
        return _H - _MB - (y - self.ylo) / (self.yhi - self.ylo) * span


def _chrome(frame, title, xlabel, ylabel) -> list[str]:
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2}" y="24" text-anchor="middle" font-size="15">'
        f"{_esc(title)}</text>",
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" '
        f'height="{_H - _MT - _MB}" fill="none" stroke="#333"/>',
    ]
    for t in _ticks(frame.xlo, frame.xhi):
        px = frame.px(t)
        parts.append(
            f'<line x1="{_fnum(px)}" y1="{_H - _MB}" x2="{_fnum(px)}" '
            f'y2="{_H - _MB + 5}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{_fnum(px)}" y="{_H - _MB + 18}" text-anchor="middle">'
            f"{_fnum(t)}</text>"
        )
    for t in _ticks(frame.ylo, frame.yhi):
        py = frame.py(t)
        parts.append(
            f'<line x1="{_ML - 5}" y1="{_fnum(py)}" x2="{_ML}" '
            f'y2="{_fnum(py)}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{_ML - 8}" y="{_fnum(py + 4)}" text-anchor="end">'
            f"{_fnum(t)}</text>"
        )
    parts.append(
        f'<text x="{_W / 2}" y="{_H - 12}" text-anchor="middle">'
        f"{_esc(xlabel)}</text>"
    )
    parts.append(
        f'<text x="16" y="{_H / 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {_H / 2})">{_esc(ylabel)}</text>'
    )
    return parts


def _legend(parts, names) -> None:
    x0 = _ML + 12
    y0 = _MT + 14
    for i, name in enumerate(names):
        color = _PALETTE[i % len(_PALETTE)]
        y = y0 + 16 * i
        parts.append(
            f'<line x1="{x0}" y1="{y - 4}" x2="{x0 + 22}" y2="{y - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{x0 + 28}" y="{y}">{_esc(name)}</text>')


def line_chart(series, title="", xlabel="", ylabel="") -> str:
    """Line chart of ``[(name, [(x, y), ...]), ...]``; NaN points are skipped."""
    pts = [
        (x, y)
        for _, p in series
        for x, y in p
        if math.isfinite(x) and math.isfinite(y)
    ]
    if not pts:
        raise ValueError("line chart has no finite points")
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    pad = (max(ys) - min(ys)) * 0.05 or abs(max(ys)) * 0.05 or 0.5
    frame = _Frame(min(xs), max(xs), min(ys) - pad, max(ys) + pad)
    parts = _chrome(frame, title, xlabel, ylabel)
    for i, (name, p) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(
            f"{_fnum(frame.px(x))},{_fnum(frame.py(y))}"
            for x, y in p
            if math.isfinite(x) and math.isfinite(y)
        )
        if coords:
            parts.append(
                f'<polyline points="{coords}" fill="none" stroke="{color}" '
                f'stroke-width="2"/>'
            )
    _legend(parts, [name for name, _ in series])
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def histogram_panel(panels, title="", xlabel="", max_bins=60) -> str:
    """Step-outline histograms, one per named series.

    ``panels`` is ``[(name, [(bin_lo, bin_hi, count), ...]), ...]``; the
    degenerate (0, 0, n) row, the exact-zero spike, is drawn as a marker at
    x = 0.  Only the first ``max_bins`` positive bins are drawn.
    """
    if not panels:
        raise ValueError("histogram panel has no series")
    xmax = 0.0
    ymax = 0.0
    for _, rows in panels:
        for lo, hi, cval in rows[:max_bins + 1]:
            xmax = max(xmax, hi)
            ymax = max(ymax, cval)
    frame = _Frame(0.0, xmax or 1.0, 0.0, ymax * 1.05 or 1.0)
    parts = _chrome(frame, title, xlabel, "edge count")
    for i, (name, rows) in enumerate(panels):
        color = _PALETTE[i % len(_PALETTE)]
        coords = []
        for lo, hi, cval in rows[: max_bins + 1]:
            if lo == hi:  # zero spike
                parts.append(
                    f'<circle cx="{_fnum(frame.px(0.0))}" '
                    f'cy="{_fnum(frame.py(cval))}" r="4" fill="{color}"/>'
                )
                continue
            py = _fnum(frame.py(cval))
            coords.append(f"{_fnum(frame.px(lo))},{py}")
            coords.append(f"{_fnum(frame.px(hi))},{py}")
        if coords:
            parts.append(
                f'<polyline points="{" ".join(coords)}" fill="none" '
                f'stroke="{color}" stroke-width="1.5"/>'
            )
    _legend(parts, [name for name, _ in panels])
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
