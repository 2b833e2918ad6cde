"""Minimal dependency-free SVG charts.

Coordinates are written with a fixed number of decimals so the output is
byte-stable across platforms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

__all__ = ["Axis", "Chart"]

WIDTH, HEIGHT = 520, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 30, 55
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def _f(v: float) -> str:
    return f"{v:.2f}"


@dataclass
class Axis:
    lo: float
    hi: float
    log: bool = False
    label: str = ""

    def __post_init__(self):
        if self.log and self.lo <= 0:
            raise ValueError("log axis needs a positive lower bound")
        if self.hi <= self.lo:
            self.hi = self.lo + (self.lo if self.log else 1.0)

    def frac(self, v: float) -> float:
        if self.log:
            return (math.log10(v) - math.log10(self.lo)) / (math.log10(self.hi) - math.log10(self.lo))
        return (v - self.lo) / (self.hi - self.lo)

    def ticks(self) -> list[tuple[float, str]]:
        if self.log:
            first = math.floor(math.log10(self.lo))
            last = math.ceil(math.log10(self.hi))
            out = []
            for e in range(first, last + 1):
                v = 10.0 ** e
                if self.lo <= v <= self.hi:
                    out.append((v, f"{v:g}"))
            return out
        step = _nice_step((self.hi - self.lo) / 5)
        start = math.ceil(self.lo / step) * step
        out, v = [], start
        while v <= self.hi + 1e-12:
            out.append((v, f"{round(v, 10):g}"))
            v += step
        return out


def _nice_step(raw: float) -> float:
    exp = math.floor(math.log10(raw))
    base = raw / 10 ** exp
    for m in (1, 2, 5, 10):
        if base <= m:
            return m * 10 ** exp
    return 10 ** (exp + 1)


@dataclass
class Chart:
    x: Axis
    y: Axis
    title: str = ""
    _items: list[str] = field(default_factory=list)
    _legend: list[tuple[str, str]] = field(default_factory=list)

    def _px(self, vx: float, vy: float) -> tuple[float, float]:
        pw = WIDTH - MARGIN_L - MARGIN_R
        ph = HEIGHT - MARGIN_T - MARGIN_B
        return MARGIN_L + self.x.frac(vx) * pw, HEIGHT - MARGIN_B - self.y.frac(vy) * ph

    def points(self, xs, ys, color: str = PALETTE[0], r: float = 1.6, label: str | None = None):
        parts = []
        for vx, vy in zip(xs, ys):
            px, py = self._px(vx, vy)
            parts.append(f'<circle cx="{_f(px)}" cy="{_f(py)}" r="{r}"/>')
        self._items.append(f'<g fill="{color}" fill-opacity="0.7">' + "".join(parts) + "</g>")
        if label:
            self._legend.append((label, color))

    def squares(self, xs, ys, color: str = "#000000", size: float = 7.0):
        parts = []
        for vx, vy in zip(xs, ys):
            px, py = self._px(vx, vy)
            parts.append(
                f'<rect x="{_f(px - size / 2)}" y="{_f(py - size / 2)}" width="{size}" height="{size}"/>'
            )
        self._items.append(f'<g fill="none" stroke="{color}" stroke-width="1.5">' + "".join(parts) + "</g>")

    def line(self, xs, ys, color: str = "#444444", dash: bool = False, label: str | None = None):
        pts = " ".join(f"{_f(px)},{_f(py)}" for px, py in (self._px(a, b) for a, b in zip(xs, ys)))
        extra = ' stroke-dasharray="5,4"' if dash else ""
        self._items.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{extra} points="{pts}"/>')
        if label:
            self._legend.append((label, color))

    def bars(self, lefts, rights, heights, color: str = PALETTE[0], label: str | None = None,
             opacity: float = 0.55):
        parts = []
        for a, b, h in zip(lefts, rights, heights):
            x0, y0 = self._px(a, h)
            x1, y1 = self._px(b, self.y.lo)
            parts.append(
                f'<rect x="{_f(x0)}" y="{_f(y0)}" width="{_f(max(0.0, x1 - x0))}" height="{_f(max(0.0, y1 - y0))}"/>'
            )
        self._items.append(f'<g fill="{color}" fill-opacity="{opacity}">' + "".join(parts) + "</g>")
        if label:
            self._legend.append((label, color))

    def _axes(self) -> list[str]:
        out = []
        x0, y0 = MARGIN_L, HEIGHT - MARGIN_B
        x1, y1 = WIDTH - MARGIN_R, MARGIN_T
        out.append(f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" fill="none" stroke="#000000"/>')
        for v, text in self.x.ticks():
            px, _ = self._px(v, self.y.lo)
            out.append(f'<line x1="{_f(px)}" y1="{y0}" x2="{_f(px)}" y2="{y0 + 5}" stroke="#000000"/>')
            out.append(f'<text x="{_f(px)}" y="{y0 + 18}" text-anchor="middle">{escape(text)}</text>')
        for v, text in self.y.ticks():
            _, py = self._px(self.x.lo, v)
            out.append(f'<line x1="{x0 - 5}" y1="{_f(py)}" x2="{x0}" y2="{_f(py)}" stroke="#000000"/>')
            out.append(f'<text x="{x0 - 8}" y="{_f(py + 4)}" text-anchor="end">{escape(text)}</text>')
        out.append(f'<text x="{(x0 + x1) / 2}" y="{HEIGHT - 12}" text-anchor="middle">{escape(self.x.label)}</text>')
        out.append(
            f'<text x="16" y="{(y0 + y1) / 2}" text-anchor="middle" '
            f'transform="rotate(-90 16 {(y0 + y1) / 2})">{escape(self.y.label)}</text>'
        )
        if self.title:
            out.append(f'<text x="{WIDTH / 2}" y="18" text-anchor="middle" font-weight="bold">{escape(self.title)}</text>')
        for i, (label, color) in enumerate(self._legend):
            ly = MARGIN_T + 14 + 16 * i
            out.append(f'<rect x="{x0 + 10}" y="{ly - 9}" width="10" height="10" fill="{color}"/>')
            out.append(f'<text x="{x0 + 26}" y="{ly}">{escape(label)}</text>')
        return out

    def render(self) -> str:
        body = "\n".join(self._items + self._axes())
        return (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">\n'
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>\n'
            f"{body}\n</svg>\n"
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.render())
