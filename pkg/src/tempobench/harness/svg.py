"""Minimal deterministic SVG plotting: text in, text out."""

import math
from xml.sax.saxutils import quoteattr

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")
WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=170, top=40, bottom=55)


def _fmt(v):
    return f"{v:.2f}"


class Canvas:
    def __init__(self, title, x_range, y_range, x_label="", y_label="", log_y=False, invert_y=False):
        self.parts = []
        self.x0, self.x1 = x_range
        self.y0, self.y1 = y_range
        self.log_y = log_y
        self.invert_y = invert_y
        self.title = title
        self.x_label = x_label
        self.y_label = y_label

    def px(self, x):
        span = (self.x1 - self.x0) or 1.0
        return MARGIN["left"] + (x - self.x0) / span * (WIDTH - MARGIN["left"] - MARGIN["right"])

    def py(self, y):
        if self.log_y:
            y, lo, hi = math.log10(max(y, 1e-300)), math.log10(self.y0), math.log10(self.y1)
        else:
            lo, hi = self.y0, self.y1
        frac = (y - lo) / ((hi - lo) or 1.0)
        if self.invert_y:
            frac = 1.0 - frac
        return HEIGHT - MARGIN["bottom"] - frac * (HEIGHT - MARGIN["top"] - MARGIN["bottom"])

    def add(self, element):
        self.parts.append(element)

    def line(self, x1, y1, x2, y2, color="#000", width=1.0, dash=None, cls=None, data=None):
        attrs = f'x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" stroke="{color}" stroke-width="{width}"'
        if dash:
            attrs += f' stroke-dasharray="{dash}"'
        self.add(f"<line {attrs}{_extra(cls, data)}/>")

    def polyline(self, points, color, cls=None, data=None):
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
        self.add(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"{_extra(cls, data)}/>')

    def circle(self, x, y, color, r=3.0, cls=None, data=None):
        self.add(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}" fill="{color}"{_extra(cls, data)}/>')

    def text(self, x, y, s, anchor="start", size=11, rotate=None):
        transform = f' transform="rotate({rotate} {_fmt(x)} {_fmt(y)})"' if rotate is not None else ""
        self.add(f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}" text-anchor="{anchor}"{transform}>{_escape(s)}</text>')

    def axes(self, x_ticks, y_ticks):
        left, bottom = MARGIN["left"], HEIGHT - MARGIN["bottom"]
        right, top = WIDTH - MARGIN["right"], MARGIN["top"]
        self.line(left, bottom, right, bottom)
        self.line(left, bottom, left, top)
        for t in x_ticks:
            self.line(self.px(t), bottom, self.px(t), bottom + 4)
            self.text(self.px(t), bottom + 16, _tick(t), anchor="middle")
        for t in y_ticks:
            self.line(left - 4, self.py(t), left, self.py(t))
            self.text(left - 6, self.py(t) + 4, _tick(t), anchor="end")
        self.text(WIDTH / 2, 22, self.title, anchor="middle", size=14)
        self.text((left + right) / 2, HEIGHT - 15, self.x_label, anchor="middle")
        self.text(18, (top + bottom) / 2, self.y_label, anchor="middle", rotate=-90)

    def legend(self, names):
        x = WIDTH - MARGIN["right"] + 12
        for i, name in enumerate(names):
            y = MARGIN["top"] + 16 * i + 8
            self.line(x, y - 4, x + 18, y - 4, color=PALETTE[i % len(PALETTE)], width=2)
            self.text(x + 24, y, name)

    def render(self):
        head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">'
        return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>'] + self.parts + ["</svg>", ""])


def _extra(cls, data):
    out = f' class="{cls}"' if cls else ""
    for key, value in (data or {}).items():
        out += f" data-{key}={quoteattr(str(value))}"
    return out


def _escape(s):
    return str(s).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _tick(t):
    if t != 0 and (abs(t) < 1e-2 or abs(t) >= 1e4):
        return f"{t:.0e}"
    return f"{t:g}"
