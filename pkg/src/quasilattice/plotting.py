"""Standalone SVG stem plots for spectra; no renderer dependencies."""

from __future__ import annotations

from typing import Sequence

_W, _H = 880.0, 440.0
_ML, _MR, _MT, _MB = 70.0, 20.0, 20.0, 50.0


def _fmt(v: float) -> str:
    return "%.6g" % v


def render_stem_svg(
    peaks: Sequence[tuple[float, float]],
    k_max: float,
    title: str = "",
) -> str:
    """Vertical stems at wave numbers with height = intensity."""
    top = max((i for _, i in peaks), default=1.0)
    top = top if top > 0 else 1.0
    y_top = top * 1.05
    px_w = _W - _ML - _MR
    px_h = _H - _MT - _MB

    def xpix(k: float) -> float:
        return _ML + (k + k_max) / (2.0 * k_max) * px_w

    def ypix(i: float) -> float:
        return _MT + (1.0 - i / y_top) * px_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(_W)}" '
        f'height="{_fmt(_H)}" viewBox="0 0 {_fmt(_W)} {_fmt(_H)}">',
        f'<rect width="{_fmt(_W)}" height="{_fmt(_H)}" fill="white"/>',
    ]
    base = ypix(0.0)
    parts.append(
        f'<line x1="{_fmt(_ML)}" y1="{_fmt(base)}" x2="{_fmt(_W - _MR)}" '
        f'y2="{_fmt(base)}" stroke="black" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{_fmt(_ML)}" y1="{_fmt(_MT)}" x2="{_fmt(_ML)}" '
        f'y2="{_fmt(base)}" stroke="black" stroke-width="1"/>'
    )
    # x ticks every 0.5 for small ranges, every 1 otherwise
    step = 0.5 if k_max <= 4 else 1.0
    t = -k_max
    while t <= k_max + 1e-9:
        x = xpix(t)
        parts.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(base)}" x2="{_fmt(x)}" '
            f'y2="{_fmt(base + 5)}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(base + 20)}" font-size="12" '
            f'text-anchor="middle">{_fmt(t)}</text>'
        )
        t += step
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        iv = frac * y_top
        y = ypix(iv)
        parts.append(
            f'<line x1="{_fmt(_ML - 5)}" y1="{_fmt(y)}" x2="{_fmt(_ML)}" '
            f'y2="{_fmt(y)}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(_ML - 8)}" y="{_fmt(y + 4)}" font-size="12" '
            f'text-anchor="end">{_fmt(iv)}</text>'
        )
    for k, inten in peaks:
        x = xpix(k)
        parts.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(base)}" x2="{_fmt(x)}" '
            f'y2="{_fmt(ypix(inten))}" stroke="crimson" stroke-width="1.5"/>'
        )
    if title:
        parts.append(
            f'<text x="{_fmt(_W / 2)}" y="{_fmt(_MT - 5)}" font-size="14" '
            f'text-anchor="middle">{title}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
