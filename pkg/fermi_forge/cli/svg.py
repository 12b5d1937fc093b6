import os
from typing import Optional, Sequence, Union
from xml.sax.saxutils import escape

import numpy as np

from fermi_forge.cgo import DecayFit

WIDTH, HEIGHT = 480, 360
MARGIN = 60


def _decades(low: float, high: float) -> np.ndarray:
    return 10.0 ** np.arange(np.floor(low), np.ceil(high) + 1)


class _LogAxes:
    def __init__(self, x: np.ndarray, y: np.ndarray):
        self.x_lim = self._limits(np.log10(x))
        self.y_lim = self._limits(np.log10(y))

    @staticmethod
    def _limits(values: np.ndarray) -> tuple[float, float]:
        low, high = float(values.min()), float(values.max())
        pad = max(0.05 * (high - low), 0.1)
        return low - pad, high + pad

    def to_px(self, x, y) -> tuple[np.ndarray, np.ndarray]:
        (x0, x1), (y0, y1) = self.x_lim, self.y_lim
        span_x, span_y = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN
        px = MARGIN + (np.log10(x) - x0) / (x1 - x0) * span_x
        py = HEIGHT - MARGIN - (np.log10(y) - y0) / (y1 - y0) * span_y
        return px, py


def loglog_svg(
    h: Sequence[float],
    values: Sequence[float],
    fit: Optional[DecayFit] = None,
    title: str = "",
    ylabel: str = "value",
) -> str:
    """
    Renders a log-log plot of values against h as a standalone SVG
    document: a framed axis box with decade ticks, one marker per positive
    finite point and the fitted power law, when given, as a line.
    """
    h = np.asarray(h, dtype=float)
    values = np.asarray(values, dtype=float)
    keep = np.isfinite(values) & (values > 0) & (h > 0)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="{MARGIN / 2}" text-anchor="middle" '
        f'font-size="14">{escape(title)}</text>',
    ]

    if keep.any():
        axes = _LogAxes(h[keep], values[keep])
        parts.extend(_frame(axes, ylabel))

        px, py = axes.to_px(h[keep], values[keep])
        for x, y in zip(px, py):
            parts.append(
                f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="black"/>'
            )

        if fit is not None:
            ends = np.array([h[keep].min(), h[keep].max()])
            lx, ly = axes.to_px(ends, fit.constant * ends**fit.slope)
            parts.append(
                f'<line x1="{lx[0]:.2f}" y1="{ly[0]:.2f}" x2="{lx[1]:.2f}" '
                f'y2="{ly[1]:.2f}" stroke="red"/>'
            )
            parts.append(
                f'<text x="{WIDTH - MARGIN}" y="{MARGIN - 6}" '
                f'text-anchor="end" font-size="12" fill="red">'
                f"slope {fit.slope:.3f}</text>"
            )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _frame(axes: _LogAxes, ylabel: str) -> list[str]:
    left, right = MARGIN, WIDTH - MARGIN
    top, bottom = MARGIN, HEIGHT - MARGIN

    parts = [
        f'<rect x="{left}" y="{top}" width="{right - left}" '
        f'height="{bottom - top}" fill="none" stroke="black"/>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 15}" text-anchor="middle" '
        f'font-size="12">h</text>',
        f'<text x="15" y="{HEIGHT / 2}" font-size="12" '
        f'transform="rotate(-90 15 {HEIGHT / 2})" text-anchor="middle">'
        f"{escape(ylabel)}</text>",
    ]

    for tick in _decades(*axes.x_lim):
        x, _ = axes.to_px(tick, 1.0)
        if left <= x <= right:
            parts.append(
                f'<text x="{x:.2f}" y="{bottom + 16}" text-anchor="middle" '
                f'font-size="10">{tick:g}</text>'
            )

    for tick in _decades(*axes.y_lim):
        _, y = axes.to_px(1.0, tick)
        if top <= y <= bottom:
            parts.append(
                f'<text x="{left - 4}" y="{y:.2f}" text-anchor="end" '
                f'font-size="10">{tick:g}</text>'
            )

    return parts


def write_loglog_svg(path: Union[str, os.PathLike], *args, **kwargs):
    with open(path, "w") as fh:
        fh.write(loglog_svg(*args, **kwargs))
