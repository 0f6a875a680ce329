"""Model-PSD figure data: log-log curves per bit with corner-frequency markers.

CSV is the contract; the SVG rendering is a minimal hand-rolled log-log plot
(polylines, axes, marker lines) to keep the artifact dependency-light.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from ..kinetics import ConcentrationPair
from ..spectral import total_psd, characteristic_frequencies
from .scenario import Scenario


@dataclass(frozen=True)
class PsdFigure:
    f: np.ndarray
    s_bit0: np.ndarray
    s_bit1: np.ndarray
    markers: tuple[tuple[str, float], ...]


def emit_psd_figure(scn: Scenario, n_points: int = 240,
                    f_min: float | None = None, f_max: float | None = None) -> PsdFigure:
    """Evaluate the total model PSD for both bits at the mean interference level."""
    params = scn.psd_params()
    interferer = scn.interferer()
    if f_min is None:
        f_min = 1.0 / (scn.n_samples * scn.dt)
    if f_max is None:
        f_max = 1.0 / (2.0 * scn.dt)
    f = np.logspace(math.log10(f_min), math.log10(f_max), n_points)
    curves = []
    markers = []
    for bit in (0, 1):
        lam = ConcentrationPair(c_m=scn.received(bit), c_i=interferer.mu_ci)
        curves.append(total_psd(f, params.at(lam)))
        f_hi, f_lo = characteristic_frequencies(lam, scn.kin_m, scn.kin_i)
        markers.append((f"f_ch_m_bit{bit}", f_hi))
        markers.append((f"f_ch_i_bit{bit}", f_lo))
    return PsdFigure(f=f, s_bit0=curves[0], s_bit1=curves[1], markers=tuple(markers))


def figure_to_csv(fig: PsdFigure) -> str:
    """Data rows plus one labeled row per marker frequency."""
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    writer.writerow(["f [Hz]", "S_bit0 [A^2/Hz]", "S_bit1 [A^2/Hz]", "marker"])
    for k in range(fig.f.size):
        writer.writerow([format(fig.f[k], ".12g"), format(fig.s_bit0[k], ".12g"),
                         format(fig.s_bit1[k], ".12g"), ""])
    for label, freq in fig.markers:
        writer.writerow([format(freq, ".12g"), "", "", label])
    return buf.getvalue()


def _log_path(f, s, x0, y0, w, h, fr, sr) -> str:
    lf0, lf1 = math.log10(fr[0]), math.log10(fr[1])
    ls0, ls1 = math.log10(sr[0]), math.log10(sr[1])
    pts = []
    for fx, sx in zip(f, s):
        px = x0 + (math.log10(fx) - lf0) / (lf1 - lf0) * w
        py = y0 + h - (math.log10(sx) - ls0) / (ls1 - ls0) * h
        pts.append(f"{px:.2f},{py:.2f}")
    return " ".join(pts)


def figure_to_svg(fig: PsdFigure, width: int = 640, height: int = 420) -> str:
    """Minimal log-log SVG: two curves, dashed marker verticals, decade ticks."""
    x0, y0 = 70.0, 20.0
    w, h = width - 100.0, height - 80.0
    fr = (float(fig.f[0]), float(fig.f[-1]))
    smin = min(fig.s_bit0.min(), fig.s_bit1.min())
    smax = max(fig.s_bit0.max(), fig.s_bit1.max())
    sr = (10 ** math.floor(math.log10(smin)), 10 ** math.ceil(math.log10(smax)))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect x="{x0}" y="{y0}" width="{w}" height="{h}" fill="white" stroke="black"/>',
    ]
    lf0, lf1 = math.log10(fr[0]), math.log10(fr[1])
    for d in range(math.ceil(lf0), math.floor(lf1) + 1):
        px = x0 + (d - lf0) / (lf1 - lf0) * w
        parts.append(f'<line x1="{px:.2f}" y1="{y0 + h}" x2="{px:.2f}" y2="{y0 + h + 6}" stroke="black"/>')
        parts.append(f'<text x="{px:.2f}" y="{y0 + h + 22}" font-size="11" text-anchor="middle">1e{d}</text>')
    ls0, ls1 = math.log10(sr[0]), math.log10(sr[1])
    step = max(1, round((ls1 - ls0) / 6))
    for d in range(math.ceil(ls0), math.floor(ls1) + 1, step):
        py = y0 + h - (d - ls0) / (ls1 - ls0) * h
        parts.append(f'<line x1="{x0 - 6}" y1="{py:.2f}" x2="{x0}" y2="{py:.2f}" stroke="black"/>')
        parts.append(f'<text x="{x0 - 10}" y="{py + 4:.2f}" font-size="11" text-anchor="end">1e{d}</text>')
    for label, freq in fig.markers:
        if fr[0] <= freq <= fr[1]:
            px = x0 + (math.log10(freq) - lf0) / (lf1 - lf0) * w
            parts.append(f'<line x1="{px:.2f}" y1="{y0}" x2="{px:.2f}" y2="{y0 + h}" '
                         'stroke="gray" stroke-dasharray="4 3"/>')
            parts.append(f'<text x="{px + 3:.2f}" y="{y0 + 12}" font-size="10" fill="gray">{label}</text>')
    for s, color, label in ((fig.s_bit0, "steelblue", "bit 0"), (fig.s_bit1, "firebrick", "bit 1")):
        parts.append(f'<polyline points="{_log_path(fig.f, s, x0, y0, w, h, fr, sr)}" '
                     f'fill="none" stroke="{color}" stroke-width="1.5"/>')
    parts.append(f'<text x="{x0 + w - 70}" y="{y0 + 18}" font-size="12" fill="steelblue">bit 0</text>')
    parts.append(f'<text x="{x0 + w - 70}" y="{y0 + 34}" font-size="12" fill="firebrick">bit 1</text>')
    parts.append(f'<text x="{x0 + w / 2}" y="{height - 12}" font-size="12" text-anchor="middle">f [Hz]</text>')
    parts.append(f'<text x="16" y="{y0 + h / 2}" font-size="12" transform="rotate(-90 16 {y0 + h / 2})" '
                 'text-anchor="middle">S(f) [A^2/Hz]</text>')
    parts.append("</svg>")
    return "\n".join(parts)
