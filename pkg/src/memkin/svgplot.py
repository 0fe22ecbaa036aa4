"""Minimal SVG emitters (line plot and heatmap) with no renderer
dependency.  Plots are a convenience; CSV is the contract.
"""

import numpy as np

_W, _H, _PAD = 720, 480, 60


def _scale(vals, lo, hi, out_lo, out_hi):
    vals = np.asarray(vals, dtype=float)
    span = hi - lo if hi > lo else 1.0
    return out_lo + (vals - lo) / span * (out_hi - out_lo)


def line_plot_svg(x, y, xlabel="", ylabel="", logy=False):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if logy:
        y = np.log10(np.clip(y, 1e-300, None))
        ylabel = f"log10({ylabel})" if ylabel else "log10"
    xs = _scale(x, x.min(), x.max(), _PAD, _W - _PAD)
    ys = _scale(y, y.min(), y.max(), _H - _PAD, _PAD)
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(xs, ys))
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}">'
        f'<rect width="{_W}" height="{_H}" fill="white"/>'
        f'<polyline points="{pts}" fill="none" stroke="#1f6fb2" stroke-width="1.5"/>'
        f'<line x1="{_PAD}" y1="{_H-_PAD}" x2="{_W-_PAD}" y2="{_H-_PAD}" stroke="black"/>'
        f'<line x1="{_PAD}" y1="{_PAD}" x2="{_PAD}" y2="{_H-_PAD}" stroke="black"/>'
        f'<text x="{_W//2}" y="{_H-15}" text-anchor="middle" font-size="14">{xlabel}</text>'
        f'<text x="18" y="{_H//2}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 18 {_H//2})">{ylabel}</text>'
        "</svg>\n"
    )


def heatmap_svg(values, xlabel="", ylabel=""):
    """Grayscale heatmap of a 2-D array (row 0 at the bottom)."""
    a = np.asarray(values, dtype=float)
    finite = a[np.isfinite(a)]
    lo = finite.min() if finite.size else 0.0
    hi = finite.max() if finite.size else 1.0
    span = hi - lo if hi > lo else 1.0
    ny, nx = a.shape
    cw = (_W - 2 * _PAD) / nx
    ch = (_H - 2 * _PAD) / ny
    cells = []
    for i in range(ny):
        for j in range(nx):
            v = a[i, j]
            t = 1.0 if not np.isfinite(v) else (v - lo) / span
            shade = int(round(255 * (1.0 - t)))
            x0 = _PAD + j * cw
            y0 = _H - _PAD - (i + 1) * ch
            cells.append(f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{cw:.2f}" '
                         f'height="{ch:.2f}" fill="rgb({shade},{shade},{shade})"/>')
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}">'
        f'<rect width="{_W}" height="{_H}" fill="white"/>'
        + "".join(cells)
        + f'<text x="{_W//2}" y="{_H-15}" text-anchor="middle" font-size="14">{xlabel}</text>'
        f'<text x="18" y="{_H//2}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 18 {_H//2})">{ylabel}</text>'
        "</svg>\n"
    )
