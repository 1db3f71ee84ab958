"""Static SVG drawings of cells, flow overlays and lattice tilings."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

GENERATOR_PREFIX = "<!-- generator: honeycomb "
PALETTE = ("#f4d35e", "#9bc1bc", "#ed6a5a")
STROKES = ("#1b998b", "#e9c46a", "#d1495b", "#222222")


def _fmt(x: float) -> str:
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _points(v: np.ndarray) -> str:
    # y is flipped so the picture has the usual orientation
    return " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in v)


def _document(body: list[str], polys: list[np.ndarray], version: str, title: str) -> str:
    allv = np.vstack(polys)
    lo, hi = allv.min(axis=0), allv.max(axis=0)
    pad = 0.05 * float(np.max(hi - lo))
    x0, y0 = lo[0] - pad, -hi[1] - pad
    w, h = hi[0] - lo[0] + 2 * pad, hi[1] - lo[1] + 2 * pad
    stroke = _fmt(0.004 * max(w, h))
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"{GENERATOR_PREFIX}{escape(version)} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}" '
        f'width="600" height="{_fmt(600 * h / w)}">',
        f"<title>{escape(title)}</title>",
        f'<g stroke-width="{stroke}" stroke-linejoin="round">',
    ]
    return "\n".join(head + body + ["</g>", "</svg>"]) + "\n"


def tiling_svg(cells: list[tuple[tuple[int, int], np.ndarray]], version: str) -> str:
    """One polygon per lattice translate, filled by the 3-colouring class (m - n) mod 3."""
    body = []
    for (m, n), v in cells:
        fill = PALETTE[(m - n) % 3]
        body.append(f'<polygon data-m="{m}" data-n="{n}" fill="{fill}" stroke="#333333" '
                    f'points="{_points(v)}"/>')
    return _document(body, [v for _, v in cells], version, f"lattice tiling, {len(cells)} cells")


def flow_svg(layers: list[tuple[str, np.ndarray]], version: str) -> str:
    """Outline overlay of labelled cells (e.g. H_0, H_1, H_n, H*)."""
    body = []
    for k, (label, v) in enumerate(layers):
        color = STROKES[k % len(STROKES)]
        dash = ' stroke-dasharray="0.02,0.02"' if label == "H*" else ""
        body.append(f'<polygon data-label="{escape(label)}" fill="none" stroke="{color}"{dash} '
                    f'points="{_points(v)}"/>')
    return _document(body, [v for _, v in layers], version, "Steiner flow overlay")
