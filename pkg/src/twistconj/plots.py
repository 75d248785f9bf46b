"""Figure emission: SVG overlays of reference versus sampled hulls, and
matplotlib renderings of the same data for the report path."""

from __future__ import annotations

from pathlib import Path

from .hull import Polygon2

_VIEW = 600.0
_LO, _HI = -0.05, 1.10


def _to_view(p) -> tuple[float, float]:
    sx = (p[0] - _LO) / (_HI - _LO) * _VIEW
    sy = _VIEW - (p[1] - _LO) / (_HI - _LO) * _VIEW
    return sx, sy


def _path(points, close=True) -> str:
    cmds = [f"{'M' if i == 0 else 'L'} {x:.2f} {y:.2f}" for i, (x, y) in enumerate(map(_to_view, points))]
    return " ".join(cmds) + (" Z" if close else "")


def write_overlay_svg(path, reference: Polygon2, points, sampled_hull: Polygon2 | None = None,
                      title: str = "") -> None:
    """Reference polygon in outline, cloud samples as dots, sampled hull dashed."""
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_VIEW:.0f} {_VIEW:.0f}">',
        f'<rect width="{_VIEW:.0f}" height="{_VIEW:.0f}" fill="white"/>',
    ]
    if title:
        parts.append(f'<text x="10" y="20" font-size="14" font-family="sans-serif">{title}</text>')
    for p in points:
        x, y = _to_view(p)
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="1.4" fill="#4477aa" fill-opacity="0.35"/>')
    if sampled_hull is not None and len(sampled_hull.vertices) > 1:
        parts.append(
            f'<path d="{_path(sampled_hull.vertices)}" fill="none" '
            'stroke="#228833" stroke-width="1.5" stroke-dasharray="6 4"/>'
        )
    parts.append(
        f'<path d="{_path(reference.vertices)}" fill="none" stroke="#cc3311" stroke-width="2"/>'
    )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")


def render_overlay_png(path, reference: Polygon2, points, sampled_hull: Polygon2 | None = None,
                       title: str = "", xlabel: str = "first root pairing",
                       ylabel: str = "second root pairing") -> None:
    """matplotlib rendering of a slice overlay (reference, samples, hull)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.2, 5.2))
    if points is not None and len(points) > 0:
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        ax.scatter(xs, ys, s=2.0, alpha=0.25, color="#4477aa", label="samples", rasterized=True)
    if sampled_hull is not None and len(sampled_hull.vertices) > 1:
        hx, hy = zip(*(list(sampled_hull.vertices) + [sampled_hull.vertices[0]]))
        ax.plot(hx, hy, "--", color="#228833", lw=1.4, label="sampled hull")
    rx, ry = zip(*(list(reference.vertices) + [reference.vertices[0]]))
    ax.plot(rx, ry, "-", color="#cc3311", lw=1.8, label="reference")
    ax.set_xlim(_LO, _HI)
    ax.set_ylim(_LO, _HI)
    ax.set_aspect("equal")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title, fontsize=11)
    ax.legend(loc="upper right", fontsize=8, framealpha=0.9)
    fig.tight_layout()
    fig.savefig(path, dpi=140)
    plt.close(fig)
