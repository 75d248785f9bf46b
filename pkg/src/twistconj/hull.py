"""2D convex geometry: hulls of sampled slices, reference polygons, metrics.

Hull orientation predicates run in exact rational arithmetic (floats convert
to Fraction losslessly), so the chain is exactly convex; a 1e-12 collapse
pass merges vertices that are only float-noise apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import hypot

import numpy as np

from . import exact
from .errors import ValidationError

COLLINEAR_EPS = 1e-12


@dataclass(frozen=True)
class Polygon2:
    """Convex polygon (counterclockwise vertices) with a derived H-representation."""

    vertices: tuple[tuple[float, float], ...]
    kind: str  # "polygon" | "segment" | "point"

    @property
    def halfspaces(self) -> list[tuple[tuple[float, float], float]]:
        """Outward halfspaces (n, c): n . x <= c.  Degenerate shapes give slabs."""
        v = self.vertices
        if self.kind == "point":
            (x, y) = v[0]
            return [((1.0, 0.0), x), ((-1.0, 0.0), -x), ((0.0, 1.0), y), ((0.0, -1.0), -y)]
        if self.kind == "segment":
            pairs = [(v[0], v[1]), (v[1], v[0])]
        else:
            pairs = [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]
        out = []
        for (x1, y1), (x2, y2) in pairs:
            n = (y2 - y1, x1 - x2)  # outward for a CCW chain
            out.append((n, n[0] * x1 + n[1] * y1))
        if self.kind == "segment":
            # close the slab at the endpoints
            (x1, y1), (x2, y2) = v[0], v[1]
            d = (x2 - x1, y2 - y1)
            out.append((d, d[0] * x2 + d[1] * y2))
            out.append(((-d[0], -d[1]), -(d[0] * x1 + d[1] * y1)))
        return out

    def area(self) -> float:
        if self.kind != "polygon":
            return 0.0
        v = self.vertices
        s = 0.0
        for i in range(len(v)):
            x1, y1 = v[i]
            x2, y2 = v[(i + 1) % len(v)]
            s += x1 * y2 - x2 * y1
        return s / 2.0

    def violation(self, p) -> float:
        """Largest normalized halfspace violation; <= 0 means p is inside."""
        x, y = float(p[0]), float(p[1])
        worst = -np.inf
        for (nx, ny), c in self.halfspaces:
            nn = hypot(nx, ny)
            worst = max(worst, (nx * x + ny * y - c) / nn)
        return worst

    def distance(self, p) -> float:
        """Euclidean distance from a point to the polygon (0 inside)."""
        if self.violation(p) <= 0:
            return 0.0
        v = self.vertices
        if self.kind == "point":
            return hypot(p[0] - v[0][0], p[1] - v[0][1])
        if self.kind == "segment":
            return _segment_distance(p, v[0], v[1])
        return min(
            _segment_distance(p, v[i], v[(i + 1) % len(v)]) for i in range(len(v))
        )


def _segment_distance(p, a, b) -> float:
    px, py = p[0] - a[0], p[1] - a[1]
    dx, dy = b[0] - a[0], b[1] - a[1]
    dd = dx * dx + dy * dy
    t = 0.0 if dd == 0 else min(1.0, max(0.0, (px * dx + py * dy) / dd))
    return hypot(px - t * dx, py - t * dy)


def _cross_sign(o, a, b) -> int:
    """Sign of the cross product (a - o) x (b - o); exact when the float value is ambiguous."""
    cf = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    if abs(cf) > 1e-12:
        return 1 if cf > 0 else -1
    ox, oy = Fraction(o[0]), Fraction(o[1])
    cx = (Fraction(a[0]) - ox) * (Fraction(b[1]) - oy) - (Fraction(a[1]) - oy) * (Fraction(b[0]) - ox)
    return (cx > 0) - (cx < 0)


def hull_2d(points) -> Polygon2:
    """Minimal convex polygon containing the points (monotone chain).

    Degenerate inputs are flagged: a single distinct point gives kind
    "point", collinear input gives kind "segment".
    """
    pts = sorted({(float(p[0]), float(p[1])) for p in points})
    if not pts:
        raise ValidationError("hull of an empty point set")
    if len(pts) == 1:
        return Polygon2(vertices=(pts[0],), kind="point")
    lower: list[tuple[float, float]] = []
    for p in pts:
        while len(lower) > 1 and _cross_sign(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(pts):
        while len(upper) > 1 and _cross_sign(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    chain = lower[:-1] + upper[:-1]
    if len(chain) == 2:
        return Polygon2(vertices=tuple(chain), kind="segment")
    chain = _collapse_near_collinear(chain)
    if len(chain) == 2:
        return Polygon2(vertices=tuple(chain), kind="segment")
    if len(chain) == 1:
        return Polygon2(vertices=tuple(chain), kind="point")
    return Polygon2(vertices=tuple(chain), kind="polygon")


def _collapse_near_collinear(chain: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Drop vertices within COLLINEAR_EPS of the chord joining their neighbors."""
    changed = True
    while changed and len(chain) > 2:
        changed = False
        for i in range(len(chain)):
            a = chain[(i - 1) % len(chain)]
            b = chain[i]
            c = chain[(i + 1) % len(chain)]
            if _segment_distance(b, a, c) < COLLINEAR_EPS:
                del chain[i]
                changed = True
                break
    return chain


def polygon_from_exact_vertices(verts: list[tuple[Fraction, Fraction]]) -> Polygon2:
    """Order exact vertices counterclockwise and convert to a float polygon."""
    if not verts:
        raise ValidationError("empty vertex set")
    if len(verts) == 1:
        return Polygon2(vertices=((float(verts[0][0]), float(verts[0][1])),), kind="point")
    cx = sum((v[0] for v in verts), Fraction(0)) / len(verts)
    cy = sum((v[1] for v in verts), Fraction(0)) / len(verts)
    ordered = sorted(verts, key=lambda v: np.arctan2(float(v[1] - cy), float(v[0] - cx)))
    if len(ordered) == 2:
        return Polygon2(
            vertices=tuple((float(x), float(y)) for x, y in ordered), kind="segment"
        )
    return Polygon2(vertices=tuple((float(x), float(y)) for x, y in ordered), kind="polygon")


def su3_reference_slice(s1: float, s2: float) -> Polygon2:
    """The SU(3) product-class slice polygon in alcove coordinates (x, y).

    The chart is (x, y) = (first, second) simple-root pairing; the alcove is
    the triangle x >= 0, y >= 0, x + y <= 1 and the slice keeps the part with
    x + y >= r, x <= 1 - r, y <= 1 - r at r = |s1 - s2|.  Exact rational
    intersection, converted to floats at the end.
    """
    fs1, fs2 = Fraction(s1), Fraction(s2)
    if not (0 <= fs1 <= Fraction(1, 2)) or not (0 <= fs2 <= Fraction(1, 2)):
        raise ValidationError("slice parameters must lie in [0, 1/2]")
    r = abs(fs1 - fs2)
    hs = [
        (exact.vec([-1, 0]), Fraction(0)),
        (exact.vec([0, -1]), Fraction(0)),
        (exact.vec([1, 1]), Fraction(1)),
        (exact.vec([-1, -1]), -r),
        (exact.vec([1, 0]), 1 - r),
        (exact.vec([0, 1]), 1 - r),
    ]
    verts = exact.polytope_vertices(hs)
    return polygon_from_exact_vertices([(v[0], v[1]) for v in verts])


def hausdorff(a: Polygon2, b: Polygon2) -> float:
    """Hausdorff distance between convex polygons (exact for convex sets)."""
    d_ab = max(b.distance(v) for v in a.vertices)
    d_ba = max(a.distance(v) for v in b.vertices)
    return max(d_ab, d_ba)


def polytope_compare(cloud, ref: Polygon2) -> dict:
    """Violation, Hausdorff, and area-coverage metrics of a sampled slice.

    cloud may be an (k, 2) array of chart coordinates or anything exposing
    coords_array().
    """
    pts = cloud.coords_array() if hasattr(cloud, "coords_array") else np.asarray(cloud, dtype=float)
    if pts.size == 0:
        raise ValidationError("empty cloud")
    sampled = hull_2d(pts)
    normals = np.array([h[0] for h in ref.halfspaces])
    offsets = np.array([h[1] for h in ref.halfspaces])
    norms = np.hypot(normals[:, 0], normals[:, 1])
    max_violation = np.max((pts @ normals.T - offsets) / norms)
    ref_area = ref.area()
    coverage = sampled.area() / ref_area if ref_area > 0 else (1.0 if sampled.area() == 0 else np.inf)
    return {
        "max_violation": float(max_violation),
        "hausdorff": float(hausdorff(sampled, ref)),
        "coverage_fraction": float(coverage),
        "hull": sampled,
    }
