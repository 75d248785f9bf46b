"""Exact rational linear algebra for root data, lattices, and small polytopes.

Vectors are tuples of Fraction, matrices are tuples of row vectors.  Nothing
in this module touches floating point; callers convert at the boundary.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd, isqrt
from typing import Iterable, Sequence

from .errors import InternalError, ResourceError

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vec(xs: Iterable) -> Vec:
    return tuple(frac(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> Mat:
    return tuple(vec(r) for r in rows)


def zero_vec(n: int) -> Vec:
    return (Fraction(0),) * n


def basis_vec(n: int, i: int) -> Vec:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vscale(v: Vec, s: Fraction) -> Vec:
    s = frac(s)
    return tuple(a * s for a in v)


def vdot(u: Vec, v: Vec) -> Fraction:
    return sum((a * b for a, b in zip(u, v, strict=True)), Fraction(0))


def is_zero(v: Vec) -> bool:
    return all(a == 0 for a in v)


def identity_mat(n: int) -> Mat:
    return tuple(basis_vec(n, i) for i in range(n))


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m, strict=True)) if m else ()


def mat_vec(m: Mat, v: Vec) -> Vec:
    return tuple(vdot(row, v) for row in m)


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(vdot(row, col) for col in bt) for row in a)


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(vsub(ra, rb) for ra, rb in zip(a, b, strict=True))


def mat_eq(a: Mat, b: Mat) -> bool:
    return a == b


def rref(m: Mat) -> tuple[Mat, tuple[int, ...]]:
    """Reduced row echelon form and the pivot column indices."""
    rows = [list(r) for r in m]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in rows), tuple(pivots)


def rank(m: Mat) -> int:
    return len(rref(m)[1])


def row_space_basis(rows: Sequence[Vec]) -> list[Vec]:
    reduced, pivots = rref(tuple(rows))
    return [reduced[i] for i in range(len(pivots))]


def nullspace(m: Mat) -> list[Vec]:
    """Basis of {x : m x = 0}."""
    ncols = len(m[0]) if m else 0
    reduced, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis: list[Vec] = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, p in enumerate(pivots):
            x[p] = -reduced[r][f]
        basis.append(tuple(x))
    return basis


def solve_square(a: Mat, b: Vec) -> Vec | None:
    """Solve a x = b for square a; None if singular."""
    n = len(a)
    aug = [list(row) + [bi] for row, bi in zip(a, b, strict=True)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if pivot is None:
            return None
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return tuple(aug[i][n] for i in range(n))


def coords_in_basis(basis: Sequence[Vec], v: Vec) -> Vec | None:
    """Coefficients c with sum c_i basis_i = v; None if v is outside the span."""
    cols = transpose(tuple(basis))  # ambient x k
    k = len(basis)
    aug = [list(row) + [vi] for row, vi in zip(cols, v, strict=True)]
    reduced, pivots = rref(tuple(tuple(r) for r in aug))
    coeffs = [Fraction(0)] * k
    for r, p in enumerate(pivots):
        if p == k:
            return None  # inconsistent
        coeffs[p] = reduced[r][k]
    # confirm (guards against free columns hiding an inconsistency)
    check = zero_vec(len(v))
    for c, bvec in zip(coeffs, basis):
        check = vadd(check, vscale(bvec, c))
    return tuple(coeffs) if check == v else None


def primitive_integer(v: Vec) -> Vec:
    """Scale a nonzero rational vector by a positive rational to a primitive integer vector."""
    if is_zero(v):
        raise InternalError("cannot normalize the zero vector")
    denom_lcm = 1
    for x in v:
        denom_lcm = denom_lcm * x.denominator // gcd(denom_lcm, x.denominator)
    ints = [int(x * denom_lcm) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(Fraction(x, g) for x in ints)


def canonical_halfspace(normal: Vec, offset: Fraction) -> tuple[Vec, Fraction]:
    """Scale {normal . x <= offset} so the normal is a primitive integer vector.

    Only positive scaling is applied; the halfspace itself is unchanged.
    """
    n = primitive_integer(normal)
    # positive scale factor: ratio of any nonzero coordinate
    i = next(j for j, x in enumerate(normal) if x != 0)
    s = n[i] / normal[i]
    if s <= 0:
        raise InternalError("normalization produced a non-positive scale")
    return n, frac(offset) * s


def lattice_basis(gens: Sequence[Vec]) -> list[Vec]:
    """Basis of the lattice generated by rational vectors, via integer row reduction.

    Clears denominators, brings the integer matrix to row echelon form with
    Euclidean row operations (a Hermite-style reduction), and rescales back.
    """
    gens = [g for g in gens if not is_zero(g)]
    if not gens:
        return []
    denom_lcm = 1
    for g in gens:
        for x in g:
            denom_lcm = denom_lcm * x.denominator // gcd(denom_lcm, x.denominator)
    rows = [[int(x * denom_lcm) for x in g] for g in gens]
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(rows[i][c]))
            rows[r], rows[i0] = rows[i0], rows[r]
            for i in range(r + 1, len(rows)):
                if rows[i][c] != 0:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
            if all(rows[i][c] == 0 for i in range(r + 1, len(rows))):
                break
        if rows[r][c] != 0:
            r += 1
    basis = rows[:r]
    return [tuple(Fraction(x, denom_lcm) for x in row) for row in basis]


def affine_rank(points: Sequence[Vec]) -> int:
    """Dimension of the affine hull of a point set (-1 for the empty set)."""
    if not points:
        return -1
    diffs = tuple(vsub(p, points[0]) for p in points[1:])
    return rank(diffs) if diffs else 0


def polytope_vertices(halfspaces: Sequence[tuple[Vec, Fraction]], max_subsets: int = 10**6) -> list[Vec]:
    """Vertices of {x : a . x <= c for all (a, c)}, assumed bounded and full-dimensional.

    Solves every d-subset of constraints exactly and keeps feasible solutions.
    """
    if not halfspaces:
        return []
    d = len(halfspaces[0][0])
    idx = range(len(halfspaces))
    n_subsets = 1
    for k in range(d):
        n_subsets = n_subsets * (len(halfspaces) - k) // (k + 1)
    if n_subsets > max_subsets:
        raise ResourceError(f"vertex enumeration over {n_subsets} subsets exceeds the cap")
    verts: list[Vec] = []
    for subset in combinations(idx, d):
        a = tuple(halfspaces[i][0] for i in subset)
        b = tuple(halfspaces[i][1] for i in subset)
        x = solve_square(a, b)
        if x is None:
            continue
        if all(vdot(n, x) <= c for n, c in halfspaces) and x not in verts:
            verts.append(x)
    return verts


def facet_indices(halfspaces: Sequence[tuple[Vec, Fraction]], vertices: Sequence[Vec]) -> list[int]:
    """Indices of facet-defining halfspaces: active vertex sets of affine dimension d-1."""
    if not halfspaces:
        return []
    d = len(halfspaces[0][0])
    keep: list[int] = []
    for j, (n, c) in enumerate(halfspaces):
        active = [v for v in vertices if vdot(n, v) == c]
        if affine_rank(active) == d - 1:
            keep.append(j)
    return keep


def floor_sqrt(x: Fraction) -> int:
    """floor(sqrt(x)) for a nonnegative rational."""
    if x < 0:
        raise InternalError("floor_sqrt of a negative rational")
    k = isqrt(x.numerator // x.denominator)
    while (k + 1) * (k + 1) <= x:
        k += 1
    while k * k > x:
        k -= 1
    return k
