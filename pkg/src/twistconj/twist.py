"""Diagram automorphisms and the geometry they induce on the Cartan algebra.

Everything derived from a Dynkin-diagram symmetry lives here: the fixed and
moved subspaces of t, the invariant lattice (orthogonal projection of the
coroot lattice), the commuting Weyl subgroup, and the twisted alcove, built
as the fundamental domain of the affine reflection group generated by that
lattice and subgroup acting on the fixed subspace.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from math import gcd

import numpy as np

from . import exact
from .alcove import TwistedAlcove, fold_to_twisted_alcove, make_alcove
from .errors import ConfigurationError, InternalError, ResourceError, ValidationError
from .exact import Mat, Vec
from .rootsys import RootDatum, WeylElement, generate_weyl_group

__all__ = [
    "TwistData",
    "TwistedAlcove",
    "diagram_automorphism",
    "named_permutation",
    "project_lattice",
    "verify_lattice",
    "centralizer_weyl",
    "build_twisted_alcove",
    "fold_to_twisted_alcove",
]


@dataclass(frozen=True)
class TwistData:
    base: RootDatum
    node_permutation: tuple[int, ...]
    kappa_t: Mat
    order: int
    t_fixed_basis: Mat          # one averaged fundamental coweight per node orbit
    t_moved_basis: Mat
    lattice_twisted_basis: Mat  # basis of the projected coroot lattice
    weyl_centralizer: tuple[WeylElement, ...]

    @property
    def fixed_dim(self) -> int:
        return len(self.t_fixed_basis)

    def node_orbits(self) -> list[tuple[int, ...]]:
        return _orbits(self.node_permutation)

    def is_identity(self) -> bool:
        return all(i == p for i, p in enumerate(self.node_permutation))


def named_permutation(datum: RootDatum, name: str) -> tuple[int, ...]:
    """Node permutation for the common twist names 'identity' and 'flip'."""
    n = datum.rank
    if name == "identity":
        return tuple(range(n))
    if name == "flip":
        if datum.family == "A":
            return tuple(range(n - 1, -1, -1))
        # type D: swap the two fork nodes
        perm = list(range(n))
        perm[n - 2], perm[n - 1] = perm[n - 1], perm[n - 2]
        return tuple(perm)
    raise ConfigurationError(f"unknown twist name {name!r}; expected 'identity' or 'flip'")


def _orbits(perm: tuple[int, ...]) -> list[tuple[int, ...]]:
    seen = set()
    orbits = []
    for start in range(len(perm)):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        j = perm[start]
        while j != start:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        orbits.append(tuple(cyc))
    return orbits


def diagram_automorphism(datum: RootDatum, perm, weyl_cap: int = 10**6) -> TwistData:
    """Build the twist data for a Cartan-preserving node permutation.

    The action on t is fixed by sending each simple coroot to its image; for
    type A the ambient complement (the all-ones line) is sent to +-itself so
    that the matrix agrees with the action of the matrix realization on the
    torus coordinates.
    """
    perm = tuple(int(i) for i in perm)
    n = datum.rank
    if sorted(perm) != list(range(n)):
        raise ValidationError(f"{perm} is not a permutation of 0..{n - 1}")
    cartan = datum.cartan_matrix
    for i in range(n):
        for j in range(n):
            if cartan[perm[i]][perm[j]] != cartan[i][j]:
                raise ValidationError(
                    f"permutation does not preserve Cartan integers at node pair ({i}, {j})"
                )

    m = datum.ambient_dim
    cols = [datum.simple_coroots[i] for i in range(n)]
    imgs = [datum.simple_coroots[perm[i]] for i in range(n)]
    if datum.family == "A":
        ones = tuple(Fraction(1) for _ in range(m))
        sign = Fraction(1) if perm == tuple(range(n)) else Fraction(-1)
        cols.append(ones)
        imgs.append(exact.vscale(ones, sign))
    col_mat = exact.transpose(exact.mat(cols))   # m x m, columns are the conditions
    img_mat = exact.transpose(exact.mat(imgs))
    col_inv = _mat_inverse(col_mat)
    kappa_t = exact.mat_mul(img_mat, col_inv)

    if exact.mat_mul(exact.transpose(kappa_t), kappa_t) != exact.identity_mat(m):
        raise InternalError("twist matrix is not orthogonal")
    order = _matrix_order(kappa_t)

    orbits = _orbits(perm)
    fixed_basis = []
    for orb in orbits:
        avg = exact.zero_vec(m)
        for i in orb:
            avg = exact.vadd(avg, datum.fundamental_coweights[i])
        fixed_basis.append(exact.vscale(avg, Fraction(1, len(orb))))
    for v in fixed_basis:
        if exact.mat_vec(kappa_t, v) != v:
            raise InternalError("averaged coweight is not fixed by the twist")

    moved = exact.row_space_basis(
        [exact.vsub(exact.mat_vec(kappa_t, a), a) for a in datum.simple_coroots]
    )

    lattice_gens = []
    for orb in orbits:
        avg = exact.zero_vec(m)
        for i in orb:
            avg = exact.vadd(avg, datum.simple_coroots[i])
        lattice_gens.append(exact.vscale(avg, Fraction(1, len(orb))))
    lattice = exact.lattice_basis(lattice_gens)
    if len(lattice) != len(orbits):
        raise InternalError("lattice basis reduction produced the wrong rank")

    centralizer = tuple(
        w for w in generate_weyl_group(datum, cap=weyl_cap)
        if exact.mat_mul(w.matrix, kappa_t) == exact.mat_mul(kappa_t, w.matrix)
    )

    if order == 3:
        warnings.warn(
            "order-3 diagram automorphisms are experimental: the alcove "
            "construction is only property-tested for orders 1 and 2",
            stacklevel=2,
        )

    return TwistData(
        base=datum,
        node_permutation=perm,
        kappa_t=kappa_t,
        order=order,
        t_fixed_basis=exact.mat(fixed_basis),
        t_moved_basis=exact.mat(moved),
        lattice_twisted_basis=exact.mat(lattice),
        weyl_centralizer=centralizer,
    )


def _mat_inverse(m: Mat) -> Mat:
    n = len(m)
    cols = []
    for j in range(n):
        col = exact.solve_square(m, exact.basis_vec(n, j))
        if col is None:
            raise InternalError("singular matrix in twist construction")
        cols.append(col)
    return exact.transpose(exact.mat(cols))


def _matrix_order(m: Mat, cap: int = 12) -> int:
    ident = exact.identity_mat(len(m))
    p = m
    for k in range(1, cap + 1):
        if p == ident:
            return k
        p = exact.mat_mul(p, m)
    raise ConfigurationError("twist matrix order exceeds the supported bound")


def centralizer_weyl(tw: TwistData) -> list[WeylElement]:
    """Weyl elements whose action on t commutes with the twist."""
    return list(tw.weyl_centralizer)


def _fixed_projection(tw: TwistData) -> Mat:
    """Exact orthogonal projection onto the fixed subspace."""
    b = tw.t_fixed_basis                      # d x m, rows
    bt = exact.transpose(b)                   # m x d
    gram = exact.mat_mul(b, bt)               # d x d
    gram_inv = _mat_inverse(gram)
    return exact.mat_mul(bt, exact.mat_mul(gram_inv, b))


def verify_lattice(tw: TwistData, realization=None, tol: float = 1e-9) -> None:
    """Check each invariant-lattice generator exponentiates into T^kappa intersect T_kappa.

    The exact part finds, for each generator lambda, a coroot-lattice witness n
    with lambda - n in the moved subspace.  When a matrix realization is given
    (type A), the torus exponentials are compared numerically as well.
    """
    proj = _fixed_projection(tw)
    datum = tw.base
    box = 4
    for lam in tw.lattice_twisted_basis:
        if exact.mat_vec(tw.kappa_t, lam) != lam:
            raise InternalError("lattice generator is not fixed by the twist")
        witness = None
        target = exact.mat_vec(proj, lam)
        for ks in iter_product(range(-box, box + 1), repeat=datum.rank):
            n_vec = exact.zero_vec(datum.ambient_dim)
            for k, covee in zip(ks, datum.simple_coroots):
                if k:
                    n_vec = exact.vadd(n_vec, exact.vscale(covee, Fraction(k)))
            if exact.mat_vec(proj, n_vec) == target:
                witness = n_vec
                break
        if witness is None:
            raise InternalError(
                "no coroot-lattice witness for a projected generator within the search box"
            )
        if realization is not None:
            lam_f = np.array([float(x) for x in lam])
            mu_f = np.array([float(x) for x in exact.vsub(lam, witness)])
            u = np.diag(np.exp(2j * np.pi * lam_f))
            v = np.diag(np.exp(2j * np.pi * mu_f))
            if np.max(np.abs(realization.apply_matrix(u) - u)) > tol:
                raise InternalError("exp(generator) is not fixed by the realized twist")
            if np.max(np.abs(u - v)) > tol:
                raise InternalError("exp(generator) does not land in the moved torus")


def project_lattice(tw: TwistData, realization=None) -> list[Vec]:
    """Basis of the invariant lattice, verified by the exponential membership check."""
    verify_lattice(tw, realization=realization)
    return list(tw.lattice_twisted_basis)


# ---------------------------------------------------------------------------
# Twisted alcove construction
# ---------------------------------------------------------------------------


def _restrictions(tw: TwistData) -> list[Mat]:
    """Distinct actions of the commuting Weyl subgroup on the fixed subspace, in chart coords."""
    basis = tw.t_fixed_basis
    d = len(basis)
    seen: dict[Mat, None] = {}
    for w in tw.weyl_centralizer:
        cols = []
        for u in basis:
            wu = exact.mat_vec(w.matrix, u)
            c = exact.coords_in_basis(basis, wu)
            if c is None:
                raise InternalError("Weyl centralizer does not preserve the fixed subspace")
            cols.append(c)
        mat_r = exact.transpose(exact.mat(cols))
        if mat_r not in seen:
            seen[mat_r] = None
    return list(seen.keys())


def _reflection_normals(tw: TwistData) -> list[Vec]:
    """Ambient normals of the linear reflections the centralizer induces on the fixed subspace."""
    d = tw.fixed_dim
    ident = exact.identity_mat(d)
    normals = []
    for m in _restrictions(tw):
        if m == ident or exact.mat_mul(m, m) != ident:
            continue
        diff = exact.mat_sub(ident, m)
        if exact.rank(diff) != 1:
            continue
        kernel = exact.nullspace(_mat_add(m, ident))
        if len(kernel) != 1:
            raise InternalError("reflection has a degenerate -1 eigenspace")
        v = kernel[0]
        amb = exact.zero_vec(tw.base.ambient_dim)
        for c, u in zip(v, tw.t_fixed_basis):
            amb = exact.vadd(amb, exact.vscale(u, c))
        normals.append(exact.primitive_integer(amb))
    return normals


def _mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(exact.vadd(ra, rb) for ra, rb in zip(a, b, strict=True))


def _line_lattice_point(tw: TwistData, normal: Vec) -> Vec:
    """Shortest nonzero invariant-lattice point on the line spanned by the normal."""
    r = exact.coords_in_basis(tw.lattice_twisted_basis, normal)
    if r is None:
        raise InternalError("reflection normal lies outside the lattice span")
    denom_lcm = 1
    for x in r:
        denom_lcm = denom_lcm * x.denominator // gcd(denom_lcm, x.denominator)
    z = [int(x * denom_lcm) for x in r]
    g = 0
    for x in z:
        g = gcd(g, abs(x))
    point = exact.zero_vec(len(normal))
    for zi, ell in zip(z, tw.lattice_twisted_basis):
        point = exact.vadd(point, exact.vscale(ell, Fraction(zi, g)))
    return point


def _has_recession_direction(coord_hs: list[tuple[Vec, Fraction]], d: int) -> bool:
    """Whether {a . x <= 0 for all a} meets the simplex slice sum(x) = 1, x in the chamber."""
    if d == 1:
        return all(a[0] <= 0 for a, _ in coord_hs)
    # substitute x_d = 1 - sum(x_1..x_{d-1}) into a . x <= 0
    sliced: list[tuple[Vec, Fraction]] = []
    for a, _ in coord_hs:
        coeffs = tuple(a[i] - a[d - 1] for i in range(d - 1))
        sliced.append((coeffs, -a[d - 1]))
    # keep the slice inside the simplex: x_i >= 0 and sum <= 1
    for i in range(d - 1):
        sliced.append((tuple(Fraction(-1 if j == i else 0) for j in range(d - 1)), Fraction(0)))
    sliced.append((tuple(Fraction(1) for _ in range(d - 1)), Fraction(1)))
    try:
        return bool(exact.polytope_vertices(sliced))
    except ResourceError:
        return True  # treat blow-up as inconclusive; caller widens the radius


def build_twisted_alcove(tw: TwistData, radius_factor: int = 3, max_doublings: int = 4) -> TwistedAlcove:
    """Fundamental domain of the twisted affine reflection group on the fixed subspace.

    Walls come in parallel families: for each linear reflection the centralizer
    induces on the fixed subspace, the affine reflections of the group along
    that normal sit at half-multiples of the shortest lattice point on the
    normal line.  The alcove is the cell of this arrangement whose closure
    contains the origin, selected by a shrinking interior probe and reduced
    to facets by exact vertex enumeration.
    """
    d = tw.fixed_dim
    if d < 1:
        raise ConfigurationError("twist has a trivial fixed subspace")
    basis = tw.t_fixed_basis
    orbits = _orbits(tw.node_permutation)
    forms = []
    for orb in orbits:
        s = exact.zero_vec(tw.base.ambient_dim)
        for i in orb:
            s = exact.vadd(s, tw.base.simple_roots[i])
        forms.append(s)

    normals = _reflection_normals(tw)
    if not normals:
        raise ConfigurationError("degenerate twist: no reflections act on the fixed subspace")

    max_gen_sq = max(exact.vdot(g, g) for g in tw.lattice_twisted_basis)
    radius_sq = Fraction(radius_factor * radius_factor) * max_gen_sq

    walls: list[tuple[Vec, Fraction]] = []  # hyperplane n . x = c
    for _ in range(max_doublings + 1):
        walls = []
        affine_found = False
        for n in normals:
            lam0 = _line_lattice_point(tw, n)
            lam_sq = exact.vdot(lam0, lam0)
            kmax = exact.floor_sqrt(radius_sq / lam_sq)
            for k in range(-kmax, kmax + 1):
                walls.append((lam0, Fraction(k) * lam_sq / 2))
                if k != 0:
                    affine_found = True
        if affine_found:
            break
        radius_sq *= 4  # double the radius
    if not affine_found:
        raise ResourceError(
            "no affine wall found within the enumeration radius; "
            "the invariant lattice may be skew to every reflection normal"
        )

    # probe point: delta * (sum of chart basis vectors), shrunk until it is
    # off every wall and the origin stays weakly inside the selected cell
    wall_coord = [
        (tuple(exact.vdot(n, u) for u in basis), c) for n, c in walls
    ]
    delta = Fraction(1)
    selected: list[tuple[Vec, Fraction]] = []
    for _ in range(200):
        probe = tuple(delta for _ in range(d))
        ok = True
        selected = []
        for (a, c), (n, _) in zip(wall_coord, walls):
            val = exact.vdot(a, probe)
            if val == c:
                ok = False
                break
            if val < c:
                selected.append((n, c))
            else:
                selected.append((exact.vec([-x for x in n]), -c))
        if ok and all(c >= 0 for _, c in selected):
            break
        delta = delta / 2
    else:
        raise ConfigurationError("degenerate twist: probe selection failed")

    # duplicate walls collapse; parallel families keep only their tightest side
    canon = {}
    for n, c in selected:
        n2, c2 = exact.canonical_halfspace(n, c)
        if n2 not in canon or c2 < canon[n2]:
            canon[n2] = c2
    tight = sorted(canon.items())

    coord_hs = [
        (tuple(exact.vdot(n, u) for u in basis), c) for n, c in tight
    ]
    if _has_recession_direction(coord_hs, d):
        raise ResourceError(
            "selected cell is unbounded; enumeration radius too small for this twist"
        )
    verts = exact.polytope_vertices(coord_hs)
    if len(verts) < d + 1:
        raise InternalError("twisted alcove is not full-dimensional")
    keep = exact.facet_indices(coord_hs, verts)
    facets = [tight[j] for j in keep]

    return make_alcove(
        dimension=d,
        basis=basis,
        coord_forms=exact.mat(forms),
        halfspaces=facets,
        lattice_basis=tw.lattice_twisted_basis,
    )
