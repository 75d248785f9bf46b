"""Alcove polytopes: exact H-representations, vertex enumeration, and folding.

A TwistedAlcove is the fundamental domain of an affine reflection group acting
on a subspace of the ambient Cartan algebra.  The identity twist gives the
standard Weyl alcove.  Halfspaces are exact rationals; folding accepts floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import exact
from .errors import InternalError, NumericError, ValidationError
from .exact import Mat, Vec

FOLD_CAP = 10**4
FOLD_SLACK = 1e-12
SUBSPACE_TOL = 1e-10


@dataclass(frozen=True)
class Halfspace:
    """The affine constraint  normal . xi <= offset  on the ambient space."""

    normal: Vec
    offset: Fraction


@dataclass(frozen=True)
class TwistedAlcove:
    dimension: int
    basis: Mat            # rows: ordered basis of the fixed subspace, ClassPoint chart
    coord_forms: Mat      # rows: dual functionals (coords_of(x)_i = coord_forms[i] . x)
    halfspaces: tuple[Halfspace, ...]
    lattice_basis: Mat    # translation lattice of the folding group

    @property
    def walls(self) -> tuple[Halfspace, ...]:
        """The facet list read as reflection data for folding."""
        return self.halfspaces

    @cached_property
    def ambient_dim(self) -> int:
        return len(self.basis[0])

    @cached_property
    def _basis_f(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.basis])

    @cached_property
    def _forms_f(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.coord_forms])

    @cached_property
    def _normals_f(self) -> np.ndarray:
        return np.array([[float(x) for x in h.normal] for h in self.halfspaces])

    @cached_property
    def _offsets_f(self) -> np.ndarray:
        return np.array([float(h.offset) for h in self.halfspaces])

    @cached_property
    def _normal_sq(self) -> np.ndarray:
        return np.einsum("ij,ij->i", self._normals_f, self._normals_f)

    @cached_property
    def _proj(self) -> np.ndarray:
        """Orthogonal projection onto the span of the basis rows."""
        b = self._basis_f.T  # ambient x d
        return b @ np.linalg.solve(b.T @ b, b.T)

    def coords_of(self, theta) -> np.ndarray:
        return self._forms_f @ np.asarray(theta, dtype=float)

    def theta_of(self, coords) -> np.ndarray:
        return self._basis_f.T @ np.asarray(coords, dtype=float)

    def violations(self, theta) -> np.ndarray:
        """Signed slab distances normal.x - offset, positive outside, unnormalized."""
        return self._normals_f @ np.asarray(theta, dtype=float) - self._offsets_f

    def contains(self, theta, slack: float = 1e-9) -> bool:
        return bool(np.max(self.violations(theta)) <= slack)

    def vertices(self) -> list[Vec]:
        """Exact vertices, as ambient vectors."""
        coord_hs = [
            (tuple(exact.vdot(h.normal, u) for u in self.basis), h.offset)
            for h in self.halfspaces
        ]
        verts_coords = exact.polytope_vertices(coord_hs)
        out = []
        for vc in verts_coords:
            amb = exact.zero_vec(self.ambient_dim)
            for c, u in zip(vc, self.basis):
                amb = exact.vadd(amb, exact.vscale(u, c))
            out.append(amb)
        return sorted(out)

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "basis": [[str(x) for x in row] for row in self.basis],
            "halfspaces": [
                {"normal": [str(x) for x in h.normal], "offset": str(h.offset)}
                for h in self.halfspaces
            ],
            "lattice_basis": [[str(x) for x in row] for row in self.lattice_basis],
        }


def make_alcove(dimension: int, basis: Mat, coord_forms: Mat, halfspaces, lattice_basis: Mat) -> TwistedAlcove:
    """Canonicalize, sort, and freeze an alcove H-representation."""
    canon = []
    for h in halfspaces:
        n, c = exact.canonical_halfspace(exact.vec(h[0]), exact.frac(h[1]))
        canon.append(Halfspace(n, c))
    canon = sorted(set(canon), key=lambda h: (h.normal, h.offset))
    return TwistedAlcove(
        dimension=dimension,
        basis=exact.mat(basis),
        coord_forms=exact.mat(coord_forms),
        halfspaces=tuple(canon),
        lattice_basis=exact.mat(lattice_basis),
    )


def untwisted_alcove(datum) -> TwistedAlcove:
    """Standard alcove: simple-root pairings >= 0 and highest-root pairing <= 1."""
    halfspaces = [(tuple(-x for x in alpha), Fraction(0)) for alpha in datum.simple_roots]
    halfspaces.append((datum.highest_root, Fraction(1)))
    return make_alcove(
        dimension=datum.rank,
        basis=datum.fundamental_coweights,
        coord_forms=datum.simple_roots,
        halfspaces=halfspaces,
        lattice_basis=datum.simple_coroots,
    )


def fold_to_twisted_alcove(alc: TwistedAlcove, xi, slack: float = FOLD_SLACK, cap: int = FOLD_CAP):
    """Fold xi into the alcove by reflections across its facet walls.

    Returns (theta, reflection_count) with theta in the alcove and in the
    orbit of xi under the wall-reflection group.  xi must lie within
    SUBSPACE_TOL of the alcove's subspace; it is projected onto it first.
    """
    x = np.asarray(xi, dtype=float)
    if x.shape != (alc.ambient_dim,):
        raise ValidationError(f"expected an ambient vector of length {alc.ambient_dim}")
    p = alc._proj @ x
    if np.max(np.abs(x - p)) > SUBSPACE_TOL:
        raise ValidationError("input lies outside the fixed subspace beyond tolerance")
    x = p
    normals = alc._normals_f
    offsets = alc._offsets_f
    norms = np.sqrt(alc._normal_sq)
    count = 0
    while True:
        viol = (normals @ x - offsets) / norms
        j = int(np.argmax(viol))  # ties resolve to the lowest wall index
        if viol[j] <= slack:
            return x, count
        h = normals[j]
        x = x - (2.0 * (h @ x - offsets[j]) / alc._normal_sq[j]) * h
        count += 1
        if count > cap:
            raise NumericError("folding exceeded the reflection cap; wall set is inconsistent")


def alcove_equal(a: TwistedAlcove, b: TwistedAlcove) -> bool:
    """Exact equality of H-representations (both are canonicalized and sorted)."""
    return a.halfspaces == b.halfspaces


def assert_irredundant(alc: TwistedAlcove) -> None:
    """Check every halfspace is facet-defining; raises InternalError otherwise."""
    coord_hs = [
        (tuple(exact.vdot(h.normal, u) for u in alc.basis), h.offset)
        for h in alc.halfspaces
    ]
    verts = exact.polytope_vertices(coord_hs)
    keep = exact.facet_indices(coord_hs, verts)
    if len(keep) != len(alc.halfspaces):
        raise InternalError("alcove H-representation contains redundant halfspaces")
