"""Root data of types A and D, Weyl group enumeration, and chamber folding.

Conventions: type A_l lives in R^(l+1) on the coordinate-sum-zero hyperplane
with roots e_i - e_j; type D_l lives in R^l with roots +-e_i +- e_j.  With
this normalization every root has squared length 2, simple coroots coincide
with simple roots as vectors, and the invariant pairing is the plain dot
product.  Everything in this module is exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import exact
from .errors import ConfigurationError, InternalError, ResourceError
from .exact import Mat, Vec

WEYL_CAP_DEFAULT = 10**6


@dataclass(frozen=True)
class RootDatum:
    family: str
    rank: int
    ambient_dim: int
    simple_roots: Mat
    simple_coroots: Mat
    cartan_matrix: tuple[tuple[int, ...], ...]
    highest_root: Vec
    fundamental_coweights: Mat

    def pairing(self, root: Vec, x: Vec) -> Fraction:
        return exact.vdot(root, x)


@dataclass(frozen=True)
class WeylElement:
    matrix: Mat
    word_length: int

    def apply(self, v: Vec) -> Vec:
        return exact.mat_vec(self.matrix, v)


def _coweights(roots: Mat, ambient_dim: int, sum_zero: bool) -> Mat:
    """Dual basis to the simple roots inside t, i.e. <alpha_i, w_j> = delta_ij."""
    out = []
    rows = list(roots)
    if sum_zero:
        rows = rows + [tuple(Fraction(1) for _ in range(ambient_dim))]
    for j in range(len(roots)):
        rhs = tuple(Fraction(1 if i == j else 0) for i in range(len(rows)))
        sol = exact.solve_square(tuple(rows), rhs)
        if sol is None:
            raise InternalError("simple roots do not span t")
        out.append(sol)
    return tuple(out)


def build_root_datum(family: str, rank: int) -> RootDatum:
    """Exact Cartan data for A_rank or D_rank."""
    if family == "A":
        if rank < 1:
            raise ConfigurationError("type A requires rank >= 1")
        m = rank + 1
        roots = []
        for i in range(rank):
            v = [Fraction(0)] * m
            v[i], v[i + 1] = Fraction(1), Fraction(-1)
            roots.append(tuple(v))
        highest = [Fraction(0)] * m
        highest[0], highest[m - 1] = Fraction(1), Fraction(-1)
        sum_zero = True
    elif family == "D":
        if rank < 3:
            raise ConfigurationError("type D requires rank >= 3")
        m = rank
        roots = []
        for i in range(rank - 1):
            v = [Fraction(0)] * m
            v[i], v[i + 1] = Fraction(1), Fraction(-1)
            roots.append(tuple(v))
        v = [Fraction(0)] * m
        v[rank - 2], v[rank - 1] = Fraction(1), Fraction(1)
        roots.append(tuple(v))
        highest = [Fraction(0)] * m
        highest[0], highest[1] = Fraction(1), Fraction(1)
        sum_zero = False
    else:
        raise ConfigurationError(f"unsupported family {family!r}; expected 'A' or 'D'")
    roots_m = tuple(roots)
    cartan = tuple(
        tuple(int(exact.vdot(roots_m[j], roots_m[i])) for j in range(rank)) for i in range(rank)
    )
    return RootDatum(
        family=family,
        rank=rank,
        ambient_dim=m,
        simple_roots=roots_m,
        simple_coroots=roots_m,  # squared length 2 throughout
        cartan_matrix=cartan,
        highest_root=tuple(highest),
        fundamental_coweights=_coweights(roots_m, m, sum_zero),
    )


def simple_reflection_matrix(datum: RootDatum, i: int) -> Mat:
    """Matrix of s_i: x -> x - <alpha_i, x> alpha_i^vee on the ambient space."""
    alpha = datum.simple_roots[i]
    covee = datum.simple_coroots[i]
    m = datum.ambient_dim
    return tuple(
        tuple(
            (Fraction(1) if r == c else Fraction(0)) - covee[r] * alpha[c]
            for c in range(m)
        )
        for r in range(m)
    )


def generate_weyl_group(datum: RootDatum, cap: int = WEYL_CAP_DEFAULT) -> list[WeylElement]:
    """All Weyl elements by breadth-first closure over the simple reflections."""
    gens = [simple_reflection_matrix(datum, i) for i in range(datum.rank)]
    ident = exact.identity_mat(datum.ambient_dim)
    seen: dict[Mat, int] = {ident: 0}
    frontier = [ident]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for w in frontier:
            for g in gens:
                wg = exact.mat_mul(g, w)
                if wg not in seen:
                    seen[wg] = depth
                    nxt.append(wg)
                    if len(seen) > cap:
                        raise ResourceError(f"Weyl group exceeds cap of {cap} elements")
        frontier = nxt
    return [WeylElement(m, d) for m, d in sorted(seen.items(), key=lambda kv: (kv[1], kv[0]))]


def fold_to_chamber(datum: RootDatum, theta) -> tuple[Vec, WeylElement]:
    """Dominant representative of theta and a Weyl element carrying theta onto it.

    Works for exact rational input (bit-exact result) and for floats.  The
    algorithm reflects across the most negative simple-root pairing until
    dominant, which terminates in at most the length of the longest element.
    """
    theta_t = tuple(theta)
    rational = all(isinstance(x, (Fraction, int)) for x in theta_t)
    if rational:
        theta_t = exact.vec(theta_t)
    w = exact.identity_mat(datum.ambient_dim)
    steps_cap = 4 * datum.rank * datum.rank + 16
    count = 0
    while True:
        pairings = [sum(a * x for a, x in zip(datum.simple_roots[i], theta_t)) for i in range(datum.rank)]
        worst = min(range(datum.rank), key=lambda i: pairings[i])
        if pairings[worst] >= 0:
            break
        covee = datum.simple_coroots[worst]
        p = pairings[worst]
        theta_t = tuple(x - p * c for x, c in zip(theta_t, covee))
        w = exact.mat_mul(simple_reflection_matrix(datum, worst), w)
        count += 1
        if count > steps_cap:
            raise InternalError("chamber folding failed to terminate")
    return theta_t, WeylElement(w, count)


from .alcove import untwisted_alcove  # noqa: E402  (re-export; alcove.py has no imports from here)

__all__ = [
    "RootDatum",
    "WeylElement",
    "build_root_datum",
    "generate_weyl_group",
    "fold_to_chamber",
    "simple_reflection_matrix",
    "untwisted_alcove",
    "WEYL_CAP_DEFAULT",
]
