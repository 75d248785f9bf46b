"""SU(N) realization: group elements, the flip automorphism as a matrix
operation, twisted conjugation, class projections, adjoint operators, and the
algebraic identities used by the moduli-style samplers.

The diagram automorphism of type A is realized as kappa(g) = P conj(g) P with
P the antidiagonal flip; this preserves the diagonal torus and acts on torus
coordinates by theta -> -reverse(theta), matching the combinatorial twist.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import atan2, pi

import numpy as np

from .alcove import TwistedAlcove, fold_to_twisted_alcove, untwisted_alcove
from .errors import (
    ConfigurationError,
    InternalError,
    NumericError,
    ValidationError,
)
from .optim import lm_least_squares, nelder_mead
from .rootsys import RootDatum, generate_weyl_group
from .twist import TwistData
from . import eigen

UNITARITY_TOL = 1e-10
PROJECT_TOL = 1e-8
RANK_TOL = 1e-9


# ---------------------------------------------------------------------------
# Group elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class UnitaryElement:
    """An N x N special unitary matrix; entries are never mutated."""

    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def inverse(self) -> "UnitaryElement":
        return UnitaryElement(self.entries.conj().T)

    def __matmul__(self, other: "UnitaryElement") -> "UnitaryElement":
        return UnitaryElement(self.entries @ other.entries)


def _m(x) -> np.ndarray:
    return x.entries if isinstance(x, UnitaryElement) else np.asarray(x, dtype=complex)


def _det(a: np.ndarray) -> complex:
    """Determinant by cofactors (n <= 3) or LU with partial pivoting."""
    n = a.shape[0]
    if n == 1:
        return complex(a[0, 0])
    if n == 2:
        return complex(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
    if n == 3:
        return complex(
            a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
            - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
            + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
        )
    a = a.copy()
    det = 1.0 + 0j
    for c in range(n):
        p = int(np.argmax(np.abs(a[c:, c]))) + c
        if abs(a[p, c]) < 1e-300:
            return 0j
        if p != c:
            a[[c, p]] = a[[p, c]]
            det = -det
        det *= a[c, c]
        a[c + 1:, c:] = a[c + 1:, c:] - np.outer(a[c + 1:, c] / a[c, c], a[c, c:])
    return det


def unitary(entries) -> UnitaryElement:
    """Validate (and if needed re-orthonormalize) a matrix into SU(N).

    Deviations up to 1e-8 are projected back onto the group; anything worse
    is rejected.
    """
    u = np.array(entries, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValidationError("expected a square matrix")
    n = u.shape[0]
    dev = np.max(np.abs(u.conj().T @ u - np.eye(n)))
    if dev > PROJECT_TOL:
        raise ValidationError(f"matrix is not unitary within {PROJECT_TOL} (deviation {dev:.3e})")
    if dev > 1e-13:
        w, _, vh = np.linalg.svd(u)
        u = w @ vh
    d = _det(u)
    if abs(d - 1) > PROJECT_TOL:
        raise ValidationError(f"determinant {d} is not 1 within {PROJECT_TOL}")
    if abs(d - 1) > 1e-15:
        u = u * np.exp(-1j * atan2(d.imag, d.real) / n)
    u.setflags(write=False)
    out = UnitaryElement(u)
    dev = np.max(np.abs(u.conj().T @ u - np.eye(n)))
    if dev > UNITARITY_TOL or abs(_det(u) - 1) > UNITARITY_TOL:
        raise InternalError("re-orthonormalization failed to reach tolerance")
    return out


def identity_element(n: int) -> UnitaryElement:
    return UnitaryElement(np.eye(n, dtype=complex))


# ---------------------------------------------------------------------------
# Twist realization
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TwistRealization:
    """The twist as a concrete operation on SU(N) matrices."""

    tw: TwistData
    n: int
    order: int
    flip: np.ndarray | None  # antidiagonal permutation, or None for the identity twist

    def apply_matrix(self, u: np.ndarray) -> np.ndarray:
        if self.flip is None:
            return u
        return self.flip @ u.conj() @ self.flip

    def apply(self, u: UnitaryElement) -> UnitaryElement:
        return UnitaryElement(self.apply_matrix(_m(u)))


def twist_realization(tw: TwistData) -> TwistRealization:
    if tw.base.family != "A":
        raise ConfigurationError("matrix realizations exist for type A only")
    n = tw.base.rank + 1
    ident = tuple(range(tw.base.rank))
    if tw.node_permutation == ident:
        return TwistRealization(tw=tw, n=n, order=1, flip=None)
    if tw.node_permutation == tuple(reversed(ident)):
        p = np.zeros((n, n))
        for i in range(n):
            p[i, n - 1 - i] = 1.0
        p.setflags(write=False)
        return TwistRealization(tw=tw, n=n, order=2, flip=p)
    raise ConfigurationError("type A admits only the identity and flip twists")


def compose_to_identity(kappas, rng=None, tol=1e-10, trials=10) -> bool:
    """Numerically check kappa_r o ... o kappa_1 = 1 on random matrices."""
    rng = rng or np.random.default_rng(0)
    n = kappas[0].n
    for _ in range(trials):
        x = haar_sample(n, rng).entries
        y = x
        for k in kappas:
            y = k.apply_matrix(y)
        if np.max(np.abs(y - x)) > tol:
            return False
    return True


# ---------------------------------------------------------------------------
# Torus and Haar sampling
# ---------------------------------------------------------------------------


def torus_exp(theta) -> UnitaryElement:
    """diag(exp(2 pi i theta_j)) for a coordinate vector with zero sum."""
    th = np.asarray(theta, dtype=float)
    if abs(th.sum()) > 1e-12:
        raise ValidationError(f"torus coordinates must sum to zero, got {th.sum():.3e}")
    u = np.diag(np.exp(2j * pi * th))
    u.setflags(write=False)
    return UnitaryElement(u)


def haar_sample(n: int, rng: np.random.Generator) -> UnitaryElement:
    """Haar-distributed SU(n) element.

    Complex Ginibre matrix, modified Gram-Schmidt (which fixes the R-diagonal
    phases to be real positive, the correction that makes Q Haar on U(n)),
    then a global phase moving the determinant to 1.
    """
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q = np.empty((n, n), dtype=complex)
    for j in range(n):
        v = z[:, j].copy()
        for i in range(j):
            v -= q[:, i] * (q[:, i].conj() @ v)
        nv = np.sqrt((v.conj() @ v).real)
        if nv < 1e-12:
            raise NumericError("degenerate Ginibre sample")
        q[:, j] = v / nv
    d = _det(q)
    q *= np.exp(-1j * atan2(d.imag, d.real) / n)
    q.setflags(write=False)
    return UnitaryElement(q)


def derived_seed(master_seed: int, worker_index: int) -> int:
    """Per-worker stream seed."""
    return master_seed ^ worker_index


# ---------------------------------------------------------------------------
# Twisted conjugation and the square map
# ---------------------------------------------------------------------------


def twisted_conjugate(h, g, kappa: TwistRealization) -> UnitaryElement:
    """h g kappa(h)^{-1}."""
    hm, gm = _m(h), _m(g)
    if hm.shape != gm.shape:
        raise ValidationError("size mismatch between actor and target")
    return UnitaryElement(hm @ gm @ kappa.apply_matrix(hm).conj().T)


def _tconj(hm: np.ndarray, gm: np.ndarray, kappa: TwistRealization) -> np.ndarray:
    return hm @ gm @ kappa.apply_matrix(hm).conj().T


def square_map(g, kappa: TwistRealization) -> UnitaryElement:
    """g kappa(g); intertwines twisted with ordinary conjugation for order 2."""
    if kappa.order != 2:
        raise ValidationError("square map requires an order-2 twist; use eigenangles directly")
    gm = _m(g)
    return UnitaryElement(gm @ kappa.apply_matrix(gm))


# ---------------------------------------------------------------------------
# Class projections
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassPoint:
    """A point of the twisted alcove: chart coordinates plus its ambient representative."""

    coords: tuple[float, ...]
    theta: tuple[float, ...]


def _class_point_from_theta(alc: TwistedAlcove, theta: np.ndarray) -> ClassPoint:
    if np.max(alc.violations(theta)) > 1e-9:
        raise InternalError("folded representative violates the alcove")
    return ClassPoint(coords=tuple(alc.coords_of(theta)), theta=tuple(theta))


def _sum_corrected_angles(u: np.ndarray, from_diagonal: bool = False) -> np.ndarray:
    """Eigenangles (or diagonal angles) adjusted to an exact-zero sum."""
    if from_diagonal:
        angles = [atan2(u[i, i].imag, u[i, i].real) / (2 * pi) for i in range(u.shape[0])]
    else:
        angles = eigen.unitary_eigenangles(u)
    th = np.array(angles, dtype=float)
    k = int(round(th.sum()))
    if k > 0:
        th[np.argsort(th)[::-1][:k]] -= 1.0
    elif k < 0:
        th[np.argsort(th)[:(-k)]] += 1.0
    if abs(th.sum()) > 1e-9:
        raise NumericError("angle sum is not integral; matrix is not special unitary")
    return th


@lru_cache(maxsize=32)
def _base_env(datum: RootDatum):
    """Untwisted alcove, Weyl matrices, and a coroot-lattice box for candidate search."""
    alc0 = untwisted_alcove(datum)
    wstack = np.array(
        [[[float(x) for x in row] for row in w.matrix] for w in generate_weyl_group(datum)]
    )
    verts = np.array([[float(x) for x in v] for v in alc0.vertices()])
    diam0 = max(np.linalg.norm(a - b) for a in verts for b in verts)
    return alc0, wstack, diam0


@lru_cache(maxsize=32)
def _lattice_box(datum: RootDatum, bound_key: int):
    """Coroot-lattice points with norm below bound_key (an integer ceiling)."""
    roots = np.array([[float(x) for x in r] for r in datum.simple_coroots])
    dual = np.linalg.pinv(roots)
    kmax = [int(np.floor(bound_key * np.linalg.norm(dual[:, i]))) + 1 for i in range(datum.rank)]
    grids = np.meshgrid(*[np.arange(-k, k + 1) for k in kmax], indexing="ij")
    coeffs = np.stack([g.ravel() for g in grids], axis=1)
    pts = coeffs @ roots
    keep = np.linalg.norm(pts, axis=1) <= bound_key + 1e-9
    return pts[keep]


def ordinary_class_point(g, alc: TwistedAlcove) -> ClassPoint:
    """Alcove label of the ordinary conjugacy class: folded eigenangles."""
    theta = _sum_corrected_angles(_m(g))
    folded, _ = fold_to_twisted_alcove(alc, theta)
    return _class_point_from_theta(alc, folded)


@lru_cache(maxsize=32)
def _alcove_diameter(alc: TwistedAlcove) -> float:
    verts = np.array([[float(x) for x in v] for v in alc.vertices()])
    if len(verts) < 2:
        return 1.0
    return float(max(np.linalg.norm(a - b) for a in verts for b in verts))


def class_point(g, kappa: TwistRealization, alc: TwistedAlcove) -> ClassPoint:
    """Alcove label of the twisted conjugacy class of g.

    Identity twist: fold the eigenangle vector.  Order-2 twist: the square
    g kappa(g) is conjugation-covariant, so its ordinary class determines the
    twisted class label up to the halving ambiguity, which is resolved by
    enumerating alcove candidates (unique for SU(3)).
    """
    gm = _m(g)
    if kappa.order == 1:
        return ordinary_class_point(gm, alc)

    sq = gm @ kappa.apply_matrix(gm)
    eta_raw = _sum_corrected_angles(sq)
    alc0, wstack, diam0 = _base_env(kappa.tw.base)
    eta, _ = fold_to_twisted_alcove(alc0, eta_raw)

    diam = _alcove_diameter(alc)
    bound = int(np.ceil(2 * diam + diam0)) + 1
    lam = _lattice_box(kappa.tw.base, bound)

    cands = 0.5 * ((wstack @ eta)[:, None, :] + lam[None, :, :])
    flat = cands.reshape(-1, cands.shape[-1])
    dev = np.max(np.abs(flat - flat @ alc._proj.T), axis=1)
    survivors = flat[dev <= 1e-8]
    if survivors.size == 0:
        raise InternalError("empty candidate set for the square-map halving")

    found: list[np.ndarray] = []
    for s in survivors:
        folded, _ = fold_to_twisted_alcove(alc, s)
        if not any(np.max(np.abs(folded - f)) < 1e-9 for f in found):
            found.append(folded)
    if len(found) == 1:
        return _class_point_from_theta(alc, found[0])
    # several alcove points double into the same ordinary class: pick the one
    # whose torus element is closest to the twisted orbit of g
    best = min(found, key=lambda th: _orbit_distance(gm, kappa, th, budget=600))
    return _class_point_from_theta(alc, best)


def _orbit_distance(gm: np.ndarray, kappa: TwistRealization, theta: np.ndarray, budget: int) -> float:
    target = np.diag(np.exp(2j * pi * theta))
    basis = su_basis(gm.shape[0])

    def objective(x):
        h = _cayley(basis, x)
        return np.max(np.abs(_tconj(h, gm, kappa) - target))

    _, f, _ = nelder_mead(objective, np.zeros(len(basis)), scale=0.5, budget=budget)
    return f


@dataclass(frozen=True)
class OracleResult:
    point: ClassPoint | None
    residual: float

    @property
    def resolved(self) -> bool:
        return self.point is not None


def class_point_oracle(
    g,
    kappa: TwistRealization,
    alc: TwistedAlcove,
    budget: int = 4000,
    restarts: int = 16,
    threshold: float = 1e-6,
) -> OracleResult:
    """Class label by direct search: drive g toward the fixed torus.

    Minimizes the off-diagonal mass of twisted conjugates of g over the
    acting group using the exponential retraction h = h0 exp(X): many short
    simplex runs screen random basins, the best two are polished with
    shrinking charts.  Once the conjugate is diagonal, its angle vector is
    read off, projected onto the fixed subspace (the moved components are
    gauge), and folded.  Independent of the square-map route in class_point.
    """
    gm = _m(g)
    n = gm.shape[0]
    basis = su_basis(n)
    dim = len(basis)
    rng = np.random.default_rng(0)
    offmask = ~np.eye(n, dtype=bool)

    def offdiag_vec(h0):
        def resid(x):
            h = h0 @ _expm_su(basis, x)
            m = _tconj(h, gm, kappa)
            off = m[offmask]
            return np.concatenate([off.real, off.imag])
        return resid

    def offdiag_sq(h0):
        resid = offdiag_vec(h0)

        def objective(x):
            r = resid(x)
            return float(r @ r)
        return objective

    def offdiag_max(h):
        m = _tconj(h, gm, kappa)
        return float(np.max(np.abs(m[offmask])))

    starts = [np.eye(n, dtype=complex)]
    starts += [haar_sample(n, rng).entries for _ in range(max(0, restarts - 1))]
    screened = []
    for h0 in starts:
        x, f, _ = nelder_mead(offdiag_sq(h0), np.zeros(dim), scale=0.6,
                              budget=max(150, budget // restarts))
        screened.append((f, h0 @ _expm_su(basis, x)))
        if f < 1e-18:
            break
    screened.sort(key=lambda t: t[0])

    best_h, best_f = None, np.inf
    for _, h in screened[:3]:
        x, _, _ = lm_least_squares(offdiag_vec(h), np.zeros(dim))
        h = h @ _expm_su(basis, x)
        f = offdiag_max(h)
        if f < best_f:
            best_h, best_f = h, f
        if best_f < threshold * 1e-4:
            break

    if best_f > threshold:
        return OracleResult(point=None, residual=float(best_f))
    m = _tconj(best_h, gm, kappa)
    theta = _sum_corrected_angles(m, from_diagonal=True)
    xi = alc._proj @ theta  # moved components are gauge freedom
    folded, _ = fold_to_twisted_alcove(alc, xi)
    return OracleResult(point=_class_point_from_theta(alc, folded), residual=float(best_f))


# ---------------------------------------------------------------------------
# Lie algebra helpers
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def su_basis(n: int) -> tuple[np.ndarray, ...]:
    """Orthonormal real basis of su(n) for the pairing <X, Y> = -tr(XY)."""
    out = []
    s = 1 / np.sqrt(2)
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j], e[j, i] = s, -s
            out.append(e)
            e = np.zeros((n, n), dtype=complex)
            e[i, j], e[j, i] = 1j * s, 1j * s
            out.append(e)
    for k in range(1, n):
        d = np.zeros(n)
        d[:k] = 1.0
        d[k] = -k
        d /= np.sqrt(k * (k + 1))
        out.append(1j * np.diag(d).astype(complex))
    for e in out:
        e.setflags(write=False)
    return tuple(out)


@lru_cache(maxsize=8)
def _su_stack(n: int) -> np.ndarray:
    return np.stack(su_basis(n))


def _combine(basis, x) -> np.ndarray:
    stack = _su_stack(basis[0].shape[0])
    return np.tensordot(np.asarray(x, dtype=float), stack, axes=1)


def _expm_su(basis, x) -> np.ndarray:
    """exp of an su(n) combination via the spectral decomposition."""
    xm = _combine(basis, x)
    w, v = np.linalg.eigh(-1j * xm)
    return (v * np.exp(1j * w)) @ v.conj().T


def _cayley(basis, x) -> np.ndarray:
    """Cayley retraction (I - X/2)^{-1} (I + X/2), det-normalized back into SU(n).

    Unlike the exponential, the Cayley map does not preserve det = 1, so the
    unit-modulus determinant is divided out through an n-th root phase.
    """
    xm = _combine(basis, x)
    n = xm.shape[0]
    eye = np.eye(n, dtype=complex)
    c = np.linalg.solve(eye - 0.5 * xm, eye + 0.5 * xm)
    d = _det(c)
    return c * np.exp(-1j * atan2(d.imag, d.real) / n)


# ---------------------------------------------------------------------------
# Adjoint operators and the class 2-form
# ---------------------------------------------------------------------------


def adjoint_twist_operator(phi, kappa: TwistRealization) -> np.ndarray:
    """Matrix of X -> phi kappa(X) phi^{-1} on su(N) in the orthonormal basis."""
    pm = _m(phi)
    n = pm.shape[0]
    basis = su_basis(n)
    k = len(basis)
    stacked = np.stack(basis)
    a = np.empty((k, k))
    pmh = pm.conj().T
    for b in range(k):
        kb = kappa.apply_matrix(basis[b]) if kappa.flip is not None else basis[b]
        mb = pm @ kb @ pmh
        a[:, b] = -np.einsum("aij,ji->a", stacked, mb).real
    return a


def class_form_kernel(phi, kappa: TwistRealization) -> dict:
    """Kernel dimensions of the restricted 2-form on a twisted conjugacy class.

    Builds Omega = (A - A^T)/2 on the tangent space ran(A - I) and compares
    its kernel with ker(A + I), which the generating-vector map carries onto
    it isomorphically.
    """
    a = adjoint_twist_operator(phi, kappa)
    k = a.shape[0]
    eye = np.eye(k)

    u_minus, s_minus, _ = np.linalg.svd(a - eye)
    rank_minus = int(np.sum(s_minus > RANK_TOL))
    dim_ker_minus = k - rank_minus

    s_plus = np.linalg.svd(a + eye, compute_uv=False)
    dim_ker_plus = k - int(np.sum(s_plus > RANK_TOL))

    tangent = u_minus[:, :rank_minus]
    omega = tangent.T @ ((a - a.T) / 2) @ tangent
    s_omega = np.linalg.svd(omega, compute_uv=False) if rank_minus else np.array([])
    dim_ker_omega = rank_minus - int(np.sum(s_omega > RANK_TOL))

    warn = any(
        bool(np.any((s > 1e-11) & (s < 1e-7)))
        for s in (s_minus, s_plus, s_omega)
    )
    if dim_ker_omega != dim_ker_plus:
        raise InternalError(
            f"2-form kernel dimension {dim_ker_omega} != ker(A+I) dimension {dim_ker_plus}"
        )
    return {
        "dim_ker_AminusI": dim_ker_minus,
        "dim_ker_AplusI": dim_ker_plus,
        "dim_ker_omega": dim_ker_omega,
        "tangent_dim": rank_minus,
        "tolerance_warning": warn,
    }


# ---------------------------------------------------------------------------
# Twist-change chain and holonomy products
# ---------------------------------------------------------------------------


def change_twist_chain(a_list, kappa_list, h_list, tol: float = 1e-11) -> dict:
    """Transport class representatives along a chain of inner twist changes.

    With u_1 = e and u_{i+1} = a_i kappa_i(u_i), the shifted representatives
    h'_i = u_i h_i kappa_i(u_i)^{-1} a_i^{-1} multiply to (h_1...h_r) a^{-1}
    where a = u_{r+1}; the residual of that identity is returned and checked.
    """
    if not (len(a_list) == len(kappa_list) == len(h_list)):
        raise ValidationError("a_list, kappa_list, h_list must share a length")
    a_ms = [_m(a) for a in a_list]
    h_ms = [_m(h) for h in h_list]
    n = a_ms[0].shape[0]
    us = [np.eye(n, dtype=complex)]
    for a, kap in zip(a_ms, kappa_list):
        us.append(a @ kap.apply_matrix(us[-1]))
    a_total = us[-1]
    h_primes = [
        _tconj(u, h, kap) @ a.conj().T
        for u, h, kap, a in zip(us[:-1], h_ms, kappa_list, a_ms)
    ]
    lhs = np.eye(n, dtype=complex)
    for hp in h_primes:
        lhs = lhs @ hp
    rhs = np.eye(n, dtype=complex)
    for h in h_ms:
        rhs = rhs @ h
    rhs = rhs @ a_total.conj().T
    residual = float(np.max(np.abs(lhs - rhs)))
    if residual > tol:
        raise InternalError(f"twist-change identity violated: residual {residual:.3e}")
    return {
        "u_list": [UnitaryElement(u) for u in us],
        "a": UnitaryElement(a_total),
        "h_prime_list": [UnitaryElement(h) for h in h_primes],
        "residual": residual,
    }


def holonomy_product_setup(kappa_list, d_list, a_list, alcoves=None, tol: float = 1e-11) -> dict:
    """Close a tuple of twisted holonomies into a product that multiplies to e.

    Transports the connecting elements a_i to a'_i = (kappa_{i-1} o ... o
    kappa_1)(a_i) with a'_r = e, forms g_i = a'_i d_i kappa_i(a'_i)^{-1}
    (twisted conjugates of the d_i), and solves the final holonomy from the
    closure requirement prod g_i = e.  When alcoves are supplied, class
    preservation of each factor is asserted.
    """
    r = len(kappa_list)
    if len(a_list) != r - 1:
        raise ValidationError(f"expected {r - 1} connecting elements, got {len(a_list)}")
    if len(d_list) not in (r - 1, r):
        raise ValidationError(f"expected {r - 1} or {r} holonomies, got {len(d_list)}")
    if not compose_to_identity(kappa_list):
        raise ValidationError("twist composition is not the identity automorphism")
    d_ms = [_m(d) for d in d_list[: r - 1]]
    a_ms = [_m(a) for a in a_list]
    n = d_ms[0].shape[0] if d_ms else kappa_list[0].n

    a_primes = []
    for i in range(r - 1):
        t = a_ms[i]
        for j in range(i - 1, -1, -1):
            t = kappa_list[j].apply_matrix(t)
        a_primes.append(t)
    a_primes.append(np.eye(n, dtype=complex))

    g_ms = [
        ap @ d @ kap.apply_matrix(ap).conj().T
        for ap, d, kap in zip(a_primes[:-1], d_ms, kappa_list[:-1])
    ]
    partial = np.eye(n, dtype=complex)
    for g in g_ms:
        partial = partial @ g
    g_last = partial.conj().T
    g_ms.append(g_last)
    d_solved = d_ms + [g_last]  # a'_r = e makes the last holonomy the factor itself

    total = partial @ g_last
    residual = float(np.max(np.abs(total - np.eye(n))))
    if residual > tol:
        raise InternalError(f"holonomy closure violated: residual {residual:.3e}")

    if alcoves is not None:
        for g, d, kap, alc in zip(g_ms, d_solved, kappa_list, alcoves):
            cg = class_point(g, kap, alc)
            cd = class_point(d, kap, alc)
            if max(abs(x - y) for x, y in zip(cg.coords, cd.coords)) > 1e-8:
                raise InternalError("twisted class not preserved by the holonomy transport")

    return {
        "g_list": [UnitaryElement(g) for g in g_ms],
        "d_list": [UnitaryElement(d) for d in d_solved],
        "residual": residual,
    }


# ---------------------------------------------------------------------------
# Matrix file format
# ---------------------------------------------------------------------------


def matrix_to_jsonable(u) -> list:
    """Row-major nested lists of [re, im] pairs."""
    um = _m(u)
    return [[[float(x.real), float(x.imag)] for x in row] for row in um]


def matrix_from_jsonable(data) -> UnitaryElement:
    try:
        u = np.array([[complex(re, im) for re, im in row] for row in data])
    except (TypeError, ValueError) as exc:
        raise ValidationError("matrix data must be nested [re, im] pairs") from exc
    return unitary(u)
