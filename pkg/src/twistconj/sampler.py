"""Monte-Carlo engine for product-class polytopes and the Horn-cone baseline.

Samples products of twisted conjugacy classes with the last factor solved
from the closure constraint, records the class label of that factor, and
sharpens the sampled cloud with derivative-free support-function refinement.
Membership certification is one-sided: a small product residual certifies a
tuple, a large one decides nothing.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .alcove import TwistedAlcove
from .errors import NumericError, ValidationError
from .optim import lm_least_squares, nelder_mead
from .sun import (
    ClassPoint,
    TwistRealization,
    UnitaryElement,
    _cayley,
    _class_point_from_theta,
    _m,
    _tconj,
    class_point,
    compose_to_identity,
    derived_seed,
    haar_sample,
    ordinary_class_point,
    su_basis,
    torus_exp,
    twisted_conjugate,
    _base_env,
)

MEMBER_THRESHOLD = 1e-6
UNRESOLVED_RATE_LIMIT = 1e-3


# ---------------------------------------------------------------------------
# Problem and cloud containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProductProblem:
    """Fixed classes xi_1..xi_{r-1} and the alcove receiving the last factor."""

    n: int
    kappas: tuple[TwistRealization, ...]
    fixed_points: tuple[ClassPoint, ...]
    target_alcove: TwistedAlcove

    @property
    def r(self) -> int:
        return len(self.kappas)

    def descriptor(self) -> dict:
        return {
            "n": self.n,
            "twists": [k.order for k in self.kappas],
            "fixed_points": [list(p.coords) for p in self.fixed_points],
        }

    def descriptor_hash(self) -> str:
        blob = json.dumps(self.descriptor(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def product_problem(kappas, fixed_points, target_alcove) -> ProductProblem:
    kappas = tuple(kappas)
    fixed_points = tuple(fixed_points)
    if len(kappas) != len(fixed_points) + 1:
        raise ValidationError("need one twist per factor, the last factor being solved")
    if not compose_to_identity(kappas):
        raise ValidationError("twist composition is not the identity automorphism")
    return ProductProblem(
        n=kappas[0].n,
        kappas=kappas,
        fixed_points=fixed_points,
        target_alcove=target_alcove,
    )


@dataclass(frozen=True)
class CloudPoint:
    coords: tuple[float, ...]
    worker: int
    seed: int
    index: int
    refined: bool = False
    witnesses: tuple | None = field(default=None, compare=False, repr=False)


@dataclass
class SampleCloud:
    points: list[CloudPoint]
    problem_hash: str
    target_alcove: TwistedAlcove
    failures: int = 0

    def coords_array(self) -> np.ndarray:
        return np.array([p.coords for p in self.points])

    def merged(self, other: "SampleCloud") -> "SampleCloud":
        if other.problem_hash != self.problem_hash:
            raise ValidationError("clouds describe different problems")
        pts = sorted(
            set(self.points) | set(other.points),
            key=lambda p: (p.worker, p.index, p.coords),
        )
        return SampleCloud(pts, self.problem_hash, self.target_alcove,
                           self.failures + other.failures)

    def check_slack(self, slack: float = 1e-9) -> None:
        for p in self.points:
            theta = self.target_alcove.theta_of(p.coords)
            if np.max(self.target_alcove.violations(theta)) > slack:
                raise ValidationError("cloud point violates its alcove")


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def sample_class_element(xi: ClassPoint, kappa: TwistRealization, rng) -> UnitaryElement:
    """A Haar-random element of the twisted conjugacy class labeled by xi."""
    h = haar_sample(kappa.n, rng)
    return twisted_conjugate(h, torus_exp(xi.theta), kappa)


def _worker_counts(count: int, workers: int) -> list[int]:
    base, extra = divmod(count, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


def product_image_sample(
    prob: ProductProblem,
    count: int,
    master_seed: int = 0,
    workers: int = 1,
    keep_witnesses: bool = True,
) -> SampleCloud:
    """Cloud of class labels of the solved factor over random class products.

    Each sample draws the first r-1 factors from their classes; the closure
    constraint forces the last factor to be the inverse of their product, and
    its class label is recorded.
    """
    exps = [torus_exp(p.theta).entries for p in prob.fixed_points]
    kap_last, alc = prob.kappas[-1], prob.target_alcove
    points: list[CloudPoint] = []
    failures = 0
    nfac = len(exps)
    for w, c in enumerate(_worker_counts(count, workers)):
        seed = derived_seed(master_seed, w)
        rng = np.random.default_rng(np.random.PCG64(seed))
        batches = [_haar_batch_su(prob.n, c, rng) for _ in range(nfac)]
        for i in range(c):
            hs = [batches[j][i] for j in range(nfac)]
            g = np.eye(prob.n, dtype=complex)
            for h, e, kap in zip(hs, exps, prob.kappas):
                g = g @ _tconj(h, e, kap)
            try:
                cp = class_point(g.conj().T, kap_last, alc)
            except NumericError:
                failures += 1
                continue
            points.append(
                CloudPoint(
                    coords=cp.coords,
                    worker=w,
                    seed=seed,
                    index=i,
                    witnesses=tuple(hs) if keep_witnesses else None,
                )
            )
    if failures > max(0.0, UNRESOLVED_RATE_LIMIT * count):
        raise NumericError(f"{failures} of {count} samples failed class projection")
    return SampleCloud(points, prob.descriptor_hash(), alc, failures)


def support_maximize(prob: ProductProblem, cloud: SampleCloud, direction, budget: int = 500) -> ClassPoint:
    """Push the cloud outward in one chart direction by local search.

    Warm-starts from the cloud point already extremal for the direction and
    perturbs its generating tuple through the Cayley retraction.  The refined
    point is appended to the cloud.
    """
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    scored = [p for p in cloud.points if p.witnesses is not None]
    if not scored:
        raise ValidationError("cloud carries no generator witnesses to refine")
    warm = max(scored, key=lambda p: float(u @ np.array(p.coords)))
    if budget <= 0:
        return ClassPoint(coords=warm.coords, theta=tuple(cloud.target_alcove.theta_of(warm.coords)))

    exps = [torus_exp(p.theta).entries for p in prob.fixed_points]
    kap_last, alc = prob.kappas[-1], prob.target_alcove
    basis = su_basis(prob.n)
    dim = len(basis)
    nfac = len(exps)
    h0 = [np.asarray(h) for h in warm.witnesses]

    def make_objective(h_base):
        def objective(x):
            g = np.eye(prob.n, dtype=complex)
            for i, (e, kap) in enumerate(zip(exps, prob.kappas)):
                h = h_base[i] @ _cayley(basis, x[i * dim:(i + 1) * dim])
                g = g @ _tconj(h, e, kap)
            try:
                cp = class_point(g.conj().T, kap_last, alc)
            except NumericError:
                return np.inf
            return -float(u @ np.array(cp.coords))
        return objective

    # coarse stage, then a recentered fine stage to finish the boundary approach
    x, f, used = nelder_mead(
        make_objective(h0), np.zeros(nfac * dim), scale=0.25, budget=(3 * budget) // 5,
        patience=40, min_improve=1e-4,
    )
    h0 = [h0[i] @ _cayley(basis, x[i * dim:(i + 1) * dim]) for i in range(nfac)]
    x, f2, _ = nelder_mead(
        make_objective(h0), np.zeros(nfac * dim), scale=0.04, budget=budget - used,
        patience=40, min_improve=1e-5,
    )
    f = min(f, f2)
    if -f <= float(u @ np.array(warm.coords)):
        return ClassPoint(coords=warm.coords, theta=tuple(alc.theta_of(warm.coords)))
    hs = tuple(h0[i] @ _cayley(basis, x[i * dim:(i + 1) * dim]) for i in range(nfac))
    g = np.eye(prob.n, dtype=complex)
    for h, e, kap in zip(hs, exps, prob.kappas):
        g = g @ _tconj(h, e, kap)
    cp = class_point(g.conj().T, kap_last, alc)
    cloud.points.append(
        CloudPoint(
            coords=cp.coords,
            worker=warm.worker,
            seed=warm.seed,
            index=len(cloud.points),
            refined=True,
            witnesses=hs,
        )
    )
    return cp


# ---------------------------------------------------------------------------
# Membership certification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    residual: float


def membership_test(
    xi_tuple,
    kappa_list,
    budget: int = 2000,
    restarts: int = 8,
    seed: int = 0,
    threshold: float = MEMBER_THRESHOLD,
) -> MembershipResult:
    """One-sided certification that prescribed classes multiply to the identity.

    Minimizes the closure residual over the first r-1 class representatives
    (the last is gauge-fixed to its torus element; the twisted diagonal action
    makes that lossless).  Each restart screens a basin with a short simplex
    run and polishes it with damped finite-difference least squares: the
    simplex alone stalls around 1e-4 in these chart dimensions.  A residual at
    or below the threshold certifies membership; anything else is unresolved.
    """
    kappas = list(kappa_list)
    xis = list(xi_tuple)
    if len(kappas) != len(xis):
        raise ValidationError("one class label per twist is required")
    if not compose_to_identity(kappas):
        raise ValidationError("twist composition is not the identity automorphism")
    n = kappas[0].n
    exps = [torus_exp(x.theta).entries for x in xis]
    basis = su_basis(n)
    dim = len(basis)
    nfree = len(xis) - 1
    rng = np.random.default_rng(np.random.PCG64(seed))
    eye = np.eye(n, dtype=complex)

    def closure(h_list):
        g = eye
        for h, e, kap in zip(h_list, exps[:-1], kappas):
            g = g @ _tconj(h, e, kap)
        return g @ exps[-1] - eye

    def recenter(h_base, x):
        return [h_base[i] @ _cayley(basis, x[i * dim:(i + 1) * dim]) for i in range(nfree)]

    def make_resid(h_base):
        def resid(x):
            dd = closure(recenter(h_base, x))
            return np.concatenate([dd.real.ravel(), dd.imag.ravel()])
        return resid

    def make_objective(h_base):
        resid = make_resid(h_base)

        def objective(x):
            r = resid(x)
            return float(r @ r)
        return objective

    best = float(np.max(np.abs(closure([eye] * nfree))))
    for s in range(restarts):
        h_base = [eye] * nfree if s == 0 else [haar_sample(n, rng).entries for _ in range(nfree)]
        x, _, _ = nelder_mead(
            make_objective(h_base), np.zeros(nfree * dim), scale=0.7,
            budget=max(150, budget // 4),
        )
        h_base = recenter(h_base, x)
        x, _, _ = lm_least_squares(make_resid(h_base), np.zeros(nfree * dim))
        h_base = recenter(h_base, x)
        best = min(best, float(np.max(np.abs(closure(h_base)))))
        if best <= threshold:
            return MembershipResult(member=True, residual=best)
    return MembershipResult(member=False, residual=best)


# ---------------------------------------------------------------------------
# Commutator and Horn samplers
# ---------------------------------------------------------------------------


def twisted_commutator_sample(
    kappa: TwistRealization, count: int, master_seed: int = 0, workers: int = 1
) -> SampleCloud:
    """Cloud of ordinary class labels of a b kappa(a)^-1 kappa(b)^-1 over Haar (a, b)."""
    if kappa.order != 2:
        raise ValidationError("the commutator sampler needs an order-2 twist")
    alc0, _, _ = _base_env(kappa.tw.base)
    points: list[CloudPoint] = []
    failures = 0
    for w, c in enumerate(_worker_counts(count, workers)):
        seed = derived_seed(master_seed, w)
        rng = np.random.default_rng(np.random.PCG64(seed))
        for i in range(c):
            a = haar_sample(kappa.n, rng).entries
            b = haar_sample(kappa.n, rng).entries
            m = a @ b @ kappa.apply_matrix(a).conj().T @ kappa.apply_matrix(b).conj().T
            try:
                cp = ordinary_class_point(m, alc0)
            except NumericError:
                failures += 1
                continue
            points.append(CloudPoint(coords=cp.coords, worker=w, seed=seed, index=i))
    if failures > max(0.0, UNRESOLVED_RATE_LIMIT * count):
        raise NumericError(f"{failures} of {count} commutator samples failed projection")
    return SampleCloud(points, f"commutator-su{kappa.n}", alc0, failures)


def _haar_batch(n: int, count: int, rng) -> np.ndarray:
    """Batched Haar samples on U(n) (sufficient for adjoint orbits)."""
    z = (rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))) / np.sqrt(2)
    q = np.empty_like(z)
    for j in range(n):
        v = z[:, :, j].copy()
        for i in range(j):
            proj = np.einsum("bi,bi->b", q[:, :, i].conj(), v)
            v -= q[:, :, i] * proj[:, None]
        nv = np.sqrt(np.einsum("bi,bi->b", v.conj(), v).real)
        q[:, :, j] = v / nv[:, None]
    return q


def _haar_batch_su(n: int, count: int, rng) -> np.ndarray:
    """Batched Haar samples on SU(n): U(n) batch with determinants phased out."""
    q = _haar_batch(n, count, rng)
    d = np.linalg.det(q)
    return q * np.exp(-1j * np.angle(d) / n)[:, None, None]


def horn_sum_sample(datum, xi_list, count: int, master_seed: int = 0) -> np.ndarray:
    """Dominant spectra of minus the sum of random adjoint-orbit elements.

    Fixing Hermitian spectra xi_1..xi_{r-1}, each sample conjugates them by
    independent Haar unitaries, and the chamber-folded spectrum of the negated
    sum is recorded: the slice of attainable final spectra in the zero-sum
    problem.  Type A only (Hermitian matrices).
    """
    if datum.family != "A":
        raise ValidationError("the Hermitian-sum sampler is defined for type A")
    n = datum.rank + 1
    xis = [np.asarray(x, dtype=float) for x in xi_list]
    for xi in xis:
        if xi.shape != (n,):
            raise ValidationError(f"spectrum must have {n} entries")
        if np.any(np.diff(xi) > 1e-12):
            raise ValidationError("spectra must be dominant (sorted descending)")
    rng = np.random.default_rng(np.random.PCG64(master_seed))
    total = np.zeros((count, n, n), dtype=complex)
    for xi in xis:
        u = _haar_batch(n, count, rng)
        total += np.einsum("bij,j,bkj->bik", u, xi, u.conj())
    try:
        spectra = np.linalg.eigvalsh(-total)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"Hermitian eigensolver failed: {exc}") from exc
    return spectra[:, ::-1]  # descending order is the type A chamber fold


# ---------------------------------------------------------------------------
# Random tuples for convexity trials
# ---------------------------------------------------------------------------


def random_alcove_point(alc: TwistedAlcove, rng) -> ClassPoint:
    """Uniform rejection sample from the alcove, in chart coordinates."""
    verts = np.array([[float(x) for x in alc.coords_of([float(y) for y in v])] for v in alc.vertices()])
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    for _ in range(10000):
        c = lo + (hi - lo) * rng.random(len(lo))
        theta = alc.theta_of(c)
        if np.max(alc.violations(theta)) <= 0:
            return _class_point_from_theta(alc, theta)
    raise NumericError("rejection sampling failed to hit the alcove")


def random_member_tuple(kappas, factor_alcoves, target_alcove, rng):
    """A certified member tuple built by construction, with its closure residual.

    Draws random labels for the first r-1 factors, random representatives of
    their classes, and labels the inverse product; the witness tuple makes the
    closure residual float-level by construction.
    """
    kappas = list(kappas)
    n = kappas[0].n
    xis = [random_alcove_point(a, rng) for a in factor_alcoves]
    hs = [haar_sample(n, rng).entries for _ in xis]
    g = np.eye(n, dtype=complex)
    for h, xi, kap in zip(hs, xis, kappas):
        g = g @ _tconj(h, torus_exp(xi.theta).entries, kap)
    last = class_point(g.conj().T, kappas[-1], target_alcove)
    # the witness for the last factor is g^-1 itself, so the closure residual
    # reduces to the unitarity defect of the accumulated product
    residual = float(np.max(np.abs(g.conj().T @ g - np.eye(n))))
    return tuple(xis) + (last,), residual


def midpoint_tuple(tuple_a, tuple_b, alcoves):
    """Coordinate-wise midpoint of two tuples, re-expressed as class points."""
    out = []
    for pa, pb, alc in zip(tuple_a, tuple_b, alcoves):
        coords = 0.5 * (np.array(pa.coords) + np.array(pb.coords))
        out.append(_class_point_from_theta(alc, alc.theta_of(coords)))
    return tuple(out)


# ---------------------------------------------------------------------------
# Cloud files
# ---------------------------------------------------------------------------


def cloud_csv_text(cloud: SampleCloud) -> str:
    """CSV serialization: header row, LF endings, 17-significant-digit floats."""
    d = len(cloud.points[0].coords) if cloud.points else cloud.target_alcove.dimension
    header = "worker,seed," + ",".join(f"coord{i + 1}" for i in range(d)) + ",refined"
    lines = [header]
    for p in cloud.points:
        coords = ",".join(f"{c:.17g}" for c in p.coords)
        lines.append(f"{p.worker},{p.seed},{coords},{1 if p.refined else 0}")
    return "\n".join(lines) + "\n"


def write_cloud_csv(cloud: SampleCloud, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(cloud_csv_text(cloud))
