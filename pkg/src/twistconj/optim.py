"""Derivative-free local search: an adaptive Nelder-Mead simplex for basin
finding, and a finite-difference Levenberg-Marquardt polisher for
least-squares objectives whose tails the simplex crawls through."""

from __future__ import annotations

import numpy as np


def lm_least_squares(resid, x0, iters=40, fd_eps=1e-6, lam0=1e-3, tol=1e-28):
    """Minimize |resid(x)|^2 by damped Gauss-Newton with numerical Jacobians.

    Returns (x, sum_of_squares, evaluations).  No analytic derivatives: the
    Jacobian is central finite differences, and the damping keeps steps sane
    when the Jacobian is rank-deficient along solution-manifold directions.
    """
    x = np.asarray(x0, dtype=float).copy()
    nv = x.size
    lam = lam0
    r = np.asarray(resid(x))
    f = float(r @ r)
    evals = 1
    eye = np.eye(nv)
    for _ in range(iters):
        jac = np.empty((r.size, nv))
        for j in range(nv):
            xp = x.copy()
            xp[j] += fd_eps
            xm = x.copy()
            xm[j] -= fd_eps
            jac[:, j] = (np.asarray(resid(xp)) - np.asarray(resid(xm))) / (2 * fd_eps)
            evals += 2
        a = jac.T @ jac
        g = jac.T @ r
        improved = False
        for _ in range(12):
            try:
                dx = np.linalg.solve(a + lam * eye, -g)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            rn = np.asarray(resid(x + dx))
            evals += 1
            fn = float(rn @ rn)
            if fn < f:
                x, r, f = x + dx, rn, fn
                lam = max(lam * 0.3, 1e-12)
                improved = True
                break
            lam *= 10
        if not improved or f < tol:
            break
    return x, f, evals


def nelder_mead(f, x0, scale=0.1, budget=2000, xtol=1e-12, ftol=1e-15,
                patience=None, min_improve=0.0):
    """Minimize f from x0; returns (x_best, f_best, evaluations).

    Uses the dimension-adaptive expansion/contraction parameters, which
    behave better than the classic ones above ~8 variables.  When patience
    is set, the search stops after that many iterations without improving
    the incumbent by more than min_improve.
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    alpha = 1.0
    beta = 1.0 + 2.0 / n
    gamma = 0.75 - 1.0 / (2.0 * n)
    delta = 1.0 - 1.0 / n

    pts = [x0]
    for i in range(n):
        e = x0.copy()
        e[i] += scale
        pts.append(e)
    vals = [f(p) for p in pts]
    evals = n + 1
    incumbent = min(vals)
    stale = 0

    while evals < budget:
        if patience is not None:
            current = min(vals)
            if current < incumbent - min_improve:
                incumbent = current
                stale = 0
            else:
                stale += 1
                if stale >= patience:
                    break
        order = np.argsort(vals)
        pts = [pts[i] for i in order]
        vals = [vals[i] for i in order]
        best, worst = vals[0], vals[-1]
        spread = max(np.max(np.abs(p - pts[0])) for p in pts[1:])
        if worst - best < ftol and spread < xtol:
            break
        centroid = np.mean(pts[:-1], axis=0)
        xr = centroid + alpha * (centroid - pts[-1])
        fr = f(xr)
        evals += 1
        if fr < vals[0]:
            xe = centroid + beta * (xr - centroid)
            fe = f(xe)
            evals += 1
            if fe < fr:
                pts[-1], vals[-1] = xe, fe
            else:
                pts[-1], vals[-1] = xr, fr
        elif fr < vals[-2]:
            pts[-1], vals[-1] = xr, fr
        else:
            if fr < vals[-1]:
                xc = centroid + gamma * (xr - centroid)
            else:
                xc = centroid - gamma * (centroid - pts[-1])
            fc = f(xc)
            evals += 1
            if fc < min(fr, vals[-1]):
                pts[-1], vals[-1] = xc, fc
            else:
                for i in range(1, n + 1):
                    pts[i] = pts[0] + delta * (pts[i] - pts[0])
                    vals[i] = f(pts[i])
                evals += n
    i = int(np.argmin(vals))
    return pts[i], vals[i], evals
