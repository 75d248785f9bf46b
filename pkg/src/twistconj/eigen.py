"""Eigenangles of small dense unitary matrices.

Hessenberg reduction followed by explicitly shifted QR iteration with the
Wilkinson shift, in scalar complex arithmetic (no LAPACK).  Unitary matrices
are normal, so the iteration is well conditioned; a Cardano fallback covers
the 3x3 case should the iteration ever stall.  Sizes up to 8 are supported.
"""

from __future__ import annotations

import cmath
from math import atan2, pi, sqrt

from .errors import NumericError

MAX_SIZE = 8
_SPLIT_TOL = 1e-14
_MAX_ITERS_PER_EIGENVALUE = 40


def _givens_rows(h, i1, i2, c, s, lo=0):
    """Rows i1,i2 <- [conj(c) r1 + conj(s) r2, -s r1 + c r2] from column lo on."""
    r1, r2 = h[i1], h[i2]
    cc, sc = c.conjugate(), s.conjugate()
    for j in range(lo, len(r1)):
        a, b = r1[j], r2[j]
        r1[j] = cc * a + sc * b
        r2[j] = -s * a + c * b


def _givens_cols(h, j1, j2, c, s, hi=None):
    """Columns j1,j2 <- [c c1 + s c2, -conj(s) c1 + conj(c) c2] up to row hi."""
    n = len(h) if hi is None else hi
    sc = s.conjugate()
    cc = c.conjugate()
    for i in range(n):
        a, b = h[i][j1], h[i][j2]
        h[i][j1] = c * a + s * b
        h[i][j2] = -sc * a + cc * b


def _hessenberg(h):
    n = len(h)
    for col in range(n - 2):
        for row in range(col + 2, n):
            b = h[row][col]
            if b == 0:
                continue
            a = h[col + 1][col]
            r = sqrt(abs(a) ** 2 + abs(b) ** 2)
            if r < 1e-300:
                continue
            c, s = a / r, b / r
            _givens_rows(h, col + 1, row, c, s, lo=col)
            _givens_cols(h, col + 1, row, c, s)


def _wilkinson_shift(h, m):
    a, b = h[m - 1][m - 1], h[m - 1][m]
    c, d = h[m][m - 1], h[m][m]
    tr = a + d
    det = a * d - b * c
    disc = cmath.sqrt(tr * tr - 4 * det)
    l1 = (tr + disc) / 2
    l2 = (tr - disc) / 2
    return l1 if abs(l1 - d) <= abs(l2 - d) else l2


def _qr_sweep(h, lo, m, shift):
    """One explicit QR step H <- R Q + shift I on the Hessenberg block lo..m."""
    for i in range(lo, m + 1):
        h[i][i] -= shift
    rotations = []
    for k in range(lo, m):
        a, b = h[k][k], h[k + 1][k]
        r = sqrt(abs(a) ** 2 + abs(b) ** 2)
        if r < 1e-300:
            rotations.append((1.0 + 0j, 0j))
            continue
        c, s = a / r, b / r
        _givens_rows(h, k, k + 1, c, s, lo=k)
        rotations.append((c, s))
    for k in range(lo, m):
        c, s = rotations[k - lo]
        # multiply by Q = G_lo^H ... G_{m-1}^H on the right
        sc = s.conjugate()
        cc = c.conjugate()
        for i in range(lo, min(k + 2, m) + 1):
            a, b = h[i][k], h[i][k + 1]
            h[i][k] = a * c + b * s
            h[i][k + 1] = -a * sc + b * cc
    for i in range(lo, m + 1):
        h[i][i] += shift


def _qr_eigenvalues(h):
    n = len(h)
    _hessenberg(h)
    eigs = []
    m = n - 1
    iters = 0
    while m >= 0:
        if m == 0:
            eigs.append(h[0][0])
            break
        # deflation search: largest lo <= m with a negligible subdiagonal below lo-1
        lo = m
        while lo > 0:
            sub = abs(h[lo][lo - 1])
            if sub <= _SPLIT_TOL * (abs(h[lo - 1][lo - 1]) + abs(h[lo][lo])):
                break
            lo -= 1
        if lo == m:
            eigs.append(h[m][m])
            m -= 1
            iters = 0
            continue
        if iters >= _MAX_ITERS_PER_EIGENVALUE:
            return None
        _qr_sweep(h, lo, m, _wilkinson_shift(h, m))
        iters += 1
    return eigs


def _cubic_eigenvalues(u):
    """Roots of the characteristic polynomial of a 3x3 matrix via Cardano."""
    a = u[0][0] + u[1][1] + u[2][2]
    tr2 = sum(u[i][j] * u[j][i] for i in range(3) for j in range(3))
    b = (a * a - tr2) / 2
    c = (
        u[0][0] * (u[1][1] * u[2][2] - u[1][2] * u[2][1])
        - u[0][1] * (u[1][0] * u[2][2] - u[1][2] * u[2][0])
        + u[0][2] * (u[1][0] * u[2][1] - u[1][1] * u[2][0])
    )
    # lambda^3 - a lambda^2 + b lambda - c, depressed by lambda = t + a/3
    p = b - a * a / 3
    q = -2 * a**3 / 27 + a * b / 3 - c
    # t^3 + p t + q = 0
    disc = cmath.sqrt(q * q / 4 + p**3 / 27)
    u1 = (-q / 2 + disc) ** (1 / 3)
    if abs(u1) < 1e-30:
        u1 = (-q / 2 - disc) ** (1 / 3)
    if abs(u1) < 1e-30:
        ts = [0j, 0j, 0j]
    else:
        omega = cmath.exp(2j * pi / 3)
        ts = [omega**k * u1 - p / (3 * omega**k * u1) for k in range(3)]
    return [t + a / 3 for t in ts]


def unitary_eigenvalues(u) -> list[complex]:
    """Eigenvalues of a unitary matrix of size at most 8."""
    try:
        n = len(u)
    except TypeError as exc:
        raise NumericError("expected a square matrix") from exc
    if n > MAX_SIZE:
        raise NumericError(f"eigen solver supports sizes up to {MAX_SIZE}, got {n}")
    h = [[complex(u[i][j]) for j in range(n)] for i in range(n)]
    if n == 1:
        return [h[0][0]]
    if n == 2:
        tr = h[0][0] + h[1][1]
        det = h[0][0] * h[1][1] - h[0][1] * h[1][0]
        disc = cmath.sqrt(tr * tr - 4 * det)
        return [(tr + disc) / 2, (tr - disc) / 2]
    eigs = _qr_eigenvalues(h)
    if eigs is None:
        if n == 3:
            eigs = _cubic_eigenvalues([[complex(u[i][j]) for j in range(3)] for i in range(3)])
        else:
            raise NumericError("shifted QR failed to converge")
    return eigs


def unitary_eigenangles(u) -> list[float]:
    """Eigenvalue angles in turns, each in (-1/2, 1/2], unsorted.

    Raises NumericError if any computed eigenvalue strays from the unit circle,
    which signals a non-unitary input rather than solver noise.
    """
    eigs = unitary_eigenvalues(u)
    angles = []
    for lam in eigs:
        r = abs(lam)
        if abs(r - 1.0) > 1e-8:
            raise NumericError(f"eigenvalue modulus {r} is off the unit circle")
        angles.append(atan2(lam.imag, lam.real) / (2 * pi))
    return angles
