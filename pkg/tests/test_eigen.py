import numpy as np
import pytest

from twistconj import eigen, sun
from twistconj.errors import NumericError


def test_diagonal_angles():
    u = np.diag(np.exp(2j * np.pi * np.array([0.3, -0.1, -0.2])))
    angles = sorted(eigen.unitary_eigenangles(u))
    assert np.allclose(angles, [-0.2, -0.1, 0.3], atol=1e-14)


def test_conjugated_diagonal(rng):
    for n in (2, 3, 4, 6, 8):
        target = rng.random(n) - 0.5
        target[-1] -= target.sum()
        v = sun.haar_sample(n, rng).entries
        u = v @ np.diag(np.exp(2j * np.pi * target)) @ v.conj().T
        got = np.sort(np.mod(eigen.unitary_eigenangles(u), 1.0))
        want = np.sort(np.mod(target, 1.0))
        assert np.max(np.abs(got - want)) < 1e-10


def test_branch_range(rng):
    for _ in range(50):
        u = sun.haar_sample(5, rng).entries
        for a in eigen.unitary_eigenangles(u):
            assert -0.5 < a <= 0.5


def test_qr_matches_cubic(rng):
    for _ in range(200):
        u = sun.haar_sample(3, rng).entries
        got = np.sort(eigen.unitary_eigenangles(u))
        cubic = eigen._cubic_eigenvalues([[u[i, j] for j in range(3)] for i in range(3)])
        want = np.sort([np.angle(lam) / (2 * np.pi) for lam in cubic])
        assert np.max(np.abs(got - want)) < 1e-9


def test_characteristic_polynomial_agreement(rng):
    for n in (2, 3, 5, 8):
        u = sun.haar_sample(n, rng).entries
        lam = [np.exp(2j * np.pi * a) for a in eigen.unitary_eigenangles(u)]
        assert np.max(np.abs(np.poly(u) - np.poly(lam))) < 1e-12


def test_size_cap():
    with pytest.raises(NumericError):
        eigen.unitary_eigenangles(np.eye(9))


def test_non_unitary_rejected():
    with pytest.raises(NumericError):
        eigen.unitary_eigenangles(np.diag([2.0, 0.5, 1.0]))


def test_scalar_matrix():
    u = np.exp(2j * np.pi / 3) * np.eye(3)
    angles = eigen.unitary_eigenangles(u)
    assert np.allclose(angles, [1 / 3] * 3, atol=1e-13)
