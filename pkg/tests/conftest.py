import numpy as np
import pytest

from twistconj import rootsys, sun, twist


@pytest.fixture(scope="session")
def a2():
    return rootsys.build_root_datum("A", 2)


@pytest.fixture(scope="session")
def a3():
    return rootsys.build_root_datum("A", 3)


@pytest.fixture(scope="session")
def d4():
    return rootsys.build_root_datum("D", 4)


@pytest.fixture(scope="session")
def a2_flip(a2):
    return twist.diagram_automorphism(a2, (1, 0))


@pytest.fixture(scope="session")
def a2_identity(a2):
    return twist.diagram_automorphism(a2, (0, 1))


@pytest.fixture(scope="session")
def kappa(a2_flip):
    return sun.twist_realization(a2_flip)


@pytest.fixture(scope="session")
def kid(a2_identity):
    return sun.twist_realization(a2_identity)


@pytest.fixture(scope="session")
def twisted_alcove(a2_flip):
    return twist.build_twisted_alcove(a2_flip)


@pytest.fixture(scope="session")
def standard_alcove(a2):
    return rootsys.untwisted_alcove(a2)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def xi_s(s: float) -> np.ndarray:
    """Torus coordinates of the twisted class with parameter s."""
    return np.array([s / 2.0, 0.0, -s / 2.0])


def twisted_label(alc, s: float) -> sun.ClassPoint:
    theta = xi_s(s)
    return sun.ClassPoint(coords=tuple(alc.coords_of(theta)), theta=tuple(theta))
