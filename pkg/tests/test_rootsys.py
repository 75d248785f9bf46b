from fractions import Fraction

import numpy as np
import pytest

from twistconj import exact, rootsys
from twistconj.errors import ConfigurationError


def test_a2_cartan_and_roots(a2):
    assert a2.cartan_matrix == ((2, -1), (-1, 2))
    assert a2.simple_roots[0] == exact.vec([1, -1, 0])
    assert a2.simple_roots[1] == exact.vec([0, 1, -1])
    assert a2.highest_root == exact.vec([1, 0, -1])


def test_a1_cartan():
    d = rootsys.build_root_datum("A", 1)
    assert d.cartan_matrix == ((2,),)


def test_d4_center_node(d4):
    c = d4.cartan_matrix
    neighbors = [j for j in range(4) if j != 1 and c[1][j] == -1]
    assert neighbors == [0, 2, 3]


def test_rejects_unknown_family_and_low_rank():
    with pytest.raises(ConfigurationError):
        rootsys.build_root_datum("E", 8)
    with pytest.raises(ConfigurationError):
        rootsys.build_root_datum("D", 2)


def test_type_a_sum_zero(a3):
    for v in list(a3.simple_roots) + [a3.highest_root] + list(a3.fundamental_coweights):
        assert sum(v) == 0


def test_weyl_group_orders(a2, a3, d4):
    assert len(rootsys.generate_weyl_group(a2)) == 6
    assert len(rootsys.generate_weyl_group(a3)) == 24
    assert len(rootsys.generate_weyl_group(d4)) == 192


def test_weyl_elements_permute_roots(a2, a3, d4):
    for datum in (a2, a3, d4):
        roots = set()
        for w in rootsys.generate_weyl_group(datum):
            for alpha in datum.simple_roots:
                roots.add(w.apply(alpha))
        # closure under the full group gives the root system; every image is a root
        for w in rootsys.generate_weyl_group(datum):
            for r in list(roots)[:20]:
                assert w.apply(r) in roots


def test_root_counts(a2, a3, d4):
    for datum, count in ((a2, 6), (a3, 12), (d4, 24)):
        roots = set()
        for w in rootsys.generate_weyl_group(datum):
            for alpha in datum.simple_roots:
                roots.add(w.apply(alpha))
        assert len(roots) == count


def test_fold_sorts_type_a(a2):
    theta, w = rootsys.fold_to_chamber(a2, exact.vec([-1, 0, 1]))
    assert theta == exact.vec([1, 0, -1])
    assert w.apply(exact.vec([-1, 0, 1])) == theta


def test_fold_identity_on_dominant(a2):
    theta, w = rootsys.fold_to_chamber(a2, exact.vec([1, 0, -1]))
    assert theta == exact.vec([1, 0, -1])
    assert w.matrix == exact.identity_mat(3)
    assert w.word_length == 0


def test_fold_matches_brute_force_orbit_minimum(a3, rng):
    weyl = rootsys.generate_weyl_group(a3)
    for _ in range(100):
        theta = exact.vec([Fraction(int(x), 8) for x in rng.integers(-40, 40, size=4)])
        theta = exact.vsub(theta, exact.vscale(exact.vec([1, 1, 1, 1]), sum(theta) / 4))
        folded, w = rootsys.fold_to_chamber(a3, theta)
        assert w.apply(theta) == folded
        for alpha in a3.simple_roots:
            assert exact.vdot(alpha, folded) >= 0
        dominant = [w2.apply(theta) for w2 in weyl]
        dominant = [
            t for t in dominant
            if all(exact.vdot(a, t) >= 0 for a in a3.simple_roots)
        ]
        assert folded in dominant


def test_fold_weyl_invariant(a2, a3):
    cases = [
        (a2, exact.vec([Fraction(5, 7), Fraction(-1, 3), Fraction(-8, 21)])),
        (a3, exact.vec([Fraction(1, 2), Fraction(-1, 5), Fraction(1, 10), Fraction(-2, 5)])),
    ]
    for datum, theta in cases:
        weyl = rootsys.generate_weyl_group(datum)
        base, _ = rootsys.fold_to_chamber(datum, theta)
        for w in weyl:
            folded, _ = rootsys.fold_to_chamber(datum, w.apply(theta))
            assert folded == base


def test_fold_accepts_floats(a2):
    folded, _ = rootsys.fold_to_chamber(a2, np.array([-0.4, 0.1, 0.3]))
    assert folded[0] >= folded[1] >= folded[2]


def test_exact_reproducibility(a3):
    t1 = rootsys.fold_to_chamber(a3, exact.vec([Fraction(1, 3), Fraction(-2, 5), Fraction(1, 15), 0]))
    t2 = rootsys.fold_to_chamber(a3, exact.vec([Fraction(1, 3), Fraction(-2, 5), Fraction(1, 15), 0]))
    assert t1[0] == t2[0]


def test_untwisted_alcove_a1():
    d = rootsys.build_root_datum("A", 1)
    alc = rootsys.untwisted_alcove(d)
    assert alc.dimension == 1
    assert {(h.normal, h.offset) for h in alc.halfspaces} == {
        (exact.vec([-1, 1]), Fraction(0)),
        (exact.vec([1, -1]), Fraction(1)),
    }


def test_untwisted_alcove_a2_halfspaces(standard_alcove, a2):
    got = {(h.normal, h.offset) for h in standard_alcove.halfspaces}
    expected = {
        (exact.vec([-1, 1, 0]), Fraction(0)),
        (exact.vec([0, -1, 1]), Fraction(0)),
        (exact.vec([1, 0, -1]), Fraction(1)),
    }
    assert got == expected


def test_untwisted_alcove_a2_vertices(standard_alcove, a2):
    # facet intersections solved exactly: origin and the two fundamental coweights
    verts = standard_alcove.vertices()
    expected = sorted([exact.zero_vec(3)] + [v for v in a2.fundamental_coweights])
    assert verts == expected
