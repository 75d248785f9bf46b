from fractions import Fraction

from twistconj import exact


def test_rref_and_rank():
    m = exact.mat([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert exact.rank(m) == 2
    reduced, pivots = exact.rref(m)
    assert pivots == (0, 1)
    assert reduced[0] == exact.vec([1, 0, 1])


def test_solve_square_exact():
    a = exact.mat([[2, 1], [1, 3]])
    b = exact.vec([1, 0])
    x = exact.solve_square(a, b)
    assert x == (Fraction(3, 5), Fraction(-1, 5))
    assert exact.solve_square(exact.mat([[1, 2], [2, 4]]), b) is None


def test_nullspace():
    m = exact.mat([[1, 1, 0], [0, 0, 1]])
    ns = exact.nullspace(m)
    assert len(ns) == 1
    assert exact.mat_vec(m, ns[0]) == exact.zero_vec(2)


def test_coords_in_basis():
    basis = [exact.vec([1, 0, 1]), exact.vec([0, 1, 1])]
    v = exact.vec([2, 3, 5])
    c = exact.coords_in_basis(basis, v)
    assert c == (Fraction(2), Fraction(3))
    assert exact.coords_in_basis(basis, exact.vec([1, 0, 0])) is None


def test_lattice_basis_reduces_generators():
    gens = [exact.vec([1, 0]), exact.vec([0, 1]), exact.vec([1, 1])]
    basis = exact.lattice_basis(gens)
    assert len(basis) == 2
    # half-integer generator wins over its double
    gens = [exact.vec([Fraction(1, 2), Fraction(-1, 2)]), exact.vec([1, -1])]
    basis = exact.lattice_basis(gens)
    assert basis == [(Fraction(1, 2), Fraction(-1, 2))]


def test_primitive_integer_and_canonical_halfspace():
    v = exact.vec([Fraction(2, 3), Fraction(-4, 3)])
    assert exact.primitive_integer(v) == (Fraction(1), Fraction(-2))
    n, c = exact.canonical_halfspace(exact.vec([Fraction(-2, 3), 0]), Fraction(1, 3))
    assert n == (Fraction(-1), Fraction(0))
    assert c == Fraction(1, 2)


def test_polytope_vertices_triangle():
    hs = [
        (exact.vec([-1, 0]), Fraction(0)),
        (exact.vec([0, -1]), Fraction(0)),
        (exact.vec([1, 1]), Fraction(1)),
    ]
    verts = sorted(exact.polytope_vertices(hs))
    assert verts == [
        (Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(1)),
        (Fraction(1), Fraction(0)),
    ]
    # a redundant constraint defines no facet
    hs_red = hs + [(exact.vec([1, 0]), Fraction(2))]
    verts = exact.polytope_vertices(hs_red)
    assert exact.facet_indices(hs_red, verts) == [0, 1, 2]


def test_affine_rank():
    pts = [exact.vec([0, 0]), exact.vec([1, 1]), exact.vec([2, 2])]
    assert exact.affine_rank(pts) == 1
    assert exact.affine_rank([]) == -1


def test_floor_sqrt():
    assert exact.floor_sqrt(Fraction(0)) == 0
    assert exact.floor_sqrt(Fraction(17, 2)) == 2
    assert exact.floor_sqrt(Fraction(9)) == 3
    assert exact.floor_sqrt(Fraction(899, 100)) == 2
