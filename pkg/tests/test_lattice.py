import random
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from mixbraid.lattice import (MonomialVector, det, hermite_normal_form, identity,
                              integer_kernel, integer_solve, invariant_factors,
                              lattice_points_in_box, matmul, matvec, rank,
                              rational_solve, smith_normal_form)
from mixbraid.quiver import ambient_data
from mixbraid.toric import crs, sub_problem

from oracles import invariant_factors_by_minors, rank_by_fractions


def matrices(max_dim=8, bound=100):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n),
                               min_size=m, max_size=m)))


def test_snf_identity():
    U, D, V = smith_normal_form(identity(3))
    assert D == identity(3)
    assert abs(det(U)) == 1 and abs(det(V)) == 1


def test_snf_two_by_two():
    _, D, _ = smith_normal_form([[2, 4], [6, 8]])
    assert D == [[2, 0], [0, 4]]
    assert invariant_factors_by_minors([[2, 4], [6, 8]]) == [2, 4]


def test_snf_of_k1_quiver_matrix():
    Q = ambient_data(1).Q
    assert invariant_factors(Q) == [1]
    assert rank(Q) == rank_by_fractions(Q) == 1
    # the tau presentation for the surface has full rank with unit factors
    W = sub_problem(crs(1)).W
    assert invariant_factors(W) == [1]


@given(matrices())
def test_snf_reconstructs(M):
    U, D, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)


@given(matrices(max_dim=4, bound=12))
def test_invariant_factors_match_minors(M):
    assert invariant_factors(M) == invariant_factors_by_minors(M)
    assert rank(M) == rank_by_fractions(M)


@given(matrices(max_dim=6, bound=20))
def test_hnf_row_operations_are_unimodular(M):
    H, U = hermite_normal_form(M)
    assert matmul(U, M) == H
    assert abs(det(U)) == 1


def test_integer_solve_examples():
    assert tuple(integer_solve(identity(2), [5, 7])) == (5, 7)
    assert integer_solve([[2]], [3]) is None


def test_surface_kernel_generator():
    G = crs(1)
    sp = sub_problem(G)
    P = [list(r) for r in sp.rays]
    Pt = [[P[r][c] for r in range(len(P))] for c in range(len(P[0]))]
    K = integer_kernel(Pt, len(P))
    assert len(K) == 1
    v = K[0]
    assert tuple(v) in {(-1, 2, -1), (1, -2, 1)}
    assert list(sp.W[0]) == [-1, 2, -1]


@given(matrices(max_dim=5, bound=9), st.randoms(use_true_random=False))
def test_integer_solve_sound(A, rnd):
    n = len(A[0])
    x0 = [rnd.randint(-5, 5) for _ in range(n)]
    b = matvec(A, x0)
    x = integer_solve(A, b)
    assert x is not None and list(matvec(A, x)) == list(b)
    # perturbed right-hand sides: None only when the system has no integer point
    b2 = [v + rnd.randint(-1, 1) for v in b]
    x2 = integer_solve(A, b2)
    if x2 is not None:
        assert list(matvec(A, x2)) == b2
    else:
        q = rational_solve(A, b2)
        if q is not None:
            # a rational solution exists, so the obstruction must be divisibility
            _, D, _ = smith_normal_form(A)
            assert any(D[i][i] > 1 for i in range(min(len(D), len(D[0]))))


@given(matrices(max_dim=5, bound=9))
def test_kernel_rows_are_a_basis(A):
    K = integer_kernel(A)
    for v in K:
        assert not any(matvec(A, v))
    assert len(K) == len(A[0]) - rank(A)
    if K:
        # saturation: the kernel lattice has unit invariant factors
        assert all(d == 1 for d in invariant_factors(K))


def test_box_examples():
    assert lattice_points_in_box((), ()) == [()]
    assert lattice_points_in_box((0, 0), (2, 2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    pts = [p for p in lattice_points_in_box((0, 0, 0), (2, 2, 2)) if p[1] + p[2] < 2 and p[0] == 0]
    assert len(pts) == 3


@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(1, 4)), min_size=1, max_size=4))
def test_box_count(intervals):
    lo = [a for a, _ in intervals]
    hi = [a + w for a, w in intervals]
    n = 1
    for _, w in intervals:
        n *= w
    assert len(lattice_points_in_box(lo, hi)) == n


def test_monomial_vector_algebra():
    a = MonomialVector({(0,): 1, (1,): -1})
    assert (a * a).items() == [((0,), 1), ((1,), -2), ((2,), 1)]
    assert (a - a).is_zero()
    assert a.shift((2,)).support() == [(2,), (3,)]
    rng = random.Random(3)
    pts = [(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(10)]
    v = MonomialVector([(p, rng.randint(-2, 2)) for p in pts])
    assert all(c != 0 for _, c in v.items())
    assert [p for p, _ in v.items()] == sorted(p for p, _ in v.items())


def test_rational_solve_consistency():
    A = [[1, 2], [2, 4]]
    assert rational_solve(A, [1, 3]) is None
    x = rational_solve(A, [1, 2])
    assert x is not None and x[0] + 2 * x[1] == Fraction(1)
