import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from superleibniz.linalg import (
    SingularMatrixError,
    Subspace,
    identity,
    invert,
    left_kernel_basis,
    mat_mul,
    mat_vec,
    nullspace,
    rank,
    rref,
    smith_normal_form,
    snf_diagonal,
    solve_columns,
)
from superleibniz.scalar import GaussianRational as GR, ONE, ZERO


def g(x):
    return GR(x)


def gmat(rows):
    return [[g(x) for x in row] for row in rows]


class TestRref:
    def test_simple(self):
        rows, pivots = rref(gmat([[2, 4], [1, 2]]))
        assert rows == [(ONE, g(2))]
        assert pivots == [0]

    def test_canonical(self):
        a, _ = rref(gmat([[1, 2, 3], [0, 1, 1]]))
        b, _ = rref(gmat([[1, 0, 1], [2, 3, 5]]))
        assert a == b

    def test_rank(self):
        assert rank(gmat([[1, 2], [2, 4], [0, 1]])) == 2
        assert rank(gmat([[0, 0], [0, 0]])) == 0


class TestSolve:
    def test_solve_and_invert(self):
        A = gmat([[1, 1], [0, 2]])
        (x,) = solve_columns(A, [[g(3), g(4)]])
        assert x == [g(1), g(2)]
        assert mat_mul(A, invert(A)) == identity(2)

    def test_singular(self):
        with pytest.raises(SingularMatrixError):
            solve_columns(gmat([[1, 2], [2, 4]]), [[g(1), g(1)]])

    def test_gaussian_entries(self):
        A = [[GR(1, 1), ZERO], [ZERO, GR(0, 1)]]
        inv = invert(A)
        assert mat_mul(A, inv) == identity(2)


class TestNullspace:
    def test_kernel_vectors_annihilate(self):
        A = gmat([[1, 2, 3], [2, 4, 6]])
        basis = nullspace(A)
        assert len(basis) == 2
        for v in basis:
            assert all(not x for x in mat_vec(A, list(v)))

    def test_full_rank_kernel(self):
        assert nullspace(gmat([[1, 0], [0, 1]])) == []


class TestSubspace:
    def test_membership_and_dim(self):
        s = Subspace(3, gmat([[1, 0, 1], [0, 1, 1]]))
        assert s.dim == 2
        assert s.contains([g(1), g(1), g(2)])
        assert not s.contains([g(0), g(0), g(1)])

    def test_canonical_equality(self):
        a = Subspace(3, gmat([[1, 1, 0], [0, 0, 1]]))
        b = Subspace(3, gmat([[1, 1, 1], [2, 2, 1]]))
        assert a == b and hash(a) == hash(b)

    def test_union(self):
        a = Subspace(2, gmat([[1, 0]]))
        b = Subspace(2, gmat([[0, 1]]))
        assert a.union(b).dim == 2

    def test_support_split(self):
        s = Subspace(4, gmat([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 1, 1]]))
        low, high, mixed = s.row_support_split(2)
        assert (low, high, mixed) == (1, 1, 1)


def random_int_matrix(rng, rows, cols, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


def int_mat_mul(A, B):
    return [
        [sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))]
        for i in range(len(A))
    ]


def int_det(M):
    M = [row[:] for row in M]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        inv = Fraction(1, M[c][c])
        for i in range(c + 1, n):
            f = M[i][c] * inv
            M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return det


class TestSmithNormalForm:
    @pytest.mark.parametrize("seed", range(12))
    def test_decomposition_properties(self, seed):
        rng = random.Random(seed)
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 3)
        M = random_int_matrix(rng, rows, cols)
        S, D, T = smith_normal_form(M)
        assert int_mat_mul(int_mat_mul(S, M), T) == D
        assert abs(int_det(S)) == 1
        assert abs(int_det(T)) == 1
        diag = snf_diagonal(D)
        for i in range(rows):
            for j in range(cols):
                if i != j:
                    assert D[i][j] == 0
        for a, b in zip(diag, diag[1:]):
            assert a >= 0 and b >= 0
            if a:
                assert b % a == 0
            else:
                assert b == 0

    def test_known_case(self):
        # invariants via determinant divisors: d1=2, d2=12, d3=144
        S, D, T = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        assert snf_diagonal(D) == [2, 6, 12]

    @pytest.mark.parametrize("seed", range(8))
    def test_left_kernel(self, seed):
        rng = random.Random(100 + seed)
        M = random_int_matrix(rng, rng.randint(2, 6), 2, lo=-6, hi=6)
        basis = left_kernel_basis(M)
        r = sum(1 for d in snf_diagonal(smith_normal_form(M)[1]) if d)
        assert len(basis) == len(M) - r
        for t in basis:
            prod = [sum(t[i] * M[i][j] for i in range(len(M))) for j in range(2)]
            assert prod == [0, 0]

    def test_exact_kernel_example(self):
        # rows (2n, -2) and (n, -1) for n = 3 share the relation t = (1, -2)
        basis = left_kernel_basis([[6, -2], [3, -1]])
        assert len(basis) == 1
        t = basis[0]
        assert t[0] * 6 + t[1] * 3 == 0 and t[0] * -2 + t[1] * -1 == 0
