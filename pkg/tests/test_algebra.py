import random
from fractions import Fraction

import pytest

from superleibniz.algebra import (
    BaseChange,
    NotNilpotentError,
    SuperAlgebra,
    char_sequence,
    check_graded_closure,
    check_leibniz,
    even_derived_subspace,
    jordan_blocks,
    lower_central_series,
    minimal_generators,
    nilindex,
    restricted_algebra,
    right_annihilator,
    right_mult_matrix,
    right_mult_superalgebra,
    subalgebra_generated,
    symmetrized_in_annihilator,
    transport,
)
from superleibniz.families import FamilyParamsM1, FamilyParamsM2, build_lemma32, build_lemma33, build_thm21_first, build_thm21_second
from superleibniz.linalg import Subspace, identity, mat_mul, rank, nullspace
from superleibniz.scalar import GaussianRational as GR, ONE, ZERO


def g(x):
    return GR(x)


@pytest.fixture(scope="module")
def fam_n3_zero():
    return build_lemma32(FamilyParamsM1(n=3))


@pytest.fixture(scope="module")
def fam_n3_generic():
    return build_lemma32(FamilyParamsM1(n=3, gamma=g(1), betas={3: g(2)}, beta=g(5)))


class TestProduct:
    def test_chain_product(self, fam_n3_zero):
        A = fam_n3_zero
        w = A.product(A.basis_vector(A.x_index(1)), A.basis_vector(A.x_index(1)))
        assert w[A.x_index(2)] == ONE and sum(1 for c in w if c) == 1

    def test_zero_absorbs(self, fam_n3_generic):
        A = fam_n3_generic
        assert not any(A.product(A.basis_vector(0), [ZERO] * A.dim))

    def test_gamma_square(self, fam_n3_generic):
        A = fam_n3_generic
        w = A.product(A.basis_vector(A.y_index(4)), A.basis_vector(A.y_index(4)))
        assert w[A.x_index(3)] == ONE

    def test_dimension_mismatch(self, fam_n3_zero):
        with pytest.raises(ValueError):
            fam_n3_zero.product([ONE], [ONE])


class TestGradedClosure:
    def test_family_ok(self, fam_n3_generic):
        assert check_graded_closure(fam_n3_generic).ok

    def test_even_even_to_odd_violation(self):
        A = SuperAlgebra(1, 1, {(0, 0): {1: ONE}})
        rep = check_graded_closure(A)
        assert not rep.ok and rep.violations == [(0, 0, 1)]

    def test_zero_algebra(self):
        assert check_graded_closure(SuperAlgebra(2, 2, {})).ok


class TestLeibniz:
    def test_family_ok(self, fam_n3_generic):
        assert check_leibniz(fam_n3_generic).ok

    def test_hand_violation(self):
        # [e1,e1]=e2, [e1,e2]=e2 in a 2-dim even algebra:
        # [e1,[e1,e1]] = e2 while both bracketings on the right cancel.
        A = SuperAlgebra(2, 0, {(0, 0): {1: ONE}, (0, 1): {1: ONE}})
        rep = check_leibniz(A)
        assert not rep.ok
        first = rep.violations[0]
        assert (first.x, first.y, first.z) == (0, 0, 0)
        assert first.residual[1] == ONE

    def test_abelian_ok(self):
        assert check_leibniz(SuperAlgebra(3, 2, {})).ok


class TestSeriesAndNilindex:
    def test_family_series(self, fam_n3_zero):
        dims = [s.dim for s in lower_central_series(fam_n3_zero)]
        assert dims == [7, 5, 4, 3, 2, 1, 0]
        # L^2 = span{x1,x2,x3,y2,y3}
        l2 = lower_central_series(fam_n3_zero)[1]
        A = fam_n3_zero
        for k in (A.x_index(1), A.x_index(2), A.x_index(3), A.y_index(2), A.y_index(3)):
            assert l2.contains(A.basis_vector(k))

    def test_abelian(self):
        A = SuperAlgebra(2, 1, {})
        assert [s.dim for s in lower_central_series(A)] == [3, 0]
        assert nilindex(A) == 2

    def test_chain(self):
        A = build_thm21_first(3)
        assert [s.dim for s in lower_central_series(A)] == [3, 2, 1, 0]
        assert nilindex(A) == 4

    def test_idempotent_not_nilpotent(self):
        A = SuperAlgebra(1, 0, {(0, 0): {0: ONE}})
        assert nilindex(A) is None

    def test_family_nilindex(self, fam_n3_zero):
        assert nilindex(fam_n3_zero) == 7


class TestRightAnnihilator:
    def test_family_params_zero(self, fam_n3_zero):
        A = fam_n3_zero
        ann = right_annihilator(A)
        assert ann.dim == 5
        for k in (A.x_index(2), A.x_index(3), A.y_index(2), A.y_index(3), A.y_index(4)):
            assert ann.contains(A.basis_vector(k))

    def test_abelian_whole_space(self):
        assert right_annihilator(SuperAlgebra(2, 2, {})).dim == 4

    def test_x_tail_always_contained(self, fam_n3_generic):
        A = fam_n3_generic
        ann = right_annihilator(A)
        for i in (2, 3):
            assert ann.contains(A.basis_vector(A.x_index(i)))


class TestSymmetrization:
    def test_family(self, fam_n3_generic):
        assert symmetrized_in_annihilator(fam_n3_generic).ok

    def test_abelian(self):
        assert symmetrized_in_annihilator(SuperAlgebra(1, 1, {})).ok

    def test_lemma33_random(self):
        rng = random.Random(5)
        P = FamilyParamsM2(n=2, betas={3: GR(Fraction(rng.randint(1, 5), 2), 1)})
        assert symmetrized_in_annihilator(build_lemma33(P)).ok


class TestMinimalGenerators:
    def test_family(self, fam_n3_generic):
        A = fam_n3_generic
        even, odd, reps = minimal_generators(A)
        assert (even, odd) == (0, 2)
        assert reps == [tuple(A.basis_vector(A.y_index(1))), tuple(A.basis_vector(A.y_index(4)))]

    def test_chain(self):
        assert minimal_generators(build_thm21_first(4))[:2] == (1, 0)

    def test_abelian(self):
        assert minimal_generators(SuperAlgebra(1, 1, {}))[:2] == (1, 1)


class TestSubalgebraGenerated:
    def test_y1_span(self):
        A = build_lemma32(FamilyParamsM1(n=3, gamma=g(1)))
        sub = subalgebra_generated(A, [A.basis_vector(A.y_index(1))])
        assert sub.dim == 6
        low, high, mixed = sub.row_support_split(A.n)
        assert (low, high, mixed) == (3, 3, 0)

    def test_empty(self, fam_n3_zero):
        assert subalgebra_generated(fam_n3_zero, []).dim == 0

    def test_full_basis(self, fam_n3_zero):
        A = fam_n3_zero
        assert subalgebra_generated(A, [A.basis_vector(k) for k in range(A.dim)]).dim == A.dim

    def test_restricted_algebra_is_one_generated(self):
        A = build_lemma32(FamilyParamsM1(n=3, gamma=g(1)))
        sub = subalgebra_generated(A, [A.basis_vector(A.y_index(1))])
        B = restricted_algebra(A, sub)
        assert (B.n, B.m) == (3, 3)
        assert check_leibniz(B).ok
        assert minimal_generators(B)[:2] == (0, 1)
        assert nilindex(B) == B.dim + 1


class TestRightMult:
    def test_x1_blocks(self, fam_n3_zero):
        A = fam_n3_zero
        even, odd = right_mult_matrix(A, A.basis_vector(A.x_index(1)))
        assert jordan_blocks(even) == (3,)
        assert jordan_blocks(odd) == (3, 1)

    def test_zero_vector(self, fam_n3_zero):
        even, odd = right_mult_matrix(fam_n3_zero, [ZERO] * 7)
        assert all(not c for row in even for c in row)
        assert all(not c for row in odd for c in row)

    def test_x3_acts_as_zero(self, fam_n3_generic):
        A = fam_n3_generic
        even, odd = right_mult_matrix(A, A.basis_vector(A.x_index(3)))
        assert all(not c for row in even for c in row)
        assert all(not c for row in odd for c in row)


def _blocks_by_kernel_image(M):
    """Independent oracle: #blocks of size >= k equals dim(ker M ∩ im M^{k-1})."""
    dim = len(M)
    kernel = Subspace(dim, nullspace(M))
    power = identity(dim)
    sizes = []
    prev = None
    for k in range(1, dim + 1):
        image = Subspace(dim, [tuple(col) for col in zip(*power)])
        meet_dim = kernel.dim + image.dim - kernel.union(image).dim
        if prev is not None:
            sizes.extend([k - 1] * (prev - meet_dim))
        prev = meet_dim
        power = mat_mul(power, M)
    sizes.extend([dim] * prev)
    return tuple(sorted(sizes, reverse=True))


class TestJordanBlocks:
    def test_zero_matrix(self):
        Z = [[ZERO] * 4 for _ in range(4)]
        assert jordan_blocks(Z) == (1, 1, 1, 1)

    def test_single_block(self):
        M = [[ZERO] * 3 for _ in range(3)]
        M[1][0] = ONE
        M[2][1] = ONE
        assert jordan_blocks(M) == (3,)

    def test_rejects_non_nilpotent(self):
        with pytest.raises(NotNilpotentError):
            jordan_blocks([[ONE]])

    @pytest.mark.parametrize("seed", range(10))
    def test_against_kernel_image_oracle(self, seed):
        rng = random.Random(seed)
        dim = rng.randint(1, 6)
        # random strictly upper triangular: always nilpotent
        M = [[ZERO] * dim for _ in range(dim)]
        for i in range(dim):
            for j in range(i + 1, dim):
                M[i][j] = g(rng.randint(-2, 2))
        assert jordan_blocks(M) == _blocks_by_kernel_image(M)
        assert sum(jordan_blocks(M)) == dim

    def test_similarity_invariance(self):
        rng = random.Random(11)
        M = [[ZERO] * 4 for _ in range(4)]
        M[1][0] = ONE
        M[2][1] = ONE
        while True:
            S = [[g(rng.randint(-3, 3)) for _ in range(4)] for _ in range(4)]
            if rank(S) == 4:
                break
        from superleibniz.linalg import invert, mat_mul as mm

        conj = mm(mm(S, M), invert(S))
        assert jordan_blocks(conj) == jordan_blocks(M)


class TestCharSequence:
    def test_family_value_and_witness(self, fam_n3_generic):
        A = fam_n3_generic
        res = char_sequence(A, extra_samples=10, seed=4)
        assert res.sequence.even_part == (3,)
        assert res.sequence.odd_part == (3, 1)
        assert res.witness_even == tuple(A.basis_vector(A.x_index(1)))
        assert res.witness_odd == tuple(A.basis_vector(A.x_index(1)))

    def test_abelian(self):
        res = char_sequence(SuperAlgebra(2, 2, {}), extra_samples=5, seed=0)
        assert res.sequence.even_part == (1, 1)
        assert res.sequence.odd_part == (1, 1)

    def test_lemma33_n2(self):
        A = build_lemma33(FamilyParamsM2(n=2, betas={3: g(3)}))
        res = char_sequence(A, extra_samples=5, seed=1)
        assert res.sequence.even_part == (2,)
        assert res.sequence.odd_part == (3, 1)

    def test_even_derived_membership(self, fam_n3_zero):
        derived = even_derived_subspace(fam_n3_zero)
        A = fam_n3_zero
        assert derived.contains(A.basis_vector(A.x_index(2)))
        assert not derived.contains(A.basis_vector(A.x_index(1)))


def random_base_change(rng, n, m):
    while True:
        even = [[g(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        odd = [[g(rng.randint(-3, 3)) for _ in range(m)] for _ in range(m)]
        if rank(even) == n and rank(odd) == m:
            return BaseChange.from_matrices(even, odd)


class TestTransport:
    def test_identity(self, fam_n3_generic):
        A = fam_n3_generic
        assert transport(A, BaseChange.identity(A.n, A.m)) == A

    def test_sign_flip_on_top_odd(self):
        # y_4 -> -y_4 sends parameters (1, 2, 0) to (1, -2, 0)
        A = build_lemma32(FamilyParamsM1(n=3, gamma=g(1), betas={3: g(2)}))
        odd = [list(row) for row in identity(4)]
        odd[3][3] = -ONE
        moved = transport(A, BaseChange.from_matrices(identity(3), odd))
        assert moved == build_lemma32(FamilyParamsM1(n=3, gamma=g(1), betas={3: g(-2)}))

    def test_abelian_stays_abelian(self):
        A = SuperAlgebra(2, 1, {})
        even = [[g(2), ZERO], [ZERO, g(2)]]
        moved = transport(A, BaseChange.from_matrices(even, [[ONE]]))
        assert moved == A

    def test_roundtrip(self, fam_n3_generic):
        rng = random.Random(3)
        T = random_base_change(rng, 3, 4)
        A = fam_n3_generic
        assert transport(transport(A, T), T.inverse()) == A

    @pytest.mark.parametrize("seed", range(6))
    def test_invariants_preserved(self, seed):
        rng = random.Random(seed)
        P = FamilyParamsM1(
            n=3,
            gamma=g(rng.randint(-2, 2)),
            betas={3: g(rng.randint(-2, 2))},
            beta=g(rng.randint(-2, 2)),
        )
        A = build_lemma32(P)
        T = random_base_change(rng, A.n, A.m)
        B = transport(A, T)
        assert check_leibniz(B).ok
        assert nilindex(B) == nilindex(A)
        assert right_annihilator(B).dim == right_annihilator(A).dim
        assert minimal_generators(B)[:2] == minimal_generators(A)[:2]
        ca = char_sequence(A, extra_samples=8, seed=seed)
        cb = char_sequence(B, extra_samples=8, seed=seed)
        assert ca.sequence == cb.sequence

    def test_singular_rejected(self, fam_n3_zero):
        from superleibniz.linalg import SingularMatrixError

        singular = [[ONE, ZERO, ZERO], [ONE, ZERO, ZERO], [ZERO, ZERO, ONE]]
        bad = BaseChange.from_matrices(singular, identity(4))
        with pytest.raises(SingularMatrixError):
            transport(fam_n3_zero, bad)


class TestRightMultSuperalgebra:
    def test_abelian_zero(self):
        R, report = right_mult_superalgebra(SuperAlgebra(2, 2, {}))
        assert (R.n, R.m) == (0, 0) and report.ok

    def test_chain_algebra(self):
        R, report = right_mult_superalgebra(build_thm21_first(3))
        assert report.ok
        assert (R.n, R.m) == (1, 0)

    def test_super_chain(self):
        # only x_1 and y_1 act as right factors in the one-generated chain
        R, report = right_mult_superalgebra(build_thm21_second(3, 3))
        assert report.ok
        assert (R.n, R.m) == (1, 1)

    def test_family_instance(self):
        A = build_lemma32(FamilyParamsM1(n=3, gamma=g(1)))
        R, report = right_mult_superalgebra(A)
        assert report.ok
        assert check_leibniz(R).ok
