import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from complement_eig.errors import (
    DimensionGuardError,
    InvalidIndexError,
    InvalidPermutationError,
    OrderError,
    ShapeError,
)
from complement_eig.oracles import complement_by_kronecker_sum, det_by_permutations, planted_hermitian
from complement_eig.tensor_core import (
    AntisymTensor,
    MultiIndex,
    adjugate,
    cauchy_binet,
    check_cauchy_binet_all,
    check_contraction_vanishes,
    check_minor_complement_product,
    check_inverse_relation,
    check_kronecker_contraction,
    check_kronecker_product,
    check_contraction_identity,
    complement,
    complement_tensor,
    compound_matrix,
    det,
    kronecker,
    merge_sign,
    minor_det,
    minor_tensor,
    perm_sign,
    sort_sign,
)

from conftest import complex_matrix, int_matrix


# --- signs and symbols -----------------------------------------------------

@pytest.mark.parametrize("perm, sign", [((0, 1, 2), 1), ((1, 0, 2), -1), ((2, 0, 1), 1), ((), 1)])
def test_perm_sign_examples(perm, sign):
    assert perm_sign(perm) == sign


@pytest.mark.parametrize("bad", [(0, 0, 1), (1, 2), (0, 3)])
def test_perm_sign_rejects_non_permutations(bad):
    with pytest.raises(InvalidPermutationError):
        perm_sign(bad)


@given(st.permutations(list(range(6))))
def test_perm_sign_matches_inversion_parity(p):
    assert perm_sign(p) == sort_sign(p)


@given(st.permutations(list(range(5))), st.permutations(list(range(5))))
def test_perm_sign_is_multiplicative(p, q):
    composed = [p[q[k]] for k in range(5)]
    assert perm_sign(composed) == perm_sign(p) * perm_sign(q)


def test_kronecker_examples():
    assert kronecker((0, 1), (0, 1), 2) == 1
    assert kronecker((0, 1), (1, 0), 2) == -1
    assert kronecker((0, 1), (0, 2), 3) == 0
    assert kronecker((0, 0), (0, 0), 3) == 0
    assert kronecker((), (), 3) == 1


def test_kronecker_errors():
    with pytest.raises(ShapeError):
        kronecker((0, 1), (0,), 3)
    with pytest.raises(InvalidIndexError):
        kronecker((0, 5), (5, 0), 3)


@given(st.data())
def test_kronecker_values_and_antisymmetry(data):
    n = data.draw(st.integers(1, 5))
    s = data.draw(st.integers(1, n))
    upper = data.draw(st.lists(st.integers(0, n - 1), min_size=s, max_size=s))
    lower = data.draw(st.lists(st.integers(0, n - 1), min_size=s, max_size=s))
    value = kronecker(upper, lower, n)
    assert value in (-1, 0, 1)
    if s >= 2:
        swapped = [upper[1], upper[0]] + upper[2:]
        assert kronecker(swapped, lower, n) == -value


def test_multiindex():
    J = MultiIndex((0, 2), 4)
    assert J.complement().indices == (1, 3)
    assert len(list(MultiIndex.all(4, 2))) == 6
    sign, K = MultiIndex.canonical((2, 0), 4)
    assert sign == -1 and K.indices == (0, 2)
    with pytest.raises(InvalidIndexError):
        MultiIndex((2, 1), 4)
    with pytest.raises(InvalidIndexError):
        MultiIndex((0, 4), 4)
    with pytest.raises(InvalidIndexError):
        MultiIndex.canonical((1, 1), 4)


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(0, n - 1)))))
def test_multiindex_complement_partitions(args):
    n, subset = args
    J = MultiIndex(tuple(sorted(subset)), n)
    Jc = J.complement()
    assert set(J) | set(Jc) == set(range(n)) and not set(J) & set(Jc)


def test_merge_sign():
    assert merge_sign((0,), 3) == 1
    assert merge_sign((1,), 3) == -1
    assert merge_sign((2,), 3) == 1


# --- minors ----------------------------------------------------------------

def test_minor_examples():
    assert minor_det(np.eye(3), (0, 1), (0, 1)) == 1
    assert minor_det(np.diag([2, 3, 5]), (0, 2), (0, 2)) == 10
    assert minor_det(np.eye(3), (), ()) == 1


def test_minor_matches_permutation_oracle(rng):
    A = int_matrix(rng, 4)
    sub = A[np.ix_((0, 1), (2, 3))]
    assert minor_det(A, (0, 1), (2, 3)) == det_by_permutations(sub)


@pytest.mark.parametrize("n", [5, 6, 7])
def test_integer_minors_stay_exact(rng, n):
    A = int_matrix(rng, n)
    value = det(A)
    assert isinstance(value, int)
    assert value == det_by_permutations(A)


@pytest.mark.parametrize("n", [2, 4, 5, 7])
def test_float_det_matches_oracle(rng, n):
    A = complex_matrix(rng, n)
    assert abs(det(A) - det_by_permutations(A)) < 1e-10 * max(1, abs(det(A)))


def test_minor_of_permuted_indices_carries_sign(rng):
    A = complex_matrix(rng, 4)
    base = minor_det(A, (0, 2), (1, 3))
    assert minor_det(A, (2, 0), (1, 3)) == pytest.approx(-base)
    assert minor_det(A, (2, 0), (3, 1)) == pytest.approx(base)
    assert minor_det(A, (0, 0), (1, 3)) == 0


def test_minor_shape_errors():
    with pytest.raises(ShapeError):
        minor_det(np.eye(3), (0, 1), (0,))
    with pytest.raises(InvalidIndexError):
        minor_det(np.eye(3), (0, 3), (0, 1))
    with pytest.raises(ShapeError):
        det(np.ones((2, 3)))


# --- complements -----------------------------------------------------------

def test_complement_order_zero_is_det(rng):
    A = complex_matrix(rng, 4)
    assert complement(A, 0, (), ()) == pytest.approx(det(A))


def test_complement_order_one_two_by_two():
    A = np.array([[2, 7], [-3, 5]])
    T = np.array([[complement(A, 1, (j,), (i,)) for i in range(2)] for j in range(2)])
    assert np.array_equal(T, [[5, -7], [3, 2]])
    assert np.array_equal(T, np.trace(A) * np.eye(2, dtype=int) - A)


def test_complement_matches_kronecker_sum_oracle(rng):
    A = int_matrix(rng, 3)
    for J in itertools.combinations(range(3), 2):
        for I in itertools.combinations(range(3), 2):
            assert complement(A, 2, J, I) == complement_by_kronecker_sum(A, 2, J, I)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_reduced_complement_matches_defining_sum(rng, n):
    A = complex_matrix(rng, n)
    for s in range(1, min(n, 3) + 1):
        for r in range(0, s + 1):
            for J in itertools.combinations(range(n), r):
                for I in itertools.combinations(range(n), r):
                    want = complement_by_kronecker_sum(A, s, J, I)
                    got = complement(A, s, J, I)
                    assert abs(got - want) < 1e-10 * max(1.0, abs(want))


def test_complement_order_n_is_kronecker(rng):
    A = complex_matrix(rng, 3)
    assert complement(A, 3, (0, 1, 2), (0, 1, 2)) == 1
    assert complement(A, 3, (1, 0, 2), (0, 1, 2)) == -1
    assert complement(A, 3, (0,), (0,)) == 1
    assert complement(A, 3, (0,), (1,)) == 0


def test_complement_errors(rng):
    A = complex_matrix(rng, 3)
    with pytest.raises(OrderError):
        complement(A, 1, (0, 1), (0, 1))
    with pytest.raises(ShapeError):
        complement(A, 2, (0,), (0, 1))
    with pytest.raises(DimensionGuardError):
        complement(np.eye(13), 1, (0,), (0,))


def test_adjugate_examples(rng):
    assert np.array_equal(adjugate(np.eye(3, dtype=int)), np.eye(3, dtype=int))
    assert np.array_equal(adjugate(np.array([[1, 2], [3, 4]])), [[4, -2], [-3, 1]])
    A = complex_matrix(rng, 5)
    assert np.abs(adjugate(A) - det(A) * np.linalg.inv(A)).max() < 1e-10 * abs(det(A))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_fundamental_identity(n, seed):
    A = complex_matrix(np.random.default_rng(seed), n)
    lhs = A @ adjugate(A)
    bound = 1e-10 * (1 + np.abs(A).max() ** n)
    assert np.abs(lhs - det(A) * np.eye(n)).max() < bound
    assert np.abs(adjugate(A) @ A - det(A) * np.eye(n)).max() < bound


# --- antisymmetric tensors ---------------------------------------------------

def test_tensor_antisymmetry_over_all_permutations(rng):
    A = complex_matrix(rng, 4)
    for r in (1, 2, 3):
        T = complement_tensor(A, r)
        for J in itertools.combinations(range(4), r):
            for I in itertools.combinations(range(4), r):
                base = T[J, I]
                for p in itertools.permutations(range(r)):
                    for q in itertools.permutations(range(r)):
                        Jp = tuple(J[k] for k in p)
                        Iq = tuple(I[k] for k in q)
                        assert T[Jp, Iq] == perm_sign(p) * perm_sign(q) * base
        assert T[(0,) * r, tuple(range(r))] == 0 or r == 1


def test_tensor_order_zero_scalar(rng):
    A = complex_matrix(rng, 3)
    assert complement_tensor(A, 0).scalar == pytest.approx(det(A))
    assert minor_tensor(A, 3)[(0, 1, 2), (0, 1, 2)] == pytest.approx(det(A))
    with pytest.raises(ShapeError):
        complement_tensor(A, 1).scalar
    with pytest.raises(ShapeError):
        complement_tensor(A, 1)[(0, 1), (0, 1)]


def test_from_function_and_matrix():
    T = AntisymTensor.from_function(3, 1, lambda J, I: 10 * J[0] + I[0])
    assert T.to_matrix()[2, 1] == 21
    assert T.max_abs() == 22


def test_compound_matrix_is_multiplicative(rng):
    A = complex_matrix(rng, 4)
    B = complex_matrix(rng, 4)
    for r in (1, 2, 3):
        lhs = compound_matrix(A @ B, r)
        assert np.abs(lhs - compound_matrix(A, r) @ compound_matrix(B, r)).max() < 1e-10 * np.abs(lhs).max()


# --- identities --------------------------------------------------------------

@pytest.mark.parametrize("n", [3, 4])
def test_contraction_identity_random(rng, n):
    A = complex_matrix(rng, n)
    for s in range(1, n + 1):
        for r in range(1, s + 1):
            res = check_contraction_identity(A, r, s)
            assert res.passed, res


def test_contraction_identity_identity_matrix():
    res = check_contraction_identity(np.eye(3), 2, 2)
    assert res.max_abs_dev == 0


def test_contraction_identity_single_index(rng):
    A = complex_matrix(rng, 4)
    assert check_contraction_identity(A, 2, 2, upper=(1, 3), lower=(0, 2)).passed
    with pytest.raises(ShapeError):
        check_contraction_identity(A, 2, 2, upper=(1,), lower=(0, 2))
    with pytest.raises(OrderError):
        check_contraction_identity(A, 3, 2)


def test_contraction_vanishes_on_degenerate_characteristic_matrix(rng):
    H, _ = planted_hermitian([2.0, 2.0, -1.0, 3.0], rng)
    C = 2.0 * np.eye(4) - H
    for r in (1, 2):
        res = check_contraction_vanishes(C, r, 2)
        assert res.passed, res
    # both forms still agree when the left side vanishes
    assert check_contraction_identity(C, 2, 2).detail["lhs_max"] < 1e-9


def test_contraction_does_not_vanish_generically(rng):
    A = complex_matrix(rng, 4)
    assert not check_contraction_vanishes(A, 1, 2).passed


@pytest.mark.parametrize("n", [3, 4, 5])
def test_minor_complement_product(rng, n):
    A = complex_matrix(rng, n)
    for s in range(0, min(n, 3) + 1):
        assert check_minor_complement_product(A, s).passed


def test_minor_complement_product_exact_on_integers(rng):
    A = int_matrix(rng, 4)
    res = check_minor_complement_product(A, 2)
    assert res.passed and res.tol == 0


def test_inverse_relation(rng):
    A = complex_matrix(rng, 5)
    for s in range(0, 6):
        assert check_inverse_relation(A, s).passed


def test_cauchy_binet_examples(rng):
    res = cauchy_binet(np.eye(3, dtype=int), np.eye(3, dtype=int), (0, 1), (0, 1))
    assert res.passed and res.tol == 0
    A = int_matrix(rng, 2, 3)
    B = int_matrix(rng, 3, 2)
    res = cauchy_binet(A, B, (0, 1), (0, 1))
    assert res.passed and res.max_abs_dev == 0
    assert check_cauchy_binet_all(complex_matrix(rng, 4), complex_matrix(rng, 4), 3).passed
    with pytest.raises(ShapeError):
        cauchy_binet(np.eye(2), np.eye(3), (0,), (0,))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_kronecker_identities_exact(n):
    for p in range(n + 1):
        for s in range(p + 1):
            assert check_kronecker_contraction(n, s, p).passed
            assert check_kronecker_product(n, s, p).passed


def test_kronecker_identity_order_errors():
    with pytest.raises(OrderError):
        check_kronecker_contraction(3, 2, 1)
    with pytest.raises(OrderError):
        check_kronecker_product(3, 1, 4)
