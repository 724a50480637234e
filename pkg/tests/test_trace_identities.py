import math

import numpy as np
import pytest
import sympy
from sympy.functions.combinatorial.numbers import partition as partition_number
from hypothesis import given, settings
from hypothesis import strategies as st

from complement_eig.errors import OrderError
from complement_eig.tensor_core import adjugate, det
from complement_eig.trace_identities import (
    PartitionTerm,
    TracePowerCache,
    bell_polynomial,
    characteristic_coefficients,
    check_bell_route,
    check_minor_sums,
    check_trace_route,
    closed_form_minor_sum,
    closed_form_reduced_complement,
    minor_trace_sum,
    minor_trace_sum_bell,
    minor_trace_sum_direct,
    partition_terms,
    partitions,
    reduced_complement_direct,
    reduced_complement_via_bell,
    reduced_complement_via_traces,
)

from conftest import complex_matrix


def rel(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    return np.abs(a - b).max() / max(np.abs(a).max(), np.abs(b).max(), 1e-300)


def test_trace_power_cache(rng):
    A = complex_matrix(rng, 4)
    cache = TracePowerCache.build(A, 2)
    assert np.allclose(cache.power(0), np.eye(4))
    assert np.allclose(cache.power(3), A @ A @ A)
    assert cache.trace(3) == pytest.approx(np.trace(A @ A @ A))
    assert len(cache.traces) == 3


def brute_partitions(target):
    # every k vector with k_l <= target, filtered by the constraint
    out = []
    for k in np.ndindex(*([target + 1] * target)):
        if sum((l + 1) * kl for l, kl in enumerate(k)) == target:
            out.append(tuple(k))
    return sorted(out)


def test_partitions_examples():
    assert partitions(0) == [()]
    assert sorted(partitions(3)) == [(0, 0, 1), (1, 1, 0), (3, 0, 0)]
    assert len(partitions(4)) == 5
    with pytest.raises(ValueError):
        partitions(-1)


@pytest.mark.parametrize("target", range(1, 7))
def test_partitions_match_brute_force(target):
    assert sorted(partitions(target)) == brute_partitions(target)


@pytest.mark.parametrize("target", range(0, 12))
def test_partition_counts(target):
    assert len(partitions(target)) == partition_number(target)


def test_partition_terms_satisfy_constraint():
    for gap in range(6):
        terms = partition_terms(gap)
        assert all(isinstance(t, PartitionTerm) and t.total == gap for t in terms)
        assert len(terms) == sum(len(partitions(gap - r)) for r in range(gap + 1))


def test_bell_small_cases():
    x = sympy.symbols("x1:6")
    assert bell_polynomial(0, []) == 1
    assert sympy.expand(bell_polynomial(2, x) - (x[0] ** 2 + x[1])) == 0
    assert sympy.expand(bell_polynomial(3, x) - (x[0] ** 3 + 3 * x[0] * x[1] + x[2])) == 0
    with pytest.raises(ValueError):
        bell_polynomial(3, [1, 2])
    with pytest.raises(ValueError):
        bell_polynomial(-1, [])


@pytest.mark.parametrize("m", range(0, 7))
def test_bell_matches_generating_function(m):
    # coefficient of z^m/m! in exp(sum x_l z^l / l!)
    z = sympy.symbols("z")
    x = sympy.symbols(f"x1:{m + 2}")
    gen = sympy.exp(sum(x[l - 1] * z ** l / sympy.factorial(l) for l in range(1, m + 1)))
    want = sympy.series(gen, z, 0, m + 1).removeO().coeff(z, m) * sympy.factorial(m)
    assert sympy.expand(bell_polynomial(m, x[:m]) - want) == 0


def test_bell_all_ones_gives_bell_numbers():
    assert [bell_polynomial(m, [1] * m) for m in range(8)] == [1, 1, 2, 5, 15, 52, 203, 877]


@pytest.mark.parametrize("gap", [1, 2, 3])
def test_closed_form_reduced_complements(rng, gap):
    n = 5
    A = complex_matrix(rng, n)
    direct = reduced_complement_direct(A, n - gap)
    assert rel(closed_form_reduced_complement(A, gap), direct) < 1e-11
    assert rel(reduced_complement_via_traces(A, n - gap), direct) < 1e-11


@pytest.mark.parametrize("gap", [1, 2, 3, 4])
def test_closed_form_minor_sums(rng, gap):
    A = complex_matrix(rng, 6)
    assert rel(closed_form_minor_sum(A, gap), minor_trace_sum_direct(A, 6 - gap)) < 1e-11


def test_closed_form_out_of_table():
    with pytest.raises(OrderError):
        closed_form_reduced_complement(np.eye(3), 4)
    with pytest.raises(OrderError):
        closed_form_minor_sum(np.eye(3), 5)


def test_order_n_complement_is_identity(rng):
    A = complex_matrix(rng, 4)
    assert np.array_equal(reduced_complement_via_traces(A, 4), np.eye(4))
    assert np.array_equal(reduced_complement_via_bell(A, 4), np.eye(4))


def test_order_one_is_adjugate(rng):
    A = complex_matrix(rng, 5)
    assert rel(reduced_complement_via_traces(A, 1), adjugate(A)) < 1e-11


def test_trace_route_errors(rng):
    with pytest.raises(OrderError):
        reduced_complement_via_traces(np.eye(3), 0)
    with pytest.raises(OrderError):
        minor_trace_sum(np.eye(3), 4)


def test_hermitian_n4_s2_against_minors(rng):
    Z = complex_matrix(rng, 4)
    H = (Z + Z.conj().T) / 2
    assert check_trace_route(H, 2).passed


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))), st.integers(0, 2 ** 32 - 1))
def test_route_equivalence(ns, seed):
    n, s = ns
    A = complex_matrix(np.random.default_rng(seed), n)
    assert check_trace_route(A, s).passed
    assert check_bell_route(A, s).passed
    assert check_minor_sums(A, s).passed


@pytest.mark.parametrize("n", range(1, 9))
def test_minor_sums_of_identity_are_binomials(n):
    for s in range(n + 1):
        assert minor_trace_sum(np.eye(n, dtype=int), s) == math.comb(n, n - s)
        assert minor_trace_sum_direct(np.eye(n, dtype=int), s) == math.comb(n, n - s)


def test_minor_sum_full_order_is_det(rng):
    A = complex_matrix(rng, 5)
    assert minor_trace_sum(A, 0) == pytest.approx(det(A))
    assert minor_trace_sum_bell(A, 0) == pytest.approx(det(A))


@pytest.mark.parametrize("n", [1, 3, 6])
def test_characteristic_polynomial(rng, n):
    A = complex_matrix(rng, n)
    coeffs = characteristic_coefficients(A)
    assert coeffs[0] == 1
    for lam in rng.normal(size=20) + 1j * rng.normal(size=20):
        want = np.linalg.det(lam * np.eye(n) - A)
        assert abs(np.polyval(coeffs, lam) - want) < 1e-9 * abs(want)


@pytest.mark.parametrize("n, k", [(2, 1), (3, 2), (4, 2)])
def test_expansion_depends_on_gap_only(rng, n, k):
    # s = 1 in dimension n against s = k + 1 on A padded by a k x k zero block
    A = complex_matrix(rng, n)
    padded = np.zeros((n + k, n + k), dtype=complex)
    padded[:n, :n] = A
    via_traces = reduced_complement_via_traces(padded, k + 1)[:n, :n]
    direct = reduced_complement_direct(padded, k + 1)[:n, :n]
    assert rel(via_traces, adjugate(A)) < 1e-11
    assert rel(direct, adjugate(A)) < 1e-11
