"""Trace expansions of reduced order-one complements and of diagonal minor sums.

Both families are sums over the partitions of ``n - s``.  Each has a
partition form, built term by term from traces of matrix powers, and an
equivalent form in complete exponential Bell polynomials with arguments
``x_l = -(l-1)! Tr[A^l]``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import OrderError
from .results import IdentityCheckResult, compare
from .tensor_core import _is_exact, as_square, complement, minor_det


@dataclass
class TracePowerCache:
    """Powers ``A^0..A^k`` and traces ``Tr[A^1]..Tr[A^k]`` of one matrix."""

    A: np.ndarray
    powers: list[np.ndarray] = field(default_factory=list)
    traces: list[complex] = field(default_factory=list)

    exact: bool = False

    @classmethod
    def build(cls, A, k: int) -> "TracePowerCache":
        """Integer matrices keep Python-int powers and traces."""
        A = as_square(A)
        exact_input = _is_exact(A)
        dtype = object if exact_input else complex
        A = np.array(A.tolist() if exact_input else A, dtype=dtype)
        eye = np.eye(A.shape[0], dtype=int).astype(object) if exact_input else np.eye(A.shape[0], dtype=complex)
        cache = cls(A, [eye], [], exact_input)
        cache.extend(k)
        return cache

    def extend(self, k: int) -> None:
        while len(self.powers) <= k:
            self.powers.append(self.A @ self.powers[-1])
            tr = np.trace(self.powers[-1])
            self.traces.append(int(tr) if self.exact else complex(tr))

    def power(self, l: int) -> np.ndarray:
        self.extend(l)
        return self.powers[l]

    def trace(self, l: int) -> complex:
        """``Tr[A^l]`` for ``l >= 1``."""
        self.extend(l)
        return self.traces[l - 1]


@dataclass(frozen=True)
class PartitionTerm:
    """One term of the partition sum: ``r + sum_l l*k_l = n - s``."""

    r: int
    k: tuple[int, ...]

    @property
    def total(self) -> int:
        return self.r + sum(l * kl for l, kl in enumerate(self.k, start=1))


@lru_cache(maxsize=None)
def _partitions(target: int, largest: int) -> tuple[tuple[int, ...], ...]:
    # multiplicity vectors of length `largest` for partitions with parts <= largest
    if target == 0:
        return ((0,) * largest,)
    if largest == 0:
        return ()
    out = []
    for count in range(target // largest, -1, -1):
        for rest in _partitions(target - count * largest, largest - 1):
            out.append(rest + (count,))
    return tuple(out)


def partitions(target: int) -> list[tuple[int, ...]]:
    """All ``(k_1, ..., k_target)`` with ``sum l*k_l = target``, ``k_l >= 0``."""
    if target < 0:
        raise ValueError("target must be non-negative")
    return list(_partitions(target, target))


def partition_terms(order_gap: int) -> list[PartitionTerm]:
    """Every ``(r, k)`` with ``r + sum l*k_l = order_gap``."""
    return [PartitionTerm(r, k) for r in range(order_gap + 1) for k in partitions(order_gap - r)]


def bell_polynomial(m: int, x) -> complex:
    """Complete exponential Bell polynomial ``B_m(x_1, ..., x_m)``.

    Uses ``B_{k+1} = sum_i C(k, i) B_{k-i} x_{i+1}`` from ``B_0 = 1``.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    x = list(x)
    if len(x) < m:
        raise ValueError(f"need {m} arguments, got {len(x)}")
    B = [1]
    for k in range(m):
        B.append(sum(math.comb(k, i) * B[k - i] * x[i] for i in range(k + 1)))
    return B[m]


def _partition_weight(k: tuple[int, ...], cache: TracePowerCache, sign_per_part: int) -> complex:
    # prod_l sign^{k_l} / (k_l! l^{k_l}) Tr[A^l]^{k_l}
    w = 1.0 + 0j
    for l, kl in enumerate(k, start=1):
        if kl:
            w *= (sign_per_part ** kl) * cache.trace(l) ** kl / (math.factorial(kl) * l ** kl)
    return w


def _check_order(n: int, s: int, lo: int) -> None:
    if not lo <= s <= n:
        raise OrderError(f"order s={s} outside [{lo}, {n}]")


def reduced_complement_via_traces(A, s: int, cache: TracePowerCache | None = None) -> np.ndarray:
    """Reduced order-one complement ``(det_s A)^j_i`` from powers and traces.

    Returned as a matrix ``M[j, i]``.
    """
    A = as_square(A)
    n = A.shape[0]
    _check_order(n, s, 1)
    gap = n - s
    cache = cache or TracePowerCache.build(A, gap)
    out = np.zeros((n, n), dtype=complex)
    for r in range(gap + 1):
        coeff = sum(_partition_weight(k, cache, -1) for k in partitions(gap - r))
        out += (-1) ** gap * coeff * np.asarray(cache.power(r), dtype=complex)
    return out


def bell_arguments(cache: TracePowerCache, m: int) -> list[complex]:
    return [-math.factorial(l - 1) * cache.trace(l) for l in range(1, m + 1)]


def reduced_complement_via_bell(A, s: int, cache: TracePowerCache | None = None) -> np.ndarray:
    """Same matrix as :func:`reduced_complement_via_traces`, via Bell polynomials."""
    A = as_square(A)
    n = A.shape[0]
    _check_order(n, s, 1)
    gap = n - s
    cache = cache or TracePowerCache.build(A, gap)
    x = bell_arguments(cache, gap)
    out = np.zeros((n, n), dtype=complex)
    for r in range(gap + 1):
        m = gap - r
        out += (-1) ** gap / math.factorial(m) * complex(bell_polynomial(m, x[:m])) * np.asarray(cache.power(r), dtype=complex)
    return out


def reduced_complement_direct(A, s: int) -> np.ndarray:
    """Entrywise reduced complement from minors (no traces involved)."""
    A = as_square(A)
    n = A.shape[0]
    _check_order(n, s, 1)
    return np.array([[complement(A, s, (j,), (i,)) for i in range(n)] for j in range(n)], dtype=complex)


def minor_trace_sum_traces(A, s: int, cache: TracePowerCache | None = None) -> complex:
    """Sum of diagonal minors of order ``n - s`` from the partition expansion."""
    A = as_square(A)
    n = A.shape[0]
    _check_order(n, s, 0)
    gap = n - s
    cache = cache or TracePowerCache.build(A, gap)
    total = Fraction(0) if cache.exact else 0j
    for k in partitions(gap):
        w = Fraction(1) if cache.exact else 1.0 + 0j
        for l, kl in enumerate(k, start=1):
            if cache.exact:
                w *= Fraction((-1) ** (kl + 1) * cache.trace(l) ** kl, l ** kl * math.factorial(kl))
            else:
                w *= (-1) ** (kl + 1) * cache.trace(l) ** kl / (l ** kl * math.factorial(kl))
        total += w
    if cache.exact:
        # Newton's identities keep integer matrices on integer minor sums
        if total.denominator != 1:
            raise ArithmeticError(f"non-integer minor sum {total}")
        return int(total)
    return total


def minor_trace_sum_bell(A, s: int, cache: TracePowerCache | None = None) -> complex:
    A = as_square(A)
    n = A.shape[0]
    _check_order(n, s, 0)
    gap = n - s
    cache = cache or TracePowerCache.build(A, gap)
    return (-1) ** gap / math.factorial(gap) * complex(bell_polynomial(gap, bell_arguments(cache, gap)))


def minor_trace_sum_direct(A, s: int):
    """Explicit enumeration of the principal minors of order ``n - s``."""
    A = as_square(A)
    n = A.shape[0]
    _check_order(n, s, 0)
    return sum(minor_det(A, J, J) for J in itertools.combinations(range(n), n - s))


def minor_trace_sum(A, s: int, cache: TracePowerCache | None = None) -> complex:
    """Diagonal sum of minor determinants of order ``n - s`` (partition route)."""
    return minor_trace_sum_traces(A, s, cache)


def characteristic_coefficients(A) -> np.ndarray:
    """Coefficients of ``det(x I - A)``, highest power first.

    The coefficient of ``x^s`` is ``(-1)^(n-s)`` times the sum of diagonal
    minors of order ``n - s``.
    """
    A = as_square(A)
    n = A.shape[0]
    cache = TracePowerCache.build(A, n)
    return np.array([(-1) ** (n - s) * minor_trace_sum_traces(A, s, cache) for s in range(n, -1, -1)])


def check_trace_route(A, s: int, tol: float = 1e-10) -> IdentityCheckResult:
    """Partition expansion against the complement computed from minors."""
    A = as_square(A)
    n = A.shape[0]
    via_traces = reduced_complement_via_traces(A, s)
    direct = reduced_complement_direct(A, s)
    return compare(f"trace_route[n={n},s={s}]", via_traces, direct, tol)


def check_bell_route(A, s: int, tol: float = 1e-10) -> IdentityCheckResult:
    A = as_square(A)
    n = A.shape[0]
    cache = TracePowerCache.build(A, n - s)
    return compare(f"bell_route[n={n},s={s}]", reduced_complement_via_bell(A, s, cache),
                   reduced_complement_via_traces(A, s, cache), tol)


def check_minor_sums(A, s: int, tol: float = 1e-10) -> IdentityCheckResult:
    """Partition form, Bell form and enumeration of the diagonal minor sum."""
    A = as_square(A)
    n = A.shape[0]
    cache = TracePowerCache.build(A, n - s)
    by_traces = minor_trace_sum_traces(A, s, cache)
    by_bell = minor_trace_sum_bell(A, s, cache)
    direct = complex(minor_trace_sum_direct(A, s))
    floor = max(abs(by_traces), abs(direct), 1e-300)
    res_t = compare("t", by_traces, direct, tol, floor)
    res_b = compare("b", by_bell, direct, tol, floor)
    worst = max(res_t, res_b, key=lambda res: res.max_rel_dev)
    return IdentityCheckResult(f"minor_sums[n={n},s={s}]", worst.max_abs_dev, worst.max_rel_dev, tol,
                               res_t.passed and res_b.passed,
                               {"traces": by_traces, "bell": by_bell, "direct": direct})


def closed_form_reduced_complement(A, gap: int) -> np.ndarray:
    """Hand-expanded reduced order-one complement for ``n - s = gap`` in 1..3."""
    A = np.asarray(as_square(A), dtype=complex)
    I = np.eye(A.shape[0])
    A2 = A @ A
    t1, t2 = np.trace(A), np.trace(A2)
    if gap == 1:
        return t1 * I - A
    if gap == 2:
        return 0.5 * (t1 ** 2 - t2) * I - A * t1 + A2
    if gap == 3:
        t3 = np.trace(A2 @ A)
        return ((t1 ** 3 - 3 * t1 * t2 + 2 * t3) / 6 * I - 0.5 * A * (t1 ** 2 - t2)
                + A2 * t1 - A2 @ A)
    raise OrderError(f"no closed form tabulated for gap {gap}")


def closed_form_minor_sum(A, gap: int) -> complex:
    """Hand-expanded diagonal minor sum of order ``gap`` in 1..4."""
    A = np.asarray(as_square(A), dtype=complex)
    A2 = A @ A
    t1, t2 = np.trace(A), np.trace(A2)
    if gap == 1:
        return t1
    if gap == 2:
        return (t1 ** 2 - t2) / 2
    t3 = np.trace(A2 @ A)
    if gap == 3:
        return (t1 ** 3 - 3 * t1 * t2 + 2 * t3) / 6
    if gap == 4:
        t4 = np.trace(A2 @ A2)
        return (t1 ** 4 - 6 * t2 * t1 ** 2 + 3 * t2 ** 2 + 8 * t3 * t1 - 6 * t4) / 24
    raise OrderError(f"no closed form tabulated for gap {gap}")
