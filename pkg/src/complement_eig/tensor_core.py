"""Minor determinants, complements and reduced complements of square matrices.

Indices are 0-based: an index set is a tuple of distinct integers in
``range(n)``.  A tensor value ``T^J_I`` is addressed as ``T[J, I]`` with the
contravariant (row) set first.  For a matrix ``A`` the entry ``A[i, j]``
plays the role of ``A^i_j``.

Levi-Civita signs and generalized Kronecker symbols are evaluated in exact
integer arithmetic.  Minors of integer matrices stay exact as well (cofactor
expansion up to order 4, fraction-free Bareiss above); float and complex
minors above order 4 go through LU with partial pivoting.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DimensionGuardError,
    InvalidIndexError,
    InvalidPermutationError,
    OrderError,
    ShapeError,
)
from .results import IdentityCheckResult, compare, exact

MAX_TENSOR_N = 12

Index = tuple[int, ...]


# ---------------------------------------------------------------------------
# parity and Kronecker symbols
# ---------------------------------------------------------------------------

def perm_sign(p: Sequence[int]) -> int:
    """Sign of a permutation of ``range(len(p))`` by cycle decomposition."""
    try:
        p = [int(x) for x in p]
    except (TypeError, ValueError) as exc:
        raise InvalidPermutationError(f"not a permutation: {p!r}") from exc
    s = len(p)
    if sorted(p) != list(range(s)):
        raise InvalidPermutationError(f"not a bijection on range({s}): {p!r}")
    seen = [False] * s
    sign = 1
    for start in range(s):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = p[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def sort_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation that sorts ``seq``; 0 if ``seq`` has a repeat."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    inversions = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
    return -1 if inversions % 2 else 1


def _check_indices(indices: Sequence[int], n: int) -> Index:
    out = tuple(int(i) for i in indices)
    for i in out:
        if not 0 <= i < n:
            raise InvalidIndexError(f"index {i} outside range({n})")
    return out


def kronecker(upper: Sequence[int], lower: Sequence[int], n: int) -> int:
    """Generalized Kronecker symbol ``delta^{upper}_{lower}`` in dimension ``n``.

    Zero when either list repeats an index or the two sets differ, otherwise
    the sign of the permutation carrying ``lower`` onto ``upper``.
    """
    if len(upper) != len(lower):
        raise ShapeError("upper and lower index lists differ in length")
    if len(upper) > n:
        raise InvalidIndexError(f"order {len(upper)} exceeds dimension {n}")
    upper = _check_indices(upper, n)
    lower = _check_indices(lower, n)
    if set(upper) != set(lower):
        return 0
    return sort_sign(upper) * sort_sign(lower)


@dataclass(frozen=True)
class MultiIndex:
    """Strictly increasing index set ``J`` inside ``range(n)``."""

    indices: Index
    n: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if any(not 0 <= i < self.n for i in idx):
            raise InvalidIndexError(f"{idx} not inside range({self.n})")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise InvalidIndexError(f"{idx} is not strictly increasing")

    @classmethod
    def canonical(cls, indices: Iterable[int], n: int) -> tuple[int, "MultiIndex"]:
        """Sort ``indices`` and return ``(sign, MultiIndex)``; sign 0 on repeats."""
        indices = tuple(indices)
        sign = sort_sign(indices)
        if sign == 0:
            raise InvalidIndexError(f"repeated index in {indices}")
        return sign, cls(tuple(sorted(indices)), n)

    @classmethod
    def all(cls, n: int, r: int) -> Iterator["MultiIndex"]:
        for combo in itertools.combinations(range(n), r):
            yield cls(combo, n)

    def complement(self) -> "MultiIndex":
        present = set(self.indices)
        return MultiIndex(tuple(k for k in range(self.n) if k not in present), self.n)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)


def _as_indices(x) -> Index:
    if isinstance(x, MultiIndex):
        return x.indices
    return tuple(int(i) for i in x)


def merge_sign(J: Sequence[int], n: int) -> int:
    """Sign of ``(J, complement(J))`` as a permutation of ``range(n)``."""
    J = tuple(J)
    present = set(J)
    rest = tuple(k for k in range(n) if k not in present)
    return sort_sign(J + rest)


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------

def _is_exact(A: np.ndarray) -> bool:
    if np.issubdtype(A.dtype, np.integer) or A.dtype == bool:
        return True
    if A.dtype == object:
        return all(isinstance(x, (int, np.integer)) for x in A.flat)
    return False


def _cofactor_det(m: list[list]):
    size = len(m)
    if size == 0:
        return 1
    if size == 1:
        return m[0][0]
    if size == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for col in range(size):
        if m[0][col] == 0:
            continue
        sub = [row[:col] + row[col + 1:] for row in m[1:]]
        term = m[0][col] * _cofactor_det(sub)
        total = total - term if col % 2 else total + term
    return total


def _bareiss_det(m: list[list[int]]) -> int:
    m = [list(map(int, row)) for row in m]
    size = len(m)
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1] if size else 1


def _lu_det(m: np.ndarray) -> complex:
    m = np.array(m, dtype=complex)
    size = m.shape[0]
    sign = 1
    for k in range(size):
        p = k + int(np.argmax(np.abs(m[k:, k])))
        if m[p, k] == 0:
            return 0j
        if p != k:
            m[[k, p]] = m[[p, k]]
            sign = -sign
        factors = m[k + 1:, k] / m[k, k]
        m[k + 1:, k:] -= np.outer(factors, m[k, k:])
    return sign * complex(np.prod(np.diag(m)))


def det(A) -> complex | int:
    """Determinant of a square matrix (exact for integer input)."""
    A = as_square(A)
    n = A.shape[0]
    return minor_det(A, range(n), range(n))


def minor_det(A, J, I) -> complex | int:
    """Minor determinant ``(det A)^J_I``: rows ``J``, columns ``I``.

    ``J`` and ``I`` may be unsorted; the result then carries the
    corresponding permutation signs, and vanishes on repeated indices.
    """
    A = np.asarray(A)
    if A.ndim != 2:
        raise ShapeError("expected a 2-d array")
    J = _check_indices(_as_indices(J), A.shape[0])
    I = _check_indices(_as_indices(I), A.shape[1])
    if len(J) != len(I):
        raise ShapeError(f"row set has {len(J)} indices, column set {len(I)}")
    s = len(J)
    integer = _is_exact(A)
    if s == 0:
        return 1 if integer else 1 + 0j
    sub = A[np.ix_(J, I)]
    if integer:
        rows = [[int(x) for x in row] for row in sub.tolist()]
        return _cofactor_det(rows) if s <= 4 else _bareiss_det(rows)
    if s <= 4:
        return complex(_cofactor_det(sub.tolist()))
    return _lu_det(sub)


def as_square(A) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {A.shape}")
    return A


# ---------------------------------------------------------------------------
# complements
# ---------------------------------------------------------------------------

def _full_complement(A: np.ndarray, J: Index, I: Index):
    n = A.shape[0]
    sj = merge_sign(J, n)
    si = merge_sign(I, n)
    if sj == 0 or si == 0:
        return 0
    Jc = tuple(k for k in range(n) if k not in J)
    Ic = tuple(k for k in range(n) if k not in I)
    # the complementary product runs over A^{i'}_{j'}: rows from I', columns from J'
    return sj * si * minor_det(A, Ic, Jc)


def complement(A, s: int, J, I):
    """Reduced complement ``(det_s A)^J_I`` of order ``(r, s)`` with ``r = |J|``.

    For ``r = s`` this is the signed complementary minor; for ``r < s`` the
    order-``s`` complement is contracted over ``s - r`` shared indices,
    which reduces to a sum over unordered index sets disjoint from ``J`` and
    ``I``.
    """
    A = as_square(A)
    n = A.shape[0]
    if n > MAX_TENSOR_N:
        raise DimensionGuardError(f"n={n} exceeds tensor guard {MAX_TENSOR_N}")
    J = _check_indices(_as_indices(J), n)
    I = _check_indices(_as_indices(I), n)
    if len(J) != len(I):
        raise ShapeError(f"|J|={len(J)} differs from |I|={len(I)}")
    r = len(J)
    if not 0 <= r <= s <= n:
        raise OrderError(f"need r <= s <= n, got r={r}, s={s}, n={n}")
    if r == s:
        return _full_complement(A, J, I)
    used = set(J) | set(I)
    free = [k for k in range(n) if k not in used]
    total = 0
    for K in itertools.combinations(free, s - r):
        total = total + _full_complement(A, J + K, I + K)
    return total


def adjugate(A) -> np.ndarray:
    """``adj A`` with ``adj[j, i] = complement(A, 1, (j,), (i,))``."""
    A = as_square(A)
    n = A.shape[0]
    dtype = object if _is_exact(A) else complex
    out = np.empty((n, n), dtype=dtype)
    for j in range(n):
        for i in range(n):
            out[j, i] = complement(A, 1, (j,), (i,))
    return out if dtype is not object else out.astype(np.int64)


def compound_matrix(A, r: int) -> np.ndarray:
    """Matrix of all order-``r`` minors, subsets in lexicographic order."""
    A = np.asarray(A)
    rows = list(itertools.combinations(range(A.shape[0]), r))
    cols = list(itertools.combinations(range(A.shape[1]), r))
    exact_input = _is_exact(A)
    out = np.empty((len(rows), len(cols)), dtype=object if exact_input else complex)
    for a, J in enumerate(rows):
        for b, I in enumerate(cols):
            out[a, b] = minor_det(A, J, I)
    return out


# ---------------------------------------------------------------------------
# antisymmetric tensors
# ---------------------------------------------------------------------------

@dataclass
class AntisymTensor:
    """Order-``(r, r)`` antisymmetric tensor stored on sorted index sets.

    Lookups at unsorted index tuples pick up the product of the two
    sorting signs; repeated indices give zero.
    """

    n: int
    r: int
    values: dict[tuple[Index, Index], complex] = field(default_factory=dict)

    @classmethod
    def from_function(cls, n: int, r: int, fn: Callable[[Index, Index], complex]) -> "AntisymTensor":
        values = {}
        for J in itertools.combinations(range(n), r):
            for I in itertools.combinations(range(n), r):
                values[(J, I)] = fn(J, I)
        return cls(n, r, values)

    def __getitem__(self, key):
        upper, lower = key
        upper = _as_indices(upper)
        lower = _as_indices(lower)
        if len(upper) != self.r or len(lower) != self.r:
            raise ShapeError(f"tensor of order {self.r} indexed with {len(upper)}/{len(lower)} indices")
        su = sort_sign(upper)
        sl = sort_sign(lower)
        if su == 0 or sl == 0:
            return 0
        return su * sl * self.values.get((tuple(sorted(upper)), tuple(sorted(lower))), 0)

    @property
    def scalar(self):
        if self.r != 0:
            raise ShapeError("only order-0 tensors reduce to a scalar")
        return self.values[((), ())]

    def subsets(self) -> list[Index]:
        return list(itertools.combinations(range(self.n), self.r))

    def to_matrix(self) -> np.ndarray:
        """Dense matrix over sorted subsets (rows: upper set, columns: lower set)."""
        subsets = self.subsets()
        out = np.array([[self.values[(J, I)] for I in subsets] for J in subsets])
        return out

    def max_abs(self) -> float:
        return max((abs(v) for v in self.values.values()), default=0.0)


def minor_tensor(A, s: int) -> AntisymTensor:
    A = as_square(A)
    return AntisymTensor.from_function(A.shape[0], s, lambda J, I: minor_det(A, J, I))


def complement_tensor(A, s: int, r: int | None = None) -> AntisymTensor:
    """Reduced complement ``(det_s A)`` of order ``(r, s)`` (``r = s`` by default)."""
    A = as_square(A)
    r = s if r is None else r
    return AntisymTensor.from_function(A.shape[0], r, lambda J, I: complement(A, s, J, I))


def transform_tensor(T: AntisymTensor, U) -> AntisymTensor:
    """Change of frame ``T' = U^-1 T U`` lifted to order ``r`` via compound matrices.

    ``U`` is unitary; the columns of ``U`` span the new frame.
    """
    U = as_square(U)
    left = compound_matrix(U.conj().T, T.r)
    right = compound_matrix(U, T.r)
    M = left @ T.to_matrix() @ right
    subsets = T.subsets()
    values = {(J, I): M[a, b] for a, J in enumerate(subsets) for b, I in enumerate(subsets)}
    return AntisymTensor(T.n, T.r, values)


# ---------------------------------------------------------------------------
# identity checks
# ---------------------------------------------------------------------------

def _norm_max(A) -> float:
    A = np.asarray(A)
    return float(np.max(np.abs(A))) if A.size else 0.0


def _contraction_sides(A, r, s, P, j, Q, i, T_rs, T_s1, n):
    """Left side and both right-side forms of the contraction identity."""
    lhs = 0
    for jr in range(n):
        if A[j, jr] != 0:
            lhs += A[j, jr] * T_rs[P + (jr,), Q + (i,)]

    # alternating sum of minors of order n-s+1
    form_minors = 0
    for Iset in itertools.combinations(range(n), n - s):
        if j in Iset:
            continue
        lower_set = set(Q) | {i} | set(Iset)
        if len(lower_set) != r + n - s or not set(P) <= lower_set:
            continue
        Jset = tuple(sorted(lower_set - set(P)))
        sign = kronecker(P + Jset, Q + (i,) + Iset, n)
        if sign:
            form_minors += sign * minor_det(A, (j,) + Iset, Jset)

    # alternating sum of complements of order s-1
    form_complements = 0
    for tail in itertools.permutations(range(n), s - r):
        L = Q + tail + (i,)
        if j not in L or len(set(L)) != len(L):
            continue
        K = tuple(sorted(set(L) - {j}))
        sign = kronecker(K + (j,), L, n)
        if sign:
            form_complements += sign * T_s1[P + tail, K]
    form_complements /= math.factorial(s - r)
    return lhs, form_minors, form_complements


def check_contraction_identity(A, r: int, s: int, upper=None, lower=None, tol: float = 1e-10) -> IdentityCheckResult:
    """Contract ``A`` with a reduced complement and compare both closed forms.

    ``upper = (j_1..j_{r-1}, j)`` and ``lower = (i_1..i_{r-1}, i)``; when
    omitted every prefix set and every free index is checked.  The detail
    dict carries ``lhs_max`` so degenerate characteristic matrices can be
    checked for the vanishing left side as well.
    """
    A = as_square(A)
    n = A.shape[0]
    if not 1 <= r <= s <= n:
        raise OrderError(f"need 1 <= r <= s <= n, got r={r}, s={s}, n={n}")
    T_rs = complement_tensor(A, s, r)
    T_s1 = complement_tensor(A, s - 1)
    if upper is None or lower is None:
        prefixes = list(itertools.combinations(range(n), r - 1))
        cases = [(P, j, Q, i) for P in prefixes for j in range(n) for Q in prefixes for i in range(n)]
    else:
        upper = _check_indices(upper, n)
        lower = _check_indices(lower, n)
        if len(upper) != r or len(lower) != r:
            raise ShapeError("index tuples must have length r")
        cases = [(upper[:-1], upper[-1], lower[:-1], lower[-1])]
    lhs, rhs_minors, rhs_compl = [], [], []
    for P, j, Q, i in cases:
        a, b, c = _contraction_sides(A, r, s, P, j, Q, i, T_rs, T_s1, n)
        lhs.append(a)
        rhs_minors.append(b)
        rhs_compl.append(c)
    lhs = np.array(lhs, dtype=complex)
    floor = max(1.0, _norm_max(A)) ** (n - s + 1)
    by_minors = compare("minors", lhs, np.array(rhs_minors, dtype=complex), tol, floor)
    by_compl = compare("complements", lhs, np.array(rhs_compl, dtype=complex), tol, floor)
    worst = by_minors if by_minors.max_rel_dev >= by_compl.max_rel_dev else by_compl
    return IdentityCheckResult(
        f"contraction_identity[n={n},r={r},s={s}]",
        worst.max_abs_dev,
        worst.max_rel_dev,
        tol,
        by_minors.passed and by_compl.passed,
        {"lhs_max": _norm_max(lhs), "dev_minor_form": by_minors.max_rel_dev,
         "dev_complement_form": by_compl.max_rel_dev, "cases": len(cases)},
    )


def check_contraction_vanishes(A, r: int, s: int, tol: float = 1e-9, scale: float | None = None) -> IdentityCheckResult:
    """Left side of the contraction identity vanishes when ``rank A = n - s``."""
    A = as_square(A)
    n = A.shape[0]
    T_rs = complement_tensor(A, s, r)
    values = []
    for P in itertools.combinations(range(n), r - 1):
        for Q in itertools.combinations(range(n), r - 1):
            for j in range(n):
                for i in range(n):
                    values.append(sum(A[j, jr] * T_rs[P + (jr,), Q + (i,)] for jr in range(n)))
    if scale is None:
        scale = max(float(np.linalg.norm(A)), 1e-300) ** (n - s + 1)
    lhs_max = _norm_max(values)
    return IdentityCheckResult(f"contraction_vanishes[n={n},r={r},s={s}]", lhs_max, lhs_max / scale,
                               tol, lhs_max <= tol * scale, {"scale": scale})


def check_minor_complement_product(A, s: int, tol: float = 1e-10) -> IdentityCheckResult:
    """``sum_K (det A)^J_K (det_s A)^K_I = delta^J_I det A`` over all sorted ``J, I``."""
    A = as_square(A)
    n = A.shape[0]
    minors = compound_matrix(A, s)
    compl = complement_tensor(A, s).to_matrix()
    lhs = minors @ compl
    rhs = det(A) * np.eye(lhs.shape[0])
    floor = max(1.0, _norm_max(A)) ** n
    if _is_exact(A):
        res = exact(f"minor_complement_product[n={n},s={s}]", lhs.ravel(), rhs.astype(np.int64).ravel())
        return res
    res = compare(f"minor_complement_product[n={n},s={s}]", lhs, rhs, tol, floor)
    return res


def check_inverse_relation(A, s: int, tol: float = 1e-9) -> IdentityCheckResult:
    """``(det_s A)^J_I = (det A^-1)^J_I det A`` for invertible ``A``."""
    A = as_square(A).astype(complex)
    n = A.shape[0]
    lhs = complement_tensor(A, s).to_matrix()
    rhs = compound_matrix(np.linalg.inv(A), s) * det(A)
    return compare(f"inverse_relation[n={n},s={s}]", lhs, rhs, tol)


def cauchy_binet(A, B, J, I, tol: float = 1e-10) -> IdentityCheckResult:
    """Minor of ``A B`` against the sum over intermediate index sets ``K``."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise ShapeError(f"cannot multiply shapes {A.shape} and {B.shape}")
    J = _as_indices(J)
    I = _as_indices(I)
    if len(J) != len(I):
        raise ShapeError("|J| differs from |I|")
    s = len(J)
    m = A.shape[1]
    AB = A @ B
    lhs = minor_det(AB, J, I)
    rhs = 0
    for K in itertools.combinations(range(m), s):
        rhs = rhs + minor_det(A, J, K) * minor_det(B, K, I)
    name = f"cauchy_binet[{A.shape[0]}x{m}.{m}x{B.shape[1]},s={s}]"
    if _is_exact(A) and _is_exact(B):
        return exact(name, [lhs], [rhs], J=J, I=I)
    floor = max(1.0, _norm_max(A) * _norm_max(B)) ** s
    return compare(name, lhs, rhs, tol, floor, J=J, I=I)


def check_cauchy_binet_all(A, B, s: int, tol: float = 1e-10) -> IdentityCheckResult:
    """Cauchy-Binet over every pair of sorted row/column sets of size ``s``."""
    results = [cauchy_binet(A, B, J, I, tol)
               for J in itertools.combinations(range(np.shape(A)[0]), s)
               for I in itertools.combinations(range(np.shape(B)[1]), s)]
    worst = max(results, key=lambda res: res.max_rel_dev)
    return IdentityCheckResult(worst.name, worst.max_abs_dev, worst.max_rel_dev, worst.tol,
                               all(res.passed for res in results), {"cases": len(results)})


def check_kronecker_contraction(n: int, s: int, p: int) -> IdentityCheckResult:
    """Contracting ``p - s`` index pairs of an order-``p`` symbol (exact).

    Free indices run over every ordered upper tuple and every sorted lower
    set; the contracted ones run over all of ``range(n)`` independently.
    """
    if not 0 <= s <= p <= n:
        raise OrderError(f"need 0 <= s <= p <= n, got s={s}, p={p}, n={n}")
    factor = math.factorial(n - s) // math.factorial(n - p)
    lhs, rhs = [], []
    for upper in itertools.permutations(range(n), s):
        for lower in itertools.combinations(range(n), s):
            total = 0
            for tail in itertools.product(range(n), repeat=p - s):
                total += kronecker(upper + tail, lower + tail, n)
            lhs.append(total)
            rhs.append(factor * kronecker(upper, lower, n))
    return exact(f"kronecker_contraction[n={n},s={s},p={p}]", lhs, rhs)


def check_kronecker_product(n: int, s: int, p: int) -> IdentityCheckResult:
    """Contracting an order-``s`` symbol into an order-``p`` one (exact).

    The sums over ``i_1..i_s`` and ``j_1..j_s`` are restricted to the support
    of the first symbol (``i`` a rearrangement of distinct ``j``).
    """
    if not 0 <= s <= p <= n:
        raise OrderError(f"need 0 <= s <= p <= n, got s={s}, p={p}, n={n}")
    factor = math.factorial(s) * math.factorial(n - p + s) // math.factorial(n - p)
    lhs, rhs = [], []
    for upper_free in itertools.permutations(range(n), p - s):
        for lower_free in itertools.combinations(range(n), p - s):
            total = 0
            for js in itertools.permutations(range(n), s):
                for order in itertools.permutations(range(s)):
                    i_s = tuple(js[k] for k in order)
                    first = kronecker(js, i_s, n)
                    total += first * kronecker(i_s + upper_free, js + lower_free, n)
            lhs.append(total)
            rhs.append(factor * kronecker(upper_free, lower_free, n))
    return exact(f"kronecker_product[n={n},s={s},p={p}]", lhs, rhs)
