"""Deliberately naive reference computations.

Nothing here sits on the main code path.  These routines exist so tests and
the ``verify`` command can compare the library against implementations that
share no code with it: the Leibniz determinant, the complement summed
literally over Kronecker-weighted index assignments, a cyclic Jacobi
eigensolver and principal angles between subspaces.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionGuardError, MultiplicityError, ShapeError

FACTORIAL_GUARD = 8
JACOBI_GUARD = 12
DEFAULT_SEED = 42


@dataclass
class OracleConfig:
    max_n: int = FACTORIAL_GUARD
    rng_seed: int = DEFAULT_SEED
    trials: int = 20

    def __post_init__(self):
        if self.max_n > FACTORIAL_GUARD:
            raise DimensionGuardError(f"factorial oracles are capped at n={FACTORIAL_GUARD}")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.rng_seed)


def _parity(seq) -> int:
    # inversion count, independent of tensor_core.perm_sign
    inv = 0
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                inv += 1
    return -1 if inv & 1 else 1


def _guard(n: int, limit: int) -> None:
    if n > limit:
        raise DimensionGuardError(f"n={n} exceeds oracle guard {limit}")


def levi_civita(indices, n: int) -> int:
    if len(indices) != n or len(set(indices)) != n:
        return 0
    return _parity(list(indices))


def kronecker_by_levi_civita(upper, lower, n: int) -> int:
    """Generalized Kronecker symbol as a contracted product of two Levi-Civita symbols."""
    _guard(n, FACTORIAL_GUARD)
    s = len(upper)
    total = 0
    for tail in itertools.product(range(n), repeat=n - s):
        total += levi_civita(tuple(upper) + tail, n) * levi_civita(tuple(lower) + tail, n)
    q, rem = divmod(total, math.factorial(n - s))
    assert rem == 0
    return q


def det_by_permutations(A, max_n: int = FACTORIAL_GUARD):
    """Leibniz sum over all ``n!`` permutations."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError("square matrix required")
    n = A.shape[0]
    _guard(n, max_n)
    rows = A.tolist()
    total = 0
    for perm in itertools.permutations(range(n)):
        term = _parity(perm)
        for i, j in enumerate(perm):
            term = term * rows[i][j]
        total = total + term
    return total


def det_by_cofactors(A):
    """Recursive Laplace expansion along the first row."""
    rows = np.asarray(A).tolist()

    def expand(m):
        if not m:
            return 1
        total = 0
        for col, a in enumerate(m[0]):
            sub = [row[:col] + row[col + 1:] for row in m[1:]]
            total = total + (-1) ** col * a * expand(sub)
        return total

    return expand(rows)


def _kronecker_plain(upper, lower) -> int:
    if sorted(upper) != sorted(lower) or len(set(upper)) != len(upper):
        return 0
    return _parity(list(upper)) * _parity(list(lower))


def complement_by_kronecker_sum(A, s: int, J, I, max_n: int = FACTORIAL_GUARD):
    """Reduced complement from its defining sum over index assignments.

    ``1/(n-s)! * sum delta^{J, j'}_{I, i'} A[i'_1, j'_1] ... A[i'_{n-s}, j'_{n-s}]``.
    Assignments with a repeated index carry a vanishing symbol and are
    skipped.
    """
    A = np.asarray(A)
    n = A.shape[0]
    _guard(n, max_n)
    J = tuple(J)
    I = tuple(I)
    rows = A.tolist()
    total = 0
    for jp in itertools.permutations(range(n), n - s):
        for ip in itertools.permutations(range(n), n - s):
            weight = _kronecker_plain(J + jp, I + ip)
            if not weight:
                continue
            term = weight
            for a, b in zip(ip, jp):
                term = term * rows[a][b]
            total = total + term
    f = math.factorial(n - s)
    if isinstance(total, int):
        q, rem = divmod(total, f)
        return q if rem == 0 else total / f
    return total / f


def eig_oracle(H, tol: float = 1e-15, max_sweeps: int = 60):
    """Cyclic Jacobi rotations for a Hermitian matrix.

    Returns ascending eigenvalues and a unitary matrix whose columns are the
    eigenvectors.
    """
    a = np.array(H, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError("square matrix required")
    n = a.shape[0]
    _guard(n, JACOBI_GUARD)
    v = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(a), 1e-300)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                # phase out a[p,q], then a real symmetric rotation
                phase = apq / abs(apq)
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * abs(apq))
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ g
                a[p, q] = 0.0
                a[q, p] = 0.0
    else:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.diag(a).real
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def _orthonormal_basis(vectors, name: str) -> np.ndarray:
    M = np.asarray(vectors, dtype=complex)
    if M.ndim == 1:
        M = M[:, None]
    Q, R = np.linalg.qr(M)
    diag = np.abs(np.diag(R))
    if M.shape[1] == 0 or diag.min() <= 1e-10 * max(diag.max(), 1e-300):
        raise MultiplicityError(f"{name} is rank deficient")
    return Q


def subspace_angles(U1, U2) -> np.ndarray:
    """Principal angles between the column spans of ``U1`` and ``U2``.

    Small angles come from the sines (singular values of the part of ``U2``
    orthogonal to ``U1``), large ones from the cosines, so both ends stay
    accurate.  Angles are returned in ascending order.
    """
    Q1 = _orthonormal_basis(U1, "first basis")
    Q2 = _orthonormal_basis(U2, "second basis")
    if Q1.shape[0] != Q2.shape[0]:
        raise ShapeError("bases live in different ambient dimensions")
    if Q1.shape[1] < Q2.shape[1]:
        Q1, Q2 = Q2, Q1
    k = Q2.shape[1]
    cos = np.clip(np.linalg.svd(Q1.conj().T @ Q2, compute_uv=False), 0.0, 1.0)[:k]
    residual = Q2 - Q1 @ (Q1.conj().T @ Q2)
    sin = np.clip(np.sort(np.linalg.svd(residual, compute_uv=False))[:k], 0.0, 1.0)
    angles = np.where(cos ** 2 < 0.5, np.arccos(cos), np.arcsin(sin))
    return np.sort(angles)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (Z + Z.conj().T) / 2


def planted_hermitian(eigenvalues, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """``H = U diag(eigenvalues) U^dagger`` with a random unitary ``U``."""
    d = np.asarray(eigenvalues, dtype=float)
    U = random_unitary(len(d), rng)
    H = (U * d) @ U.conj().T
    return (H + H.conj().T) / 2, U
