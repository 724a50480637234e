"""Eigenvalues and eigenvectors of Hermitian matrices from minor complements.

Eigenvalues are roots of the characteristic polynomial, whose coefficients
come from trace expansions of diagonal minor sums.  For a simple eigenvalue
the eigenvector is any nonzero column of ``adj(lambda I - H)``.  For an
``s``-fold eigenvalue the adjugate vanishes, and the first non-vanishing
reduced order-one complement ``(det_s C)^j_i`` has rank ``s`` with columns
spanning the eigenspace.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConvergenceError, HermiticityError, MultiplicityError, ParameterError
from .results import IdentityCheckResult, compare
from .tensor_core import adjugate, as_square, det
from .trace_identities import (
    TracePowerCache,
    characteristic_coefficients,
    minor_trace_sum,
    reduced_complement_via_traces,
)

EPS = np.finfo(float).eps


@dataclass
class SpectralConfig:
    hermitian_tol: float = 1e-10
    cluster_tol: float = 1e-7
    vanish_tol: float = 1e-7
    rank_tol: float = 1e-6
    residual_tol: float = 1e-8
    root_tol: float = 1e-8
    refine: bool = True
    check_hermitian: bool = True

    def __post_init__(self):
        for name, value in asdict(self).items():
            if isinstance(value, float) and not value > 0:
                raise ParameterError(f"{name} must be positive, got {value}")

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class CharacteristicMatrix:
    """``C = lambda I - H``."""

    H: np.ndarray
    lam: complex
    C: np.ndarray

    @classmethod
    def at(cls, H, lam) -> "CharacteristicMatrix":
        H = np.asarray(as_square(H), dtype=complex)
        return cls(H, lam, lam * np.eye(H.shape[0]) - H)


@dataclass
class EigenGroup:
    """A cluster of polynomial roots taken as one eigenvalue.

    ``radius`` is the merge radius that applied to this cluster; members
    lie within it of ``lam``.
    """

    lam: complex
    s: int
    members: list[complex]
    radius: float = 0.0
    vanishing_s: int | None = None


@dataclass
class Eigenpair:
    """Eigenvalue with an orthonormal eigenbasis stored as columns of ``vectors``."""

    lam: complex
    vectors: np.ndarray
    residual: float

    @property
    def s(self) -> int:
        return self.vectors.shape[1]


@dataclass
class SpectrumReport:
    groups: list[EigenGroup]
    pairs: list[Eigenpair]
    checks: list[IdentityCheckResult]
    tolerances: dict
    flags: list[str] = field(default_factory=list)

    @property
    def V(self) -> np.ndarray:
        return np.hstack([p.vectors for p in self.pairs])

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.concatenate([np.full(p.s, p.lam) for p in self.pairs])

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def hermiticity_defect(H) -> float:
    H = np.asarray(H)
    return float(np.abs(H - H.conj().T).max() / max(1.0, np.abs(H).max()))


def require_hermitian(H, tol: float = 1e-10) -> np.ndarray:
    H = np.asarray(as_square(H), dtype=complex)
    defect = hermiticity_defect(H)
    if defect > tol:
        raise HermiticityError(f"matrix is not Hermitian: defect {defect:.3e} > {tol:.1e}")
    return (H + H.conj().T) / 2


def canonical_phase(v: np.ndarray) -> np.ndarray:
    """Scale ``v`` so that its largest-magnitude component is real positive."""
    k = int(np.argmax(np.abs(v)))
    if v[k] == 0:
        return v
    return v * (abs(v[k]) / v[k])


def _merge_radius(k: int, n: int, cluster_tol: float) -> float:
    # roots of a k-fold zero scatter like (coefficient error)^(1/k)
    if k < 2:
        return 0.0
    return max(cluster_tol, 4.0 * (64 * n * EPS) ** (1.0 / k))


def _cluster(roots: np.ndarray, n: int, cluster_tol: float) -> list[list[int]]:
    """Group sorted roots into contiguous runs whose diameter fits their radius.

    Longer runs are tried first, since a k-fold root may scatter wider than
    any of its sub-runs would be allowed to.
    """
    owner = [None] * len(roots)
    for k in range(len(roots), 1, -1):
        for a in range(len(roots) - k + 1):
            window = range(a, a + k)
            if any(owner[i] is not None for i in window):
                continue
            if roots[a + k - 1] - roots[a] <= _merge_radius(k, n, cluster_tol):
                for i in window:
                    owner[i] = a
    clusters: dict[int, list[int]] = {}
    for i, o in enumerate(owner):
        clusters.setdefault(i if o is None else o, []).append(i)
    return [clusters[key] for key in sorted(clusters)]


def _newton_polish(Hs: np.ndarray, x: float, steps: int = 4) -> float:
    """Newton on ``det(x I - Hs)`` with derivative ``Tr adj(x I - Hs)``."""
    n = Hs.shape[0]
    f = det(x * np.eye(n) - Hs)
    for _ in range(steps):
        C = x * np.eye(n) - Hs
        df = minor_trace_sum(C, 1)
        if df == 0:
            break
        trial = x - (f / df).real
        f_trial = det(trial * np.eye(n) - Hs)
        if not abs(f_trial) < abs(f):
            break
        x, f = trial, f_trial
    return x


def _poly_backward_error(coeffs: np.ndarray, x: complex) -> float:
    # normwise: |p(x)| against the coefficient size at max(1, |x|)
    value = abs(np.polyval(coeffs, x))
    bound = np.polyval(np.abs(coeffs), max(1.0, abs(x)))
    return float(value / bound)


# ---------------------------------------------------------------------------
# eigenvalues
# ---------------------------------------------------------------------------

def eigenvalues(H, cluster_tol: float = 1e-7, config: SpectralConfig | None = None) -> list[EigenGroup]:
    """Distinct eigenvalues with algebraic multiplicities, ascending.

    The matrix is shifted by its mean eigenvalue and scaled to unit Frobenius
    norm; roots of the characteristic polynomial of that matrix are
    clustered and mapped back.
    """
    config = config or SpectralConfig(cluster_tol=cluster_tol)
    hermitian = config.check_hermitian
    if hermitian:
        H = require_hermitian(H, config.hermitian_tol)
    else:
        H = np.asarray(as_square(H), dtype=complex)
    n = H.shape[0]
    tau = np.trace(H) / n
    if hermitian:
        tau = tau.real
    shifted = H - tau * np.eye(n)
    sigma = float(np.linalg.norm(shifted))
    if sigma <= 64 * EPS * max(1.0, abs(tau)):
        return [EigenGroup(tau, n, [tau] * n, 0.0)]
    Hs = shifted / sigma
    coeffs = characteristic_coefficients(Hs)
    raw = np.roots(coeffs)
    # cluster_tol is quoted in the units of H; the roots live in scaled units
    tol_scaled = cluster_tol * (1.0 + np.abs(H).max()) / sigma

    if hermitian:
        # multiple roots may split into complex pairs of size eps^(1/k)
        if np.abs(raw.imag).max() > 0.1:
            raise ConvergenceError(f"characteristic roots far from real axis: {np.abs(raw.imag).max():.3e}")
        roots = np.sort(raw.real)
        clusters = _cluster(roots, n, tol_scaled)
    else:
        order = np.lexsort((raw.imag, raw.real))
        roots = raw[order]
        clusters = _cluster_complex(roots, n, tol_scaled)

    groups = []
    for members in clusters:
        vals = roots[members]
        if len(members) == 1 and hermitian:
            x = _newton_polish(Hs, float(vals[0]))
        else:
            x = vals.mean()
        if _poly_backward_error(coeffs, x) > config.root_tol:
            raise ConvergenceError(f"root {x} of the scaled polynomial has residual above {config.root_tol:g}")
        radius = max(float(np.abs(vals - x).max()), _merge_radius(len(members), n, tol_scaled))
        lam = tau + sigma * x
        # pad for the rounding of the back-transformation
        radius = sigma * radius + 8 * EPS * (abs(lam) + sigma)
        groups.append(EigenGroup(lam, len(members), list(tau + sigma * vals), radius))
    return groups


def _cluster_complex(roots: np.ndarray, n: int, tol: float) -> list[list[int]]:
    # diagnostic mode: greedy grouping by distance to the first member
    clusters: list[list[int]] = []
    for i, z in enumerate(roots):
        for c in clusters:
            if abs(roots[c[0]] - z) <= _merge_radius(len(c) + 1, n, tol):
                c.append(i)
                break
        else:
            clusters.append([i])
    return clusters


# ---------------------------------------------------------------------------
# multiplicities and eigenvectors
# ---------------------------------------------------------------------------

def complement_chain(H, lam) -> list[float]:
    """``max |(det_r C)^j_i|`` for ``r = 1..n`` on ``C / ||C||_F``.

    Normalizing ``C`` makes every order comparable to a tolerance near 1.
    """
    C = CharacteristicMatrix.at(H, lam).C
    n = C.shape[0]
    norm = np.linalg.norm(C)
    if norm == 0:
        return [0.0] * (n - 1) + [1.0]
    Cn = C / norm
    cache = TracePowerCache.build(Cn, n - 1)
    return [float(np.abs(reduced_complement_via_traces(Cn, r, cache)).max()) for r in range(1, n + 1)]


def multiplicity_by_vanishing(H, lam, vanish_tol: float = 1e-7) -> int:
    """Smallest ``s`` whose reduced order-one complement of ``lam I - H`` survives."""
    H = np.asarray(as_square(H), dtype=complex)
    n = H.shape[0]
    C = lam * np.eye(n) - H
    norm = np.linalg.norm(C)
    if norm <= 64 * n * EPS * (1.0 + np.abs(H).max()):
        # C is roundoff: H = lam I and only the order-n complement (I) survives
        return n
    Cn = C / norm
    cache = TracePowerCache.build(Cn, n - 1)
    for s in range(1, n + 1):
        size = np.abs(reduced_complement_via_traces(Cn, s, cache)).max()
        if size > vanish_tol:
            return s
    raise MultiplicityError(f"no complement of lam I - H survives up to order {n}")


def eigenvector_nondegenerate(H, lam) -> np.ndarray:
    """Largest column of ``adj(lam I - H)``, normalized, canonical phase."""
    C = CharacteristicMatrix.at(H, lam).C
    n = C.shape[0]
    adj = adjugate(C)
    norms = np.linalg.norm(adj, axis=0)
    i = int(np.argmax(norms))
    scale = max(np.linalg.norm(C), 1e-300) ** (n - 1)
    if norms[i] <= 1e-9 * scale:
        raise MultiplicityError("adjugate vanishes: eigenvalue is degenerate")
    return canonical_phase(adj[:, i] / norms[i])


def pivoted_orthonormal_columns(M: np.ndarray, s: int, rank_tol: float = 1e-6, strict: bool = True) -> np.ndarray:
    """``s`` orthonormal vectors from the columns of ``M`` by pivoted Gram-Schmidt.

    The column of largest remaining norm is taken at each step; remaining
    columns are orthogonalized against it twice.  The numerical rank must
    be exactly ``s`` at threshold ``rank_tol * max column norm``; with
    ``strict=False`` a larger rank is tolerated and the leading ``s``
    directions are returned.
    """
    W = np.array(M, dtype=complex)
    top = np.linalg.norm(W, axis=0).max()
    if top == 0:
        raise MultiplicityError("matrix of columns vanishes")
    threshold = rank_tol * top
    basis = []
    for step in range(s):
        norms = np.linalg.norm(W, axis=0)
        k = int(np.argmax(norms))
        if norms[k] <= threshold:
            raise MultiplicityError(f"numerical rank {step} below expected {s}")
        q = W[:, k] / norms[k]
        for _ in range(2):
            q = q - sum((b.conj() @ q) * b for b in basis) if basis else q
            q = q / np.linalg.norm(q)
        basis.append(q)
        for _ in range(2):
            W = W - np.outer(q, q.conj() @ W)
    leftover = np.linalg.norm(W, axis=0).max()
    if strict and leftover > threshold:
        raise MultiplicityError(f"numerical rank exceeds expected {s} (leftover {leftover / top:.2e})")
    return np.column_stack(basis)


def eigenvectors_degenerate(H, lam, s: int, rank_tol: float = 1e-6, strict: bool = True) -> np.ndarray:
    """Orthonormal basis (columns) of the ``s``-dimensional eigenspace at ``lam``."""
    C = CharacteristicMatrix.at(H, lam).C
    n = C.shape[0]
    if not 1 <= s <= n:
        raise ParameterError(f"multiplicity {s} outside 1..{n}")
    norm = max(np.linalg.norm(C), 1e-300)
    psi = reduced_complement_via_traces(C / norm, s)
    Q = pivoted_orthonormal_columns(psi, s, rank_tol, strict)
    return np.column_stack([canonical_phase(Q[:, k]) for k in range(s)])


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------

def _residual(H, lam, V) -> float:
    return float(np.linalg.norm(H @ V - lam * V, axis=0).max())


def numerical_rank(A, tol: float, reference: float = 0.0) -> int:
    """Singular values above ``tol * max(largest, reference)``."""
    sv = np.linalg.svd(np.asarray(A), compute_uv=False)
    top = max(sv[0] if sv.size else 0.0, reference)
    if top == 0:
        return 0
    return int(np.sum(sv > tol * top))


def full_spectrum(H, config: SpectralConfig | None = None) -> SpectrumReport:
    """Group eigenvalues, extract eigenvectors and check the assembled basis."""
    config = config or SpectralConfig()
    hermitian = config.check_hermitian or hermiticity_defect(H) <= config.hermitian_tol
    if config.check_hermitian:
        H = require_hermitian(H, config.hermitian_tol)
    else:
        H = np.asarray(as_square(H), dtype=complex)
    n = H.shape[0]
    flags: list[str] = []
    if not hermitian:
        flags.append("diagnostic: non-Hermitian input, eigenvectors carry no orthogonality guarantee")
    run_config = SpectralConfig(**{**config.as_dict(), "check_hermitian": hermitian})
    groups = eigenvalues(H, config.cluster_tol, run_config)
    scale = 1.0 + float(np.abs(H).max())

    pairs = []
    for g in groups:
        try:
            g.vanishing_s = multiplicity_by_vanishing(H, g.lam, config.vanish_tol)
        except MultiplicityError:
            g.vanishing_s = None
        agree = g.vanishing_s == g.s
        if not agree:
            flags.append(f"multiplicity disagreement at {g.lam:.12g}: clustering {g.s}, vanishing {g.vanishing_s}")
        lam = g.lam
        # one Rayleigh pass: roots of close eigenvalues are only eps/gap
        # accurate, the quotient over the extracted basis is quadratically so
        passes = 2 if config.refine and hermitian else 1
        for k in range(passes):
            if g.s == 1:
                V = eigenvector_nondegenerate(H, lam)[:, None]
            else:
                # on disagreement keep the clustering and let the residual check judge
                V = eigenvectors_degenerate(H, lam, g.s, config.rank_tol, strict=agree)
            if k + 1 < passes:
                lam = float(np.trace(V.conj().T @ H @ V).real / g.s)
        g.lam = lam
        pairs.append(Eigenpair(lam, V, _residual(H, lam, V)))

    tol = config.residual_tol * scale
    worst = max(p.residual for p in pairs)
    checks = [IdentityCheckResult("residual", worst, worst / scale, config.residual_tol,
                                  all(p.residual < tol for p in pairs))]
    V = np.hstack([p.vectors for p in pairs])
    if hermitian:
        checks.append(compare("unitarity", V.conj().T @ V, np.eye(n), config.residual_tol, floor=1.0))
        D = V.conj().T @ H @ V
        lams = np.concatenate([np.full(p.s, p.lam) for p in pairs])
        checks.append(compare("diagonalization", D, np.diag(lams), config.residual_tol, floor=scale))
        ranks = [numerical_rank(CharacteristicMatrix.at(H, p.lam).C, config.rank_tol, scale) for p in pairs]
        expected = [n - p.s for p in pairs]
        ok = ranks == expected
        miss = float(sum(abs(a - b) for a, b in zip(ranks, expected)))
        checks.append(IdentityCheckResult("rank_law", miss, miss, 0.0, ok, {"ranks": ranks, "expected": expected}))
    tolerances = config.as_dict()
    return SpectrumReport(groups, pairs, checks, tolerances, flags)


def characteristic_value(H, lam) -> complex:
    """``det(lam I - H)`` from the trace-built polynomial coefficients."""
    coeffs = characteristic_coefficients(as_square(H))
    return complex(np.polyval(coeffs, lam))


def vanishing_scale(eigs, lam, distinct: bool = True, atol: float = 1e-9) -> float:
    """Product of ``|lam - mu|`` over eigenvalues ``mu`` away from ``lam``.

    With ``distinct`` each other eigenvalue counts once; otherwise with its
    multiplicity, which is the exact size of the surviving complement.
    """
    others = [mu for mu in eigs if abs(lam - mu) > atol]
    if distinct:
        others = sorted({round(float(np.real(mu)), 9) for mu in others})
    return math.prod(abs(lam - mu) for mu in others)
