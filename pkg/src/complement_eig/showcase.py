"""Closed-form references for a two-level system and the free Dirac Hamiltonian.

Both serve as fixtures: the library computes the same quantities from
complements of the characteristic matrix and the tests compare.

Conventions: gamma matrices in the standard (Dirac) representation, metric
``(+, -, -, -)`` and ``slash(p0, p) = p0 gamma^0 - p . gamma``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParameterError
from .oracles import DEFAULT_SEED, planted_hermitian

I2 = np.eye(2, dtype=complex)
PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_Z2 = np.zeros((2, 2), dtype=complex)
GAMMA0 = np.block([[I2, _Z2], [_Z2, -I2]])
GAMMA = tuple(np.block([[_Z2, s], [-s, _Z2]]) for s in PAULI)
BETA = GAMMA0
ALPHA = tuple(GAMMA0 @ g for g in GAMMA)

DATA_DIR = Path(__file__).parent / "data"


# ---------------------------------------------------------------------------
# two-level system
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoLevelParams:
    V11: float
    V22: float
    V12: complex

    @property
    def V21(self) -> complex:
        return complex(self.V12).conjugate()

    @property
    def omega(self) -> float:
        return math.sqrt((self.V11 - self.V22) ** 2 + 4 * abs(self.V12) ** 2)


def two_level_hamiltonian(params: TwoLevelParams) -> np.ndarray:
    return np.array([[params.V11, params.V12], [params.V21, params.V22]], dtype=complex)


def pauli_decomposition(H) -> tuple[float, float, np.ndarray]:
    """``H = a I + b sigma.n`` with ``a, b`` real and ``n`` a unit vector, from traces."""
    H = np.asarray(H, dtype=complex)
    a = 0.5 * np.trace(H).real
    b2 = 0.5 * np.trace(H @ H).real - a * a
    b = math.sqrt(max(b2, 0.0))
    if b == 0:
        return a, 0.0, np.array([0.0, 0.0, 1.0])
    n = np.array([0.5 * np.trace(s @ H).real for s in PAULI]) / b
    return a, b, n


@dataclass
class TwoLevelReference:
    lam_plus: float
    lam_minus: float
    omega: float
    P_plus: np.ndarray
    P_minus: np.ndarray
    chi_plus: np.ndarray
    chi_minus: np.ndarray
    adj_plus: np.ndarray
    adj_minus: np.ndarray


def two_level_reference(params: TwoLevelParams) -> TwoLevelReference:
    """Eigenvalues, projectors, eigenvectors and adjugates in closed form."""
    d = params.V11 - params.V22
    w = params.omega
    if w == 0:
        raise ParameterError("degenerate two-level system: omega = 0")
    V12, V21 = complex(params.V12), params.V21
    lam = {+1: (params.V11 + params.V22 + w) / 2, -1: (params.V11 + params.V22 - w) / 2}
    P = {sg: np.array([[0.5 + sg * d / (2 * w), sg * V12 / w],
                       [sg * V21 / w, 0.5 - sg * d / (2 * w)]]) for sg in (1, -1)}
    # square roots of V21*/|V21| and V21/|V21| taken through the angle of V21
    phi = np.angle(V21) if V21 != 0 else 0.0
    left, right = np.exp(-0.5j * phi), np.exp(0.5j * phi)
    chi = {sg: np.array([left * math.sqrt(max(0.5 + sg * d / (2 * w), 0.0)),
                         sg * right * math.sqrt(max(0.5 - sg * d / (2 * w), 0.0))]) for sg in (1, -1)}
    adj = {sg: np.array([[(d + sg * w) / 2, V12], [V21, (-d + sg * w) / 2]]) for sg in (1, -1)}
    return TwoLevelReference(lam[1], lam[-1], w, P[1], P[-1], chi[1], chi[-1], adj[1], adj[-1])


def cross_determinant(u, v) -> float:
    """``max_{j,k} |u_j v_k - u_k v_j|``: zero iff ``u`` and ``v`` are parallel."""
    u = np.asarray(u)
    v = np.asarray(v)
    return float(np.abs(np.outer(u, v) - np.outer(v, u)).max())


# ---------------------------------------------------------------------------
# Dirac Hamiltonian
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiracParams:
    m: float
    p: tuple[float, float, float]

    def __post_init__(self):
        if self.m < 0:
            raise ParameterError("mass must be non-negative")
        if len(self.p) != 3:
            raise ParameterError("momentum must have three components")

    @property
    def energy(self) -> float:
        return math.sqrt(sum(x * x for x in self.p) + self.m ** 2)


def slash(p0: float, p) -> np.ndarray:
    return p0 * GAMMA0 - sum(pk * g for pk, g in zip(p, GAMMA))


def dirac_hamiltonian(params: DiracParams) -> np.ndarray:
    """``alpha . p + beta m``."""
    return sum(pk * a for pk, a in zip(params.p, ALPHA)) + params.m * BETA


def dirac_complement(params: DiracParams, lam: float) -> np.ndarray:
    """``2 lam (slash(lam, p) + m) gamma^0``: the order-two reduced complement at ``lam``."""
    return 2 * lam * (slash(lam, params.p) + params.m * np.eye(4)) @ GAMMA0


def dirac_bar(u, w) -> complex:
    """``u^dagger gamma^0 w``."""
    return complex(np.conj(u) @ GAMMA0 @ w)


@dataclass
class DiracReference:
    energy: float
    projector: np.ndarray
    normalization: float
    u: tuple[np.ndarray, np.ndarray]
    v: tuple[np.ndarray, np.ndarray]
    psi_plus: np.ndarray
    psi_minus: np.ndarray


def dirac_projector(params: DiracParams, p0: float) -> np.ndarray:
    if params.m <= 0:
        raise ParameterError("the projector (slash p + m)/2m needs m > 0")
    return (slash(p0, params.p) + params.m * np.eye(4)) / (2 * params.m)


def dirac_reference(params: DiracParams) -> DiracReference:
    """Boosted bispinors and complements at ``lam = +E`` and ``lam = -E``.

    ``u`` holds the spin-up and spin-down positive-energy bispinors built
    from rest-frame vectors e1, e2; ``v`` the negative-energy ones from e4
    and e3.  The factor ``sqrt(2m/(E+m))`` makes ``bar(u) u = 1`` and
    ``bar(v) v = -1`` with the projector normalized by ``1/2m``.
    """
    E = params.energy
    proj_u = dirac_projector(params, E)
    proj_v = dirac_projector(params, -E)
    N = math.sqrt(2 * params.m / (E + params.m))
    e = np.eye(4, dtype=complex)
    u = (N * proj_u @ e[0], N * proj_u @ e[1])
    v = (N * proj_v @ e[3], N * proj_v @ e[2])
    return DiracReference(E, proj_u, N, u, v, dirac_complement(params, E), dirac_complement(params, -E))


@dataclass(frozen=True)
class SpinorLabel:
    kind: str  # "u" or "v"
    p: tuple[float, float, float]
    spin: int  # +1 along the quantization axis, -1 against


def charge_conjugate_labels(labels: list[SpinorLabel]) -> list[SpinorLabel]:
    """Relabel negative-energy states as antiparticles: flip momentum and spin of ``v`` entries."""
    out = []
    for lab in labels:
        if lab.kind == "v":
            lab = SpinorLabel("v", tuple(-x for x in lab.p), -lab.spin)
        out.append(lab)
    return out


# ---------------------------------------------------------------------------
# golden fixtures
# ---------------------------------------------------------------------------

def encode(z) -> list:
    """Complex array to nested ``[re, im]`` pairs (row-major for matrices)."""
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0:
        return [float(z.real), float(z.imag)]
    return [encode(x) for x in z]


def decode(obj) -> np.ndarray:
    arr = np.asarray(obj, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def matrix_record(H, label: str) -> dict:
    H = np.asarray(H, dtype=complex)
    return {"n": H.shape[0], "label": label, "entries": [encode(x) for x in H.reshape(-1)]}


TWO_LEVEL_CASES = (
    TwoLevelParams(1.0, -1.0, 0.5 + 0.5j),
    TwoLevelParams(1.0, -1.0, 1j),
    TwoLevelParams(0.3, 0.3, 0.7),
    TwoLevelParams(2.0, -0.5, -1.2 + 0.1j),
)
DIRAC_CASES = (DiracParams(1.0, (0.0, 0.0, 0.0)), DiracParams(1.0, (0.0, 0.0, 1.0)),
               DiracParams(0.5, (0.3, -1.2, 0.8)))
PLANTED_CASES = ((5.0, 5.0, 7.0), (3.0, 3.0, 3.0, 8.0), (1.0, 1.0, 2.0, 2.0), (-1.0, -1.0, 2.0, 2.0, 2.0, 4.0))


def two_level_fixture(params: TwoLevelParams) -> dict:
    ref = two_level_reference(params)
    H = two_level_hamiltonian(params)
    return {"params": {"V11": params.V11, "V22": params.V22, "V12": encode(params.V12)},
            "matrix": matrix_record(H, f"two-level V11={params.V11} V22={params.V22}"),
            "lam_plus": ref.lam_plus, "lam_minus": ref.lam_minus, "omega": ref.omega,
            "chi_plus": encode(ref.chi_plus), "chi_minus": encode(ref.chi_minus),
            "adj_plus": encode(ref.adj_plus), "adj_minus": encode(ref.adj_minus)}


def dirac_fixture(params: DiracParams) -> dict:
    ref = dirac_reference(params)
    return {"params": {"m": params.m, "p": list(params.p)},
            "matrix": matrix_record(dirac_hamiltonian(params), f"dirac m={params.m} p={list(params.p)}"),
            "energy": ref.energy, "u": [encode(x) for x in ref.u], "v": [encode(x) for x in ref.v],
            "psi_plus": encode(ref.psi_plus), "psi_minus": encode(ref.psi_minus)}


def planted_fixtures(seed: int = DEFAULT_SEED) -> list[dict]:
    rng = np.random.default_rng(seed)
    out = []
    for eigs in PLANTED_CASES:
        H, _ = planted_hermitian(eigs, rng)
        out.append({"eigenvalues": list(eigs), "matrix": matrix_record(H, f"planted {list(eigs)}")})
    return out


def golden_fixtures(seed: int = DEFAULT_SEED) -> dict[str, object]:
    return {"two_level": [two_level_fixture(p) for p in TWO_LEVEL_CASES],
            "dirac": [dirac_fixture(p) for p in DIRAC_CASES],
            "planted": {"seed": seed, "cases": planted_fixtures(seed)}}


def write_fixtures(directory: Path = DATA_DIR, seed: int = DEFAULT_SEED) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, payload in golden_fixtures(seed).items():
        path = directory / f"{name}.json"
        path.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")
        paths.append(path)
    return paths


def load_fixture(name: str, directory: Path = DATA_DIR):
    return json.loads((Path(directory) / f"{name}.json").read_text())
