from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any


@dataclass
class IdentityCheckResult:
    """Outcome of comparing two independently evaluated sides of an identity.

    ``max_rel_dev`` is ``max_abs_dev`` divided by the reference magnitude
    used for the verdict; for exact integer identities both deviations are
    integers and ``tol`` is 0.
    """

    name: str
    max_abs_dev: float
    max_rel_dev: float
    tol: float
    passed: bool
    detail: dict[str, Any] = field(default_factory=dict)

    def row(self) -> dict[str, Any]:
        return {"name": self.name, "max_dev": float(self.max_rel_dev),
                "tol": float(self.tol), "pass": bool(self.passed)}

    def as_dict(self) -> dict[str, Any]:
        return asdict(self)

    def __str__(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict} {self.name}: dev={self.max_rel_dev:.3e} tol={self.tol:.1e}"


def compare(name: str, lhs, rhs, tol: float, floor: float = 0.0, **detail) -> IdentityCheckResult:
    """Compare two arrays (or scalars) with a relative tolerance.

    The reference magnitude is the larger of the two sides' max-abs entries
    and ``floor``; pass ``floor`` when either side is expected to vanish.
    """
    import numpy as np

    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    if lhs.shape != rhs.shape:
        raise ValueError(f"{name}: shape mismatch {lhs.shape} vs {rhs.shape}")
    if lhs.size == 0:
        return IdentityCheckResult(name, 0.0, 0.0, tol, True, dict(detail))
    abs_dev = float(np.max(np.abs(lhs - rhs)))
    ref = max(float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))), floor)
    rel_dev = abs_dev / ref if ref > 0 else abs_dev
    return IdentityCheckResult(name, abs_dev, rel_dev, tol, rel_dev <= tol, dict(detail))


def exact(name: str, lhs, rhs, **detail) -> IdentityCheckResult:
    """Exact comparison for integer-valued identities."""
    lhs = list(lhs)
    rhs = list(rhs)
    if len(lhs) != len(rhs):
        raise ValueError(f"{name}: length mismatch")
    dev = max((abs(a - b) for a, b in zip(lhs, rhs)), default=0)
    return IdentityCheckResult(name, dev, dev, 0, dev == 0, dict(detail))
