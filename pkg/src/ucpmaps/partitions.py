"""Finite partitions of unity in M_n.

Three notions are checked here:

* FOP (finite operational partition of unity): nonzero v_i with
  sum v_i v_i* = 1. These are the coefficients of operational convex
  combinations.
* Lindblad's operational partition: sum x_i* x_i = 1.
* Connes-Stormer partition: PSD x_i with sum x_i = 1.

Partitions are never reordered or rescaled; member position is meaningful
when they serve as witness coefficients. Any number of members is accepted,
although a canonical Kraus list never has more than n^2 of them.
"""

from dataclasses import dataclass, field
from typing import Iterable, List, Tuple

import numpy as np

from .matrixcore import (
    DEFAULT_TOL,
    DimensionError,
    as_square,
    dagger,
    hermiticity_defect,
    is_psd,
    is_unitary,
)

FOP = "FOP"
LINDBLAD = "Lindblad"
CONNES_STORMER = "ConnesStormer"


class PartitionError(ValueError):
    """A set of coefficients that was required to be an FOP is not one."""


@dataclass(frozen=True)
class OperationalPartition:
    members: Tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = tuple(as_square(m) for m in self.members)
        if not mats:
            raise ValueError("a partition needs at least one member")
        n = mats[0].shape[0]
        for k, m in enumerate(mats):
            if m.shape != (n, n):
                raise DimensionError(f"member {k} has shape {m.shape}, expected {(n, n)}")
        object.__setattr__(self, "members", mats)

    @classmethod
    def of(cls, members: Iterable) -> "OperationalPartition":
        return cls(tuple(members))

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def dim(self) -> int:
        return self.members[0].shape[0]

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)


@dataclass
class PartitionReport:
    kind: str
    passed: bool
    defect: float
    member_violations: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed


def _as_partition(v) -> OperationalPartition:
    return v if isinstance(v, OperationalPartition) else OperationalPartition.of(v)


def _zero_members(v: OperationalPartition, tol: float) -> List[str]:
    return [
        f"member {k} is zero (||v||_F = {np.linalg.norm(m):.3e})"
        for k, m in enumerate(v.members)
        if np.linalg.norm(m) <= tol
    ]


def fop_defect(members) -> float:
    """||sum v v* - 1||_F for a list of square matrices."""
    v = _as_partition(members)
    total = sum(m @ dagger(m) for m in v.members)
    return float(np.linalg.norm(total - np.eye(v.dim)))


def verify_fop(v, tol: float = DEFAULT_TOL) -> PartitionReport:
    """Check sum v_i v_i* = 1 with every member nonzero."""
    v = _as_partition(v)
    defect = fop_defect(v)
    violations = _zero_members(v, tol)
    return PartitionReport(FOP, defect <= tol and not violations, defect, violations)


def verify_lindblad(v, tol: float = DEFAULT_TOL) -> PartitionReport:
    """Check sum v_i* v_i = 1."""
    v = _as_partition(v)
    total = sum(dagger(m) @ m for m in v.members)
    defect = float(np.linalg.norm(total - np.eye(v.dim)))
    return PartitionReport(LINDBLAD, defect <= tol, defect)


def verify_cs(v, tol: float = DEFAULT_TOL) -> PartitionReport:
    """Check that every member is PSD and the members sum to 1."""
    v = _as_partition(v)
    violations = []
    for k, m in enumerate(v.members):
        herm = hermiticity_defect(m)
        if herm > tol * max(1.0, float(np.linalg.norm(m))):
            violations.append(f"member {k} is not Hermitian (defect {herm:.3e})")
            continue
        report = is_psd(m, tol)
        if not report.is_psd:
            violations.append(f"member {k} is not PSD (min eigenvalue {report.min_eigenvalue:.3e})")
    defect = float(np.linalg.norm(sum(v.members) - np.eye(v.dim)))
    return PartitionReport(CONNES_STORMER, defect <= tol and not violations, defect, violations)


def bridge_coefficients(u, v, w, lam: float, tol: float = DEFAULT_TOL) -> OperationalPartition:
    """Coefficients {a, b} that glue Ad v and Ad w into Ad u.

    a = sqrt(lam) u v*, b = sqrt(1 - lam) u w*, for unitaries u, v, w and
    lam strictly inside (0, 1).
    """
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lambda must lie strictly between 0 and 1, got {lam}")
    u, v, w = as_square(u), as_square(v), as_square(w)
    if not (u.shape == v.shape == w.shape):
        raise DimensionError("u, v, w must have the same shape")
    for name, x in (("u", u), ("v", v), ("w", w)):
        if not is_unitary(x, tol):
            raise ValueError(f"{name} is not unitary")
    a = np.sqrt(lam) * (u @ dagger(v))
    b = np.sqrt(1.0 - lam) * (u @ dagger(w))
    return OperationalPartition((a, b))
