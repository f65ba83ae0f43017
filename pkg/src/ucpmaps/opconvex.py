"""Operational convex combinations and two-term decomposition witnesses.

An operational convex combination replaces the scalar weights of an ordinary
convex combination by an FOP {v_i}: ``sum_i Ad v_i o phi_i``. A
:class:`DecompositionWitness` ``(a, phi1, b, phi2)`` claims
``target = Ad a o phi1 + Ad b o phi2`` with {a, b} an FOP and both inner maps
ucp; it *trivialises* when aa* = lam 1, bb* = (1 - lam) 1 and both halves
are proportional to the target. A valid witness that does not trivialise
shows its target is not an operational extreme point of UCP(M_n).
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .channels import KrausMap, ad, add, compose, map_distance, scale, unital_defect
from .matrixcore import DEFAULT_TOL, DimensionError, as_square, dagger
from .partitions import OperationalPartition, PartitionError, verify_fop


@dataclass(frozen=True)
class DecompositionWitness:
    a: np.ndarray
    phi1: KrausMap
    b: np.ndarray
    phi2: KrausMap

    def __post_init__(self):
        object.__setattr__(self, "a", as_square(self.a))
        object.__setattr__(self, "b", as_square(self.b))
        dims = {self.a.shape[0], self.b.shape[0], self.phi1.dim, self.phi2.dim}
        if len(dims) != 1:
            raise DimensionError("witness components act on different M_n")

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    def combination(self) -> KrausMap:
        """Ad a o phi1 + Ad b o phi2."""
        return add(compose(ad(self.a), self.phi1), compose(ad(self.b), self.phi2))


@dataclass
class WitnessVerdict:
    valid: bool
    trivializing: bool
    lam: Optional[float]
    residuals: dict = field(default_factory=dict)

    @property
    def refutes(self) -> bool:
        return self.valid and not self.trivializing

    def scalar_coefficients(self, tol: float = DEFAULT_TOL) -> bool:
        """True when aa* was found to be a multiple of the identity."""
        return self.residuals.get("scalar_aa", np.inf) <= tol


def op_convex_combine(coeffs, maps: Sequence[KrausMap], tol: float = DEFAULT_TOL) -> KrausMap:
    """sum_i Ad v_i o maps[i] for an FOP ``coeffs``.

    The Kraus list is {v_i w : w in maps[i].kraus}, concatenated in order.
    """
    coeffs = coeffs if isinstance(coeffs, OperationalPartition) else OperationalPartition.of(coeffs)
    if coeffs.size != len(maps):
        raise ValueError(f"{coeffs.size} coefficients for {len(maps)} maps")
    if any(m.dim != coeffs.dim for m in maps):
        raise DimensionError("coefficients and maps act on different M_n")
    report = verify_fop(coeffs, tol)
    if not report.passed:
        raise PartitionError(f"coefficients are not an FOP (defect {report.defect:.3e})")
    return add(*(compose(ad(v), phi) for v, phi in zip(coeffs.members, maps)))


def validate_witness(
    target: KrausMap,
    w: DecompositionWitness,
    tol: float = DEFAULT_TOL,
    trivial_tol: Optional[float] = None,
) -> WitnessVerdict:
    """Check a two-term decomposition of ``target`` and whether it trivialises.

    ``tol`` governs validity, ``trivial_tol`` (default ``tol``) the scalar and
    proportionality tests. lam is estimated as tr(aa*)/n and reported
    whenever it lies strictly inside (0, 1).
    """
    if target.dim != w.dim:
        raise DimensionError("target and witness act on different M_n")
    trivial_tol = tol if trivial_tol is None else trivial_tol
    n = w.dim
    eye = np.eye(n)

    fop = verify_fop([w.a, w.b], tol)
    res = {
        "fop_defect": fop.defect,
        "phi1_unital": unital_defect(w.phi1),
        "phi2_unital": unital_defect(w.phi2),
    }
    left = compose(ad(w.a), w.phi1)
    right = compose(ad(w.b), w.phi2)
    res["reconstruction"] = map_distance(add(left, right), target)
    valid = (
        fop.passed
        and res["phi1_unital"] <= tol
        and res["phi2_unital"] <= tol
        and res["reconstruction"] <= tol
    )

    aa = w.a @ dagger(w.a)
    bb = w.b @ dagger(w.b)
    lam = float(np.trace(aa).real) / n
    if not 0.0 < lam < 1.0:
        return WitnessVerdict(valid, False, None, res)
    res["scalar_aa"] = float(np.linalg.norm(aa - lam * eye))
    res["scalar_bb"] = float(np.linalg.norm(bb - (1.0 - lam) * eye))
    res["proportionality"] = map_distance(scale(left, 1.0 / lam), target)
    res["proportionality_b"] = map_distance(scale(right, 1.0 / (1.0 - lam)), target)
    trivializing = valid and all(
        res[k] <= trivial_tol for k in ("scalar_aa", "scalar_bb", "proportionality", "proportionality_b")
    )
    return WitnessVerdict(valid, trivializing, lam, res)


def scalar_witness(lam: float, phi1: KrausMap, phi2: KrausMap) -> DecompositionWitness:
    """The witness (sqrt(lam) 1, phi1, sqrt(1 - lam) 1, phi2).

    It decomposes the ordinary convex combination lam phi1 + (1 - lam) phi2.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lambda must lie strictly between 0 and 1, got {lam}")
    n = phi1.dim
    eye = np.eye(n, dtype=np.complex128)
    return DecompositionWitness(np.sqrt(lam) * eye, phi1, np.sqrt(1.0 - lam) * eye, phi2)

