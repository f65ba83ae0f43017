"""Extremality of ucp maps: certificates, refutations and the Kadison-Schwarz gap.

Usual-sense extremality is decided with Choi's criterion: a ucp map with
canonical Kraus operators v_1..v_m is extreme in UCP(M_n) iff the m^2
products v_i v_j^* are linearly independent.

Operational extremality has no decision procedure. For automorphisms every
two-term decomposition is forced into scalar form, and
:func:`certify_thm37` checks that structure on a concrete witness. For other
maps :func:`search_refuting_witness` runs a seeded randomized search that can
only refute; finding nothing proves nothing.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .channels import (
    KrausMap,
    ad,
    apply,
    canonicalize,
    classify,
    compose,
    identity_map,
    map_distance,
    to_choi,
)
from .matrixcore import (
    DEFAULT_TOL,
    DimensionError,
    as_square,
    dagger,
    haar_unitary,
    psd_sqrt,
    unitarity_defect,
)
from .opconvex import DecompositionWitness, WitnessVerdict, validate_witness

USUAL_EXTREME = "usual_extreme"
NOT_USUAL_EXTREME = "not_usual_extreme"
THM37_CERTIFIED = "thm37_certified"
REFUTED_OPERATIONAL = "refuted_operational"

SEARCH_FAMILIES = ("projection", "scaled_unitary", "polar")


class PreconditionError(ValueError):
    pass


class TheoremAnomaly(RuntimeError):
    """A certification step failed on input that met every precondition.

    For exact inputs this cannot happen, so it points at numerical trouble
    or a bug. ``residuals`` holds every measured defect.
    """

    def __init__(self, message: str, residuals: dict):
        super().__init__(message)
        self.residuals = residuals


@dataclass
class ExtremalityCertificate:
    subject: KrausMap
    kind: str
    evidence: dict
    residuals: dict = field(default_factory=dict)
    seed: Optional[int] = None
    budget_used: Optional[int] = None


def _require_ucp(phi: KrausMap, tol: float) -> None:
    flags = classify(phi, tol)
    if not flags.ucp:
        raise PreconditionError(
            f"map is not ucp (cp={flags.cp}, unital defect {flags.defects['unital']:.3e})"
        )


def usual_extreme_check(phi: KrausMap, tol: float = DEFAULT_TOL) -> ExtremalityCertificate:
    _require_ucp(phi, tol)
    ops = canonicalize(phi, tol).kraus
    m, n = len(ops), phi.dim
    products = np.column_stack([(vi @ dagger(vj)).reshape(-1) for vi in ops for vj in ops])
    _, s, vh = np.linalg.svd(products)
    s_max = float(s[0]) if len(s) else 0.0
    # more products than the dimension of M_n forces a dependence
    s_min = float(s[-1]) if m * m <= n * n else 0.0
    extreme = m * m <= n * n and s_min > tol * max(1.0, s_max)
    evidence = {"size": m, "min_singular_value": s_min}
    if not extreme:
        coeffs = np.conj(vh[-1]).reshape(m, m)
        evidence["dependence"] = coeffs
        residual = float(np.linalg.norm(products @ coeffs.reshape(-1)))
    else:
        residual = 0.0
    return ExtremalityCertificate(
        phi,
        USUAL_EXTREME if extreme else NOT_USUAL_EXTREME,
        evidence,
        {"min_singular_value": s_min, "dependence_residual": residual},
    )


def certify_thm37(
    theta: KrausMap, w: DecompositionWitness, tol: float = DEFAULT_TOL
) -> ExtremalityCertificate:
    """Check that a decomposition of an automorphism has the forced shape.

    For theta = Ad u and a valid witness, recovers lam = tr(aa*)/n and the
    unitaries u_a = a / sqrt(lam), u_b = b / sqrt(1 - lam), then checks
    phi1 = Ad(u_a* u) and phi2 = Ad(u_b* u). Raises PreconditionError when
    theta is not an automorphism or the witness is invalid, and
    TheoremAnomaly when any of the checks fails.
    """
    flags = classify(theta, tol)
    if not flags.automorphism:
        raise PreconditionError(f"subject is not an automorphism (size {flags.size})")
    verdict = validate_witness(theta, w, tol)
    if not verdict.valid:
        raise PreconditionError(f"witness does not decompose the subject: {verdict.residuals}")

    n = theta.dim
    eye = np.eye(n)
    u = canonicalize(theta, tol).kraus[0]
    aa, bb = w.a @ dagger(w.a), w.b @ dagger(w.b)
    lam = float(np.trace(aa).real) / n
    res = {"reconstruction": verdict.residuals["reconstruction"], "u_unitarity": unitarity_defect(u)}
    if not 0.0 < lam < 1.0:
        raise TheoremAnomaly(f"recovered lambda {lam} outside (0, 1)", res)
    res["scalar_aa"] = float(np.linalg.norm(aa - lam * eye))
    res["scalar_bb"] = float(np.linalg.norm(bb - (1.0 - lam) * eye))
    u_a = w.a / np.sqrt(lam)
    u_b = w.b / np.sqrt(1.0 - lam)
    res["u_a_unitarity"] = unitarity_defect(u_a)
    res["u_b_unitarity"] = unitarity_defect(u_b)
    res["phi1_distance"] = map_distance(w.phi1, ad(dagger(u_a) @ u))
    res["phi2_distance"] = map_distance(w.phi2, ad(dagger(u_b) @ u))
    bad = {k: v for k, v in res.items() if v > tol}
    if bad:
        raise TheoremAnomaly(f"certification failed: {bad}", res)
    return ExtremalityCertificate(
        theta,
        THM37_CERTIFIED,
        {"lambda": lam, "u_a": u_a, "u_b": u_b, "u": u},
        res,
    )


@dataclass
class TrialRecord:
    index: int
    family: str
    inner: str
    formed: bool
    valid: bool = False
    trivializing: bool = False
    lam: Optional[float] = None
    scalar_coefficients: bool = False
    note: str = ""


@dataclass
class SearchResult:
    subject: KrausMap
    witness: Optional[DecompositionWitness]
    verdict: Optional[WitnessVerdict]
    log: List[TrialRecord]
    seed: int
    budget: int

    @property
    def found(self) -> bool:
        return self.witness is not None

    @property
    def trials_used(self) -> int:
        return len(self.log)

    def certificate(self) -> Optional[ExtremalityCertificate]:
        if self.witness is None:
            return None
        return ExtremalityCertificate(
            self.subject,
            REFUTED_OPERATIONAL,
            {"witness": self.witness, "trial": self.log[-1].index, "family": self.log[-1].family},
            dict(self.verdict.residuals),
            seed=self.seed,
            budget_used=self.trials_used,
        )


# negative Choi eigenvalues of a solved remainder beyond this (relative)
# are treated as genuine, not rounding
_ROUNDING = 1e-12


def _trial_rng(seed: int, t: int) -> np.random.Generator:
    # one independent stream per trial index: the candidate stream does not
    # depend on how trials are scheduled
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(t,)))


def _maybe_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    return np.eye(n, dtype=np.complex128) if rng.random() < 0.5 else haar_unitary(n, rng)


def _inner_map(phi: KrausMap, rng: np.random.Generator):
    r = rng.random()
    if r < 0.25:
        return "identity", identity_map(phi.dim)
    if r < 0.5:
        return "ad_random", ad(haar_unitary(phi.dim, rng))
    return "phi", phi


def _solve_second(phi: KrausMap, a: np.ndarray, phi1: KrausMap, b: np.ndarray, tol: float):
    """phi2 = Ad(b^-1) o (phi - Ad a o phi1), or None when that is not CP.

    The CP test here is at rounding level, not at ``tol``: clipping a
    remainder that is only CP up to tol would fabricate decompositions whose
    coefficients miss being scalar by ~sqrt(tol), i.e. false refutations.
    """
    n = phi.dim
    rest = to_choi(phi).matrix - to_choi(compose(ad(a), phi1)).matrix
    lift = np.kron(np.eye(n), np.linalg.inv(b))
    c = lift @ rest @ dagger(lift)
    c = 0.5 * (c + dagger(c))
    vals, vecs = np.linalg.eigh(c)
    eps = _ROUNDING * max(1.0, float(np.abs(vals).max()))
    if vals[0] < -eps:
        return None
    ops = [np.sqrt(lam) * vecs[:, k].reshape(n, n).T for k, lam in enumerate(vals) if lam > eps]
    if not ops:
        return None
    return KrausMap(tuple(ops))


def _candidate(phi: KrausMap, family: str, rng: np.random.Generator, tol: float):
    n = phi.dim
    eye = np.eye(n, dtype=np.complex128)
    if family == "projection":
        if n == 1:
            return "", None, "no proper coordinate projection in M_1"
        r = int(rng.integers(1, n))
        p = np.zeros((n, n), dtype=np.complex128)
        idx = rng.choice(n, size=r, replace=False)
        p[idx, idx] = 1.0
        u1, u2 = _maybe_unitary(n, rng), _maybe_unitary(n, rng)
        label1, psi1 = _inner_map(phi, rng)
        label2, psi2 = _inner_map(phi, rng)
        w = DecompositionWitness(
            p @ u1, compose(ad(dagger(u1)), psi1), (eye - p) @ u2, compose(ad(dagger(u2)), psi2)
        )
        return f"{label1}+{label2}", w, ""

    if family == "scaled_unitary":
        lam = float(np.clip(rng.random(), 1e-3, 1 - 1e-3))
        a = np.sqrt(lam) * haar_unitary(n, rng)
        b = np.sqrt(1.0 - lam) * haar_unitary(n, rng)
    else:
        g = haar_unitary(n, rng)
        if rng.random() < 0.5:
            spread = rng.uniform(0.05, 0.95, size=n)
        else:
            # near-scalar h: small non-scalar perturbations of a full-rank map stay CP
            centre, width = rng.uniform(0.2, 0.8), 10 ** rng.uniform(-3, -1)
            spread = centre * (1 + width * rng.uniform(-1, 1, size=n))
        h = (g * spread) @ dagger(g)
        a = h @ _maybe_unitary(n, rng)
        b = psd_sqrt(eye - h @ h) @ _maybe_unitary(n, rng)
    label, psi = _inner_map(phi, rng)
    # undo the unitary polar factor of a, so that Ad a o phi1 = Ad|a*| o psi
    left, _, right = np.linalg.svd(a)
    u1 = left @ right
    phi1 = compose(ad(dagger(u1)), psi)
    phi2 = _solve_second(phi, a, phi1, b, tol)
    if phi2 is None:
        return label, None, "remainder not completely positive"
    return label, DecompositionWitness(a, phi1, b, phi2), ""


def search_refuting_witness(
    phi: KrausMap, budget: int, seed: int, tol: float = DEFAULT_TOL
) -> SearchResult:
    """Seeded randomized search for a valid, non-trivialising witness.

    Trials cycle through three coefficient families: complementary
    coordinate projections, scaled unitaries and polar-form a = h u with the
    complement b = sqrt(1 - h^2) u' (h spread over (0, 1) or near-scalar). Inner maps come from {identity,
    Ad(random unitary), phi} composed with Ad of the coefficient's unitary
    factor undone; where b is invertible the second map is solved for. Every
    formed witness is validated and logged, and the first refuting one wins.
    Triviality is tested at sqrt(tol), see the comment below.
    """
    _require_ucp(phi, tol)
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    # a non-scalar perturbation of size d of a trivial decomposition moves the
    # validity residuals only by ~d^2, so triviality is judged at sqrt(tol)
    trivial_tol = float(np.sqrt(tol))
    log: List[TrialRecord] = []
    for t in range(budget):
        family = SEARCH_FAMILIES[t % len(SEARCH_FAMILIES)]
        label, w, note = _candidate(phi, family, _trial_rng(seed, t), tol)
        if w is None:
            log.append(TrialRecord(t, family, label, False, note=note))
            continue
        verdict = validate_witness(phi, w, tol, trivial_tol)
        log.append(
            TrialRecord(
                t,
                family,
                label,
                True,
                verdict.valid,
                verdict.trivializing,
                verdict.lam,
                verdict.scalar_coefficients(trivial_tol),
            )
        )
        if verdict.refutes:
            return SearchResult(phi, w, verdict, log, seed, budget)
    return SearchResult(phi, None, None, log, seed, budget)


def kadison_schwarz_gap(phi: KrausMap, x, tol: float = DEFAULT_TOL) -> float:
    """Minimum eigenvalue of phi(x x*) - phi(x) phi(x)*.

    Nonnegative (up to rounding) for every ucp map.
    """
    _require_ucp(phi, tol)
    x = as_square(x)
    if x.shape[0] != phi.dim:
        raise DimensionError(f"map acts on M_{phi.dim}, got a {x.shape} matrix")
    fx = apply(phi, x)
    gap = apply(phi, x @ dagger(x)) - fx @ dagger(fx)
    return float(np.linalg.eigvalsh(0.5 * (gap + dagger(gap)))[0])
