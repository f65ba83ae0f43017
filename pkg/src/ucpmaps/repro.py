"""Scripted end-to-end scenarios with stepwise pass/fail reports.

Each scenario is deterministic in ``(seed, tol)``. The scenario ids are
``example-3.3``, ``example-3.6``, ``theorem-3.7`` and ``remark-3.5``.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List

import numpy as np

from .channels import KrausMap, ad, apply, convex_mix, identity_map, map_distance, random_ucp_map
from .extremality import (
    NOT_USUAL_EXTREME,
    USUAL_EXTREME,
    certify_thm37,
    search_refuting_witness,
    usual_extreme_check,
)
from .matrixcore import DEFAULT_TOL, dagger, haar_unitary, matrix_units
from .opconvex import DecompositionWitness, op_convex_combine, scalar_witness, validate_witness
from .partitions import bridge_coefficients, verify_fop


@dataclass
class ReproStep:
    description: str
    residual: float
    passed: bool


@dataclass
class ReproReport:
    scenario: str
    seed: int
    tol: float
    steps: List[ReproStep] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(s.passed for s in self.steps)

    def check(self, description: str, residual: float, passed) -> None:
        self.steps.append(ReproStep(description, float(residual), bool(passed)))

    def render(self) -> str:
        lines = [f"scenario {self.scenario}  (seed={self.seed}, tol={self.tol:g})"]
        for s in self.steps:
            mark = "PASS" if s.passed else "FAIL"
            lines.append(f"  [{mark}] {s.description}  (residual {s.residual:.3e})")
        lines.append(f"overall: {'PASS' if self.overall else 'FAIL'}")
        return "\n".join(lines)


def phi_v() -> KrausMap:
    """Ad e_11 + Ad e_21 on M_2: extreme, but not operationally extreme."""
    return KrausMap.of([matrix_units(2, 1, 1), matrix_units(2, 2, 1)])


def example_36_witness() -> DecompositionWitness:
    """(e_11, id, e_22, Ad(e_12 + e_21)), a decomposition of phi_v()."""
    e = lambda i, j: matrix_units(2, i, j)
    return DecompositionWitness(e(1, 1), identity_map(2), e(2, 2), ad(e(1, 2) + e(2, 1)))


def bridge_draws(count: int, seed: int, dims=(2, 3, 4)):
    """Seeded (n, u, v, w, lam) tuples for gluing automorphisms."""
    rng = np.random.default_rng(seed)
    for k in range(count):
        n = dims[k % len(dims)]
        u, v, w = (haar_unitary(n, rng) for _ in range(3))
        lam = float(rng.uniform(0.01, 0.99))
        yield n, u, v, w, lam


def example_33(seed: int = 0, tol: float = DEFAULT_TOL, count: int = 100) -> ReproReport:
    report = ReproReport("example-3.3", seed, tol)
    fop_worst = dist_worst = 0.0
    trivial = True
    for _, u, v, w, lam in bridge_draws(count, seed):
        coeffs = bridge_coefficients(u, v, w, lam, tol)
        fop_worst = max(fop_worst, verify_fop(coeffs, tol).defect)
        combo = op_convex_combine(coeffs, [ad(v), ad(w)], tol)
        dist_worst = max(dist_worst, map_distance(combo, ad(u)))
        a, b = coeffs.members
        verdict = validate_witness(ad(u), DecompositionWitness(a, ad(v), b, ad(w)), tol)
        trivial &= verdict.valid and verdict.trivializing
    report.check(f"{count} bridge coefficient pairs are FOPs", fop_worst, fop_worst <= tol)
    report.check("combination of Ad v, Ad w equals Ad u (max map distance)", dist_worst, dist_worst <= 1e-9)
    report.check("every bridge witness is valid and trivializing", 0.0, trivial)
    return report


def example_36(seed: int = 0, tol: float = DEFAULT_TOL, budget: int = 500) -> ReproReport:
    report = ReproReport("example-3.6", seed, tol)
    phi = phi_v()
    e = lambda i, j: matrix_units(2, i, j)
    expected = {(1, 1): np.eye(2), (1, 2): np.zeros((2, 2)), (2, 1): np.zeros((2, 2)), (2, 2): np.zeros((2, 2))}
    for (i, j), target in expected.items():
        r = float(np.abs(apply(phi, e(i, j)) - target).max())
        report.check(f"Phi_V(e_{i}{j}) exact", r, r == 0.0)
    fop = verify_fop([e(1, 1), e(2, 1)], tol)
    report.check("{e_11, e_21} is an FOP", fop.defect, fop.passed)
    cert = usual_extreme_check(phi, tol)
    report.check("Phi_V is extreme in UCP(M_2)", cert.residuals["min_singular_value"], cert.kind == USUAL_EXTREME)
    verdict = validate_witness(phi, example_36_witness(), tol)
    report.check("witness (e_11, id, e_22, Ad(e_12+e_21)) is valid", verdict.residuals["reconstruction"],
                 verdict.valid and verdict.residuals["reconstruction"] <= 1e-12)
    report.check("that witness is not trivializing", verdict.residuals.get("scalar_aa", np.inf),
                 not verdict.trivializing)
    found = search_refuting_witness(phi, budget, seed, tol)
    report.check(f"search finds a refuting witness (budget {budget})", float(found.trials_used), found.found)
    return report


def theorem_37(seed: int = 0, tol: float = DEFAULT_TOL, count: int = 100) -> ReproReport:
    report = ReproReport("theorem-3.7", seed, tol)
    worst = lam_err = phi1_err = 0.0
    for _, u, v, w, lam in bridge_draws(count, seed):
        a, b = bridge_coefficients(u, v, w, lam, tol).members
        cert = certify_thm37(ad(u), DecompositionWitness(a, ad(v), b, ad(w)), tol)
        worst = max(worst, max(cert.residuals.values()))
        lam_err = max(lam_err, abs(cert.evidence["lambda"] - lam))
        phi1_err = max(phi1_err, map_distance(ad(dagger(cert.evidence["u_a"]) @ cert.evidence["u"]), ad(v)))
    report.check(f"{count} decompositions certified (max residual)", worst, worst <= 1e-8)
    report.check("recovered lambda matches input", lam_err, lam_err <= 1e-10)
    report.check("recovered phi1 equals Ad v", phi1_err, phi1_err <= 1e-8)
    return report


def remark_35(seed: int = 0, tol: float = DEFAULT_TOL, budget: int = 60) -> ReproReport:
    """Trivializing implies valid, and scalar refutations imply non-extremality."""
    report = ReproReport("remark-3.5", seed, tol)
    rng = np.random.default_rng(seed)
    verdicts = []
    x = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    mixes = [convex_mix([0.5, 0.5], [identity_map(2), ad(x)])]
    for n in (2, 3):
        p1, p2 = random_ucp_map(n, 2, rng), random_ucp_map(n, 1, rng)
        mixes.append(convex_mix([0.3, 0.7], [p1, p2]))
    subjects = mixes + [phi_v(), ad(haar_unitary(3, rng))]
    for target in subjects:
        for lam in (0.25, 0.5):
            w = scalar_witness(lam, target, target)
            verdicts.append((target, validate_witness(target, w, tol)))
        found = search_refuting_witness(target, budget, seed, tol)
        if found.found:
            verdicts.append((target, found.verdict))
    # the plain convex split of the first mixture
    split = scalar_witness(0.5, identity_map(2), ad(x))
    verdicts.append((mixes[0], validate_witness(mixes[0], split, tol)))
    scalar_refuted = [t for t, v in verdicts if v.refutes and v.scalar_coefficients(tol)]
    bad = sum(1 for _, v in verdicts if v.trivializing and not v.valid)
    report.check(f"trivializing => valid over {len(verdicts)} witnesses", float(bad), bad == 0)
    kinds = [usual_extreme_check(t, tol).kind for t in scalar_refuted]
    ok = all(k == NOT_USUAL_EXTREME for k in kinds)
    report.check(f"{len(kinds)} scalar-coefficient refutations hit non-extreme maps", 0.0, ok and len(kinds) > 0)
    return report


SCENARIOS: Dict[str, Callable[..., ReproReport]] = {
    "example-3.3": example_33,
    "example-3.6": example_36,
    "theorem-3.7": theorem_37,
    "remark-3.5": remark_35,
}


def run_repro_suite(scenario: str, seed: int = 0, tol: float = DEFAULT_TOL) -> ReproReport:
    try:
        fn = SCENARIOS[scenario]
    except KeyError:
        raise ValueError(f"unknown scenario {scenario!r}; choose from {sorted(SCENARIOS)}") from None
    return fn(seed=seed, tol=tol)
