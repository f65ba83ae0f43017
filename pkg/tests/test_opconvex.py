import numpy as np
import pytest

from ucpmaps.channels import (
    KrausMap,
    ad,
    apply,
    convex_mix,
    identity_map,
    map_distance,
    random_ucp_map,
    unital_defect,
)
from ucpmaps.matrixcore import DEFAULT_TOL, DimensionError, matrix_units, pauli, random_unitary
from ucpmaps.opconvex import (
    DecompositionWitness,
    op_convex_combine,
    scalar_witness,
    validate_witness,
)
from ucpmaps.partitions import PartitionError, bridge_coefficients


def e(i, j):
    return matrix_units(2, i, j)


@pytest.fixture
def phi_v():
    return KrausMap.of([e(1, 1), e(2, 1)])


@pytest.fixture
def example_36_witness():
    return DecompositionWitness(e(1, 1), identity_map(2), e(2, 2), ad(e(1, 2) + e(2, 1)))


def random_fop(n, k, rng):
    return random_ucp_map(n, k, rng).kraus


def test_combine_identity_singleton():
    rng = np.random.default_rng(0)
    phi = random_ucp_map(3, 2, rng)
    assert map_distance(op_convex_combine([np.eye(3)], [phi]), phi) <= 1e-14


def test_combine_bridge_gives_automorphism():
    u, v, w = (random_unitary(3, s) for s in (1, 2, 3))
    combo = op_convex_combine(bridge_coefficients(u, v, w, 0.3), [ad(v), ad(w)])
    assert map_distance(combo, ad(u)) <= 1e-9


def test_combine_scalar_coefficients_is_ordinary_convexity():
    rng = np.random.default_rng(1)
    p1, p2 = random_ucp_map(2, 2, rng), random_ucp_map(2, 3, rng)
    lam = 0.35
    combo = op_convex_combine([np.sqrt(lam) * np.eye(2), np.sqrt(1 - lam) * np.eye(2)], [p1, p2])
    assert map_distance(combo, convex_mix([lam, 1 - lam], [p1, p2])) <= 1e-14


def test_combine_errors():
    with pytest.raises(PartitionError):
        op_convex_combine([e(1, 1), e(1, 2)], [identity_map(2), identity_map(2)])
    with pytest.raises(ValueError):
        op_convex_combine([np.eye(2)], [identity_map(2), identity_map(2)])
    with pytest.raises(DimensionError):
        op_convex_combine([np.eye(2)], [identity_map(3)])


def test_combination_stays_ucp():
    rng = np.random.default_rng(2)
    for _ in range(50):
        n, k = int(rng.integers(2, 5)), int(rng.integers(1, 5))
        coeffs = random_fop(n, k, rng)
        maps = [random_ucp_map(n, int(rng.integers(1, 4)), rng) for _ in range(k)]
        combo = op_convex_combine(coeffs, maps)
        assert unital_defect(combo) <= k * DEFAULT_TOL


def test_combination_defining_identity_on_matrix_units():
    rng = np.random.default_rng(3)
    n = 3
    coeffs = random_fop(n, 3, rng)
    maps = [random_ucp_map(n, 2, rng) for _ in range(3)]
    combo = op_convex_combine(coeffs, maps)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            x = matrix_units(n, i, j)
            expected = sum(v @ apply(phi, x) @ v.conj().T for v, phi in zip(coeffs, maps))
            np.testing.assert_allclose(apply(combo, x), expected, atol=1e-14)


def test_example_36_witness(phi_v, example_36_witness):
    verdict = validate_witness(phi_v, example_36_witness)
    assert verdict.valid and not verdict.trivializing
    assert verdict.residuals["reconstruction"] <= 1e-12
    assert verdict.lam == pytest.approx(0.5)
    # aa* = e_11 is far from (1/2) 1
    assert verdict.residuals["scalar_aa"] == pytest.approx(np.sqrt(0.5))
    assert verdict.refutes


def test_bridge_witness_trivializes():
    u, v, w = (random_unitary(4, s) for s in (4, 5, 6))
    lam = 0.62
    a, b = bridge_coefficients(u, v, w, lam).members
    verdict = validate_witness(ad(u), DecompositionWitness(a, ad(v), b, ad(w)))
    assert verdict.valid and verdict.trivializing
    assert verdict.lam == pytest.approx(lam, abs=1e-12)


def test_shrunk_b_is_invalid():
    n, lam = 3, 0.4
    u, v, w = (random_unitary(n, s) for s in (7, 8, 9))
    a, b = bridge_coefficients(u, v, w, lam).members
    verdict = validate_witness(ad(u), DecompositionWitness(a, ad(v), 0.9 * b, ad(w)))
    assert not verdict.valid and not verdict.trivializing
    # aa* + 0.81 bb* - 1 = -0.19 (1 - lam) 1
    assert verdict.residuals["fop_defect"] == pytest.approx(0.19 * (1 - lam) * np.sqrt(n))


def test_non_unital_inner_map_is_invalid(phi_v):
    w = DecompositionWitness(e(1, 1), KrausMap.of([0.5 * np.eye(2)]), e(2, 2), identity_map(2))
    verdict = validate_witness(phi_v, w)
    assert not verdict.valid and verdict.residuals["phi1_unital"] > 0.5


def test_scalar_witness_same_map():
    rng = np.random.default_rng(4)
    phi = random_ucp_map(3, 2, rng)
    verdict = validate_witness(phi, scalar_witness(0.5, phi, phi))
    assert verdict.valid and verdict.trivializing


def test_scalar_witness_convex_split():
    x = pauli("x")
    target = convex_mix([0.5, 0.5], [identity_map(2), ad(x)])
    verdict = validate_witness(target, scalar_witness(0.5, identity_map(2), ad(x)))
    assert verdict.valid and not verdict.trivializing
    assert verdict.residuals["scalar_aa"] <= 1e-15
    # lam^-1 Ad a o id = id, whose Choi differs from the average by half of ||C_id - C_X||
    assert verdict.residuals["proportionality"] == pytest.approx(np.sqrt(2))
    assert verdict.scalar_coefficients()


@pytest.mark.parametrize("lam", [0.0, 1.0, 2.0])
def test_scalar_witness_bounds(lam):
    with pytest.raises(ValueError):
        scalar_witness(lam, identity_map(2), identity_map(2))


def test_witness_dimension_check():
    with pytest.raises(DimensionError):
        DecompositionWitness(np.eye(2), identity_map(3), np.eye(2), identity_map(2))


def test_trivializing_implies_valid_on_random_witnesses():
    rng = np.random.default_rng(5)
    seen_trivial = 0
    for _ in range(100):
        n = int(rng.integers(2, 4))
        target = random_ucp_map(n, int(rng.integers(1, 3)), rng)
        lam = float(rng.uniform(0.1, 0.9))
        if rng.random() < 0.5:
            w = scalar_witness(lam, target, target)
        else:
            a, b = random_fop(n, 2, rng)
            w = DecompositionWitness(a, random_ucp_map(n, 1, rng), b, target)
        v = validate_witness(target, w)
        seen_trivial += v.trivializing
        assert v.valid or not v.trivializing
    assert seen_trivial > 0
