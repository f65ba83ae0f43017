import numpy as np
import pytest

from ucpmaps.channels import random_ucp_map
from ucpmaps.matrixcore import DimensionError, matrix_units, pauli, random_unitary
from ucpmaps.partitions import (
    OperationalPartition,
    bridge_coefficients,
    verify_cs,
    verify_fop,
    verify_lindblad,
)

SQRT2 = np.sqrt(2.0)


def e(i, j):
    return matrix_units(2, i, j)


def test_unitary_singleton_is_fop():
    u = random_unitary(3, 0)
    report = verify_fop([u])
    assert report.passed and report.defect < 1e-14
    assert verify_lindblad([u]).passed


def test_example_partition_is_fop():
    report = verify_fop([e(1, 1), e(2, 1)])
    assert report.passed and report.defect == 0.0
    assert report.kind == "FOP"


def test_fop_failure_defect():
    report = verify_fop([e(1, 1), e(1, 2)])
    assert not report.passed
    assert report.defect == pytest.approx(SQRT2, abs=1e-15)


def test_lindblad():
    assert verify_lindblad([e(1, 1), e(1, 2)]).passed
    report = verify_lindblad([e(1, 1), e(2, 1)])
    assert not report.passed
    assert report.defect == pytest.approx(SQRT2, abs=1e-15)


def test_connes_stormer():
    assert verify_cs([0.5 * np.eye(2), 0.5 * np.eye(2)]).passed
    assert verify_cs([e(1, 1), e(2, 2)]).passed
    bad = verify_cs([e(1, 2), e(2, 1)])
    assert not bad.passed and len(bad.member_violations) == 2
    neg = verify_cs([np.diag([1.0, -1.0]), np.diag([0.0, 2.0])])
    assert not neg.passed and "not PSD" in neg.member_violations[0]


def test_fop_and_cs_agree_and_disagree():
    assert verify_fop([e(1, 1), e(2, 2)]).passed and verify_cs([e(1, 1), e(2, 2)]).passed
    assert verify_fop([e(1, 1), e(2, 1)]).passed and not verify_cs([e(1, 1), e(2, 1)]).passed


def test_zero_member_rejected():
    report = verify_fop([np.eye(2), np.zeros((2, 2))])
    assert report.defect == 0.0
    assert not report.passed and report.member_violations


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        OperationalPartition.of([np.eye(2), np.eye(3)])
    with pytest.raises(ValueError):
        OperationalPartition.of([])


def test_members_kept_in_order():
    p = OperationalPartition.of([e(2, 1), e(1, 1)])
    np.testing.assert_array_equal(p.members[0], e(2, 1))
    assert p.size == 2 and p.dim == 2


def test_bridge_pauli_example():
    x, z = pauli("x"), pauli("z")
    a, b = bridge_coefficients(np.eye(2), x, z, 0.5).members
    np.testing.assert_allclose(a, x / SQRT2, atol=1e-15)
    np.testing.assert_allclose(b, z / SQRT2, atol=1e-15)
    np.testing.assert_allclose(a @ a.conj().T + b @ b.conj().T, np.eye(2), atol=1e-15)


def test_bridge_equal_unitaries():
    u = random_unitary(3, 9)
    a, b = bridge_coefficients(u, u, u, 0.5).members
    np.testing.assert_allclose(a, np.eye(3) / SQRT2, atol=1e-14)
    np.testing.assert_allclose(b, np.eye(3) / SQRT2, atol=1e-14)


@pytest.mark.parametrize("lam", [0.0, 1.0, -0.1, 1.5])
def test_bridge_lambda_bounds(lam):
    with pytest.raises(ValueError):
        bridge_coefficients(np.eye(2), np.eye(2), np.eye(2), lam)


def test_bridge_rejects_non_unitary():
    with pytest.raises(ValueError):
        bridge_coefficients(np.eye(2), 2 * np.eye(2), np.eye(2), 0.5)


def test_bridge_always_fop():
    rng = np.random.default_rng(1)
    for s in range(100):
        n = (2, 3, 4)[s % 3]
        u, v, w = (random_unitary(n, 3 * s + k) for k in range(3))
        lam = rng.uniform(1e-3, 1 - 1e-3)
        report = verify_fop(bridge_coefficients(u, v, w, lam))
        assert report.passed and report.defect <= 1e-10


def test_scaling_a_member_breaks_fop():
    rng = np.random.default_rng(2)
    for _ in range(20):
        ops = list(random_ucp_map(3, 3, rng).kraus)
        assert verify_fop(ops).passed
        k = rng.integers(len(ops))
        c = rng.choice([0.5, 1.3, 2.0]) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        ops[k] = c * ops[k]
        report = verify_fop(ops)
        assert report.defect > 1e-6 and not report.passed
