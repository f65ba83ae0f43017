"""Dense complex-matrix substrate.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. Every
function here is pure; nothing mutates its inputs.

Tolerances follow one policy: a global default ``DEFAULT_TOL`` (overridable
through the ``UCPMAPS_TOL`` environment variable or per call), applied
relative to ``max(1, norm)`` of whatever is being tested.
"""

import os
from typing import NamedTuple

import numpy as np

DEFAULT_TOL = float(os.environ.get("UCPMAPS_TOL", "1e-9"))

# a component smaller than this fraction of the largest one counts as zero
# when picking the "first nonzero" entry for phase fixing
_PHASE_CUTOFF = 1e-8

# eigenvalues closer than this (relative to the spectral radius) share one
# canonical eigenbasis; kept well below DEFAULT_TOL so that re-basing a
# cluster moves the reconstruction by at most ~1e-12 * radius
CLUSTER_RTOL = 1e-12


class DimensionError(ValueError):
    """Shapes of the operands do not fit together."""


class NotHermitianError(ValueError):
    """Raised for input that should be Hermitian but is not.

    The measured defect ``||m - m*||_F`` is kept on the exception.
    """

    def __init__(self, defect: float):
        super().__init__(f"matrix is not Hermitian (defect ||m - m*||_F = {defect:.3e})")
        self.defect = defect


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a finite 2-D complex128 array."""
    arr = np.array(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def as_square(m) -> np.ndarray:
    arr = as_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def matrix_units(n: int, i: int, j: int) -> np.ndarray:
    """Matrix unit e_ij of M_n, with 1-based indices."""
    if n < 1:
        raise ValueError("n must be positive")
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"matrix unit indices ({i}, {j}) out of range for n={n}")
    e = np.zeros((n, n), dtype=np.complex128)
    e[i - 1, j - 1] = 1.0
    return e


def pauli(label: str) -> np.ndarray:
    """Pauli matrix by label: one of 'i', 'x', 'y', 'z' (case-insensitive)."""
    mats = {
        "i": [[1, 0], [0, 1]],
        "x": [[0, 1], [1, 0]],
        "y": [[0, -1j], [1j, 0]],
        "z": [[1, 0], [0, -1]],
    }
    try:
        return np.array(mats[label.lower()], dtype=np.complex128)
    except KeyError:
        raise ValueError(f"unknown Pauli label {label!r}") from None


def frobenius_distance(a, b) -> float:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def kron(a, b) -> np.ndarray:
    """Kronecker product; block (i, j) of the result is ``a[i, j] * b``."""
    return np.kron(as_matrix(a), as_matrix(b))


def hermiticity_defect(m: np.ndarray) -> float:
    return float(np.linalg.norm(m - dagger(m)))


def check_hermitian(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Return ``m`` as a square array, raising NotHermitianError if needed."""
    m = as_square(m)
    defect = hermiticity_defect(m)
    if defect > tol * max(1.0, float(np.linalg.norm(m))):
        raise NotHermitianError(defect)
    return m


def fix_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first nonzero entry is real positive.

    Works on vectors and matrices alike (row-major order for matrices).
    """
    flat = vec.reshape(-1)
    mags = np.abs(flat)
    big = mags.max(initial=0.0)
    if big == 0.0:
        return vec.copy()
    k = int(np.argmax(mags > _PHASE_CUTOFF * big))
    return vec * (np.conj(flat[k]) / mags[k])


class SpectralDecomposition(NamedTuple):
    """Eigenvalues in descending order, eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        w = self.eigenvectors
        return (w * self.eigenvalues) @ dagger(w)


def _canonical_basis(block: np.ndarray) -> np.ndarray:
    # Orthonormalise the projections of e_1, e_2, ... onto span(block).
    n, d = block.shape
    proj = block @ dagger(block)
    basis = []
    for k in range(n):
        v = proj[:, k].copy()
        for _ in range(2):  # reorthogonalise once
            for b in basis:
                v -= b * np.vdot(b, v)
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            basis.append(v / norm)
            if len(basis) == d:
                break
    # the d projections span the subspace, so the loop always fills it
    return np.column_stack([fix_phase(b) for b in basis])


def hermitian_eig(m, tol: float = DEFAULT_TOL) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix with a deterministic basis.

    ``tol`` bounds the accepted Hermiticity defect. Eigenvalues come back in
    descending order. Inside each cluster of eigenvalues closer than
    ``CLUSTER_RTOL * max(1, spectral radius)`` the eigenbasis is replaced by
    the Gram-Schmidt orthonormalisation of the projected standard basis
    vectors, each phase-fixed so its first nonzero component is real
    positive.
    """
    m = check_hermitian(m, tol)
    h = 0.5 * (m + dagger(m))
    vals, vecs = np.linalg.eigh(h)
    vals, vecs = vals[::-1].copy(), vecs[:, ::-1].copy()

    radius = float(np.max(np.abs(vals)))
    gap = CLUSTER_RTOL * max(1.0, radius)
    start = 0
    n = len(vals)
    while start < n:
        stop = start + 1
        while stop < n and vals[stop - 1] - vals[stop] < gap:
            stop += 1
        if stop - start == 1:
            vecs[:, start] = fix_phase(vecs[:, start])
        else:
            vecs[:, start:stop] = _canonical_basis(vecs[:, start:stop])
        start = stop
    return SpectralDecomposition(vals, vecs)


class PsdReport(NamedTuple):
    is_psd: bool
    min_eigenvalue: float

    def __bool__(self) -> bool:
        return self.is_psd


def is_psd(m, tol: float = DEFAULT_TOL) -> PsdReport:
    """PSD test: min eigenvalue >= -tol * max(1, spectral radius)."""
    m = check_hermitian(m, tol)
    vals = np.linalg.eigvalsh(0.5 * (m + dagger(m)))
    radius = float(np.max(np.abs(vals)))
    lo = float(vals[0])
    return PsdReport(lo >= -tol * max(1.0, radius), lo)


def psd_sqrt(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Square root of a PSD matrix, negative eigenvalue noise clipped to 0."""
    m = check_hermitian(m, tol)
    vals, vecs = np.linalg.eigh(0.5 * (m + dagger(m)))
    return (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ dagger(vecs)


def is_unitary(u, tol: float = DEFAULT_TOL) -> bool:
    u = as_square(u)
    return unitarity_defect(u) <= tol * max(1.0, np.sqrt(u.shape[0]))


def unitarity_defect(u: np.ndarray) -> float:
    return float(np.linalg.norm(u @ dagger(u) - np.eye(u.shape[0])))


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary drawn from ``rng`` (QR of a Ginibre matrix)."""
    if n < 1:
        raise ValueError("n must be positive")
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_unitary(n: int, seed: int) -> np.ndarray:
    """Haar-random n x n unitary, bitwise reproducible for a given seed."""
    return haar_unitary(n, np.random.default_rng(seed))
