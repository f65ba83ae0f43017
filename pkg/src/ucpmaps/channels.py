"""Completely positive maps on M_n in Kraus and Choi form.

Conventions
-----------
The Choi matrix of a map ``phi`` is the n^2 x n^2 block matrix whose block
(i, j) is ``phi(e_ij)``. A Kraus operator ``v`` enters it through its column
stacking ``vec(v) = v.T.reshape(-1)``::

    C = sum_k vec(v_k) vec(v_k)^*

so an eigenvector ``x`` of C turns back into an operator as
``x.reshape(n, n).T``. These two reshapes are what makes
``kraus_from_choi(to_choi(phi))`` reproduce ``phi``.

Maps are compared only through their Choi matrices; Kraus lists are not
unique.
"""

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Tuple, Union

import numpy as np

from .matrixcore import (
    DEFAULT_TOL,
    DimensionError,
    as_square,
    dagger,
    fix_phase,
    frobenius_distance,
    haar_unitary,
    hermitian_eig,
    is_psd,
    matrix_units,
)


class NotCompletelyPositiveError(ValueError):
    def __init__(self, min_eigenvalue: float):
        super().__init__(
            f"map is not completely positive (min Choi eigenvalue {min_eigenvalue:.3e})"
        )
        self.min_eigenvalue = min_eigenvalue


@dataclass(frozen=True)
class KrausMap:
    """x -> sum_i v_i x v_i^* for the operators in ``kraus``."""

    kraus: Tuple[np.ndarray, ...]
    canonical: bool = False

    def __post_init__(self):
        ops = tuple(as_square(v) for v in self.kraus)
        if not ops:
            raise ValueError("a Kraus map needs at least one operator")
        n = ops[0].shape[0]
        if any(v.shape != (n, n) for v in ops):
            raise DimensionError("Kraus operators must all be n x n with the same n")
        object.__setattr__(self, "kraus", ops)

    @classmethod
    def of(cls, ops: Iterable) -> "KrausMap":
        return cls(tuple(ops))

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    def __call__(self, x) -> np.ndarray:
        return apply(self, x)


@dataclass(frozen=True)
class ChoiMatrix:
    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        m = as_square(self.matrix)
        if m.shape[0] != self.dim**2:
            raise DimensionError(f"Choi matrix of a map on M_{self.dim} must be {self.dim**2} square")
        object.__setattr__(self, "matrix", m)

    def block(self, i: int, j: int) -> np.ndarray:
        """phi(e_ij), 1-based."""
        n = self.dim
        return self.matrix[(i - 1) * n : i * n, (j - 1) * n : j * n]


@dataclass
class ChannelFlags:
    cp: bool
    unital: bool
    trace_preserving: bool
    automorphism: bool
    size: Union[int, None]
    defects: dict

    @property
    def ucp(self) -> bool:
        return self.cp and self.unital


MapLike = Union[KrausMap, ChoiMatrix]


def ad(v) -> KrausMap:
    """Ad v : x -> v x v*."""
    return KrausMap((v,))


def identity_map(n: int) -> KrausMap:
    return ad(np.eye(n, dtype=np.complex128))


def apply(phi: KrausMap, x) -> np.ndarray:
    x = as_square(x)
    if x.shape[0] != phi.dim:
        raise DimensionError(f"map acts on M_{phi.dim}, got a {x.shape} matrix")
    return sum(v @ x @ dagger(v) for v in phi.kraus)


def _vec(v: np.ndarray) -> np.ndarray:
    return v.T.reshape(-1)


def _unvec(x: np.ndarray, n: int) -> np.ndarray:
    return x.reshape(n, n).T


def to_choi(phi: MapLike) -> ChoiMatrix:
    if isinstance(phi, ChoiMatrix):
        return phi
    cols = np.column_stack([_vec(v) for v in phi.kraus])
    return ChoiMatrix(phi.dim, cols @ dagger(cols))


def choi_of_linear_map(f: Callable[[np.ndarray], np.ndarray], n: int) -> ChoiMatrix:
    """Choi matrix of an arbitrary linear map given as a callable on M_n."""
    rows = [np.hstack([f(matrix_units(n, i, j)) for j in range(1, n + 1)]) for i in range(1, n + 1)]
    return ChoiMatrix(n, np.vstack(rows))


def transpose_choi(n: int) -> ChoiMatrix:
    """Choi matrix of the transpose map on M_n (positive, not CP)."""
    return choi_of_linear_map(lambda x: x.T, n)


def _rank_cutoff(c: ChoiMatrix, tol: float) -> float:
    return tol * max(1.0, abs(float(np.trace(c.matrix).real)))


def _require_cp(c: ChoiMatrix, tol: float) -> None:
    report = is_psd(c.matrix, tol)
    if not report.is_psd:
        raise NotCompletelyPositiveError(report.min_eigenvalue)


def kraus_from_choi(c: ChoiMatrix, tol: float = DEFAULT_TOL) -> KrausMap:
    """Canonical Kraus form read off the spectral decomposition of C.

    Operators are sqrt(eigenvalue) * unvec(eigenvector) for eigenvalues above
    ``tol * max(1, tr C)``. They are linearly independent (the eigenvectors
    are orthogonal), sorted by descending eigenvalue, with ties broken by
    lexicographic order of the phase-fixed entries.
    """
    _require_cp(c, tol)
    n = c.dim
    spec = hermitian_eig(c.matrix, tol)
    cutoff = _rank_cutoff(c, tol)
    keep = [k for k, lam in enumerate(spec.eigenvalues) if lam > cutoff]
    if not keep:
        # zero map: one zero operator keeps the representation well-formed
        return KrausMap((np.zeros((n, n), dtype=np.complex128),), canonical=True)
    ops = []
    for k in keep:
        lam = spec.eigenvalues[k]
        ops.append((lam, fix_phase(np.sqrt(lam) * _unvec(spec.eigenvectors[:, k], n))))

    cluster_gap = tol * max(1.0, float(np.max(np.abs(spec.eigenvalues))))
    ordered = []
    i = 0
    while i < len(ops):
        j = i + 1
        while j < len(ops) and ops[j - 1][0] - ops[j][0] < cluster_gap:
            j += 1
        ordered.extend(sorted(ops[i:j], key=lambda t: _lex_key(t[1])))
        i = j
    return KrausMap(tuple(v for _, v in ordered), canonical=True)


def _lex_key(v: np.ndarray):
    flat = v.reshape(-1)
    return tuple(x for z in flat for x in (z.real, z.imag))


def canonicalize(phi: MapLike, tol: float = DEFAULT_TOL) -> KrausMap:
    return kraus_from_choi(to_choi(phi), tol)


def size(phi: MapLike, tol: float = DEFAULT_TOL) -> int:
    """Number of operators in a canonical Kraus form, i.e. the Choi rank."""
    c = to_choi(phi)
    _require_cp(c, tol)
    vals = np.linalg.eigvalsh(c.matrix)
    return int(np.sum(vals > _rank_cutoff(c, tol)))


def unital_defect(phi: MapLike) -> float:
    """||phi(1) - 1||_F."""
    if isinstance(phi, KrausMap):
        total = sum(v @ dagger(v) for v in phi.kraus)
        return float(np.linalg.norm(total - np.eye(phi.dim)))
    n = phi.dim
    total = sum(phi.block(i, i) for i in range(1, n + 1))
    return float(np.linalg.norm(total - np.eye(n)))


def trace_preserving_defect(phi: MapLike) -> float:
    """||sum v* v - 1||_F, equivalently ||[tr phi(e_ij)] - 1||_F."""
    if isinstance(phi, KrausMap):
        total = sum(dagger(v) @ v for v in phi.kraus)
        return float(np.linalg.norm(total - np.eye(phi.dim)))
    n = phi.dim
    traces = np.array([[np.trace(phi.block(i, j)) for j in range(1, n + 1)] for i in range(1, n + 1)])
    return float(np.linalg.norm(traces - np.eye(n)))


def classify(phi: MapLike, tol: float = DEFAULT_TOL) -> ChannelFlags:
    """All structural flags of a map, with the residual behind each."""
    c = to_choi(phi)
    herm = float(np.linalg.norm(c.matrix - dagger(c.matrix)))
    if herm > tol * max(1.0, float(np.linalg.norm(c.matrix))):
        # not even Hermiticity-preserving, so certainly not CP
        cp, min_eig = False, float("nan")
    else:
        cp, min_eig = is_psd(c.matrix, tol)
    unital = unital_defect(phi)
    tp = trace_preserving_defect(phi)
    m = size(c, tol) if cp else None
    is_unital = unital <= tol
    return ChannelFlags(
        cp=cp,
        unital=is_unital,
        trace_preserving=tp <= tol,
        automorphism=bool(cp and is_unital and m == 1),
        size=m,
        defects={
            "choi_min_eigenvalue": min_eig,
            "choi_hermiticity": herm,
            "unital": unital,
            "trace_preserving": tp,
        },
    )


def map_distance(phi: MapLike, psi: MapLike) -> float:
    """Frobenius distance between Choi matrices."""
    a, b = to_choi(phi), to_choi(psi)
    if a.dim != b.dim:
        raise DimensionError(f"maps act on M_{a.dim} and M_{b.dim}")
    return frobenius_distance(a.matrix, b.matrix)


def compose(outer: KrausMap, inner: KrausMap) -> KrausMap:
    """outer o inner, with Kraus list {outer_i inner_j} (not canonicalised)."""
    if outer.dim != inner.dim:
        raise DimensionError(f"maps act on M_{outer.dim} and M_{inner.dim}")
    return KrausMap(tuple(a @ b for a in outer.kraus for b in inner.kraus))


def scale(phi: KrausMap, alpha: float) -> KrausMap:
    """alpha * phi for alpha >= 0."""
    if alpha < 0:
        raise ValueError("only nonnegative multiples stay completely positive")
    r = np.sqrt(alpha)
    return KrausMap(tuple(r * v for v in phi.kraus))


def add(*maps: KrausMap) -> KrausMap:
    """Sum of CP maps (concatenated Kraus lists)."""
    if len({m.dim for m in maps}) != 1:
        raise DimensionError("maps must act on the same M_n")
    return KrausMap(tuple(v for m in maps for v in m.kraus))


def convex_mix(weights: Sequence[float], maps: Sequence[KrausMap]) -> KrausMap:
    return add(*(scale(m, w) for w, m in zip(weights, maps)))


def random_kraus_map(n: int, k: int, rng: np.random.Generator) -> KrausMap:
    """k Gaussian Kraus operators, no normalisation."""
    ops = (rng.standard_normal((k, n, n)) + 1j * rng.standard_normal((k, n, n))) / np.sqrt(2 * n)
    return KrausMap(tuple(ops))


def random_ucp_map(n: int, k: int, rng: np.random.Generator) -> KrausMap:
    """Random unital CP map with k Kraus operators.

    Gaussian operators g_i are normalised as S^{-1/2} g_i with
    S = sum g_i g_i^*, which forces sum v_i v_i^* = 1.
    """
    g = random_kraus_map(n, k, rng).kraus
    s = sum(x @ dagger(x) for x in g)
    vals, vecs = np.linalg.eigh(s)
    s_inv_half = (vecs / np.sqrt(vals)) @ dagger(vecs)
    return KrausMap(tuple(s_inv_half @ x for x in g))


def random_automorphism(n: int, rng: np.random.Generator) -> Tuple[np.ndarray, KrausMap]:
    u = haar_unitary(n, rng)
    return u, ad(u)
