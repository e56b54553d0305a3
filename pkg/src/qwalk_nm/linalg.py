"""Dense complex-matrix kernel: density operators, partial trace,
Hermitian eigendecomposition, trace-norm distance and entropy.

All functions are pure; matrices are numpy ``complex128`` arrays and are
never mutated in place.  Eigenvalue problems are delegated to LAPACK via
``numpy.linalg`` (dimensions here stay below ~512, dense is fine).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IntegrityError, ShapeError, UsageError

# Roundoff tolerances for density-operator invariants.
HERMITICITY_ATOL = 1e-10
TRACE_ATOL = 1e-10
EIGENVALUE_FLOOR = -1e-9


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product with an explicit shape check."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeError(f"matmul expects 2-d operands, got {a.ndim}-d and {b.ndim}-d")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"incompatible shapes {a.shape} x {b.shape}")
    return a @ b


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def hermitian_eigensystem(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.

    The input is symmetrized as (m + m^dag)/2 first, so callers may pass
    matrices that are Hermitian only up to roundoff.  Returns ``(w, v)``
    with ``m @ v == v @ diag(w)`` and ``v`` unitary.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    return np.linalg.eigh((m + m.conj().T) / 2.0)


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (no eigenvectors)."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    return np.linalg.eigvalsh((m + m.conj().T) / 2.0)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A density matrix over a (coin x position) product space.

    ``dims`` records the factor dimensions; a reduced state keeps a 1 in
    the slot that was traced out, so :func:`partial_trace` stays total.
    """

    matrix: np.ndarray
    dims: tuple[int, int] = (2, 1)

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=np.complex128)
        object.__setattr__(self, "matrix", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeError(f"density matrix must be square, got {m.shape}")
        if self.dims[0] * self.dims[1] != m.shape[0]:
            raise ShapeError(f"dims {self.dims} do not factor dimension {m.shape[0]}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def coin_dim(self) -> int:
        return self.dims[0]

    @property
    def position_dim(self) -> int:
        return self.dims[1]

    def as_tensor(self) -> np.ndarray:
        """View as a rank-4 tensor indexed (coin, pos, coin', pos')."""
        c, p = self.dims
        return self.matrix.reshape(c, p, c, p)

    @classmethod
    def from_pure(cls, vector: np.ndarray, dims: tuple[int, int]) -> "DensityOperator":
        """Outer product |v><v| of a normalized state vector."""
        v = np.asarray(vector, dtype=np.complex128).ravel()
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > 1e-12:
            raise IntegrityError(f"state vector norm {norm!r} is not 1")
        return cls(np.outer(v, v.conj()), dims)

    def validate(self, check_positivity: bool = True) -> None:
        """Raise IntegrityError unless Hermitian, unit trace and (optionally)
        positive semidefinite within the module tolerances."""
        m = self.matrix
        herm = np.max(np.abs(m - m.conj().T))
        if herm > HERMITICITY_ATOL:
            raise IntegrityError(f"hermiticity residual {herm:.3e} > {HERMITICITY_ATOL}")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_ATOL:
            raise IntegrityError(f"trace {tr!r} deviates from 1 beyond {TRACE_ATOL}")
        if not np.all(np.isfinite(m)):
            raise IntegrityError("non-finite entries in density matrix")
        if check_positivity:
            lo = float(np.linalg.eigvalsh((m + m.conj().T) / 2.0)[0])
            if lo < EIGENVALUE_FLOOR:
                raise IntegrityError(f"minimum eigenvalue {lo:.3e} < {EIGENVALUE_FLOOR}")


def purity(rho: DensityOperator) -> float:
    """Tr rho^2."""
    m = rho.matrix
    return float(np.real(np.einsum("ij,ji->", m, m)))


def partial_trace(rho: DensityOperator, keep: str) -> DensityOperator:
    """Reduced state of one factor of a coin x position bipartite state.

    ``keep`` selects the surviving factor, ``"coin"`` or ``"position"``.
    The trace of the input is preserved exactly up to summation roundoff.
    """
    if keep not in ("coin", "position"):
        raise UsageError(f"keep must be 'coin' or 'position', got {keep!r}")
    t = rho.as_tensor()
    if keep == "coin":
        reduced = np.einsum("ixjx->ij", t)
        dims = (rho.dims[0], 1)
    else:
        reduced = np.einsum("ixiy->xy", t)
        dims = (1, rho.dims[1])
    return DensityOperator(reduced, dims)


def trace_norm_distance(r1: DensityOperator, r2: DensityOperator) -> float:
    """Trace distance (1/2)||r1 - r2||_1 between two density operators.

    For Hermitian arguments the trace norm is the sum of absolute
    eigenvalues of the difference; the result lies in [0, 1].
    """
    if r1.dim != r2.dim:
        raise ShapeError(f"dimension mismatch {r1.dim} != {r2.dim}")
    w = np.linalg.eigvalsh(r1.matrix - r2.matrix)
    return float(0.5 * np.sum(np.abs(w)))


def von_neumann_entropy(rho: DensityOperator) -> float:
    """Entropy -Tr rho log2 rho in bits, with 0 log 0 := 0.

    Eigenvalues in [-1e-9, 0) are treated as roundoff and clipped to 0;
    anything more negative raises IntegrityError since it indicates a bug
    upstream rather than floating-point noise.
    """
    w = np.linalg.eigvalsh((rho.matrix + rho.matrix.conj().T) / 2.0)
    lo = float(w[0])
    if lo < EIGENVALUE_FLOOR:
        raise IntegrityError(f"minimum eigenvalue {lo:.3e} < {EIGENVALUE_FLOOR}")
    w = np.clip(w, 0.0, 1.0)
    nz = w[w > 0.0]
    return float(-np.sum(nz * np.log2(nz)))
