"""Dense complex matrix algebra.

Thin, contract-checked wrappers around numpy: products, adjoints, Hermitian
eigendecomposition, positive-definite inversion and the operator norm.  Matrices are
plain ``numpy.ndarray`` objects with dtype ``complex128``; every function validates the
shapes/finiteness assumptions that the rest of the package relies on.

All operations are pure functions on immutable inputs and are safe to call from
concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    NonHermitianInput,
    NotPositiveDefinite,
)

#: relative tolerance for "is this matrix Hermitian" gates
HERMITIAN_TOL = 1e-10

#: relative floor on the smallest eigenvalue for positive-definite inversion
PD_FLOOR = 1e-12

#: relative residual allowed on ``m @ hpd_inverse(m) - I``
INV_TOL = 1e-9


def as_matrix(entries) -> np.ndarray:
    """Coerce ``entries`` to a finite, two-dimensional complex128 array."""
    m = np.asarray(entries, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise DimensionMismatch("matrix entries must be finite")
    return m


def require_square(m: np.ndarray) -> np.ndarray:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product with conformability check."""
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply shapes {a.shape} and {b.shape}")
    return a @ b


def adjoint(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot add shapes {a.shape} and {b.shape}")
    return a + b


def sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot subtract shapes {a.shape} and {b.shape}")
    return a - b


def scale(alpha: complex, a: np.ndarray) -> np.ndarray:
    return alpha * a


@dataclass(frozen=True)
class HermitianEigen:
    """Full spectrum of a Hermitian matrix.

    Attributes
    ----------
    values : ndarray
        Real eigenvalues, sorted ascending.
    vectors : ndarray
        Unitary matrix whose columns are the matching orthonormal eigenvectors.
        No phase convention is guaranteed; consumers should use counts and
        subspaces only.
    """

    values: np.ndarray
    vectors: np.ndarray


def hermiticity_defect(m: np.ndarray) -> float:
    """Return ``norm(m - adjoint(m))`` relative to ``norm(m)`` (0 for the zero matrix)."""
    require_square(m)
    nm = operator_norm(m)
    if nm == 0.0:
        return 0.0
    return operator_norm(m - adjoint(m)) / nm


def hermitian_eigen(m: np.ndarray, hermitian_tol: float = HERMITIAN_TOL) -> HermitianEigen:
    """Eigendecomposition of a (numerically) Hermitian matrix.

    The input is symmetrized via ``(m + adjoint(m)) / 2`` before decomposition;
    inputs whose asymmetry exceeds ``hermitian_tol`` relative to their norm are
    rejected rather than silently symmetrized.

    Raises
    ------
    NonHermitianInput
        If ``norm(m - adjoint(m)) > hermitian_tol * norm(m)``.
    ConvergenceFailure
        If the underlying eigensolver does not converge.
    """
    require_square(m)
    defect = hermiticity_defect(m)
    if defect > hermitian_tol:
        raise NonHermitianInput(
            f"matrix is not Hermitian: relative asymmetry {defect:.3e} exceeds "
            f"{hermitian_tol:.1e}"
        )
    sym = (m + adjoint(m)) / 2.0
    try:
        values, vectors = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails here
        raise ConvergenceFailure(f"eigendecomposition failed: {exc}") from exc
    return HermitianEigen(values=values, vectors=vectors)


def operator_norm(m: np.ndarray) -> float:
    """Largest singular value, as the square root of the top eigenvalue of ``mᴴm``.

    For Hermitian input this equals the largest absolute eigenvalue.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got ndim={m.ndim}")
    if m.size == 0:
        return 0.0
    try:
        top = float(np.linalg.eigvalsh(adjoint(m) @ m)[-1])
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise ConvergenceFailure(f"singular value computation failed: {exc}") from exc
    return float(np.sqrt(max(top, 0.0)))


def hpd_inverse(m: np.ndarray, pd_floor: float = PD_FLOOR, inv_tol: float = INV_TOL) -> np.ndarray:
    """Inverse of a Hermitian positive definite matrix.

    Computed through the eigendecomposition so the result is Hermitian by
    construction.  The smallest eigenvalue must exceed ``pd_floor * norm(m)``.

    Raises
    ------
    NonHermitianInput
        If the input fails the Hermiticity gate.
    NotPositiveDefinite
        If the smallest eigenvalue is at or below the floor.
    ConvergenceFailure
        If the residual ``norm(m @ inv - I)`` misses the accuracy contract.
    """
    eig = hermitian_eigen(m)
    w, v = eig.values, eig.vectors
    largest = max(abs(float(w[0])), abs(float(w[-1])))
    floor = pd_floor * largest
    if float(w[0]) <= floor:
        raise NotPositiveDefinite(
            f"smallest eigenvalue {float(w[0]):.3e} is not above the floor {floor:.3e}"
        )
    inv = (v / w) @ adjoint(v)
    residual = operator_norm(m @ inv - np.eye(m.shape[0]))
    # allow the residual to grow with the condition number, as any backward-stable
    # inverse does
    cond = float(w[-1]) / float(w[0])
    if residual > inv_tol * max(1.0, cond):
        raise ConvergenceFailure(
            f"inverse residual {residual:.3e} exceeds tolerance for condition {cond:.3e}"
        )
    return inv
