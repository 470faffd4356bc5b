"""Dense complex linear algebra for operators up to a few hundred dimensions.

Everything downstream (states, measurements, work quantities) goes through
the handful of primitives here, so the tolerances are centralized in this
module and treated as read-only constants.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian

# Max-entry tolerance on |A - A^dag| for an input to count as Hermitian.
HERMITICITY_TOL = 1e-10
# Max-entry tolerance on reconstruction/unitarity residuals of eigendecompositions.
RESIDUAL_TOL = 1e-9


def as_matrix(a, dtype=complex) -> np.ndarray:
    """Coerce to a 2-D array and reject non-finite entries."""
    m = np.asarray(a, dtype=dtype)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got ndim={m.ndim}")
    finite = np.isfinite(m.real) & np.isfinite(m.imag) if np.iscomplexobj(m) else np.isfinite(m)
    if not np.all(finite):
        raise ValueError("matrix contains NaN or Inf entries")
    return m


def max_abs(a: np.ndarray) -> float:
    """Largest entry magnitude; 0 for empty input."""
    return float(np.max(np.abs(a))) if a.size else 0.0


def adjoint(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(np.asarray(a)).T


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def trace(a: np.ndarray) -> complex:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"trace needs a square matrix, got {a.shape}")
    return complex(np.trace(a))


def hermiticity_defect(a: np.ndarray) -> float:
    """Max-entry distance from A to its own adjoint."""
    return max_abs(a - adjoint(a))


def require_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL, what: str = "matrix") -> np.ndarray:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{what} must be square, got {a.shape}")
    defect = hermiticity_defect(a)
    if defect > tol:
        raise NotHermitian(f"{what} is not Hermitian: max |A - A^dag| = {defect:.3e} > {tol:.0e}")
    return a


def is_unitary(a: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    """Max-entry test of A^dag A - I against tol; False for nonsquare input."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    eye = np.eye(a.shape[0])
    return max_abs(adjoint(a) @ a - eye) <= tol


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Spectral data of a Hermitian matrix.

    Eigenvalues are real and ascending; column k of `eigenvectors` is the
    unit eigenvector paired with eigenvalue k. Degenerate eigenvalues keep a
    deterministic order (stable sort), so downstream sorted quantities are
    reproducible run to run.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


def eig_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix.

    The input must be Hermitian within `tol` (max-entry). The numerically
    exact Hermitian part (A + A^dag)/2 is decomposed so that roundoff in the
    input cannot leak into complex eigenvalues.
    """
    a = require_hermitian(a, tol=tol)
    herm = (a + adjoint(a)) / 2.0
    try:
        w, v = np.linalg.eigh(herm)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure is pathological
        raise NoConvergence(f"eigensolver did not converge: {exc}") from exc
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(eigenvalues=np.ascontiguousarray(w[order]),
                              eigenvectors=np.ascontiguousarray(v[:, order]))


def eigvals_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix."""
    a = require_hermitian(a, tol=tol)
    return np.sort(np.linalg.eigvalsh((a + adjoint(a)) / 2.0), kind="stable")
