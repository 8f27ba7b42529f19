"""Numerical kernels on real symmetric matrices.

Matrix functions (exp, inverse square root) are computed through the symmetric
eigendecomposition: the matrices handled here are small (d up to ~50) and
symmetric, for which this is both the simplest and the most accurate route.
Inputs are symmetrized as (a + a.T)/2 before decomposition to absorb
floating-point drift.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidMatrix, NumericalFailure, SingularMatrix

# exp(x) overflows float64 slightly above 709.78
_EXP_OVERFLOW = 709.0


def symmetrize(a: np.ndarray) -> np.ndarray:
    """Return (a + a.T)/2, which is exactly symmetric in floating point."""
    a = np.asarray(a, dtype=float)
    return (a + a.T) / 2.0


def _check_square_finite(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidMatrix(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidMatrix("matrix contains non-finite entries")
    return a


def sym_eigen(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix.

    Returns (eigenvalues, eigenvectors) with eigenvalues in descending order
    and eigenvectors as columns of an orthogonal matrix, so that
    a == Q @ diag(w) @ Q.T.
    """
    a = symmetrize(_check_square_finite(a))
    try:
        w, q = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigendecomposition did not converge: {exc}") from exc
    # eigh returns ascending order
    return w[::-1].copy(), q[:, ::-1].copy()


def sym_exp(a: np.ndarray) -> np.ndarray:
    """Matrix exponential of a symmetric matrix.

    The result is symmetric positive definite, and det(sym_exp(a)) equals
    exp(trace(a)); in particular a traceless argument yields a determinant-one
    result.
    """
    w, q = sym_eigen(a)
    if w[0] > _EXP_OVERFLOW:
        raise NumericalFailure(f"exp overflow: largest eigenvalue {w[0]:.3g}")
    return symmetrize((q * np.exp(w)) @ q.T)


def sym_inv_sqrt(a: np.ndarray, eps: float | None = None) -> np.ndarray:
    """Inverse square root of a symmetric positive definite matrix.

    Returns the unique symmetric positive definite R with R @ a @ R == I.
    Eigenvalues at or below ``eps`` (default 1e-12 times the largest
    eigenvalue) raise SingularMatrix.
    """
    w, q = sym_eigen(a)
    if eps is None:
        eps = 1e-12 * max(w[0], 0.0)
    if w[-1] <= eps:
        raise SingularMatrix(
            f"matrix is not positive definite: smallest eigenvalue {w[-1]:.3g} <= {eps:.3g}"
        )
    return symmetrize((q / np.sqrt(w)) @ q.T)
