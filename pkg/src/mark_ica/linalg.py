"""Minimal dense linear-algebra kernel for whitening and fixed-point iteration.

All operations are pure functions on 2-D float64 arrays (rows = samples,
columns = features) and are fully deterministic: the eigensolver is a cyclic
Jacobi sweep, so results do not depend on the BLAS backend.
"""

import numpy as np

JACOBI_MAX_SWEEPS = 100
EIGENVALUE_FLOOR = 1e-12


def as_matrix(x, name="matrix"):
    """Validate and return a 2-D float64 array with finite entries."""
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must have at least one row and one column")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def center_columns(X):
    """Subtract the column means.

    Returns
    -------
    Xc : ndarray
        Copy of ``X`` with every column shifted to zero mean.
    mean : ndarray
        The removed per-column means, shape ``(cols,)``.
    """
    X = as_matrix(X, "X")
    mean = X.mean(axis=0)
    return X - mean, mean


def covariance(Xc):
    """Covariance ``Xc.T @ Xc / rows`` of column-centered data.

    The divisor is the number of rows (not rows - 1) so that whitened data
    satisfies ``Z.T @ Z / rows = I`` exactly.  The result is explicitly
    symmetrized to cancel rounding asymmetry from the matrix product.
    """
    Xc = as_matrix(Xc, "Xc")
    n = Xc.shape[0]
    if n < 2:
        raise ValueError(f"covariance requires at least 2 rows, got {n}")
    C = Xc.T @ Xc / n
    return (C + C.T) / 2


def _check_symmetric(S, tol=1e-9):
    asym = np.max(np.abs(S - S.T))
    scale = max(1.0, float(np.max(np.abs(S))))
    if asym > tol * scale:
        raise ValueError(f"matrix is not symmetric (max asymmetry {asym:.3e})")


def sym_eig(S):
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns eigenvalues sorted in descending order and the matching
    eigenvectors as orthonormal columns.  Off-diagonal elements are rotated
    away until ``|a_pq| <= eps * sqrt(|a_pp * a_qq|)``; this relative
    criterion keeps small eigenvalues accurate even for ill-conditioned
    positive-definite input, which the whitening step relies on.

    Raises
    ------
    ValueError
        If the input is not symmetric within 1e-9 (relative to its largest
        entry) or the sweep budget is exhausted.
    """
    S = as_matrix(S, "S")
    n = S.shape[0]
    if S.shape[1] != n:
        raise ValueError(f"expected a square matrix, got {S.shape}")
    _check_symmetric(S)

    A = (S + S.T) / 2
    V = np.eye(n)
    if n == 1:
        return A[0, :1].copy(), V

    eps = 1e-15
    tiny = np.finfo(np.float64).tiny
    for _ in range(JACOBI_MAX_SWEEPS):
        # converged once every off-diagonal is negligible at its local scale
        droot = np.sqrt(np.abs(np.diag(A)))
        local = np.outer(droot, droot) + tiny
        off = np.abs(A - np.diag(np.diag(A)))
        if np.all(off <= eps * local):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                local = np.sqrt(np.abs(A[p, p])) * np.sqrt(np.abs(A[q, q])) + tiny
                if np.abs(apq) <= eps * local:
                    continue
                # stable rotation angle (Golub & Van Loan)
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                if tau >= 0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                A[p, q] = 0.0
                A[q, p] = 0.0

                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        raise ValueError(f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps")

    w = np.diag(A).copy()
    order = np.argsort(w)[::-1]
    return w[order], V[:, order]


def inv_sqrt_sym(S, floor=EIGENVALUE_FLOOR):
    """Inverse matrix square root ``V diag(1/sqrt(max(w, floor))) V.T``.

    The eigenvalue floor guards rank-deficient input; for well-conditioned
    symmetric positive-definite ``S`` the result ``R`` satisfies
    ``R @ S @ R = I``.
    """
    w, V = sym_eig(S)
    d = 1.0 / np.sqrt(np.maximum(w, floor))
    R = (V * d) @ V.T
    return (R + R.T) / 2


def matmul(A, B):
    """Matrix product with an explicit dimension check."""
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"dimension mismatch: {A.shape} @ {B.shape}")
    return A @ B
