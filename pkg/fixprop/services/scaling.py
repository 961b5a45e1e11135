"""Diagonal rescaling of the constraint matrix for first-order LP solves"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla


@dataclass(frozen=True, eq=False)
class Scaling:
    """
    Row factors R and column factors C with A_scaled = diag(R) A diag(C)

    Primal x = C * x_scaled, dual y = R * y_scaled.
    """

    row: np.ndarray
    col: np.ndarray
    matrix: sp.csr_matrix


def _safe_inverse_sqrt(norms: np.ndarray) -> np.ndarray:
    factors = np.ones_like(norms)
    nonzero = norms > 0
    factors[nonzero] = 1.0 / np.sqrt(norms[nonzero])
    return factors


def rescale(A: sp.csr_matrix, ruiz_iterations: int = 10, pock_chambolle_alpha: float = 1.0) -> Scaling:
    """
    Ruiz equilibration (infinity norm) followed by an optional Pock-Chambolle
    pass; zero rows and columns keep factor 1.
    """
    m, n = A.shape
    row = np.ones(m)
    col = np.ones(n)
    M = sp.csr_matrix(A, copy=True)

    if M.nnz == 0:
        return Scaling(row=row, col=col, matrix=M)

    for _ in range(ruiz_iterations):
        r = _safe_inverse_sqrt(spla.norm(M, ord=np.inf, axis=1))
        s = _safe_inverse_sqrt(spla.norm(M, ord=np.inf, axis=0))
        M = sp.diags(r) @ M @ sp.diags(s)
        row *= r
        col *= s

    if pock_chambolle_alpha > 0:
        absM = abs(M)
        row_sums = np.asarray(absM.power(pock_chambolle_alpha).sum(axis=1)).ravel()
        col_sums = np.asarray(absM.power(2.0 - pock_chambolle_alpha).sum(axis=0)).ravel()
        r = _safe_inverse_sqrt(row_sums)
        s = _safe_inverse_sqrt(col_sums)
        M = sp.diags(r) @ M @ sp.diags(s)
        row *= r
        col *= s

    return Scaling(row=row, col=col, matrix=sp.csr_matrix(M))


def estimate_norm(A: sp.csr_matrix, iterations: int = 30) -> float:
    """Spectral norm of A by power iteration on A^T A from a fixed start"""
    n = A.shape[1]
    if A.nnz == 0 or n == 0:
        return 0.0
    At = A.T.tocsr()
    v = np.full(n, 1.0 / np.sqrt(n))
    sigma = 0.0
    for _ in range(iterations):
        w = At @ (A @ v)
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            # Start vector in the null space; fall back to the Frobenius bound
            return float(spla.norm(A))
        sigma = np.sqrt(norm_w)
        v = w / norm_w
    return float(sigma)
