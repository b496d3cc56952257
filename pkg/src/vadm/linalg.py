"""Factor-once, solve-many sparse SPD linear algebra."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sps
import scipy.sparse.linalg as spla


class NotSPDError(np.linalg.LinAlgError):
    def __init__(self, msg, pivot=None):
        super().__init__(msg)
        self.pivot = pivot


class Factorization:
    """Reusable factor of a sparse symmetric positive definite matrix.

    The direct path is a symmetric-mode sparse LU with no off-diagonal
    pivoting, which for SPD input is an LDL^T factorization; a non-positive
    pivot means the matrix is not SPD.  ``method="cg"`` keeps the matrix and
    solves each right-hand side with conjugate gradients instead.
    """

    def __init__(self, A, method: str = "direct", cg_tol: float = 1e-13):
        A = sps.csc_matrix(A, dtype=float)
        n, m = A.shape
        if n != m:
            raise ValueError(f"matrix must be square, got {A.shape}")
        asym = abs(A - A.T)
        if asym.nnz and asym.max() > 0.0:
            raise NotSPDError("matrix is not symmetric")
        self.A = A
        self.n = n
        self.method = method
        self.cg_tol = cg_tol
        self._lu = None
        if n == 0:
            return
        diag = A.diagonal()
        if np.any(diag <= 0.0):
            k = int(np.flatnonzero(diag <= 0.0)[0])
            raise NotSPDError(f"non-positive diagonal entry at index {k}", pivot=k)
        if method == "direct":
            lu = spla.splu(A, permc_spec="MMD_AT_PLUS_A", diag_pivot_thresh=0.0,
                           options={"SymmetricMode": True})
            piv = lu.U.diagonal()
            bad = np.flatnonzero(~(piv > 0.0))
            if bad.size:
                k = int(lu.perm_c[bad[0]])
                raise NotSPDError(f"non-positive pivot at index {k}", pivot=k)
            self._lu = lu
        elif method != "cg":
            raise ValueError(f"unknown method {method!r}")

    def solve(self, b) -> np.ndarray:
        b = np.asarray(b, dtype=float)
        if b.shape[0] != self.n:
            raise ValueError(f"right-hand side has length {b.shape[0]}, expected {self.n}")
        if self.n == 0:
            return np.zeros_like(b)
        if self._lu is not None:
            return self._lu.solve(b)
        x, info = spla.cg(self.A, b, rtol=self.cg_tol, atol=0.0, maxiter=10 * self.n)
        if info != 0:
            raise np.linalg.LinAlgError(f"conjugate gradients did not converge (info={info})")
        return x


def factor(A, method: str = "direct", cg_tol: float = 1e-13) -> Factorization:
    return Factorization(A, method=method, cg_tol=cg_tol)


def solve(F: Factorization, b) -> np.ndarray:
    return F.solve(b)
