"""
Dense Complex Linear Algebra
============================
Matrix exponential, least squares, null spaces and Hermitian eigensolver
used by every other module. Matrices are plain complex128 numpy arrays.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import linalg as sla

from .errors import AlgebraError, DimensionError, NonFiniteError

logger = logging.getLogger(__name__)

CMatrix = np.ndarray


@dataclass(frozen=True)
class Tolerance:
    """x ≈ y iff |x - y| <= abs + rel * max(|x|, |y|)"""

    abs: float = 1e-9
    rel: float = 1e-9

    def __post_init__(self):
        if self.abs < 0 or self.rel < 0:
            raise ValueError("Tolerance components must be non-negative")

    def bound(self, scale: float) -> float:
        return self.abs + self.rel * scale

    def close(self, x, y) -> bool:
        x = np.asarray(x)
        y = np.asarray(y)
        scale = max(float(np.max(np.abs(x), initial=0.0)), float(np.max(np.abs(y), initial=0.0)))
        return float(np.max(np.abs(x - y), initial=0.0)) <= self.bound(scale)


DEFAULT_TOLERANCE = Tolerance()


def as_cmatrix(M, name: str = "matrix") -> CMatrix:
    """Copy into a 2-D complex128 array, rejecting NaN/inf"""
    A = np.array(M, dtype=np.complex128)
    if A.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFiniteError(f"{name} has non-finite entries")
    return A


def _require_square(A: CMatrix, name: str):
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {A.shape}")


def max_norm(M) -> float:
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.max(np.abs(M)))


def dagger(M: CMatrix) -> CMatrix:
    return np.conj(M).T


def commutator(X: CMatrix, Y: CMatrix) -> CMatrix:
    return X @ Y - Y @ X


# Padé [13/13] coefficients and the 1-norm thresholds for degrees 3..13
_PADE_COEFFS = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0),
    13: (64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
         1187353796428800.0, 129060195264000.0, 10559470521600.0,
         670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
         960960.0, 16380.0, 182.0, 1.0),
}
_PADE_THETA = (
    (3, 0.01495585217958292),
    (5, 0.2539398330063230),
    (7, 0.9504178996162932),
    (9, 2.097847961257068),
    (13, 5.371920351148152),
)


def _pade(A: CMatrix, m: int) -> CMatrix:
    c = _PADE_COEFFS[m]
    n = A.shape[0]
    ident = np.eye(n, dtype=A.dtype)
    A2 = A @ A
    if m == 13:
        A4 = A2 @ A2
        A6 = A4 @ A2
        U = A @ (A6 @ (c[13] * A6 + c[11] * A4 + c[9] * A2)
                 + c[7] * A6 + c[5] * A4 + c[3] * A2 + c[1] * ident)
        V = (A6 @ (c[12] * A6 + c[10] * A4 + c[8] * A2)
             + c[6] * A6 + c[4] * A4 + c[2] * A2 + c[0] * ident)
    else:
        powers = [ident, A2]
        for _ in range(2, (m + 1) // 2):
            powers.append(powers[-1] @ A2)
        U = np.zeros_like(A)
        V = np.zeros_like(A)
        for k in range(m, 0, -2):
            U = U + c[k] * powers[k // 2]
        U = A @ U
        for k in range(m - 1, -1, -2):
            V = V + c[k] * powers[k // 2]
    return sla.solve(V - U, V + U)


def mat_exp(M) -> CMatrix:
    """exp(M) by scaling-and-squaring with a Padé approximant"""
    A = as_cmatrix(M, "mat_exp input")
    _require_square(A, "mat_exp input")
    n = A.shape[0]
    if n == 0:
        return A.copy()
    norm1 = float(np.linalg.norm(A, 1))
    if norm1 == 0.0:
        return np.eye(n, dtype=np.complex128)
    for m, theta in _PADE_THETA:
        if norm1 <= theta:
            return _pade(A, m)
    mantissa, squarings = np.frexp(norm1 / _PADE_THETA[-1][1])
    squarings = int(squarings) - int(mantissa == 0.5)
    F = _pade(A / 2.0 ** squarings, 13)
    for _ in range(squarings):
        F = F @ F
    return F


def lstsq(A, B, rcond: float = 1e-12) -> Tuple[CMatrix, float]:
    """Minimum-norm minimizer of ||AX - B||_F via SVD, plus the attained residual"""
    A = as_cmatrix(A, "lstsq A")
    B_in = np.asarray(B)
    vector_rhs = B_in.ndim == 1
    B = as_cmatrix(B_in.reshape(-1, 1) if vector_rhs else B_in, "lstsq B")
    if A.shape[0] != B.shape[0]:
        raise DimensionError(f"lstsq rows differ: A has {A.shape[0]}, B has {B.shape[0]}")
    if A.size == 0:
        X = np.zeros((A.shape[1], B.shape[1]), dtype=np.complex128)
    else:
        U, s, Vh = np.linalg.svd(A, full_matrices=False)
        s_inv = np.zeros_like(s)
        keep = s > rcond * s[0] if s.size and s[0] > 0 else np.zeros_like(s, dtype=bool)
        s_inv[keep] = 1.0 / s[keep]
        X = dagger(Vh) @ (s_inv[:, None] * (dagger(U) @ B))
    residual = float(np.linalg.norm(A @ X - B))
    if vector_rhs:
        X = X[:, 0]
    return X, residual


def condition_number(A, rcond: float = 1e-12) -> float:
    """Ratio of extreme retained singular values (inf when rank-deficient)"""
    s = np.linalg.svd(as_cmatrix(A, "condition input"), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return float("inf")
    if s[-1] <= rcond * s[0]:
        return float("inf")
    return float(s[0] / s[-1])


def nullspace(M, tol: Tolerance = DEFAULT_TOLERANCE) -> CMatrix:
    """Orthonormal columns spanning the numerical kernel of M"""
    A = as_cmatrix(M, "nullspace input")
    rows, cols = A.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    if rows == 0:
        return np.eye(cols, dtype=np.complex128)
    _, s, Vh = np.linalg.svd(A, full_matrices=True)
    cutoff = tol.bound(float(s[0]) if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    return dagger(Vh[rank:])


def eig_hermitian(M) -> Tuple[np.ndarray, CMatrix]:
    """Ascending real eigenvalues and a unitary eigenvector matrix"""
    A = as_cmatrix(M, "eig_hermitian input")
    _require_square(A, "eig_hermitian input")
    scale = float(np.linalg.norm(A))
    defect = float(np.linalg.norm(A - dagger(A)))
    if defect > 1e-10 * scale + 1e-300:
        raise AlgebraError(
            f"eig_hermitian input is not Hermitian (defect {defect:.3e})",
            {"defect": defect},
        )
    values, vectors = np.linalg.eigh((A + dagger(A)) / 2)
    return values, vectors


def phase_normalize(v: np.ndarray, rel_tie: float = 1e-9) -> Tuple[np.ndarray, complex]:
    """
    Scale so the largest-magnitude entry becomes real positive.
    Ties (within rel_tie) are broken by the smallest flattened index.
    Returns the rescaled array and the unit phase that was divided out.
    """
    flat = np.asarray(v).ravel()
    mags = np.abs(flat)
    peak = float(mags.max()) if mags.size else 0.0
    if peak == 0.0:
        return np.asarray(v).copy(), 1.0 + 0.0j
    index = int(np.flatnonzero(mags >= peak * (1.0 - rel_tie))[0])
    unit = flat[index] / abs(flat[index])
    return np.asarray(v) / unit, complex(unit)


def global_phase_distance(X, Y) -> float:
    """min over unit phases c of max|X - c Y|"""
    X = np.asarray(X)
    Y = np.asarray(Y)
    overlap = np.vdot(Y.ravel(), X.ravel())
    c = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return max_norm(X - c * Y)
