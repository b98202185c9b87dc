"""
Rotation Algebra
================
Spin-j generators, finite rotations, Clebsch–Gordan coefficients, the spin-j
conjugation matrix and extraction of a spin-j multiplet from any set of
rotation generators. Basis order is always descending magnetic number.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np
import sympy

from .errors import AlgebraError, DomainError, MultiplicityError
from .halfint import HalfInt, HalfIntLike, in_triangle
from .linalg import (
    CMatrix,
    Tolerance,
    as_cmatrix,
    commutator,
    mat_exp,
    max_norm,
    nullspace,
    phase_normalize,
)

logger = logging.getLogger(__name__)

LEVI_CIVITA_PAIRS = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


@dataclass(frozen=True, eq=False)
class SpinTriple:
    """Hermitian generators of the spin-j representation"""

    j: HalfInt
    Jx: CMatrix
    Jy: CMatrix
    Jz: CMatrix

    @property
    def generators(self) -> Tuple[CMatrix, CMatrix, CMatrix]:
        return (self.Jx, self.Jy, self.Jz)

    @property
    def J_plus(self) -> CMatrix:
        return self.Jx + 1j * self.Jy

    @property
    def J_minus(self) -> CMatrix:
        return self.Jx - 1j * self.Jy


def _ladder_value(j2: int, sigma2: int, step: int) -> float:
    """sqrt(j(j+1) - σ(σ+step)) from twice-values"""
    # 4 j(j+1) = j2 (j2 + 2) and 4 σ(σ±1) = σ2 (σ2 ± 2)
    return float(np.sqrt((j2 * (j2 + 2) - sigma2 * (sigma2 + 2 * step)) / 4.0))


@lru_cache(maxsize=64)
def _spin_generators_cached(j2: int) -> SpinTriple:
    dim = j2 + 1
    Jz = np.diag([(j2 - 2 * k) / 2.0 for k in range(dim)]).astype(np.complex128)
    Jp = np.zeros((dim, dim), dtype=np.complex128)
    for k in range(1, dim):
        # column k carries σ = j - k and is raised into row k-1
        Jp[k - 1, k] = _ladder_value(j2, j2 - 2 * k, +1)
    Jm = Jp.conj().T
    Jx = (Jp + Jm) / 2.0
    Jy = (Jp - Jm) / 2.0j
    for M in (Jx, Jy, Jz):
        M.setflags(write=False)
    return SpinTriple(HalfInt(j2), Jx, Jy, Jz)


def spin_generators(j: HalfIntLike) -> SpinTriple:
    j = HalfInt.of(j)
    if j.twice < 0:
        raise DomainError(f"Spin must be non-negative, got {j}")
    return _spin_generators_cached(j.twice)


def _unit_axis(axis: Sequence[float], atol: float = 1e-12) -> np.ndarray:
    n = np.asarray(axis, dtype=np.float64).reshape(3)
    if not np.all(np.isfinite(n)) or abs(float(np.linalg.norm(n)) - 1.0) > atol:
        raise DomainError(f"Rotation axis must be a unit vector, got {list(n)}")
    return n


def rotation_matrix(j: HalfIntLike, axis: Sequence[float], angle: float) -> CMatrix:
    """D^{(j)} = exp(-i angle n·J)"""
    n = _unit_axis(axis)
    triple = spin_generators(j)
    generator = sum(n[a] * triple.generators[a] for a in range(3))
    return mat_exp(-1j * float(angle) * generator)


def _exact_spin_ladders(j2: int) -> Tuple[sympy.Matrix, sympy.Matrix]:
    dim = j2 + 1
    Jp = sympy.zeros(dim, dim)
    for k in range(1, dim):
        sigma2 = j2 - 2 * k
        Jp[k - 1, k] = sympy.sqrt(sympy.Rational(j2 * (j2 + 2) - sigma2 * (sigma2 + 2), 4))
    return Jp, Jp.T


def _exact_kron(X: sympy.Matrix, Y: sympy.Matrix) -> sympy.Matrix:
    return sympy.Matrix(
        X.rows * Y.rows,
        X.cols * Y.cols,
        lambda r, c: X[r // Y.rows, c // Y.cols] * Y[r % Y.rows, c % Y.cols],
    )


@lru_cache(maxsize=128)
def _exact_clebsch_gordan(a2: int, b2: int, j2: int) -> sympy.Matrix:
    """Highest weight of spin j inside A⊗B, fixed by Condon–Shortley, then lowered"""
    da, db, dj = a2 + 1, b2 + 1, j2 + 1
    Jp_a, Jm_a = _exact_spin_ladders(a2)
    Jp_b, Jm_b = _exact_spin_ladders(b2)
    Jp = _exact_kron(Jp_a, sympy.eye(db)) + _exact_kron(sympy.eye(da), Jp_b)
    Jm = _exact_kron(Jm_a, sympy.eye(db)) + _exact_kron(sympy.eye(da), Jm_b)

    # rows (ia, ib) whose magnetic numbers add to j
    top = [
        ia * db + ib
        for ia in range(da)
        for ib in range(db)
        if (a2 - 2 * ia) + (b2 - 2 * ib) == j2
    ]
    kernel = Jp.extract(list(range(da * db)), top).nullspace()
    if len(kernel) != 1:
        raise MultiplicityError(
            f"Expected one highest weight for j={j2}/2 in {a2}/2 ⊗ {b2}/2, found {len(kernel)}"
        )
    hw = sympy.zeros(da * db, 1)
    for pos, row in enumerate(top):
        hw[row] = kernel[0][pos]
    hw = hw / sympy.sqrt(sum(x ** 2 for x in hw))
    # Condon–Shortley: the entry with the largest left magnetic number is positive
    leading = next(x for x in hw if x != 0)
    if leading < 0:
        hw = -hw

    columns = [hw.applyfunc(sympy.nsimplify)]
    for k in range(1, dj):
        sigma2 = j2 - 2 * (k - 1)
        scale = sympy.sqrt(sympy.Rational(j2 * (j2 + 2) - sigma2 * (sigma2 - 2), 4))
        columns.append((Jm * columns[-1] / scale).applyfunc(sympy.radsimp))
    return sympy.Matrix.hstack(*columns)


def clebsch_gordan(A: HalfIntLike, B: HalfIntLike, j: HalfIntLike) -> CMatrix:
    """
    Coupling matrix of shape (2A+1)(2B+1) × (2j+1).

    Rows are (a, b) with a-major ordering, both descending; columns are the
    σ = j, ..., -j states of the coupled multiplet.
    """
    A, B, j = HalfInt.of(A), HalfInt.of(B), HalfInt.of(j)
    if min(A.twice, B.twice, j.twice) < 0 or not in_triangle(A, B, j):
        raise DomainError(f"j={j} is outside the triangle of A={A}, B={B}")
    exact = _exact_clebsch_gordan(A.twice, B.twice, j.twice)
    return np.array([[complex(x) for x in row] for row in exact.tolist()], dtype=np.complex128)


def conjugation_matrix(j: HalfIntLike) -> CMatrix:
    """(K_j)_{σ',σ} = (-1)^{j-σ} δ_{σ',-σ}"""
    j = HalfInt.of(j)
    if j.twice < 0:
        raise DomainError(f"Spin must be non-negative, got {j}")
    dim = j.dim
    K = np.zeros((dim, dim), dtype=np.complex128)
    for k in range(dim):
        # column k has σ = j - k, so j - σ = k
        K[dim - 1 - k, k] = -1.0 if k % 2 else 1.0
    return K


def rotation_algebra_defect(J: Sequence[CMatrix]) -> float:
    """max over cyclic (a,b,c) of |[J_a, J_b] - i J_c|"""
    return max(
        max_norm(commutator(J[a], J[b]) - 1j * J[c]) for a, b, c in LEVI_CIVITA_PAIRS
    )


def extract_multiplet(
    J: Sequence[CMatrix],
    j: HalfIntLike,
    tol: Tolerance = Tolerance(abs=1e-9, rel=1e-9),
) -> CMatrix:
    """
    Orthonormal spin-j multiplet inside the representation generated by J.

    Columns run σ = j, ..., -j and obey the standard ladder relations. The
    overall phase makes the largest entry of the highest-weight column real
    positive.
    """
    j = HalfInt.of(j)
    if j.twice < 0:
        raise DomainError(f"Spin must be non-negative, got {j}")
    Jx, Jy, Jz = (as_cmatrix(G, "generator") for G in J)
    dim = Jz.shape[0]
    scale = max(1.0, max_norm(Jz))
    defect = rotation_algebra_defect((Jx, Jy, Jz))
    if defect > 1e-9 * scale:
        raise AlgebraError(f"Generators violate the rotation algebra (defect {defect:.3e})")

    Jp = Jx + 1j * Jy
    Jm = Jx - 1j * Jy
    top = float(j.twice) / 2.0
    stacked = np.vstack([Jz - top * np.eye(dim), Jp])
    kernel = nullspace(stacked, Tolerance(abs=tol.abs * scale, rel=tol.rel))
    if kernel.shape[1] != 1:
        raise MultiplicityError(
            f"Spin {j} occurs {kernel.shape[1]} times (need exactly one)",
            {"j": str(j), "multiplicity": kernel.shape[1]},
        )
    hw, _ = phase_normalize(kernel[:, 0])
    hw = hw / np.linalg.norm(hw)

    columns = [hw]
    for k in range(1, j.dim):
        sigma2 = j.twice - 2 * (k - 1)
        columns.append(Jm @ columns[-1] / _ladder_value(j.twice, sigma2, -1))
    return np.column_stack(columns)
