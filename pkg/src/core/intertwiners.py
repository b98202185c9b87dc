"""
Coefficient Functions
=====================
Rest-frame intertwiners u(0), v(0) embedding the spin-j multiplet of a
massive particle into a field representation, and their boosted versions
u(p) = (m/p⁰)^{1/2} D(L(p)) u(0), v(p) = (m/p⁰)^{1/2} D(L(p)) v(0).
"""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .halfint import HalfInt, HalfIntLike, in_triangle
from .linalg import CMatrix, DEFAULT_TOLERANCE, Tolerance, max_norm
from .lorentz import (
    FieldRep,
    FourVector,
    LorentzWord,
    ab_rep,
    rep_matrix,
    require_on_shell,
    standard_boost,
    vector_matrix,
    wigner_rotation,
)
from .su2 import clebsch_gordan, conjugation_matrix, extract_multiplet
from .utils.serialization import matrix_to_json

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CoefficientSet:
    rep: FieldRep
    j: HalfInt
    m: float
    u0: CMatrix
    v0: CMatrix

    def to_json(self) -> dict:
        return {
            "rep": self.rep.to_json(),
            "j": self.j.to_json(),
            "m": self.m,
            "u0": matrix_to_json(self.u0),
            "v0": matrix_to_json(self.v0),
        }


def build_coefficients(rep: FieldRep, j: HalfIntLike, m: float) -> CoefficientSet:
    """
    Rest-frame coefficients for a spin-j particle of mass m in `rep`.

    Standard-basis (A, B) reps use Clebsch–Gordan columns so the
    Condon–Shortley phase is exact; any other rep goes through multiplet
    extraction. v(0) = u(0) K_j.
    """
    j = HalfInt.of(j)
    if not m > 0:
        raise DomainError(f"Mass must be positive, got {m}")
    if rep.standard_basis and rep.label is not None:
        A, B = rep.label
        if not in_triangle(A, B, j):
            raise DomainError(
                f"Spin {j} is not contained in ({A},{B})",
                {"A": str(A), "B": str(B), "j": str(j)},
            )
        u0 = clebsch_gordan(A, B, j)
    else:
        u0 = extract_multiplet(rep.J, j)
    v0 = u0 @ conjugation_matrix(j)
    for M in (u0, v0):
        M.setflags(write=False)
    logger.debug("Built coefficients for %s, j=%s, m=%s", rep.key, j, m)
    return CoefficientSet(rep=rep, j=j, m=float(m), u0=u0, v0=v0)


def _boosted(cs: CoefficientSet, rest: CMatrix, p: FourVector, tol: Tolerance) -> CMatrix:
    require_on_shell(p, cs.m, tol)
    prefactor = np.sqrt(cs.m / p.energy)
    return prefactor * rep_matrix(cs.rep, standard_boost(p, cs.m, tol)) @ rest


def u_at(cs: CoefficientSet, p: FourVector, tol: Tolerance = DEFAULT_TOLERANCE) -> CMatrix:
    return _boosted(cs, cs.u0, p, tol)


def v_at(cs: CoefficientSet, p: FourVector, tol: Tolerance = DEFAULT_TOLERANCE) -> CMatrix:
    return _boosted(cs, cs.v0, p, tol)


def spin_rotation_rep(j: HalfInt) -> FieldRep:
    """(j, 0) restricted to rotations is the spin-j rep in the descending basis"""
    return ab_rep(j, 0)


def intertwining_defect(cs: CoefficientSet, rotation: LorentzWord) -> float:
    """max of |u0 D^j(R) - D(R) u0| and |v0 D^j(R)* - D(R) v0| for one rotation word"""
    Dj = rep_matrix(spin_rotation_rep(cs.j), rotation)
    D = rep_matrix(cs.rep, rotation)
    return max(
        max_norm(cs.u0 @ Dj - D @ cs.u0),
        max_norm(cs.v0 @ np.conj(Dj) - D @ cs.v0),
    )


def wigner_covariance_defect(cs: CoefficientSet, w: LorentzWord, p: FourVector) -> float:
    """|D(Λ) u(p) - ((Λp)⁰/p⁰)^{1/2} u(Λp) D^j(W(Λ,p))|"""
    moved = FourVector.on_shell(cs.m, p.transformed(vector_matrix(w)).spatial)
    Dj = wigner_rotation(spin_rotation_rep(cs.j), w, p, cs.m)
    lhs = rep_matrix(cs.rep, w) @ u_at(cs, p)
    rhs = np.sqrt(moved.energy / p.energy) * u_at(cs, moved) @ Dj
    return max_norm(lhs - rhs)
