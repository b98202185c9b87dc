"""
Spin Sums
=========
Direct and polynomial forms of the spin sum
π(p) = 2p⁰ u^L(p) u^R(p)† and of the twisted spin sum
Π(p) = D^L(L(p)) u^L(0) u^R(0)† D^R(L(p))^{-1}, the expansion coefficients
ξ_K of their rest-frame values, and the Ω swap relating the two.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, VerificationError
from .gamma import (
    NORMALIZATION_VERSION,
    SymTensorMatrix,
    TwistKind,
    build_all_T,
    multiplicity,
    predicted_k_range,
    sorted_indices,
)
from .halfint import HalfInt, HalfIntLike, phase
from .intertwiners import CoefficientSet, build_coefficients, u_at, v_at
from .linalg import CMatrix, Tolerance, lstsq, max_norm
from .lorentz import (
    METRIC,
    FieldRep,
    FourVector,
    LorentzWord,
    ab_rep,
    is_standard_ab,
    random_on_shell,
    random_word,
    rep_matrix,
    require_on_shell,
    standard_boost,
    vector_matrix,
)
from .polynomial import MatrixPolynomial, poly_eval, poly_parity_defect
from .utils.serialization import complex_to_json

logger = logging.getLogger(__name__)

XI_RESIDUAL_LIMIT = 1e-10


@dataclass(frozen=True, eq=False)
class SpinSumJob:
    repL: FieldRep
    repR: FieldRep
    j: HalfInt
    m: float
    csL: CoefficientSet
    csR: CoefficientSet

    @property
    def name(self) -> str:
        return f"{self.repL.key};{self.repR.key} j={self.j}"


def make_job(repL: FieldRep, repR: FieldRep, j: HalfIntLike, m: float = 1.0) -> SpinSumJob:
    j = HalfInt.of(j)
    return SpinSumJob(
        repL=repL,
        repR=repR,
        j=j,
        m=float(m),
        csL=build_coefficients(repL, j, m),
        csR=build_coefficients(repR, j, m),
    )


def ab_job(A: HalfIntLike, B: HalfIntLike, C: HalfIntLike, D: HalfIntLike,
           j: HalfIntLike, m: float = 1.0) -> SpinSumJob:
    return make_job(ab_rep(A, B), ab_rep(C, D), j, m)


def spin_sum(job: SpinSumJob, p: FourVector) -> CMatrix:
    """2p⁰ u^L(p) u^R(p)†"""
    return 2.0 * p.energy * u_at(job.csL, p) @ np.conj(u_at(job.csR, p)).T


def spin_sum_v(job: SpinSumJob, p: FourVector) -> CMatrix:
    return 2.0 * p.energy * v_at(job.csL, p) @ np.conj(v_at(job.csR, p)).T


def twisted_spin_sum(job: SpinSumJob, p: FourVector) -> CMatrix:
    """D^L(L(p)) u^L(0) u^R(0)† D^R(L(p))^{-1}"""
    return _twisted(job, p, job.csL.u0, job.csR.u0)


def twisted_spin_sum_v(job: SpinSumJob, p: FourVector) -> CMatrix:
    return _twisted(job, p, job.csL.v0, job.csR.v0)


def _twisted(job: SpinSumJob, p: FourVector, left: CMatrix, right: CMatrix) -> CMatrix:
    require_on_shell(p, job.m)
    boost = standard_boost(p, job.m)
    DL = rep_matrix(job.repL, boost)
    DR = rep_matrix(job.repR, boost)
    return DL @ left @ np.conj(right).T @ np.linalg.inv(DR)


def direct_sum(job: SpinSumJob, twist: TwistKind, p: FourVector) -> CMatrix:
    if twist is TwistKind.HERMITIAN:
        return spin_sum(job, p)
    return twisted_spin_sum(job, p)


def rest_value(job: SpinSumJob, twist: TwistKind) -> CMatrix:
    return direct_sum(job, twist, FourVector.at_rest(job.m))


def uv_defect(job: SpinSumJob, twist: TwistKind, p: FourVector) -> float:
    """Difference between the u- and v-built versions of the sum"""
    if twist is TwistKind.HERMITIAN:
        a, b = spin_sum(job, p), spin_sum_v(job, p)
    else:
        a, b = twisted_spin_sum(job, p), twisted_spin_sum_v(job, p)
    return max_norm(a - b) / max(1.0, max_norm(a))


def covariance_defect(job: SpinSumJob, twist: TwistKind, w: LorentzWord, p: FourVector) -> float:
    """|S(Λp) - D^L(Λ) S(p) twist(D^R(Λ))| relative to |S(p)|"""
    moved = FourVector.on_shell(job.m, p.transformed(vector_matrix(w)).spatial)
    DL = rep_matrix(job.repL, w)
    DR = rep_matrix(job.repR, w)
    right = np.conj(DR).T if twist is TwistKind.HERMITIAN else np.linalg.inv(DR)
    base = direct_sum(job, twist, p)
    return max_norm(direct_sum(job, twist, moved) - DL @ base @ right) / max(1.0, max_norm(base))


@dataclass(frozen=True)
class XiTable:
    twist: TwistKind
    values: Dict[HalfInt, complex]
    residual: float
    convention: str = NORMALIZATION_VERSION

    def __getitem__(self, K: HalfIntLike) -> complex:
        return self.values[HalfInt.of(K)]

    def to_json(self) -> dict:
        return {
            "twist": self.twist.value,
            "convention": self.convention,
            "residual": self.residual,
            "xi": [
                {"K": K.to_json(), "value": complex_to_json(self.values[K])}
                for K in sorted(self.values)
            ],
        }


def xi_extract(
    job: SpinSumJob,
    twist: TwistKind,
    seeds: Sequence[Tuple[HalfInt, CMatrix]],
) -> XiTable:
    """
    Expand the rest-frame value in the seed basis.

    Rest-frame coefficients c_K relate to ξ_K by c_K = (-1)^{2K} ξ_K, so that
    Σ ξ_K m^{-2K} T^{μ…} p_μ… reproduces the sum on shell.
    """
    target = rest_value(job, twist)
    if not seeds:
        if max_norm(target) > XI_RESIDUAL_LIMIT:
            raise VerificationError(f"{job.name}: non-zero rest value but no invariant seeds")
        return XiTable(twist, {}, 0.0)
    basis = np.column_stack([seed.ravel() for _, seed in seeds])
    coeffs, residual = lstsq(basis, target.ravel())
    relative = residual / max(1.0, float(np.linalg.norm(target)))
    if relative > XI_RESIDUAL_LIMIT:
        raise VerificationError(
            f"{job.name}: rest-frame sum is not spanned by the seeds (residual {relative:.3e})",
            {"residual": relative},
        )
    values = {
        K: complex(phase(K.twice) * c) for (K, _), c in zip(seeds, coeffs)
    }
    return XiTable(twist, values, relative)


def tensor_polynomial(T: SymTensorMatrix, xi: complex, m: float) -> MatrixPolynomial:
    """ξ m^{-2K} T^{μ…} p_μ… expanded into monomials of contravariant p"""
    terms = {}
    scale = xi * m ** (-T.rank)
    for index in sorted_indices(T.rank):
        exp = [0, 0, 0, 0]
        sign = 1.0
        for nu in index:
            exp[nu] += 1
            sign *= METRIC[nu, nu]
        terms[tuple(exp)] = scale * multiplicity(index) * sign * T.components[index]
    return MatrixPolynomial(T.dims, terms)


def expected_parity(job: SpinSumJob, twist: TwistKind) -> int:
    """(-1)^{2A+2D} for spin sums, (-1)^{2A+2C} for twisted sums"""
    if job.repL.label is None or job.repR.label is None:
        raise DomainError(f"{job.name}: parity needs labeled representations")
    A, _ = job.repL.label
    C, D = job.repR.label
    return phase(A.twice, D.twice) if twist is TwistKind.HERMITIAN else phase(A.twice, C.twice)


def degree_bounds(job: SpinSumJob, twist: TwistKind) -> Tuple[int, int]:
    """Allowed total degrees (even-step range) of the polynomial"""
    ks = predicted_k_range(job.repL.label, job.repR.label, twist)
    if not ks:
        return (0, -1)
    return (ks[0].twice, ks[-1].twice)


@dataclass(frozen=True, eq=False)
class SpinSumPolynomial:
    job: SpinSumJob
    twist: TwistKind
    polynomial: MatrixPolynomial
    xi: XiTable
    tensors: List[SymTensorMatrix]
    onshell_defect: float
    parity_defect: float
    degrees: Tuple[int, ...]
    checks: Dict[str, float] = field(default_factory=dict)


def spin_sum_polynomial(
    job: SpinSumJob,
    twist: TwistKind,
    tensors: Optional[Sequence[SymTensorMatrix]] = None,
    samples: int = 20,
    rng_seed: int = 42,
    tol: Tolerance = Tolerance(abs=1e-8, rel=1e-8),
) -> SpinSumPolynomial:
    """
    Polynomial form of the (twisted) spin sum, verified against direct
    evaluation on shell, against the parity theorem and, for labeled reps,
    against the degree bounds.
    """
    if tensors is None:
        tensors = build_all_T(job.repL, job.repR, twist, rng_seed=rng_seed)
    tensors = list(tensors)
    seeds = [(T.K, T[(0,) * T.rank]) for T in tensors]
    xi = xi_extract(job, twist, seeds)

    poly = MatrixPolynomial.zero((job.repL.dim, job.repR.dim))
    for T in tensors:
        poly = poly + tensor_polynomial(T, xi.values[T.K], job.m)
    poly = poly.pruned()

    rng = np.random.default_rng(rng_seed)
    worst = 0.0
    for _ in range(samples):
        p = random_on_shell(rng, job.m)
        direct = direct_sum(job, twist, p)
        worst = max(worst, max_norm(poly_eval(poly, p) - direct) / max(1.0, max_norm(direct)))

    problems = {}
    if worst > tol.bound(1.0):
        problems["onshell_defect"] = worst
    parity = 0.0
    if job.repL.label is not None and job.repR.label is not None:
        parity = poly_parity_defect(poly, expected_parity(job, twist))
        if parity > 0.0:
            problems["parity_defect"] = parity
        low, high = degree_bounds(job, twist)
        outside = [d for d in poly.degrees() if not low <= d <= high]
        if outside:
            problems["degree_violation"] = float(max(outside))
    if problems:
        raise VerificationError(
            f"{job.name} ({twist.value}) polynomial failed: {problems}", problems
        )
    logger.info("Polynomial for %s (%s): ξ=%s", job.name, twist.value, xi.values)
    return SpinSumPolynomial(
        job=job,
        twist=twist,
        polynomial=poly,
        xi=xi,
        tensors=tensors,
        onshell_defect=worst,
        parity_defect=parity,
        degrees=poly.degrees(),
    )


def omega(C: HalfIntLike, D: HalfIntLike) -> CMatrix:
    """Permutation V^C⊗V^D → V^D⊗V^C, e_{c,d} ↦ e_{d,c}"""
    C, D = HalfInt.of(C), HalfInt.of(D)
    if C.twice < 0 or D.twice < 0:
        raise DomainError(f"Labels must be non-negative, got ({C},{D})")
    dc, dd = C.dim, D.dim
    W = np.zeros((dc * dd, dc * dd), dtype=np.complex128)
    for c in range(dc):
        for d in range(dd):
            W[d * dc + c, c * dd + d] = 1.0
    return W


@dataclass(frozen=True)
class TwistRelation:
    residual: float
    epsilon: complex
    u_relation_defect: float
    omega_intertwining_defect: float

    def to_json(self) -> dict:
        return {
            "residual": self.residual,
            "epsilon": complex_to_json(self.epsilon),
            "u_relation_defect": self.u_relation_defect,
            "omega_intertwining_defect": self.omega_intertwining_defect,
        }


def swap_phase(cs_cd: CoefficientSet, cs_dc: CoefficientSet) -> Tuple[complex, float]:
    """ε with Ω_{CD} u^{CD}(0) = ε u^{DC}(0), and the defect of that relation"""
    C, D = cs_cd.rep.label
    moved = omega(C, D) @ cs_cd.u0
    overlap = np.vdot(cs_dc.u0.ravel(), moved.ravel()) / cs_dc.u0.shape[1]
    epsilon = complex(overlap / abs(overlap)) if abs(overlap) > 0 else 1.0 + 0.0j
    return epsilon, max_norm(moved - epsilon * cs_dc.u0)


def twist_relation_report(
    job_ab_dc: SpinSumJob,
    job_ab_cd: SpinSumJob,
    momenta: Sequence[FourVector],
    words: Sequence[LorentzWord] = (),
) -> TwistRelation:
    """Check 2m Π^{AB,DC}(p) = ε π^{AB,CD}(p) Ω_{CD}† over the given momenta"""
    for job in (job_ab_dc, job_ab_cd):
        if not (is_standard_ab(job.repL) and is_standard_ab(job.repR)):
            raise DomainError("The Ω relation needs standard-basis (A,B) representations")
    if job_ab_dc.j != job_ab_cd.j or job_ab_dc.m != job_ab_cd.m:
        raise DomainError("Both jobs must share j and m")
    if job_ab_dc.repL.label != job_ab_cd.repL.label:
        raise DomainError("Both jobs must share the left (A,B) representation")
    C, D = job_ab_cd.repR.label
    if job_ab_dc.repR.label != (D, C):
        raise DomainError(f"Right representation of the twisted job must be ({D},{C})")

    W = omega(C, D)
    epsilon, u_defect = swap_phase(job_ab_cd.csR, job_ab_dc.csR)
    m = job_ab_cd.m
    worst = 0.0
    for p in momenta:
        lhs = 2.0 * m * twisted_spin_sum(job_ab_dc, p)
        rhs = epsilon * spin_sum(job_ab_cd, p) @ np.conj(W).T
        worst = max(worst, max_norm(lhs - rhs) / max(1.0, max_norm(rhs)))

    intertwining = 0.0
    for w in words:
        D_cd = rep_matrix(job_ab_cd.repR, w)
        D_dc = rep_matrix(job_ab_dc.repR, w)
        intertwining = max(intertwining, max_norm(np.conj(np.linalg.inv(D_dc)).T @ W - W @ D_cd))
    return TwistRelation(worst, epsilon, u_defect, intertwining)


def twist_relation_residual(
    job_ab_dc: SpinSumJob,
    job_ab_cd: SpinSumJob,
    p: FourVector,
    words: Sequence[LorentzWord] = (),
) -> float:
    """Worst of the spin-sum relation, the rest-spinor relation and the Ω intertwining"""
    require_on_shell(p, job_ab_cd.m)
    report = twist_relation_report(job_ab_dc, job_ab_cd, [p], words)
    return max(report.residual, report.u_relation_defect, report.omega_intertwining_defect)


def random_relation_inputs(
    rng: np.random.Generator, m: float, count: int
) -> Tuple[List[FourVector], List[LorentzWord]]:
    momenta = [random_on_shell(rng, m) for _ in range(count)]
    words = [random_word(rng) for _ in range(count)]
    return momenta, words
