"""
Field Physics
=============
Field equations ψ^{AB} = Π^{AB,CD}(-i∂) ψ^{CD} checked at the level of
coefficient functions, the Weyl/Dirac and Proca special cases, and the
spin-statistics phase analysis of the equal-time (anti)commutator.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, VerificationError
from .gamma import PAULI, TwistKind, pauli_tensor, sigma_dot
from .halfint import HalfInt, HalfIntLike, in_triangle, phase
from .intertwiners import CoefficientSet, build_coefficients, u_at, v_at
from .linalg import CMatrix, Tolerance, max_norm
from .lorentz import (
    METRIC,
    FieldRep,
    FourVector,
    ab_rep,
    is_standard_ab,
    random_on_shell,
    vector_field_rep,
)
from .polynomial import (
    Exponent,
    MatrixPolynomial,
    poly_eval,
    poly_reduce_p0,
    reflected,
)
from .spin_sums import (
    SpinSumJob,
    make_job,
    omega,
    spin_sum,
    spin_sum_polynomial,
    swap_phase,
)

logger = logging.getLogger(__name__)

FIELD_TOLERANCE = Tolerance(abs=1e-8, rel=1e-8)


def _label_text(rep: FieldRep) -> str:
    if rep.label is None:
        return rep.name
    return f"({rep.label[0]},{rep.label[1]})"


@dataclass(frozen=True, eq=False)
class FieldEquationReport:
    left: str
    right: str
    j: HalfInt
    m: float
    operator: MatrixPolynomial
    u_residual: float
    v_residual: float
    v_phase: int
    phase_product: int
    degrees: tuple
    rendering: List[str]
    reduced_operator: Optional[MatrixPolynomial] = None
    notes: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        limit = FIELD_TOLERANCE.bound(1.0)
        return self.u_residual <= limit and self.v_residual <= limit and self.phase_product == 1

    def to_json(self) -> dict:
        return {
            "left": self.left,
            "right": self.right,
            "j": self.j.to_json(),
            "m": self.m,
            "operator": self.operator.to_json(),
            "reduced_operator": None if self.reduced_operator is None else self.reduced_operator.to_json(),
            "u_residual": self.u_residual,
            "v_residual": self.v_residual,
            "v_phase": self.v_phase,
            "phase_product": self.phase_product,
            "degrees": list(self.degrees),
            "rendering": list(self.rendering),
            "notes": dict(sorted(self.notes.items())),
            "passed": self.passed,
        }


_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
_PAULI_NAMES = ("", "σ¹", "σ²", "σ³")
RENDER_TOLERANCE = 1e-9


def _number_text(z: complex) -> str:
    re = round(z.real, 9) + 0.0
    im = round(z.imag, 9) + 0.0
    if im == 0:
        return f"{re:g}"
    if re == 0:
        return {1.0: "i", -1.0: "-i"}.get(im, f"{im:g}i")
    return f"({re:g}{im:+g}i)"


def _scaled(z: complex, body: str) -> str:
    """z·body with unit factors dropped"""
    text = _number_text(z)
    if not body:
        return text
    if text == "1":
        return body
    if text == "-1":
        return f"-{body}"
    return f"{text} {body}"


def _mass_text(power: int) -> str:
    if power == 0:
        return ""
    return "m" if power == 1 else "m" + str(power).translate(_SUPERSCRIPT)


def _derivative_text(exp: Exponent) -> str:
    parts = []
    for mu, e in enumerate(exp):
        symbol = "∂" + str(mu).translate(_SUPERSCRIPT)
        if e == 1:
            parts.append(symbol)
        elif e > 1:
            parts.append(f"({symbol}){str(e).translate(_SUPERSCRIPT)}")
    return " ".join(parts)


def _matrix_factor(M: CMatrix) -> Tuple[complex, str]:
    """Split M into a scalar and a symbolic matrix ("" for the identity)"""
    scale = max_norm(M)
    cut = RENDER_TOLERANCE * max(1.0, scale)
    n = M.shape[0]
    if M.shape[0] == M.shape[1] and max_norm(M - M[0, 0] * np.eye(n)) <= cut:
        return complex(M[0, 0]), ""
    if M.shape == (2, 2):
        parts = [(complex(np.trace(PAULI[k] @ M)) / 2.0, _PAULI_NAMES[k]) for k in range(4)]
        parts = [(a, name) for a, name in parts if abs(a) > cut]
        if len(parts) == 1:
            return parts[0]
        return 1.0, "(" + " + ".join(_scaled(a, name) for a, name in parts).replace("+ -", "- ") + ")"
    if M.shape[0] == M.shape[1] and max_norm(M - np.diag(np.diag(M))) <= cut:
        return 1.0, "diag(" + ", ".join(_number_text(z) for z in np.diag(M)) + ")"
    entries = [
        f"({r},{c}): {_number_text(M[r, c])}"
        for r, c in zip(*np.nonzero(np.abs(M) > cut))
    ]
    return 1.0, "{" + ", ".join(entries) + "}"


def _sigma_contraction(coeffs: Dict[int, CMatrix]) -> Optional[Tuple[complex, str]]:
    """λ and the name of X when Σ_μ C_μ p^μ = λ p_μ X^μ for X = σ or σ̄"""
    for bar, name in ((False, "σ^μ"), (True, "σ̄^μ")):
        T = pauli_tensor(bar)
        basis = [METRIC[mu, mu] * T[(mu,)] for mu in range(4)]
        target = [coeffs.get(mu, np.zeros((2, 2), dtype=np.complex128)) for mu in range(4)]
        lam = sum(np.vdot(b, c) for b, c in zip(basis, target)) / sum(np.vdot(b, b) for b in basis)
        defect = max(max_norm(c - lam * b) for b, c in zip(basis, target))
        if defect <= RENDER_TOLERANCE * max(1.0, max(max_norm(c) for c in target)):
            return complex(lam), f"{name} ∂_μ"
    return None


def render_operator(poly: MatrixPolynomial, left: str, right: str, m: float = 1.0) -> str:
    """
    Position-space form of left = Π(p) right with p^μ → -i∂^μ, multiplied
    through by m^d (d the top degree) so every coefficient is a pure number.
    """
    terms = {e: c for e, c in poly.terms.items() if max_norm(c) > RENDER_TOLERANCE}
    if not terms:
        return f"{left} = 0"
    top = max(sum(e) for e in terms)
    lhs = " ".join(filter(None, [_mass_text(top), left]))

    rendered = []
    for degree in sorted({sum(e) for e in terms}, reverse=True):
        group = {e: c for e, c in terms.items() if sum(e) == degree}
        weight = (-1j) ** degree * m ** degree
        mass = _mass_text(top - degree)
        if degree == 1 and poly.dims == (2, 2):
            contraction = _sigma_contraction({e.index(1): c for e, c in group.items()})
            if contraction is not None:
                lam, body = contraction
                rendered.append(_scaled(weight * lam, " ".join(filter(None, [mass, body]))))
                continue
        for exp in sorted(group, reverse=True):
            scalar, matrix = _matrix_factor(group[exp])
            z = weight * scalar
            if abs(round(z.real, 9)) + abs(round(z.imag, 9)) == 0:
                continue
            body = " ".join(filter(None, [mass, matrix, _derivative_text(exp)]))
            rendered.append(_scaled(z, body))

    if not rendered:
        return f"{left} = 0"
    if rendered in (["1"], ["-1"]):
        return f"{lhs} = {rendered[0][:-1]}{right}"
    if len(rendered) == 1:
        return f"{lhs} = {rendered[0]} {right}"
    body = " + ".join(rendered).replace("+ -", "- ")
    return f"{lhs} = ({body}) {right}"


def verify_field_equation(
    csAB: CoefficientSet,
    csCD: CoefficientSet,
    samples: int = 20,
    seed: int = 42,
    momenta: Optional[Sequence[FourVector]] = None,
    tol: Tolerance = FIELD_TOLERANCE,
) -> FieldEquationReport:
    """
    u^{AB}(p) = Π(p) u^{CD}(p) and, for the negative-frequency part,
    v^{AB}(p) = (-1)^{2B+2D} Π(-p) v^{CD}(p), with Π the twisted spin-sum
    polynomial. Π(-p) = (-1)^{2A+2C} Π(p), so the two phases cancel.
    """
    if csAB.j != csCD.j:
        raise DomainError(f"Spins differ: {csAB.j} vs {csCD.j}")
    if csAB.m != csCD.m:
        raise DomainError(f"Masses differ: {csAB.m} vs {csCD.m}")
    if csAB.rep.label is None or csCD.rep.label is None:
        raise DomainError("Field equations need labeled representations")
    job = SpinSumJob(csAB.rep, csCD.rep, csAB.j, csAB.m, csAB, csCD)
    result = spin_sum_polynomial(job, TwistKind.INVERSE, rng_seed=seed, tol=tol)
    operator = result.polynomial
    negative = reflected(operator)

    A, B = csAB.rep.label
    C, D = csCD.rep.label
    v_phase = phase(B.twice, D.twice)
    phase_product = phase(A.twice, C.twice) * v_phase

    if momenta is None:
        rng = np.random.default_rng(seed)
        momenta = [random_on_shell(rng, csAB.m) for _ in range(samples)]
    u_worst = 0.0
    v_worst = 0.0
    for p in momenta:
        uA = u_at(csAB, p)
        vA = v_at(csAB, p)
        u_worst = max(u_worst, max_norm(uA - poly_eval(operator, p) @ u_at(csCD, p)) / max(1.0, max_norm(uA)))
        v_worst = max(
            v_worst,
            max_norm(vA - v_phase * poly_eval(negative, p) @ v_at(csCD, p)) / max(1.0, max_norm(vA)),
        )
    left, right = _label_text(csAB.rep), _label_text(csCD.rep)
    report = FieldEquationReport(
        left=left,
        right=right,
        j=csAB.j,
        m=csAB.m,
        operator=operator,
        u_residual=u_worst,
        v_residual=v_worst,
        v_phase=v_phase,
        phase_product=phase_product,
        degrees=operator.degrees(),
        rendering=[render_operator(operator, f"ψ{left}", f"ψ{right}", csAB.m)],
        reduced_operator=poly_reduce_p0(operator, csAB.m),
        notes={f"xi[{K}]": abs(v) for K, v in result.xi.values.items()},
    )
    if not report.passed:
        raise VerificationError(
            f"Field equation {left} ← {right} failed "
            f"(u {u_worst:.3e}, v {v_worst:.3e}, phase product {phase_product})",
            {"u_residual": u_worst, "v_residual": v_worst, "phase_product": phase_product},
        )
    logger.info("Field equation %s ← %s holds (u %.2e, v %.2e)", left, right, u_worst, v_worst)
    return report


def verify_field_equation_spin_sum_form(
    csAB: CoefficientSet,
    csCD: CoefficientSet,
    samples: int = 20,
    seed: int = 42,
) -> float:
    """
    Largest defect of u^{AB}(p) = (ε/2m) π^{AB,DC}(p) Ω_{DC}† u^{CD}(p), where
    Ω_{DC} u^{DC}(0) = ε u^{CD}(0).
    """
    if not (is_standard_ab(csAB.rep) and is_standard_ab(csCD.rep)):
        raise DomainError("The spin-sum form of the field equation needs standard (A,B) reps")
    if csAB.j != csCD.j or csAB.m != csCD.m:
        raise DomainError("Both coefficient sets must share j and m")
    C, D = csCD.rep.label
    cs_dc = build_coefficients(ab_rep(D, C), csAB.j, csAB.m)
    job_ab_dc = SpinSumJob(csAB.rep, cs_dc.rep, csAB.j, csAB.m, csAB, cs_dc)
    epsilon, _ = swap_phase(cs_dc, csCD)
    W = omega(D, C)
    m = csAB.m
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        p = random_on_shell(rng, m)
        uA = u_at(csAB, p)
        rhs = (epsilon / (2.0 * m)) * spin_sum(job_ab_dc, p) @ np.conj(W).T @ u_at(csCD, p)
        worst = max(worst, max_norm(uA - rhs) / max(1.0, max_norm(uA)))
    return worst


@dataclass(frozen=True)
class WeylReport:
    m: float
    residuals: Dict[str, float]
    rendering: List[str]

    @property
    def passed(self) -> bool:
        return all(v <= FIELD_TOLERANCE.bound(1.0) for v in self.residuals.values())

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "residuals": dict(sorted(self.residuals.items())),
            "rendering": list(self.rendering),
            "passed": self.passed,
        }


def weyl_pair_report(m: float = 1.0, samples: int = 20, seed: int = 42) -> WeylReport:
    """Both massive Weyl equations plus the two trivial lines of the Dirac table"""
    phi = build_coefficients(ab_rep(HalfInt(1), 0), HalfInt(1), m)
    chi = build_coefficients(ab_rep(0, HalfInt(1)), HalfInt(1), m)
    rng = np.random.default_rng(seed)
    momenta = [random_on_shell(rng, m) for _ in range(samples)]

    direct = {"m u_φ + p_μσ^μ u_χ": 0.0, "m u_χ + p_μσ̄^μ u_φ": 0.0}
    for p in momenta:
        pl = p.lowered()
        direct["m u_φ + p_μσ^μ u_χ"] = max(
            direct["m u_φ + p_μσ^μ u_χ"],
            max_norm(m * u_at(phi, p) + sigma_dot(pl) @ u_at(chi, p)),
        )
        direct["m u_χ + p_μσ̄^μ u_φ"] = max(
            direct["m u_χ + p_μσ̄^μ u_φ"],
            max_norm(m * u_at(chi, p) + sigma_dot(pl, bar=True) @ u_at(phi, p)),
        )

    residuals = dict(direct)
    rendering = []
    for (left, lname), (right, rname) in (
        ((phi, "φ"), (chi, "χ")),
        ((chi, "χ"), (phi, "φ")),
        ((phi, "φ"), (phi, "φ")),
        ((chi, "χ"), (chi, "χ")),
    ):
        report = verify_field_equation(left, right, momenta=momenta, seed=seed)
        line = render_operator(report.operator, lname, rname, m)
        rendering.append(line)
        residuals[line] = max(report.u_residual, report.v_residual)
    result = WeylReport(m=m, residuals=residuals, rendering=rendering)
    if not result.passed:
        raise VerificationError("Weyl equations failed", residuals)
    return result


def dirac_rest_coefficients() -> CMatrix:
    """u^{1/2,0}(0) stacked over u^{0,1/2}(0)"""
    phi = build_coefficients(ab_rep(HalfInt(1), 0), HalfInt(1), 1.0)
    chi = build_coefficients(ab_rep(0, HalfInt(1)), HalfInt(1), 1.0)
    return np.vstack([phi.u0, chi.u0])


def dirac_block_spin_sum(m: float, p: FourVector) -> CMatrix:
    """The four (1/2,0)/(0,1/2) spin sums as one 4×4 block matrix"""
    reps = (ab_rep(HalfInt(1), 0), ab_rep(0, HalfInt(1)))
    blocks = [[spin_sum(make_job(L, R, HalfInt(1), m), p) for R in reps] for L in reps]
    return np.block(blocks)


def dirac_block_expected(m: float, p: FourVector) -> CMatrix:
    """2[[-p_μσ^μ, mI], [mI, -p_μσ̄^μ]]"""
    pl = p.lowered()
    eye = np.eye(2, dtype=np.complex128)
    return 2.0 * np.block([
        [-sigma_dot(pl), m * eye],
        [m * eye, -sigma_dot(pl, bar=True)],
    ])


PROCA_CHAIN = (
    "∂^ν ∂^μ B_μ = 0",
    "∂^μ B_μ = 0",
    "∂_μ(∂^μ B^ν − ∂^ν B^μ) − m² B^ν = 0",
    "Klein–Gordon: p·p = −m² (mass-shell condition on the four-momentum)",
)


def proca_report(m: float = 1.0, samples: int = 20, seed: int = 42) -> FieldEquationReport:
    """Vector-representation pipeline ending in the Proca equation"""
    if not m > 0:
        raise DomainError(f"Mass must be positive, got {m}")
    vec = vector_field_rep()
    cs = build_coefficients(vec, HalfInt(2), m)
    job = make_job(vec, vec, HalfInt(2), m)

    rest = spin_sum(job, FourVector.at_rest(m))
    rest_defect = max_norm(rest - 2.0 * m * np.diag([0.0, 1.0, 1.0, 1.0]))
    time_row = max_norm(cs.u0[0])

    rng = np.random.default_rng(seed)
    momenta = [random_on_shell(rng, m) for _ in range(samples)]
    transversality = 0.0
    divergence = 0.0
    for p in momenta:
        contracted = p.lowered() @ u_at(cs, p)
        transversality = max(transversality, max_norm(contracted))
        divergence = max(divergence, max_norm(np.outer(p.array, contracted)))

    hermitian = spin_sum_polynomial(job, TwistKind.HERMITIAN, rng_seed=seed)
    report = verify_field_equation(cs, cs, momenta=momenta, seed=seed)
    notes = dict(report.notes)
    notes.update({
        "rest_spin_sum_defect": rest_defect,
        "rest_time_row": time_row,
        "transversality": transversality,
        "double_divergence": divergence,
        "spin_sum_onshell_defect": hermitian.onshell_defect,
    })
    limit = 1e-9
    failures = {k: v for k, v in notes.items()
                if k in ("rest_spin_sum_defect", "rest_time_row", "transversality") and v > limit}
    if failures:
        raise VerificationError(f"Proca checks failed: {failures}", failures)
    return FieldEquationReport(
        left=report.left,
        right=report.right,
        j=report.j,
        m=m,
        operator=report.operator,
        u_residual=report.u_residual,
        v_residual=report.v_residual,
        v_phase=report.v_phase,
        phase_product=report.phase_product,
        degrees=report.degrees,
        rendering=report.rendering + list(PROCA_CHAIN),
        reduced_operator=report.reduced_operator,
        notes=notes,
    )


@dataclass(frozen=True)
class StatisticsReport:
    A: HalfInt
    B: HalfInt
    j: HalfInt
    required_sign: int
    statistics: str
    kappa_lambda_constraint: str

    def to_json(self) -> dict:
        return {
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "j": self.j.to_json(),
            "required_sign": self.required_sign,
            "bracket": "commutator" if self.required_sign == 1 else "anticommutator",
            "statistics": self.statistics,
            "kappa_lambda_constraint": self.kappa_lambda_constraint,
        }


def statistics_for(A: HalfIntLike, B: HalfIntLike, j: HalfIntLike) -> StatisticsReport:
    """Sign s with s·(-1)^{2A+2B} = +1; -1 means anticommutator"""
    A, B, j = HalfInt.of(A), HalfInt.of(B), HalfInt.of(j)
    if not in_triangle(A, B, j):
        raise DomainError(f"Spin {j} is not contained in ({A},{B})")
    sign = phase(A.twice, B.twice)
    statistics = "Fermi" if j.twice % 2 else "Bose"
    lam = phase(B.twice)
    constraint = (
        f"λ^({A},{B}) = (−1)^{{2B}} κ^({A},{B}) c = "
        f"{'+' if lam == 1 else '−'}κ^({A},{B}), c = 1"
    )
    return StatisticsReport(A, B, j, sign, statistics, constraint)


@dataclass(frozen=True)
class CausalityReport:
    left: tuple
    right: tuple
    statistics_sign: int
    p_coefficient: int
    q_coefficient: int
    cross_ratio_holds: bool

    @property
    def satisfied(self) -> bool:
        return self.p_coefficient == 0 and self.cross_ratio_holds

    def to_json(self) -> dict:
        return {
            "left": [h.to_json() for h in self.left],
            "right": [h.to_json() for h in self.right],
            "statistics_sign": self.statistics_sign,
            "p_coefficient": self.p_coefficient,
            "q_coefficient": self.q_coefficient,
            "cross_ratio_holds": self.cross_ratio_holds,
            "satisfied": self.satisfied,
        }


def causality_constraint(
    A: HalfIntLike, B: HalfIntLike, C: HalfIntLike, D: HalfIntLike, statistics_sign: int
) -> CausalityReport:
    """
    Exact phase bookkeeping of the equal-time bracket with κ = 1 and
    λ = (-1)^{2B} κ. The P-part enters with κκ* - s(-1)^{2A+2D} λλ*, the
    Q-part with κκ* + s(-1)^{2A+2D} λλ*.
    """
    A, B, C, D = (HalfInt.of(x) for x in (A, B, C, D))
    if statistics_sign not in (1, -1):
        raise DomainError(f"Statistics sign must be ±1, got {statistics_sign}")
    if (A.twice + B.twice) % 2 != (C.twice + D.twice) % 2:
        raise DomainError(f"({A},{B}) and ({C},{D}) cannot share a particle spin")
    kappa_ab = kappa_cd = 1
    lambda_ab = phase(B.twice) * kappa_ab
    lambda_cd = phase(D.twice) * kappa_cd
    cross = phase(A.twice, D.twice) * lambda_ab * lambda_cd
    p_coefficient = kappa_ab * kappa_cd - statistics_sign * cross
    q_coefficient = kappa_ab * kappa_cd + statistics_sign * cross
    # κ^{AB}/κ^{CD} = (-1)^{2A-2C} λ^{AB}/λ^{CD}; all factors are ±1
    ratio_holds = kappa_ab * kappa_cd == phase(A.twice, -C.twice) * lambda_ab * lambda_cd
    return CausalityReport(
        left=(A, B),
        right=(C, D),
        statistics_sign=statistics_sign,
        p_coefficient=p_coefficient,
        q_coefficient=q_coefficient,
        cross_ratio_holds=ratio_holds,
    )
