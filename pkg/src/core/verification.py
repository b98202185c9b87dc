"""
Verification Suite
==================
Runs the acceptance and property checks over the standard representation
set and collects them into a VerificationReport. Core operations raise; each
check is wrapped so a failure becomes a record carrying its inputs.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .. import __version__
from .errors import SpinSumError
from .field_physics import (
    causality_constraint,
    dirac_block_expected,
    dirac_block_spin_sum,
    proca_report,
    statistics_for,
    verify_field_equation,
    verify_field_equation_spin_sum_form,
    weyl_pair_report,
)
from .gamma import (
    TwistKind,
    covariance_defect as tensor_covariance_defect,
    invariant_seeds,
    lie_covariance_defect,
    pauli_tensor,
    predicted_k_range,
    trace_defect,
)
from .halfint import HalfInt, in_triangle, phase, triangle
from .intertwiners import build_coefficients, intertwining_defect
from .linalg import Tolerance, global_phase_distance, lstsq, max_norm
from .lorentz import (
    METRIC,
    FieldRep,
    FourVector,
    LorentzWord,
    ab_rep,
    random_on_shell,
    random_unit_vector,
    random_word,
    vector_field_rep,
    vector_matrix,
)
from .polynomial import poly_parity_defect, poly_pq_split, poly_reduce_p0
from .spin_sums import (
    SpinSumJob,
    covariance_defect as sum_covariance_defect,
    expected_parity,
    make_job,
    spin_sum_polynomial,
    twist_relation_report,
    uv_defect,
)
from .su2 import clebsch_gordan, extract_multiplet
from .tensor_cache import TensorCache

logger = logging.getLogger(__name__)

REPORT_SCHEMA = "spinsum-report-v1"
SUITES = ("gamma", "spinsum", "fieldeq", "statistics")

STANDARD_LABELS: Tuple[Tuple[HalfInt, HalfInt], ...] = tuple(
    (HalfInt(a), HalfInt(b))
    for a, b in ((0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (3, 0))
)

# a metric with the time sign flipped, used as a negative control
FLIPPED_TIME_METRIC = np.eye(4)


@dataclass
class CheckRecord:
    name: str
    anchor: str
    status: str
    residual: float
    limit: float
    runtime: float = 0.0
    inputs: Dict = field(default_factory=dict)
    message: str = ""

    def to_json(self, include_timing: bool = False) -> dict:
        payload = {
            "name": self.name,
            "anchor": self.anchor,
            "status": self.status,
            "residual": self.residual if np.isfinite(self.residual) else None,
            "limit": self.limit,
            "inputs": self.inputs,
            "message": self.message,
        }
        if include_timing:
            payload["runtime"] = self.runtime
        return payload


@dataclass
class VerificationReport:
    version: str
    config: Dict
    checks: List[CheckRecord]

    @property
    def passed(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    @property
    def failures(self) -> List[CheckRecord]:
        return [c for c in self.checks if c.status != "pass"]

    def to_json(self, include_timing: bool = False) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "version": self.version,
            "config": self.config,
            "passed": self.passed,
            "summary": {
                "total": len(self.checks),
                "failed": len(self.failures),
            },
            "checks": [c.to_json(include_timing) for c in self.checks],
        }


def label_text(label: Tuple[HalfInt, HalfInt]) -> str:
    return f"({label[0]},{label[1]})"


def standard_jobs() -> Iterable[Tuple[Tuple[HalfInt, HalfInt], Tuple[HalfInt, HalfInt], HalfInt]]:
    """Every (left, right, j) with j contained in both standard labels"""
    for left in STANDARD_LABELS:
        for right in STANDARD_LABELS:
            for j in triangle(*left):
                if in_triangle(right[0], right[1], j):
                    yield left, right, j


class VerificationSuite:
    """
    Runs named suites. `metric` replaces the metric in the σ-covariance
    check only, so a wrong signature shows up as a reported failure.
    """

    def __init__(self, config, cache: Optional[TensorCache] = None, metric: np.ndarray = METRIC):
        self.config = config
        self.tol: Tolerance = config.tol
        self.samples = config.samples
        self.cache = cache or TensorCache(str(config.cache_dir), rng_seed=config.seed)
        self.metric = metric
        self.records: List[CheckRecord] = []

    def rng(self, salt: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.config.seed, salt])

    @property
    def limit(self) -> float:
        return self.tol.bound(1.0)

    def check(self, name: str, anchor: str, fn: Callable[[], float], limit: Optional[float] = None,
              inputs: Optional[Dict] = None):
        limit = self.limit if limit is None else limit
        inputs = dict(inputs or {})
        inputs.setdefault("seed", self.config.seed)
        started = time.perf_counter()
        try:
            residual = float(fn())
            status = "pass" if residual <= limit else "fail"
            message = "" if status == "pass" else f"residual {residual:.3e} exceeds {limit:.1e}"
        except SpinSumError as e:
            residual = float("inf")
            status = "error"
            message = str(e)
            inputs.update({k: v for k, v in e.context.items() if isinstance(v, (int, float, str))})
        except (np.linalg.LinAlgError, ValueError) as e:
            residual = float("inf")
            status = "error"
            message = f"{type(e).__name__}: {e}"
        runtime = time.perf_counter() - started
        if status != "pass":
            logger.warning("Check %s %s: %s", name, status, message)
        self.records.append(CheckRecord(name, anchor, status, residual, limit, runtime, inputs, message))

    def run(self, suites: Sequence[str] = SUITES) -> VerificationReport:
        self.records = []
        for suite in suites:
            if suite not in SUITES:
                raise ValueError(f"Unknown suite {suite!r}")
            logger.info("Running %s suite", suite)
            getattr(self, f"run_{suite}")()
        if "gamma" in suites or "spinsum" in suites:
            self.check(
                "cache.revalidate",
                "cached tensors match recomputation",
                lambda: (self.cache.revalidate(self.rng(99)) or {"defect": 0.0})["defect"],
            )
        checks = sorted(self.records, key=lambda r: r.name)
        return VerificationReport(__version__, self.config.to_json(), checks)

    # gamma-tensors

    def run_gamma(self):
        self.check_pauli()
        self.check_sigma_covariance()
        self.check("gamma.vector_k1", "vector K=1 tensor is the symmetric traceless ηη", self._vector_tensor_defect)
        self.check_tensors()

    def check_pauli(self):
        half = HalfInt(1)
        for bar, label in ((False, (half, HalfInt(0))), (True, (HalfInt(0), half))):
            rep = ab_rep(*label)
            name = "gamma.pauli_bar" if bar else "gamma.pauli"

            def pauli_recovery(rep=rep, bar=bar):
                T = self.tensors(rep, rep, TwistKind.HERMITIAN)[0]
                ref = pauli_tensor(bar)
                return max(max_norm(T[(mu,)] - ref[(mu,)]) for mu in range(4))

            self.check(name, "Pauli matrices are the T matrices", pauli_recovery, limit=1e-9)

    def check_sigma_covariance(self):
        rng = self.rng(1)
        words = [random_word(rng) for _ in range(50)]
        weyl = ab_rep(HalfInt(1), 0)
        self.check(
            "gamma.sigma_covariance",
            "D σ^μ D† = Λ_ν^μ σ^ν",
            lambda: max(tensor_covariance_defect(pauli_tensor(), weyl, weyl, w, self.metric) for w in words),
            inputs={"words": len(words)},
        )

    def check_tensors(self):
        reps = [ab_rep(*label) for label in STANDARD_LABELS]
        for repL in reps:
            for repR in reps:
                for twist in TwistKind:
                    tag = f"{repL.key};{repR.key};{twist.value}"
                    self.check(
                        f"gamma.k_range[{tag}]",
                        "seed K values fill the predicted range",
                        lambda L=repL, R=repR, t=twist: self._k_range_defect(L, R, t),
                        limit=0.0,
                    )
                    if predicted_k_range(repL.label, repR.label, twist):
                        self.check(
                            f"gamma.tensor[{tag}]",
                            "T symmetric, traceless and covariant",
                            lambda L=repL, R=repR, t=twist: self._tensor_defect(L, R, t),
                        )
        vec = vector_field_rep()
        for twist in TwistKind:
            self.check(
                f"gamma.tensor[vector;vector;{twist.value}]",
                "T symmetric, traceless and covariant",
                lambda t=twist: self._tensor_defect(vec, vec, t),
            )

    def tensors(self, repL: FieldRep, repR: FieldRep, twist: TwistKind):
        return self.cache.get_tensors(repL, repR, twist)

    def _k_range_defect(self, repL: FieldRep, repR: FieldRep, twist: TwistKind) -> float:
        found = [K for K, _ in invariant_seeds(repL, repR, twist)]
        expected = predicted_k_range(repL.label, repR.label, twist)
        return 0.0 if found == expected else 1.0

    def _tensor_defect(self, repL: FieldRep, repR: FieldRep, twist: TwistKind) -> float:
        worst = 0.0
        for T in self.tensors(repL, repR, twist):
            worst = max(worst, trace_defect(T), lie_covariance_defect(T, repL, repR))
            if T.diagnostics is not None:
                worst = max(worst, T.diagnostics.covariance_defect, T.diagnostics.seed_recovery)
        return worst

    def _vector_tensor_defect(self) -> float:
        vec = vector_field_rep()
        tensors = {T.K: T for T in self.tensors(vec, vec, TwistKind.HERMITIAN)}
        T = tensors[HalfInt(2)]
        eta = METRIC
        worst = 0.0
        for mu in range(4):
            for rho in range(4):
                expected = (2.0 / 3.0) * (
                    np.outer(eta[mu], eta[rho]) + np.outer(eta[rho], eta[mu]) - 0.5 * eta[mu, rho] * eta
                )
                worst = max(worst, max_norm(T[(mu, rho)] - expected))
        return worst

    # spin sums and intertwiners

    def run_spinsum(self):
        rng = self.rng(2)
        rotations = [LorentzWord.rotation(random_unit_vector(rng), float(rng.uniform(0, 2 * np.pi)))
                     for _ in range(20)]
        reps = [ab_rep(*label) for label in STANDARD_LABELS] + [vector_field_rep()]
        for rep in reps:
            for j in triangle(*rep.label):
                tag = f"{rep.key};j={j}"
                cs = build_coefficients(rep, j, 1.0)
                self.check(
                    f"intertwiner.unitarity[{tag}]",
                    "u(0)†u(0) = I",
                    lambda cs=cs: max_norm(np.conj(cs.u0).T @ cs.u0 - np.eye(cs.u0.shape[1])),
                    limit=1e-12,
                )
                self.check(
                    f"intertwiner.rotation[{tag}]",
                    "u(0) D^j(R) = D(R) u(0) and its conjugate",
                    lambda cs=cs: max(intertwining_defect(cs, w) for w in rotations),
                    limit=1e-10,
                )
                if rep.standard_basis:
                    self.check(
                        f"su2.cg_vs_extract[{tag}]",
                        "multiplet extraction agrees with Clebsch–Gordan",
                        lambda rep=rep, j=j: global_phase_distance(
                            extract_multiplet(rep.J, j), clebsch_gordan(rep.label[0], rep.label[1], j)
                        ),
                        limit=1e-10,
                    )
        self.check("linalg.lstsq_oracle", "minimum-norm least squares", self._lstsq_oracle_defect, limit=1e-9)

        words = [random_word(rng) for _ in range(20)]
        momenta = [random_on_shell(rng, 1.0) for _ in range(20)]
        for left, right, j in standard_jobs():
            job = make_job(ab_rep(*left), ab_rep(*right), j, 1.0)
            tag = f"{label_text(left)};{label_text(right)};j={j}"
            for twist in TwistKind:
                self.check(
                    f"spinsum.covariance[{tag};{twist.value}]",
                    "S(Λp) = D^L(Λ) S(p) twist(D^R(Λ))",
                    lambda job=job, t=twist: max(
                        sum_covariance_defect(job, t, w, p) for w, p in zip(words, momenta)
                    ),
                )
                self.check(
                    f"spinsum.uv[{tag};{twist.value}]",
                    "u- and v-built sums agree",
                    lambda job=job, t=twist: max(uv_defect(job, t, p) for p in momenta),
                    limit=1e-9,
                )
                self.check(
                    f"spinsum.polynomial[{tag};{twist.value}]",
                    "polynomial form, parity theorem and P/Q split",
                    lambda job=job, t=twist: self._polynomial_defect(job, t),
                )

        self.check("spinsum.dirac_table", "Dirac block spin-sum table", self._dirac_table_defect)
        self.check("spinsum.vector_xi", "vector ξ table", self._vector_xi_defect, limit=1e-9)
        half = HalfInt(1)
        relations = [
            ((half, half), (half, half), HalfInt(0)),
            ((half, half), (half, half), HalfInt(2)),
            ((half, HalfInt(0)), (half, HalfInt(0)), half),
            ((half, HalfInt(0)), (HalfInt(0), half), half),
            ((HalfInt(2), HalfInt(0)), (HalfInt(2), HalfInt(0)), HalfInt(2)),
        ]
        rel_rng = self.rng(3)
        rel_momenta = [random_on_shell(rel_rng, 1.0) for _ in range(50)]
        rel_words = [random_word(rel_rng) for _ in range(10)]
        for ab, cd, j in relations:
            tag = f"{label_text(ab)};{label_text(cd)};j={j}"
            self.check(
                f"spinsum.omega[{tag}]",
                "2m Π^{AB,DC} = ε π^{AB,CD} Ω†",
                lambda ab=ab, cd=cd, j=j: self._omega_defect(ab, cd, j, rel_momenta, rel_words),
            )

    def _lstsq_oracle_defect(self) -> float:
        rng = self.rng(4)
        A = rng.normal(size=(20, 4)) @ rng.normal(size=(4, 6))
        B = rng.normal(size=(20, 3))
        X, _ = lstsq(A, B)
        return max_norm(X - np.linalg.pinv(A) @ B)

    def _polynomial_defect(self, job: SpinSumJob, twist: TwistKind) -> float:
        result = spin_sum_polynomial(
            job, twist, tensors=self.tensors(job.repL, job.repR, twist),
            rng_seed=self.config.seed, tol=self.tol,
        )
        sign = expected_parity(job, twist)
        P, Q = poly_pq_split(poly_reduce_p0(result.polynomial, job.m))
        return max(
            result.onshell_defect,
            result.parity_defect,
            poly_parity_defect(P, sign),
            poly_parity_defect(Q, -sign),
        )

    def _dirac_table_defect(self) -> float:
        rng = self.rng(5)
        worst = 0.0
        for _ in range(self.samples):
            p = random_on_shell(rng, 1.0)
            expected = dirac_block_expected(1.0, p)
            worst = max(worst, max_norm(dirac_block_spin_sum(1.0, p) - expected) / max_norm(expected))
        return worst

    def _vector_xi_defect(self) -> float:
        vec = vector_field_rep()
        job = make_job(vec, vec, HalfInt(2), 1.0)
        result = spin_sum_polynomial(
            job, TwistKind.HERMITIAN, tensors=self.tensors(vec, vec, TwistKind.HERMITIAN),
            rng_seed=self.config.seed, tol=self.tol,
        )
        return max(abs(result.xi[0] + 1.5), abs(result.xi[1] - 1.5))

    def _omega_defect(self, ab, cd, j, momenta, words) -> float:
        job_cd = make_job(ab_rep(*ab), ab_rep(*cd), j, 1.0)
        job_dc = make_job(ab_rep(*ab), ab_rep(cd[1], cd[0]), j, 1.0)
        report = twist_relation_report(job_dc, job_cd, momenta, words)
        # ε = (-1)^{C+D-j}; C+D-j is an integer, so the parity of its double halves
        expected_epsilon = -1 if ((cd[0].twice + cd[1].twice - j.twice) // 2) % 2 else 1
        return max(
            report.residual,
            report.u_relation_defect,
            report.omega_intertwining_defect,
            abs(report.epsilon - expected_epsilon),
        )

    # field equations

    def run_fieldeq(self):
        rng = self.rng(6)
        momenta = [random_on_shell(rng, 1.0) for _ in range(20)]
        word = random_word(rng)
        for left, right, j in standard_jobs():
            tag = f"{label_text(left)};{label_text(right)};j={j}"
            self.check(
                f"fieldeq.general[{tag}]",
                "ψ^{AB} = Π^{AB,CD}(-i∂) ψ^{CD}",
                lambda left=left, right=right, j=j: self._field_equation_defect(left, right, j, momenta),
            )
        for left, right, j in (
            ((HalfInt(1), HalfInt(0)), (HalfInt(0), HalfInt(1)), HalfInt(1)),
            ((HalfInt(1), HalfInt(1)), (HalfInt(1), HalfInt(1)), HalfInt(2)),
            ((HalfInt(2), HalfInt(1)), (HalfInt(3), HalfInt(0)), HalfInt(3)),
        ):
            tag = f"{label_text(left)};{label_text(right)};j={j}"
            self.check(
                f"fieldeq.spin_sum_form[{tag}]",
                "u^{AB} = (ε/2m) π^{AB,DC} Ω† u^{CD}",
                lambda left=left, right=right, j=j: verify_field_equation_spin_sum_form(
                    build_coefficients(ab_rep(*left), j, 1.0),
                    build_coefficients(ab_rep(*right), j, 1.0),
                    seed=self.config.seed,
                ),
            )
        self.check(
            "fieldeq.lorentz_invariance",
            "residuals unchanged when all momenta are boosted together",
            lambda: self._invariance_defect(momenta, word),
        )
        self.check("fieldeq.weyl", "massive Weyl equations", self._weyl_defect)
        self.check("fieldeq.proca", "Proca equation from the vector representation", self._proca_defect,
                   limit=1e-9)

    def _field_equation_defect(self, left, right, j, momenta) -> float:
        report = verify_field_equation(
            build_coefficients(ab_rep(*left), j, 1.0),
            build_coefficients(ab_rep(*right), j, 1.0),
            momenta=momenta,
            seed=self.config.seed,
            tol=self.tol,
        )
        return max(report.u_residual, report.v_residual)

    def _invariance_defect(self, momenta: List[FourVector], word: LorentzWord) -> float:
        lam = vector_matrix(word)
        moved = [FourVector.on_shell(1.0, p.transformed(lam).spatial) for p in momenta]
        half = HalfInt(1)
        left, right = (half, HalfInt(0)), (HalfInt(0), half)
        before = self._field_equation_defect(left, right, half, momenta)
        after = self._field_equation_defect(left, right, half, moved)
        return max(before, after)

    def _weyl_defect(self) -> float:
        report = weyl_pair_report(1.0, seed=self.config.seed)
        return max(report.residuals.values())

    def _proca_defect(self) -> float:
        report = proca_report(1.0, seed=self.config.seed)
        return max(
            report.notes["rest_spin_sum_defect"],
            report.notes["rest_time_row"],
            report.notes["transversality"],
        )

    # statistics

    def run_statistics(self):
        half = HalfInt(1)
        examples = (
            ((HalfInt(0), HalfInt(0)), HalfInt(0), "Bose"),
            ((half, HalfInt(0)), half, "Fermi"),
            ((half, half), HalfInt(2), "Bose"),
        )
        for (A, B), j, expected in examples:
            self.check(
                f"statistics.example[{label_text((A, B))};j={j}]",
                "boson or fermion according to 2j",
                lambda A=A, B=B, j=j, expected=expected: 0.0 if statistics_for(A, B, j).statistics == expected else 1.0,
                limit=0.0,
            )
        for left in STANDARD_LABELS:
            for j in triangle(*left):
                self.check(
                    f"statistics.spin_statistics[{label_text(left)};j={j}]",
                    "Fermi iff (-1)^{2j} = -1",
                    lambda left=left, j=j: self._statistics_defect(left, j),
                    limit=0.0,
                )
        for left in STANDARD_LABELS:
            for right in STANDARD_LABELS:
                if (left[0].twice + left[1].twice) % 2 != (right[0].twice + right[1].twice) % 2:
                    continue
                self.check(
                    f"statistics.causality[{label_text(left)};{label_text(right)}]",
                    "P-part vanishes only for the (-1)^{2j} bracket",
                    lambda left=left, right=right: self._causality_defect(left, right),
                    limit=0.0,
                )

    def _statistics_defect(self, label, j) -> float:
        report = statistics_for(label[0], label[1], j)
        fermi = phase(j.twice) == -1
        ok = (report.statistics == "Fermi") == fermi and report.required_sign == phase(j.twice)
        return 0.0 if ok else 1.0

    def _causality_defect(self, left, right) -> float:
        sign = phase(left[0].twice, left[1].twice)
        good = causality_constraint(*left, *right, sign)
        bad = causality_constraint(*left, *right, -sign)
        return 0.0 if good.satisfied and bad.p_coefficient != 0 else 1.0


def run_verification(config, suites: Sequence[str] = SUITES, cache: Optional[TensorCache] = None,
                     metric: np.ndarray = METRIC) -> VerificationReport:
    return VerificationSuite(config, cache=cache, metric=metric).run(suites)
