"""
Generalized Gamma Matrices
==========================
Matrix-valued symmetric traceless Lorentz tensors T^{μ1…μ2K} intertwining a
left and a right field representation.

The construction runs in three steps:

1. Rotation-invariant matrices ("seeds") are the common kernel of the three
   rotation operators acting on the space of dimL × dimR matrices.
2. Each seed is classified by the Casimir of 𝒜 = (𝒥 + i𝒦)/2, whose
   eigenvalue K(K+1) identifies the (K, K) block it belongs to.
3. T is fitted by least squares from boosted copies of the seed, sampled on
   the unit-mass hyperboloid, with tracelessness added as constraint rows.

Two actions on matrices are supported: the Hermitian twist
M ↦ D^L M D^{R†} (spin sums) and the inverse twist M ↦ D^L M (D^R)^{-1}
(twisted spin sums and field equations).
"""

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import AlgebraError, CasimirError, DomainError, FitError, MultiplicityError
from .halfint import HalfInt, HalfIntLike
from .linalg import (
    CMatrix,
    Tolerance,
    as_cmatrix,
    condition_number,
    dagger,
    eig_hermitian,
    lstsq,
    max_norm,
    nullspace,
    phase_normalize,
)
from .lorentz import (
    METRIC,
    FieldRep,
    LorentzWord,
    lorentz_algebra_defect,
    lower_index_matrix,
    random_unit_vector,
    random_word,
    rep_matrix,
    vector_field_rep,
    vector_matrix,
)
from .utils.serialization import matrix_from_json, matrix_to_json

logger = logging.getLogger(__name__)

# Bumped whenever seed normalization or fit conventions change; part of cache keys
NORMALIZATION_VERSION = "seed-maxabs-v1"

CASIMIR_TOLERANCE = 1e-6
SEED_TOLERANCE = Tolerance(abs=1e-9, rel=1e-9)
FIT_RAPIDITIES = (0.3, 0.7, 1.1)
OVERSAMPLING = 3


class TwistKind(str, Enum):
    HERMITIAN = "hermitian"
    INVERSE = "inverse"

    @classmethod
    def parse(cls, text: str) -> "TwistKind":
        try:
            return cls(text.strip().lower())
        except ValueError as e:
            raise DomainError(f"Unknown twist {text!r} (expected hermitian or inverse)") from e


def twist_matrix(D: CMatrix, twist: TwistKind) -> CMatrix:
    """Right-hand factor of the action: D† or D^{-1}"""
    if twist is TwistKind.HERMITIAN:
        return dagger(D)
    return np.linalg.inv(D)


def act(DL: CMatrix, M: CMatrix, DR: CMatrix, twist: TwistKind) -> CMatrix:
    return DL @ M @ twist_matrix(DR, twist)


def _derived(GL: CMatrix, GR: CMatrix, twist: TwistKind) -> CMatrix:
    """Generator of M ↦ D^L M twist(D^R) under row-major flattening"""
    # vec(A M B) = (A ⊗ Bᵀ) vec(M)
    right = np.conj(GR) if twist is TwistKind.HERMITIAN else GR.T
    return np.kron(GL, np.eye(GR.shape[0])) - np.kron(np.eye(GL.shape[0]), right)


def v_action(
    repL: FieldRep, repR: FieldRep, twist: TwistKind
) -> Tuple[Tuple[CMatrix, ...], Tuple[CMatrix, ...]]:
    """Rotation and boost operators of the induced action on dimL × dimR matrices"""
    J = tuple(_derived(repL.J[a], repR.J[a], twist) for a in range(3))
    K = tuple(_derived(repL.K[a], repR.K[a], twist) for a in range(3))
    scale = max(1.0, max(max_norm(G) for G in J + K))
    defect = lorentz_algebra_defect(J, K)
    if defect > 1e-9 * scale ** 2:
        raise AlgebraError(
            f"Induced {twist.value} action of {repL.key} and {repR.key} "
            f"violates the Lorentz algebra (defect {defect:.3e})",
            {"defect": defect},
        )
    return J, K


def casimir_value_to_k(value: float, tolerance: float = CASIMIR_TOLERANCE) -> HalfInt:
    """Invert K(K+1) = value onto the half-integer lattice"""
    if value < -tolerance:
        raise CasimirError(f"Negative Casimir eigenvalue {value:.3e}")
    k_real = (-1.0 + math.sqrt(1.0 + 4.0 * max(value, 0.0))) / 2.0
    K = HalfInt(int(round(2 * k_real)))
    k = float(K)
    if abs(k * (k + 1) - value) > tolerance:
        raise CasimirError(
            f"Casimir eigenvalue {value:.9f} is not of the form K(K+1)",
            {"eigenvalue": value},
        )
    return K


def normalize_seed(seed: CMatrix) -> CMatrix:
    """Largest-magnitude entry becomes exactly 1, ties go to the smallest index"""
    rotated, _ = phase_normalize(seed)
    peak = float(np.max(np.abs(rotated)))
    out = rotated / peak
    index = int(np.flatnonzero(np.abs(out.ravel()) >= 1.0 - 1e-9)[0])
    out.ravel()[index] = 1.0
    return out


def invariant_seeds(
    repL: FieldRep, repR: FieldRep, twist: TwistKind
) -> List[Tuple[HalfInt, CMatrix]]:
    """Rotation-invariant dimL × dimR matrices, one per (K, K) block, sorted by K"""
    J, K = v_action(repL, repR, twist)
    kernel = nullspace(np.vstack(J), SEED_TOLERANCE)
    if kernel.shape[1] == 0:
        logger.info("No invariant seeds for %s ⊗ %s (%s)", repL.key, repR.key, twist.value)
        return []

    A = [(J[a] + 1j * K[a]) / 2.0 for a in range(3)]
    casimir = A[0] @ A[0] + A[1] @ A[1] + A[2] @ A[2]
    restricted = dagger(kernel) @ casimir @ kernel
    values, vectors = eig_hermitian(restricted)

    found: Dict[HalfInt, CMatrix] = {}
    for value, vec in zip(values, vectors.T):
        K_label = casimir_value_to_k(float(value))
        if K_label in found:
            raise MultiplicityError(
                f"Block K={K_label} occurs more than once in {repL.key} ⊗ {repR.key}",
                {"K": str(K_label), "twist": twist.value},
            )
        seed = (kernel @ vec).reshape(repL.dim, repR.dim)
        found[K_label] = normalize_seed(seed)
    seeds = sorted(found.items(), key=lambda item: item[0])
    logger.debug(
        "Seeds for %s ⊗ %s (%s): K = %s",
        repL.key, repR.key, twist.value, [str(k) for k, _ in seeds],
    )
    return seeds


def predicted_k_range(
    labelL: Tuple[HalfIntLike, HalfIntLike],
    labelR: Tuple[HalfIntLike, HalfIntLike],
    twist: TwistKind,
) -> List[HalfInt]:
    """
    K values allowed for labels (A,B) and (C,D):
    max{|A-D|,|B-C|} <= K <= min{A+D,B+C} for the Hermitian twist, with C and
    D interchanged for the inverse twist. Empty when the parities disagree.
    """
    A, B = (HalfInt.of(x) for x in labelL)
    C, D = (HalfInt.of(x) for x in labelR)
    if twist is TwistKind.INVERSE:
        C, D = D, C
    if (A.twice + D.twice) % 2 != (B.twice + C.twice) % 2:
        return []
    low = max(abs(A - D), abs(B - C))
    high = min(A + D, B + C)
    return [HalfInt(t) for t in range(low.twice, high.twice + 1, 2)]


def sorted_indices(rank: int) -> List[Tuple[int, ...]]:
    return list(itertools.combinations_with_replacement(range(4), rank))


def multiplicity(index: Sequence[int]) -> int:
    """Number of distinct orderings of a multi-index"""
    counts = Counter(index)
    result = math.factorial(len(index))
    for c in counts.values():
        result //= math.factorial(c)
    return result


def component_count(K: HalfInt) -> int:
    rank = K.twice
    return math.comb(rank + 3, 3)


@dataclass(frozen=True)
class FitDiagnostics:
    samples: int
    residual: float
    relative_residual: float
    condition: float
    seed_recovery: float
    trace_defect: float
    covariance_defect: float
    rng_seed: int

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "residual": self.residual,
            "relative_residual": self.relative_residual,
            "condition": self.condition,
            "seed_recovery": self.seed_recovery,
            "trace_defect": self.trace_defect,
            "covariance_defect": self.covariance_defect,
            "rng_seed": self.rng_seed,
        }


@dataclass(frozen=True, eq=False)
class SymTensorMatrix:
    """Rank-2K symmetric tensor of matrices, stored on sorted multi-indices"""

    K: HalfInt
    dims: Tuple[int, int]
    components: Dict[Tuple[int, ...], CMatrix]
    twist: TwistKind = TwistKind.HERMITIAN
    diagnostics: Optional[FitDiagnostics] = field(default=None)

    def __post_init__(self):
        expected = set(sorted_indices(self.rank))
        if set(self.components) != expected:
            raise DomainError(f"Rank-{self.rank} tensor needs all {len(expected)} sorted components")

    @property
    def rank(self) -> int:
        return self.K.twice

    def __getitem__(self, index: Sequence[int]) -> CMatrix:
        return self.components[tuple(sorted(index))]

    def full_array(self) -> np.ndarray:
        """Dense array with shape (4,)*rank + (dimL, dimR)"""
        out = np.zeros((4,) * self.rank + self.dims, dtype=np.complex128)
        for index in itertools.product(range(4), repeat=self.rank):
            out[index] = self.components[tuple(sorted(index))]
        return out

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "K": self.K.to_json(),
            "dims": list(self.dims),
            "twist": self.twist.value,
            "convention": NORMALIZATION_VERSION,
            "components": [
                {"index": list(index), "matrix": matrix_to_json(self.components[index])}
                for index in sorted_indices(self.rank)
            ],
            "diagnostics": None if self.diagnostics is None else self.diagnostics.to_json(),
        }

    @classmethod
    def from_json(cls, payload: dict) -> "SymTensorMatrix":
        diag = payload.get("diagnostics")
        return cls(
            K=HalfInt.from_json(payload["K"]),
            dims=tuple(payload["dims"]),
            components={
                tuple(item["index"]): matrix_from_json(item["matrix"])
                for item in payload["components"]
            },
            twist=TwistKind(payload["twist"]),
            diagnostics=None if diag is None else FitDiagnostics(**diag),
        )


def _contract_index(T: np.ndarray, L: np.ndarray, axis: int) -> np.ndarray:
    """Replace index `axis` by Σ_ν L[ν, μ] T[..ν..]"""
    return np.moveaxis(np.tensordot(L, T, axes=([0], [axis])), 0, axis)


def transform_indices(full: np.ndarray, rank: int, L: np.ndarray) -> np.ndarray:
    out = full
    for axis in range(rank):
        out = _contract_index(out, L, axis)
    return out


def trace_defect(T: SymTensorMatrix, metric: np.ndarray = METRIC) -> float:
    """Largest η-contraction of the first index pair"""
    if T.rank < 2:
        return 0.0
    worst = 0.0
    for rest in sorted_indices(T.rank - 2):
        total = sum(metric[a, a] * T[(a, a) + rest] for a in range(4))
        worst = max(worst, max_norm(total))
    return worst


def covariance_defect(
    T: SymTensorMatrix,
    repL: FieldRep,
    repR: FieldRep,
    w: LorentzWord,
    metric: np.ndarray = METRIC,
) -> float:
    """
    Relative violation of D^L(Λ) T^{μ…} twist(D^R(Λ)) = Λ_ν^μ … T^{ν…}.
    `metric` exists so a deliberately wrong signature can be injected.
    """
    full = T.full_array()
    DL = rep_matrix(repL, w)
    tR = twist_matrix(rep_matrix(repR, w), T.twist)
    lhs = np.einsum("ab,...bc,cd->...ad", DL, full, tR)
    rhs = transform_indices(full, T.rank, lower_index_matrix(vector_matrix(w), metric))
    return max_norm(lhs - rhs) / max(1.0, max_norm(rhs))


def lie_covariance_defect(
    T: SymTensorMatrix, repL: FieldRep, repR: FieldRep, metric: np.ndarray = METRIC
) -> float:
    """Infinitesimal form of the tensor law, checked for all six generators"""
    vec = vector_field_rep()
    full = T.full_array()
    worst = 0.0
    for GL, GR, g in zip(repL.J + repL.K, repR.J + repR.K, vec.J + vec.K):
        if T.twist is TwistKind.HERMITIAN:
            lhs = np.einsum("ab,...bc->...ac", GL, full) - np.einsum("...ab,bc->...ac", full, dagger(GR))
        else:
            lhs = np.einsum("ab,...bc->...ac", GL, full) - np.einsum("...ab,bc->...ac", full, GR)
        h = metric @ g @ metric
        rhs = np.zeros_like(full)
        for axis in range(T.rank):
            rhs = rhs + _contract_index(full, h, axis)
        worst = max(worst, max_norm(lhs - rhs) / max(1.0, max_norm(full)))
    return worst


def fit_sample_words(K: HalfInt, rng: np.random.Generator, samples: Optional[int] = None) -> List[LorentzWord]:
    """Rest point, axis and diagonal boosts, then seeded random boosts"""
    needed = OVERSAMPLING * component_count(K)
    if samples is not None and samples < needed:
        raise FitError(
            f"{samples} samples cannot determine {component_count(K)} components "
            f"(need at least {needed})",
            {"samples": samples, "needed": needed},
        )
    target = max(needed, samples or 0)
    directions = [tuple(s * e for e in axis) for axis in np.eye(3) for s in (1.0, -1.0)]
    inv_sqrt3 = 1.0 / math.sqrt(3.0)
    directions += [
        (sx * inv_sqrt3, sy * inv_sqrt3, sz * inv_sqrt3)
        for sx, sy, sz in itertools.product((1.0, -1.0), repeat=3)
    ]
    words = [LorentzWord.identity()]
    words += [LorentzWord.boost(d, r) for d in directions for r in FIT_RAPIDITIES]
    while len(words) < target:
        words.append(LorentzWord.boost(random_unit_vector(rng), float(rng.uniform(0.2, 1.5))))
    return words


def build_T(
    repL: FieldRep,
    repR: FieldRep,
    twist: TwistKind,
    K: HalfIntLike,
    seed: CMatrix,
    rng_seed: int = 42,
    samples: Optional[int] = None,
    tol: Tolerance = Tolerance(abs=1e-8, rel=1e-8),
) -> SymTensorMatrix:
    """Fit the rank-2K tensor whose all-time component is `seed`"""
    K = HalfInt.of(K)
    seed = as_cmatrix(seed, "seed")
    if seed.shape != (repL.dim, repR.dim):
        raise DomainError(f"Seed shape {seed.shape} does not match ({repL.dim}, {repR.dim})")
    rank = K.twice
    unknowns = sorted_indices(rank)
    column = {index: n for n, index in enumerate(unknowns)}
    rng = np.random.default_rng(rng_seed)
    words = fit_sample_words(K, rng, samples)

    rows = []
    rhs = []
    for w in words:
        ell = lower_index_matrix(vector_matrix(w))[:, 0]
        rows.append([multiplicity(index) * np.prod([ell[nu] for nu in index]) for index in unknowns])
        G = act(rep_matrix(repL, w), seed, rep_matrix(repR, w), twist)
        rhs.append(G.ravel())
    if rank >= 2:
        for rest in sorted_indices(rank - 2):
            row = np.zeros(len(unknowns))
            for a in range(4):
                row[column[tuple(sorted((a, a) + rest))]] += METRIC[a, a]
            rows.append(row)
            rhs.append(np.zeros(repL.dim * repR.dim, dtype=np.complex128))

    A = np.array(rows, dtype=np.complex128)
    B = np.array(rhs, dtype=np.complex128)
    X, residual = lstsq(A, B)
    relative = residual / max(1.0, float(np.linalg.norm(B)))
    cond = condition_number(A)
    tensor = SymTensorMatrix(
        K=K,
        dims=(repL.dim, repR.dim),
        components={index: X[column[index]].reshape(repL.dim, repR.dim) for index in unknowns},
        twist=twist,
    )

    recovery = max_norm(tensor[(0,) * rank] - seed)
    # the all-time component is the seed by construction; keep it exact
    tensor.components[(0,) * rank] = seed.copy()
    traces = trace_defect(tensor)
    check_rng = np.random.default_rng(rng_seed + 1)
    covariance = max(
        covariance_defect(tensor, repL, repR, random_word(check_rng, max_rapidity=1.0))
        for _ in range(3)
    )
    diagnostics = FitDiagnostics(
        samples=len(words),
        residual=residual,
        relative_residual=relative,
        condition=cond,
        seed_recovery=recovery,
        trace_defect=traces,
        covariance_defect=covariance,
        rng_seed=rng_seed,
    )
    limit = tol.bound(1.0)
    failures = {
        name: value
        for name, value in (
            ("relative_residual", relative),
            ("seed_recovery", recovery),
            ("trace_defect", traces),
            ("covariance_defect", covariance),
        )
        if not value <= limit
    }
    if failures:
        raise FitError(
            f"T fit for {repL.key} ⊗ {repR.key} ({twist.value}, K={K}) failed: {failures}",
            {"K": str(K), "twist": twist.value, **failures},
        )
    logger.debug(
        "Fitted K=%s tensor for %s ⊗ %s: residual %.2e, condition %.2e",
        K, repL.key, repR.key, relative, cond,
    )
    return SymTensorMatrix(
        K=tensor.K,
        dims=tensor.dims,
        components=tensor.components,
        twist=twist,
        diagnostics=diagnostics,
    )


def build_all_T(
    repL: FieldRep,
    repR: FieldRep,
    twist: TwistKind,
    rng_seed: int = 42,
    tol: Tolerance = Tolerance(abs=1e-8, rel=1e-8),
) -> List[SymTensorMatrix]:
    return [
        build_T(repL, repR, twist, K, seed, rng_seed=rng_seed, tol=tol)
        for K, seed in invariant_seeds(repL, repR, twist)
    ]


def iter_components(T: SymTensorMatrix) -> Iterator[Tuple[Tuple[int, ...], CMatrix]]:
    for index in sorted_indices(T.rank):
        yield index, T.components[index]


PAULI = (
    np.eye(2, dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


def pauli_tensor(bar: bool = False) -> SymTensorMatrix:
    """σ^μ = (I, σ), or σ̄^μ = (I, -σ) when bar is set"""
    signs = (1.0, -1.0, -1.0, -1.0) if bar else (1.0, 1.0, 1.0, 1.0)
    return SymTensorMatrix(
        K=HalfInt(1),
        dims=(2, 2),
        components={(mu,): signs[mu] * PAULI[mu] for mu in range(4)},
    )


def sigma_dot(p_lower: Sequence[float], bar: bool = False) -> CMatrix:
    """p_μ σ^μ (or p_μ σ̄^μ) for already-lowered components"""
    T = pauli_tensor(bar)
    return sum(p_lower[mu] * T[(mu,)] for mu in range(4))
