"""
Lorentz Representations
=======================
Four-vectors with the fixed metric diag(-1, +1, +1, +1), Lorentz group
elements as invertible words of primitive rotations and boosts, and concrete
finite-dimensional representations given by their rotation generators J and
boost generators K.

Group elements are never stored as matrices. A word is evaluated in a
representation by exponentiating each primitive, so inverses are exact and
the double cover is handled without branch choices.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import AlgebraError, DimensionError, DomainError, NonFiniteError
from .halfint import HalfInt, HalfIntLike
from .linalg import (
    CMatrix,
    DEFAULT_TOLERANCE,
    Tolerance,
    as_cmatrix,
    commutator,
    dagger,
    mat_exp,
    max_norm,
)
from .su2 import LEVI_CIVITA_PAIRS, spin_generators

logger = logging.getLogger(__name__)

METRIC = np.diag([-1.0, 1.0, 1.0, 1.0])
METRIC.setflags(write=False)

ROTATION = "rotation"
BOOST = "boost"

ALGEBRA_TOLERANCE = 1e-9


@dataclass(frozen=True)
class FourVector:
    """Contravariant components p^μ = (p⁰, p¹, p², p³)"""

    components: Tuple[float, float, float, float]

    def __post_init__(self):
        values = tuple(float(x) for x in self.components)
        if len(values) != 4:
            raise DimensionError(f"A four-vector has 4 components, got {len(values)}")
        if not all(np.isfinite(values)):
            raise NonFiniteError(f"Non-finite four-vector {values}")
        object.__setattr__(self, "components", values)

    @classmethod
    def on_shell(cls, m: float, spatial: Sequence[float]) -> "FourVector":
        """Positive-energy momentum of mass m with the given 3-momentum"""
        if not m > 0:
            raise DomainError(f"Mass must be positive, got {m}")
        px, py, pz = (float(x) for x in spatial)
        energy = float(np.sqrt(px * px + py * py + pz * pz + m * m))
        return cls((energy, px, py, pz))

    @classmethod
    def at_rest(cls, m: float) -> "FourVector":
        return cls.on_shell(m, (0.0, 0.0, 0.0))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.components, dtype=np.float64)

    @property
    def energy(self) -> float:
        return self.components[0]

    @property
    def spatial(self) -> np.ndarray:
        return np.array(self.components[1:], dtype=np.float64)

    def dot(self, other: "FourVector") -> float:
        return float(self.array @ METRIC @ other.array)

    def lowered(self) -> np.ndarray:
        """p_μ = η_{μν} p^ν"""
        return METRIC @ self.array

    def is_on_shell(self, m: float, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
        if self.energy <= 0:
            return False
        return abs(self.dot(self) + m * m) <= tol.bound(self.energy ** 2)

    def transformed(self, lam: np.ndarray) -> "FourVector":
        return FourVector(tuple(np.real(lam @ self.array)))


def require_on_shell(p: FourVector, m: float, tol: Tolerance = DEFAULT_TOLERANCE):
    if not m > 0:
        raise DomainError(f"Mass must be positive, got {m}")
    if not p.is_on_shell(m, tol):
        raise DomainError(
            f"Momentum {p.components} is not on the mass shell m={m}",
            {"p": list(p.components), "m": m},
        )


@dataclass(frozen=True)
class Primitive:
    kind: str
    axis: Tuple[float, float, float]
    parameter: float

    def __post_init__(self):
        if self.kind not in (ROTATION, BOOST):
            raise DomainError(f"Unknown primitive kind {self.kind!r}")
        axis = tuple(float(x) for x in self.axis)
        if len(axis) != 3 or not all(np.isfinite(axis)) or not np.isfinite(self.parameter):
            raise NonFiniteError(f"Bad primitive {self.kind} {self.axis} {self.parameter}")
        if abs(float(np.linalg.norm(axis)) - 1.0) > 1e-12:
            raise DomainError(f"Primitive axis must be a unit vector, got {axis}")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "parameter", float(self.parameter))

    def inverse(self) -> "Primitive":
        return Primitive(self.kind, self.axis, -self.parameter)

    def to_json(self) -> dict:
        return {"kind": self.kind, "axis": list(self.axis), "parameter": self.parameter}

    @classmethod
    def from_json(cls, payload: dict) -> "Primitive":
        return cls(payload["kind"], tuple(payload["axis"]), payload["parameter"])


@dataclass(frozen=True)
class LorentzWord:
    """Product of primitives, leftmost outermost"""

    primitives: Tuple[Primitive, ...] = ()

    @classmethod
    def identity(cls) -> "LorentzWord":
        return cls(())

    @classmethod
    def rotation(cls, axis: Sequence[float], angle: float) -> "LorentzWord":
        return cls((Primitive(ROTATION, tuple(axis), angle),))

    @classmethod
    def boost(cls, axis: Sequence[float], rapidity: float) -> "LorentzWord":
        return cls((Primitive(BOOST, tuple(axis), rapidity),))

    def inverse(self) -> "LorentzWord":
        return LorentzWord(tuple(prim.inverse() for prim in reversed(self.primitives)))

    def __matmul__(self, other: "LorentzWord") -> "LorentzWord":
        return LorentzWord(self.primitives + other.primitives)

    def __len__(self) -> int:
        return len(self.primitives)

    def to_json(self) -> List[dict]:
        return [prim.to_json() for prim in self.primitives]

    @classmethod
    def from_json(cls, payload: Iterable[dict]) -> "LorentzWord":
        return cls(tuple(Primitive.from_json(item) for item in payload))


def concat(*words: LorentzWord) -> LorentzWord:
    result = LorentzWord.identity()
    for word in words:
        result = result @ word
    return result


def lorentz_algebra_defect(J: Sequence[CMatrix], K: Sequence[CMatrix]) -> float:
    """Largest violation of the three Lorentz commutation relations"""
    worst = 0.0
    for a, b, c in LEVI_CIVITA_PAIRS:
        worst = max(
            worst,
            max_norm(commutator(J[a], J[b]) - 1j * J[c]),
            max_norm(commutator(J[a], K[b]) - 1j * K[c]),
            max_norm(commutator(K[a], K[b]) + 1j * J[c]),
        )
    # [J_a, K_a] = 0 is not implied by the cyclic relations
    for a in range(3):
        worst = max(worst, max_norm(commutator(J[a], K[a])))
    return worst


@dataclass(frozen=True, eq=False)
class FieldRep:
    """
    Concrete representation of the Lorentz double cover.

    The generators are validated on construction. `label` is the (A, B)
    equivalence class used by K-range and parity formulas; `standard_basis`
    marks reps built by ab_rep, whose basis is the tensor product of
    descending-σ spin bases.
    """

    dim: int
    J: Tuple[CMatrix, CMatrix, CMatrix]
    K: Tuple[CMatrix, CMatrix, CMatrix]
    label: Optional[Tuple[HalfInt, HalfInt]] = None
    name: str = ""
    standard_basis: bool = False
    algebra_defect: float = field(default=0.0, init=False)

    def __post_init__(self):
        if len(self.J) != 3 or len(self.K) != 3:
            raise DimensionError("A representation needs three J and three K generators")
        J = tuple(as_cmatrix(G, "J generator") for G in self.J)
        K = tuple(as_cmatrix(G, "K generator") for G in self.K)
        for G in J + K:
            if G.shape != (self.dim, self.dim):
                raise DimensionError(f"Generator shape {G.shape} does not match dim {self.dim}")
            G.setflags(write=False)
        scale = max(1.0, max(max_norm(G) for G in J + K))
        defect = lorentz_algebra_defect(J, K)
        if defect > ALGEBRA_TOLERANCE * scale ** 2:
            raise AlgebraError(
                f"Generators of {self.name or 'representation'} violate the Lorentz algebra "
                f"(defect {defect:.3e})",
                {"defect": defect},
            )
        hermiticity = max(max_norm(G - dagger(G)) for G in J)
        if hermiticity > ALGEBRA_TOLERANCE * scale:
            raise AlgebraError(
                f"Rotation generators of {self.name or 'representation'} are not Hermitian "
                f"(defect {hermiticity:.3e})"
            )
        if self.label is not None:
            label = (HalfInt.of(self.label[0]), HalfInt.of(self.label[1]))
            object.__setattr__(self, "label", label)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "algebra_defect", defect)

    @property
    def key(self) -> str:
        """Stable identifier used in cache keys and reports"""
        if self.label is not None and self.standard_basis:
            return f"ab({self.label[0]},{self.label[1]})"
        return self.name

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "label": None if self.label is None else [h.to_json() for h in self.label],
            "standard_basis": self.standard_basis,
        }


@lru_cache(maxsize=64)
def _ab_rep_cached(a2: int, b2: int) -> FieldRep:
    A, B = HalfInt(a2), HalfInt(b2)
    ta, tb = spin_generators(A), spin_generators(B)
    ia = np.eye(A.dim, dtype=np.complex128)
    ib = np.eye(B.dim, dtype=np.complex128)
    left = [np.kron(Ga, ib) for Ga in ta.generators]
    right = [np.kron(ia, Gb) for Gb in tb.generators]
    J = tuple(l + r for l, r in zip(left, right))
    K = tuple(-1j * (l - r) for l, r in zip(left, right))
    return FieldRep(
        dim=A.dim * B.dim,
        J=J,
        K=K,
        label=(A, B),
        name=f"({A},{B})",
        standard_basis=True,
    )


def ab_rep(A: HalfIntLike, B: HalfIntLike) -> FieldRep:
    """The (A, B) representation: J = J^A⊗I + I⊗J^B, K = -i(J^A⊗I - I⊗J^B)"""
    A, B = HalfInt.of(A), HalfInt.of(B)
    if A.twice < 0 or B.twice < 0:
        raise DomainError(f"Representation labels must be non-negative, got ({A},{B})")
    return _ab_rep_cached(A.twice, B.twice)


@lru_cache(maxsize=1)
def vector_field_rep() -> FieldRep:
    """Four-vector representation acting on contravariant components"""
    J = []
    K = []
    for a in range(3):
        Ja = np.zeros((4, 4), dtype=np.complex128)
        for b in range(3):
            for c in range(3):
                Ja[1 + b, 1 + c] = -1j * _levi_civita(a, b, c)
        Ka = np.zeros((4, 4), dtype=np.complex128)
        Ka[0, 1 + a] = 1j
        Ka[1 + a, 0] = 1j
        J.append(Ja)
        K.append(Ka)
    return FieldRep(
        dim=4,
        J=tuple(J),
        K=tuple(K),
        label=(HalfInt(1), HalfInt(1)),
        name="vector",
    )


def _levi_civita(a: int, b: int, c: int) -> float:
    if (a, b, c) in LEVI_CIVITA_PAIRS:
        return 1.0
    if (a, c, b) in LEVI_CIVITA_PAIRS:
        return -1.0
    return 0.0


def primitive_matrix(rep: FieldRep, prim: Primitive) -> CMatrix:
    generators = rep.J if prim.kind == ROTATION else rep.K
    n = prim.axis
    generator = n[0] * generators[0] + n[1] * generators[1] + n[2] * generators[2]
    return mat_exp(-1j * prim.parameter * generator)


def rep_matrix(rep: FieldRep, w: LorentzWord) -> CMatrix:
    """D(w): product of the primitive exponentials, leftmost outermost"""
    D = np.eye(rep.dim, dtype=np.complex128)
    for prim in w.primitives:
        D = D @ primitive_matrix(rep, prim)
    return D


def vector_matrix(w: LorentzWord) -> np.ndarray:
    """λ(w)^μ_ν acting on contravariant four-vectors"""
    return np.real(rep_matrix(vector_field_rep(), w))


def lower_index_matrix(lam: np.ndarray, metric: np.ndarray = METRIC) -> np.ndarray:
    """Matrix whose [ν, μ] entry is Λ_ν^μ = η_{να} λ^α_β η^{βμ}"""
    return metric @ lam @ metric


def standard_boost(
    p: FourVector, m: float, tol: Tolerance = DEFAULT_TOLERANCE
) -> LorentzWord:
    """Pure boost L(p) carrying (m, 0, 0, 0) to p"""
    require_on_shell(p, m, tol)
    spatial = p.spatial
    size = float(np.linalg.norm(spatial))
    if size <= 1e-15 * m:
        return LorentzWord.identity()
    return LorentzWord.boost(tuple(spatial / size), float(np.arcsinh(size / m)))


def wigner_rotation(
    rep: FieldRep,
    w: LorentzWord,
    p: FourVector,
    m: float,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> CMatrix:
    """D(W(Λ, p)) with W(Λ, p) = L(Λp)^{-1} Λ L(p)"""
    require_on_shell(p, m, tol)
    moved = p.transformed(vector_matrix(w))
    # re-project onto the shell so rounding in λ does not trip the check
    moved = FourVector.on_shell(m, moved.spatial)
    word = concat(standard_boost(moved, m).inverse(), w, standard_boost(p, m))
    return rep_matrix(rep, word)


def random_unit_vector(rng: np.random.Generator) -> Tuple[float, float, float]:
    while True:
        v = rng.normal(size=3)
        size = float(np.linalg.norm(v))
        if size > 1e-8:
            return tuple(v / size)


def random_word(
    rng: np.random.Generator,
    max_primitives: int = 3,
    max_rapidity: float = 2.0,
) -> LorentzWord:
    """Seeded random word: angles in [0, 2π), rapidities in [0, max_rapidity]"""
    count = int(rng.integers(1, max_primitives + 1))
    primitives = []
    for _ in range(count):
        axis = random_unit_vector(rng)
        if rng.random() < 0.5:
            primitives.append(Primitive(ROTATION, axis, float(rng.uniform(0.0, 2 * np.pi))))
        else:
            primitives.append(Primitive(BOOST, axis, float(rng.uniform(0.0, max_rapidity))))
    return LorentzWord(tuple(primitives))


def random_on_shell(
    rng: np.random.Generator, m: float, max_rapidity: float = 2.0
) -> FourVector:
    """Rapidity uniform in [0, max_rapidity], direction uniform on the sphere"""
    axis = np.array(random_unit_vector(rng))
    rapidity = float(rng.uniform(0.0, max_rapidity))
    return FourVector.on_shell(m, m * np.sinh(rapidity) * axis)


def is_standard_ab(rep: FieldRep) -> bool:
    return rep.standard_basis and rep.label is not None
