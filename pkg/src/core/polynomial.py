"""
Matrix Polynomials
==================
Polynomials in the contravariant momentum components (p⁰, p¹, p², p³) with
dense complex matrix coefficients.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Tuple

import numpy as np

from .errors import DimensionError, DomainError
from .linalg import CMatrix, max_norm
from .lorentz import FourVector
from .utils.serialization import matrix_from_json, matrix_to_json

logger = logging.getLogger(__name__)

Exponent = Tuple[int, int, int, int]

PRUNE_THRESHOLD = 1e-13


@dataclass(frozen=True, eq=False)
class MatrixPolynomial:
    dims: Tuple[int, int]
    terms: Dict[Exponent, CMatrix]

    def __post_init__(self):
        clean = {}
        for exp, coeff in self.terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != 4 or min(exp) < 0:
                raise DomainError(f"Bad exponent {exp}")
            coeff = np.asarray(coeff, dtype=np.complex128)
            if coeff.shape != tuple(self.dims):
                raise DimensionError(f"Coefficient shape {coeff.shape} != {tuple(self.dims)}")
            clean[exp] = clean.get(exp, 0) + coeff
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls, dims: Tuple[int, int]) -> "MatrixPolynomial":
        return cls(dims, {})

    @classmethod
    def constant(cls, coeff: CMatrix) -> "MatrixPolynomial":
        coeff = np.asarray(coeff, dtype=np.complex128)
        return cls(coeff.shape, {(0, 0, 0, 0): coeff})

    def __add__(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        if self.dims != other.dims:
            raise DimensionError(f"Cannot add polynomials of shapes {self.dims} and {other.dims}")
        merged = dict(self.terms)
        for exp, coeff in other.terms.items():
            merged[exp] = merged[exp] + coeff if exp in merged else coeff
        return MatrixPolynomial(self.dims, merged)

    def __sub__(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        return self + other.scaled(-1.0)

    def scaled(self, factor: complex) -> "MatrixPolynomial":
        return MatrixPolynomial(self.dims, {e: factor * c for e, c in self.terms.items()})

    def times_monomial(self, exp: Exponent, factor: complex = 1.0) -> "MatrixPolynomial":
        return MatrixPolynomial(
            self.dims,
            {tuple(a + b for a, b in zip(e, exp)): factor * c for e, c in self.terms.items()},
        )

    def right_multiplied(self, M: CMatrix) -> "MatrixPolynomial":
        M = np.asarray(M, dtype=np.complex128)
        return MatrixPolynomial((self.dims[0], M.shape[1]), {e: c @ M for e, c in self.terms.items()})

    def pruned(self, threshold: float = PRUNE_THRESHOLD) -> "MatrixPolynomial":
        scale = max([max_norm(c) for c in self.terms.values()], default=0.0)
        keep = {e: c for e, c in self.terms.items() if max_norm(c) > threshold * max(1.0, scale)}
        return MatrixPolynomial(self.dims, keep)

    def degrees(self) -> Tuple[int, ...]:
        """Sorted distinct total degrees of the non-zero terms"""
        return tuple(sorted({sum(e) for e, c in self.terms.items() if max_norm(c) > 0}))

    def max_p0_power(self) -> int:
        return max((e[0] for e in self.terms), default=0)

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "terms": [
                {"exp": list(exp), "matrix": matrix_to_json(self.terms[exp])}
                for exp in sorted(self.terms)
            ],
        }

    @classmethod
    def from_json(cls, payload: dict) -> "MatrixPolynomial":
        return cls(
            tuple(payload["dims"]),
            {tuple(item["exp"]): matrix_from_json(item["matrix"]) for item in payload["terms"]},
        )


def linear_form(coefficients: Iterable[complex]) -> Dict[Exponent, complex]:
    """Σ_μ c_μ p^μ as an exponent map"""
    out = {}
    for mu, c in enumerate(coefficients):
        if c != 0:
            exp = [0, 0, 0, 0]
            exp[mu] = 1
            out[tuple(exp)] = complex(c)
    return out


def poly_eval(P: MatrixPolynomial, p: FourVector) -> CMatrix:
    x = p.array
    out = np.zeros(P.dims, dtype=np.complex128)
    for exp, coeff in P.terms.items():
        out = out + coeff * float(np.prod(x ** np.array(exp)))
    return out


def poly_parity_defect(P: MatrixPolynomial, sign: int) -> float:
    """Zero iff every monomial of total degree d has (-1)^d = sign"""
    if sign not in (1, -1):
        raise DomainError(f"Parity sign must be ±1, got {sign}")
    worst = 0.0
    for exp, coeff in P.terms.items():
        parity = -1 if sum(exp) % 2 else 1
        worst = max(worst, max_norm(coeff) * abs(1 - sign * parity))
    return worst


def poly_reduce_p0(P: MatrixPolynomial, m: float) -> MatrixPolynomial:
    """Rewrite (p⁰)² as |p|² + m² until every term has p⁰-degree at most 1"""
    pending = dict(P.terms)
    done: Dict[Exponent, CMatrix] = {}

    def add(target: Dict[Exponent, CMatrix], exp: Exponent, coeff: CMatrix):
        target[exp] = target[exp] + coeff if exp in target else coeff

    while pending:
        exp, coeff = pending.popitem()
        e0, e1, e2, e3 = exp
        if e0 <= 1:
            add(done, exp, coeff)
            continue
        lowered = e0 - 2
        for replacement, factor in (
            ((lowered, e1 + 2, e2, e3), 1.0),
            ((lowered, e1, e2 + 2, e3), 1.0),
            ((lowered, e1, e2, e3 + 2), 1.0),
            ((lowered, e1, e2, e3), m * m),
        ):
            add(pending, replacement, factor * coeff)
    return MatrixPolynomial(P.dims, done).pruned()


def poly_pq_split(Pred: MatrixPolynomial) -> Tuple[MatrixPolynomial, MatrixPolynomial]:
    """π = P(p) + 2p⁰ Q(p) with P, Q free of p⁰"""
    if Pred.max_p0_power() > 1:
        raise DomainError("poly_pq_split needs p⁰-degree at most 1; call poly_reduce_p0 first")
    P_terms = {e: c for e, c in Pred.terms.items() if e[0] == 0}
    Q_terms = {(0,) + e[1:]: c / 2.0 for e, c in Pred.terms.items() if e[0] == 1}
    return MatrixPolynomial(Pred.dims, P_terms), MatrixPolynomial(Pred.dims, Q_terms)


def reflected(P: MatrixPolynomial) -> MatrixPolynomial:
    """P(-p)"""
    return MatrixPolynomial(
        P.dims, {e: (-1.0 if sum(e) % 2 else 1.0) * c for e, c in P.terms.items()}
    )
