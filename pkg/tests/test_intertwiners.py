import numpy as np
import pytest

from src.core.errors import DomainError
from src.core.halfint import HalfInt, triangle
from src.core.intertwiners import (
    build_coefficients,
    intertwining_defect,
    u_at,
    v_at,
    wigner_covariance_defect,
)
from src.core.linalg import max_norm
from src.core.lorentz import FourVector, LorentzWord, ab_rep, vector_field_rep
from src.core.su2 import conjugation_matrix

LABELS = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (3, 0)]
CASES = [
    (ab_rep(HalfInt(a), HalfInt(b)), j)
    for a, b in LABELS
    for j in triangle(HalfInt(a), HalfInt(b))
] + [(vector_field_rep(), HalfInt(0)), (vector_field_rep(), HalfInt(2))]



@pytest.mark.parametrize("rep, j", CASES)
def test_rest_coefficients_are_isometries(rep, j):
    cs = build_coefficients(rep, j, 1.0)
    assert cs.u0.shape == (rep.dim, j.dim)
    assert max_norm(cs.u0.conj().T @ cs.u0 - np.eye(j.dim)) <= 1e-12
    assert max_norm(cs.v0 - cs.u0 @ conjugation_matrix(j)) == 0.0


@pytest.mark.parametrize("rep, j", CASES)
def test_rest_coefficients_intertwine_rotations(rep, j, rng):
    cs = build_coefficients(rep, j, 1.0)
    for _ in range(5):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        rotation = LorentzWord.rotation(tuple(axis), float(rng.uniform(0, 2 * np.pi)))
        assert intertwining_defect(cs, rotation) <= 1e-10


@pytest.mark.parametrize("rep, j", CASES)
def test_boosted_coefficients_transform_with_wigner_rotation(rep, j, words, momenta):
    cs = build_coefficients(rep, j, 1.0)
    for w, p in zip(words[:5], momenta[:5]):
        scale = max(1.0, max_norm(u_at(cs, p)))
        assert wigner_covariance_defect(cs, w, p) <= 1e-8 * scale * 100


def test_rest_frame_values():
    cs = build_coefficients(ab_rep(HalfInt(1), HalfInt(1)), HalfInt(2), 2.0)
    rest = FourVector.at_rest(2.0)
    assert max_norm(u_at(cs, rest) - cs.u0) <= 1e-15
    assert max_norm(v_at(cs, rest) - cs.v0) <= 1e-15


def test_vector_spin_one_has_no_time_component():
    cs = build_coefficients(vector_field_rep(), HalfInt(2), 1.0)
    assert max_norm(cs.u0[0]) <= 1e-12
    scalar = build_coefficients(vector_field_rep(), HalfInt(0), 1.0)
    assert abs(abs(scalar.u0[0, 0]) - 1.0) <= 1e-12


def test_domain_errors():
    with pytest.raises(DomainError):
        build_coefficients(ab_rep(HalfInt(1), 0), HalfInt(3), 1.0)
    with pytest.raises(DomainError):
        build_coefficients(ab_rep(HalfInt(1), 0), HalfInt(1), 0.0)
    cs = build_coefficients(ab_rep(HalfInt(1), 0), HalfInt(1), 1.0)
    with pytest.raises(DomainError):
        u_at(cs, FourVector((2.0, 0.0, 0.0, 0.0)))


def test_vector_spin_one_rest_coefficients():
    s = 1 / np.sqrt(2)
    # columns σ = +1, 0, -1
    literal = np.array([[0, 0, 0], [-s, 0, s], [-1j * s, 0, -1j * s], [0, 1, 0]])
    u0 = build_coefficients(vector_field_rep(), HalfInt(2), 1.0).u0
    # the first largest entry of the σ = +1 column is made real positive, which flips the overall sign
    assert u0[1, 0].real > 0
    assert max_norm(u0 + literal) <= 1e-12


def test_weyl_negative_frequency_rest_coefficients():
    cs = build_coefficients(ab_rep(HalfInt(1), 0), HalfInt(1), 1.0)
    assert max_norm(cs.v0 - np.array([[0, -1], [1, 0]])) <= 1e-15
