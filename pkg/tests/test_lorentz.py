import numpy as np
import pytest

from src.core.errors import AlgebraError, DomainError
from src.core.halfint import HalfInt
from src.core.linalg import max_norm
from src.core.lorentz import (
    METRIC,
    FieldRep,
    FourVector,
    LorentzWord,
    ab_rep,
    concat,
    lorentz_algebra_defect,
    random_on_shell,
    rep_matrix,
    require_on_shell,
    standard_boost,
    vector_matrix,
    wigner_rotation,
)

LABELS = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (2, 1), (3, 0), (2, 2)]


@pytest.mark.parametrize("a2, b2", LABELS)
def test_ab_rep_satisfies_lorentz_algebra(a2, b2):
    rep = ab_rep(HalfInt(a2), HalfInt(b2))
    assert rep.dim == (a2 + 1) * (b2 + 1)
    assert lorentz_algebra_defect(rep.J, rep.K) <= 1e-12
    assert rep.key == f"ab({HalfInt(a2)},{HalfInt(b2)})"
    assert ab_rep(HalfInt(a2), HalfInt(b2)) is rep


def test_vector_generators_match_literal_matrices(vector):
    Jz = -1j * np.array([[0, 0, 0, 0], [0, 0, 1, 0], [0, -1, 0, 0], [0, 0, 0, 0]])
    assert np.array_equal(vector.J[2], Jz)
    # ladder matrices scaled to unit steps: (J_x ± iJ_y)/√2
    for sign in (1, -1):
        ladder = (-1j / np.sqrt(2)) * np.array(
            [[0, 0, 0, 0], [0, 0, 0, -sign * 1j], [0, 0, 0, 1], [0, sign * 1j, -1, 0]]
        )
        assert max_norm((vector.J[0] + sign * 1j * vector.J[1]) / np.sqrt(2) - ladder) <= 1e-15
    Kx = np.zeros((4, 4), dtype=complex)
    Kx[0, 1] = Kx[1, 0] = 1j
    assert np.array_equal(vector.K[0], Kx)


def test_vector_boost_along_z_is_the_t_z_block(vector):
    lam = rep_matrix(vector, LorentzWord.boost((0.0, 0.0, 1.0), 0.8))
    expected = np.eye(4, dtype=complex)
    expected[np.ix_([0, 3], [0, 3])] = [[np.cosh(0.8), np.sinh(0.8)], [np.sinh(0.8), np.cosh(0.8)]]
    assert max_norm(lam - expected) <= 1e-12


def test_vector_rep(vector):
    assert vector.dim == 4
    assert vector.label == (HalfInt(1), HalfInt(1))
    assert not vector.standard_basis
    assert vector.key == "vector"
    assert lorentz_algebra_defect(vector.J, vector.K) <= 1e-12


def test_field_rep_validates_generators():
    rep = ab_rep(HalfInt(1), 0)
    with pytest.raises(AlgebraError):
        FieldRep(dim=2, J=rep.J, K=tuple(2 * G for G in rep.K), name="bad")
    with pytest.raises(DomainError):
        ab_rep(HalfInt(-1), 0)


def test_vector_matrix_is_a_lorentz_transformation(words):
    for w in words:
        lam = vector_matrix(w)
        assert max_norm(lam.T @ METRIC @ lam - METRIC) <= 1e-9 * max(1.0, max_norm(lam)) ** 2
        # orthochronous; a pure rotation sits at 1 up to rounding
        assert lam[0, 0] >= 1.0 - 1e-12
        assert np.linalg.det(lam) == pytest.approx(1.0, rel=1e-8)
    spin = vector_matrix(LorentzWord.rotation((0.0, 0.6, 0.8), 2.1))
    assert spin[0, 0] == pytest.approx(1.0, abs=1e-12)
    assert spin[0, 0] >= 1.0 - 1e-12


def test_boost_moves_rest_momentum_along_axis():
    lam = vector_matrix(LorentzWord.boost((1.0, 0.0, 0.0), 0.5))
    assert lam[0, 0] > 1.0
    p = FourVector.at_rest(2.0).transformed(lam)
    assert p.components == pytest.approx((2 * np.cosh(0.5), 2 * np.sinh(0.5), 0.0, 0.0))


def test_standard_boost_carries_rest_to_p(momenta):
    for p in momenta:
        moved = FourVector.at_rest(1.0).transformed(vector_matrix(standard_boost(p, 1.0)))
        assert moved.components == pytest.approx(p.components, abs=1e-10)
    assert len(standard_boost(FourVector.at_rest(1.0), 1.0)) == 0


@pytest.mark.parametrize("a2, b2", LABELS)
def test_word_inverse_and_concatenation(a2, b2, words):
    rep = ab_rep(HalfInt(a2), HalfInt(b2))
    for w in words[:4]:
        D = rep_matrix(rep, w)
        assert max_norm(D @ rep_matrix(rep, w.inverse()) - np.eye(rep.dim)) <= 1e-9 * max(1.0, max_norm(D)) ** 2
    D1, D2 = rep_matrix(rep, words[0]), rep_matrix(rep, words[1])
    product = rep_matrix(rep, concat(words[0], words[1]))
    assert max_norm(product - D1 @ D2) <= 1e-12 * np.linalg.norm(D1) * np.linalg.norm(D2)


def test_full_rotation_sign_depends_on_spin_parity():
    turn = LorentzWord.rotation((0.0, 0.0, 1.0), 2 * np.pi)
    assert max_norm(rep_matrix(ab_rep(HalfInt(1), 0), turn) + np.eye(2)) <= 1e-12
    assert max_norm(rep_matrix(ab_rep(HalfInt(1), HalfInt(1)), turn) - np.eye(4)) <= 1e-12


def test_wigner_rotation_of_a_rotation_is_the_rotation(momenta):
    rep = ab_rep(HalfInt(1), 0)
    rotation = LorentzWord.rotation((0.0, 0.6, 0.8), 1.1)
    for p in momenta[:5]:
        W = wigner_rotation(rep, rotation, p, 1.0)
        assert max_norm(W - rep_matrix(rep, rotation)) <= 1e-9


def test_on_shell_helpers(rng):
    p = random_on_shell(rng, 1.5)
    assert p.is_on_shell(1.5)
    assert p.dot(p) == pytest.approx(-2.25)
    assert p.lowered()[0] == pytest.approx(-p.energy)
    with pytest.raises(DomainError):
        require_on_shell(FourVector((1.0, 1.0, 0.0, 0.0)), 1.0)
    with pytest.raises(DomainError):
        FourVector.on_shell(0.0, (0.0, 0.0, 0.0))


def test_primitive_axis_must_be_unit():
    with pytest.raises(DomainError):
        LorentzWord.boost((1.0, 1.0, 0.0), 0.2)


def test_word_json_round_trip(words):
    w = words[0]
    assert LorentzWord.from_json(w.to_json()) == w
