import numpy as np
import pytest

from src.core.errors import AlgebraError, CasimirError, DomainError, FitError
from src.core.gamma import (
    PAULI,
    SymTensorMatrix,
    TwistKind,
    build_T,
    casimir_value_to_k,
    component_count,
    covariance_defect,
    invariant_seeds,
    lie_covariance_defect,
    multiplicity,
    normalize_seed,
    pauli_tensor,
    predicted_k_range,
    sigma_dot,
    trace_defect,
    v_action,
)
from src.core.halfint import HalfInt
from src.core.linalg import max_norm
from src.core.lorentz import METRIC, FieldRep, FourVector, ab_rep, lorentz_algebra_defect

HALF = HalfInt(1)
LABELS = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (3, 0)]
PAIRS = [
    (HalfInt(a), HalfInt(b), HalfInt(c), HalfInt(d))
    for a, b in LABELS
    for c, d in LABELS
]


@pytest.mark.parametrize("twist", list(TwistKind))
def test_induced_action_is_a_representation(twist):
    J, K = v_action(ab_rep(HALF, 0), ab_rep(HalfInt(2), HALF), twist)
    assert lorentz_algebra_defect(J, K) <= 1e-9


@pytest.mark.parametrize("A, B, C, D", PAIRS, ids=str)
@pytest.mark.parametrize("twist", list(TwistKind))
def test_seed_labels_fill_the_predicted_range(A, B, C, D, twist):
    found = [K for K, _ in invariant_seeds(ab_rep(A, B), ab_rep(C, D), twist)]
    assert found == predicted_k_range((A, B), (C, D), twist)


def test_predicted_range_swaps_for_inverse_twist():
    assert predicted_k_range((HALF, 0), (0, HALF), TwistKind.HERMITIAN) == [HalfInt(0)]
    assert predicted_k_range((HALF, 0), (0, HALF), TwistKind.INVERSE) == [HALF]
    assert predicted_k_range((HALF, 0), (HALF, 0), TwistKind.INVERSE) == [HalfInt(0)]
    assert predicted_k_range((HalfInt(2), 0), (HALF, 0), TwistKind.HERMITIAN) == []


def test_seeds_are_normalized():
    for _, seed in invariant_seeds(ab_rep(HALF, HALF), ab_rep(HALF, HALF), TwistKind.HERMITIAN):
        assert np.max(np.abs(seed)) == pytest.approx(1.0)
        assert 1.0 in seed.ravel()


@pytest.mark.parametrize("bar", [False, True])
def test_pauli_matrices_are_recovered(bar):
    rep = ab_rep(0, HALF) if bar else ab_rep(HALF, 0)
    (K, seed), = invariant_seeds(rep, rep, TwistKind.HERMITIAN)
    assert K == HALF
    T = build_T(rep, rep, TwistKind.HERMITIAN, K, seed)
    reference = pauli_tensor(bar)
    for mu in range(4):
        assert max_norm(T[(mu,)] - reference[(mu,)]) <= 1e-9


def test_sigma_covariance_and_wrong_metric(words, weyl_left):
    T = pauli_tensor()
    assert max(covariance_defect(T, weyl_left, weyl_left, w) for w in words) <= 1e-9
    flipped = np.eye(4)
    assert max(covariance_defect(T, weyl_left, weyl_left, w, flipped) for w in words) > 1e-3


def test_scalar_tensor_is_the_identity():
    rep = ab_rep(0, 0)
    (K, seed), = invariant_seeds(rep, rep, TwistKind.HERMITIAN)
    T = build_T(rep, rep, TwistKind.HERMITIAN, K, seed)
    assert T.rank == 0
    assert np.array_equal(T[()], np.ones((1, 1)))


def test_vector_seeds_for_both_twists(vector):
    hermitian = dict(invariant_seeds(vector, vector, TwistKind.HERMITIAN))
    assert set(hermitian) == {HalfInt(0), HalfInt(2)}
    assert max_norm(hermitian[HalfInt(0)] - np.diag([1.0, -1.0, -1.0, -1.0])) <= 1e-9
    assert max_norm(hermitian[HalfInt(2)] - np.diag([1.0, 1 / 3, 1 / 3, 1 / 3])) <= 1e-9
    inverse = dict(invariant_seeds(vector, vector, TwistKind.INVERSE))
    assert max_norm(inverse[HalfInt(0)] - np.eye(4)) <= 1e-9
    assert max_norm(inverse[HalfInt(2)] - np.diag([1.0, -1 / 3, -1 / 3, -1 / 3])) <= 1e-9


def test_non_unitary_basis_is_rejected_by_seed_search(vector):
    # rescaling the time axis commutes with J but leaves K non-anti-Hermitian
    S = np.diag([2.0, 1.0, 1.0, 1.0])
    S_inv = np.linalg.inv(S)
    skewed = FieldRep(
        dim=4, J=vector.J, K=tuple(S @ G @ S_inv for G in vector.K), name="skewed vector"
    )
    with pytest.raises(AlgebraError):
        invariant_seeds(skewed, skewed, TwistKind.HERMITIAN)


def test_vector_rank_two_tensor_is_symmetric_traceless_metric_product(vector):
    seeds = dict(invariant_seeds(vector, vector, TwistKind.HERMITIAN))
    T = build_T(vector, vector, TwistKind.HERMITIAN, HalfInt(2), seeds[HalfInt(2)])
    eta = METRIC
    for mu in range(4):
        for rho in range(4):
            expected = (2 / 3) * (
                np.outer(eta[mu], eta[rho]) + np.outer(eta[rho], eta[mu]) - 0.5 * eta[mu, rho] * eta
            )
            assert max_norm(T[(mu, rho)] - expected) <= 1e-8
    assert trace_defect(T) <= 1e-9
    assert lie_covariance_defect(T, vector, vector) <= 1e-8


@pytest.mark.parametrize("labels", [((2, 1), (2, 1)), ((3, 0), (2, 1)), ((1, 1), (1, 1))], ids=str)
@pytest.mark.parametrize("twist", list(TwistKind))
def test_built_tensors_pass_their_own_checks(labels, twist, words):
    (a, b), (c, d) = labels
    repL, repR = ab_rep(HalfInt(a), HalfInt(b)), ab_rep(HalfInt(c), HalfInt(d))
    for K, seed in invariant_seeds(repL, repR, twist):
        T = build_T(repL, repR, twist, K, seed)
        assert T.diagnostics.relative_residual <= 1e-8
        assert T.diagnostics.seed_recovery <= 1e-8
        assert np.array_equal(T[(0,) * T.rank], seed)
        assert trace_defect(T) <= 1e-9
        assert lie_covariance_defect(T, repL, repR) <= 1e-8
        assert max(covariance_defect(T, repL, repR, w) for w in words[:3]) <= 1e-8


def test_under_sampled_fit_is_rejected():
    rep = ab_rep(HalfInt(2), 0)
    (K, seed), = invariant_seeds(rep, rep, TwistKind.HERMITIAN)[-1:]
    with pytest.raises(FitError):
        build_T(rep, rep, TwistKind.HERMITIAN, K, seed, samples=component_count(K))


def test_seed_shape_is_checked():
    rep = ab_rep(HALF, 0)
    with pytest.raises(DomainError):
        build_T(rep, rep, TwistKind.HERMITIAN, HALF, np.eye(3))


def test_tensor_json_round_trip():
    T = pauli_tensor(bar=True)
    back = SymTensorMatrix.from_json(T.to_json())
    assert back.K == T.K
    for mu in range(4):
        assert np.array_equal(back[(mu,)], T[(mu,)])


def test_casimir_inversion():
    assert casimir_value_to_k(0.75) == HALF
    assert casimir_value_to_k(6.0) == HalfInt(4)
    with pytest.raises(CasimirError):
        casimir_value_to_k(1.0)
    with pytest.raises(CasimirError):
        casimir_value_to_k(-0.5)


def test_index_combinatorics():
    assert component_count(HalfInt(2)) == 10
    assert multiplicity((0, 0, 1)) == 3
    assert multiplicity((0, 1, 2)) == 6


def test_normalize_seed_ties_go_to_first_index():
    seed = normalize_seed(np.array([[0.0, -2j], [2j, 0.0]]))
    assert seed[0, 1] == 1.0
    assert seed[1, 0] == pytest.approx(-1.0)


def test_sigma_dot_on_shell_identity():
    p = FourVector.on_shell(1.0, (0.3, -0.4, 1.2))
    product = sigma_dot(p.lowered()) @ sigma_dot(p.lowered(), bar=True)
    assert max_norm(product - np.eye(2)) <= 1e-12
    assert PAULI[2][0, 1] == -1j


def test_twist_parse():
    assert TwistKind.parse(" Inverse ") is TwistKind.INVERSE
    with pytest.raises(DomainError):
        TwistKind.parse("transpose")
