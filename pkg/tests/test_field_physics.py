import numpy as np
import pytest

from src.core.errors import DomainError
from src.core.field_physics import (
    PROCA_CHAIN,
    causality_constraint,
    dirac_rest_coefficients,
    proca_report,
    render_operator,
    statistics_for,
    verify_field_equation,
    verify_field_equation_spin_sum_form,
    weyl_pair_report,
)
from src.core.halfint import HalfInt
from src.core.intertwiners import build_coefficients
from src.core.linalg import max_norm
from src.core.gamma import PAULI, pauli_tensor
from src.core.lorentz import METRIC, ab_rep
from src.core.polynomial import MatrixPolynomial

HALF = HalfInt(1)
LABELS = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (3, 0)]


def coefficients(a2, b2, j2, m=1.0):
    return build_coefficients(ab_rep(HalfInt(a2), HalfInt(b2)), HalfInt(j2), m)


def test_dirac_rest_coefficients():
    expected = np.array([[1, 0], [0, 1], [1, 0], [0, 1]], dtype=complex)
    assert max_norm(dirac_rest_coefficients() - expected) <= 1e-12


def test_weyl_equations():
    report = weyl_pair_report(1.0)
    assert report.passed
    assert report.rendering == ["m φ = i σ^μ ∂_μ χ", "m χ = i σ̄^μ ∂_μ φ", "φ = φ", "χ = χ"]
    assert set(report.rendering) <= set(report.residuals)
    assert max(report.residuals.values()) <= 1e-8
    assert weyl_pair_report(2.0, samples=10).rendering == report.rendering


def test_mixed_chirality_equation_is_first_order():
    report = verify_field_equation(coefficients(1, 0, 1), coefficients(0, 1, 1))
    assert report.degrees == (1,)
    assert report.phase_product == 1
    assert report.u_residual <= 1e-8 and report.v_residual <= 1e-8
    assert report.rendering == ["m ψ(1/2,0) = i σ^μ ∂_μ ψ(0,1/2)"]


def test_vector_label_equation_has_even_degrees():
    report = verify_field_equation(coefficients(1, 1, 2), coefficients(1, 1, 2))
    assert report.degrees == (0, 2)
    assert report.reduced_operator.max_p0_power() <= 1
    assert report.passed


@pytest.mark.parametrize("left, right, j2", [
    ((2, 1), (3, 0), 3),
    ((1, 1), (2, 0), 2),
    ((0, 0), (1, 1), 0),
], ids=str)
def test_higher_spin_equations(left, right, j2):
    report = verify_field_equation(coefficients(*left, j2), coefficients(*right, j2))
    assert report.passed
    json_form = report.to_json()
    assert json_form["passed"] and json_form["phase_product"] == 1


def test_spin_sum_form_of_the_field_equation():
    assert verify_field_equation_spin_sum_form(coefficients(1, 0, 1), coefficients(0, 1, 1)) <= 1e-8
    assert verify_field_equation_spin_sum_form(coefficients(2, 1, 3), coefficients(3, 0, 3)) <= 1e-8


def test_field_equation_domain_errors():
    with pytest.raises(DomainError):
        verify_field_equation(coefficients(1, 1, 0), coefficients(1, 1, 2))
    with pytest.raises(DomainError):
        verify_field_equation(coefficients(1, 0, 1), coefficients(1, 0, 1, m=2.0))


def test_proca_chain():
    report = proca_report(1.0)
    for key in ("rest_spin_sum_defect", "rest_time_row", "transversality", "double_divergence"):
        assert report.notes[key] <= 1e-9
    assert report.rendering[-len(PROCA_CHAIN):] == list(PROCA_CHAIN)
    assert "∂_μ(∂^μ B^ν − ∂^ν B^μ) − m² B^ν = 0" in report.rendering
    with pytest.raises(DomainError):
        proca_report(0.0)


@pytest.mark.parametrize("A, B, j, statistics, sign", [
    (0, 0, 0, "Bose", 1),
    (HALF, 0, HALF, "Fermi", -1),
    (HALF, HALF, HalfInt(2), "Bose", 1),
    (HalfInt(2), HALF, HalfInt(3), "Fermi", -1),
])
def test_spin_statistics(A, B, j, statistics, sign):
    report = statistics_for(A, B, j)
    assert report.statistics == statistics
    assert report.required_sign == sign
    assert report.to_json()["bracket"] == ("commutator" if sign == 1 else "anticommutator")


def test_statistics_rejects_spin_outside_rep():
    with pytest.raises(DomainError):
        statistics_for(HALF, 0, HalfInt(3))


@pytest.mark.parametrize("left", LABELS)
@pytest.mark.parametrize("right", LABELS)
def test_causality_selects_the_statistics_sign(left, right):
    A, B = (HalfInt(x) for x in left)
    C, D = (HalfInt(x) for x in right)
    if (A.twice + B.twice) % 2 != (C.twice + D.twice) % 2:
        with pytest.raises(DomainError):
            causality_constraint(A, B, C, D, 1)
        return
    sign = -1 if (A.twice + B.twice) % 2 else 1
    good = causality_constraint(A, B, C, D, sign)
    bad = causality_constraint(A, B, C, D, -sign)
    assert good.satisfied
    assert good.q_coefficient == 2
    assert bad.p_coefficient == 2
    assert not bad.satisfied


def test_causality_rejects_bad_sign():
    with pytest.raises(DomainError):
        causality_constraint(0, 0, 0, 0, 0)


def _unit(mu):
    exp = [0, 0, 0, 0]
    exp[mu] = 1
    return tuple(exp)


@pytest.mark.parametrize("bar, expected", [(False, "m φ = i σ^μ ∂_μ χ"), (True, "m φ = i σ̄^μ ∂_μ χ")])
def test_render_recognizes_sigma_contraction(bar, expected):
    m = 2.0
    sigma = pauli_tensor(bar)
    # Π(p) = -(1/m) p_μ X^μ with p_μ = η_μμ p^μ
    poly = MatrixPolynomial((2, 2), {_unit(mu): -(METRIC[mu, mu] / m) * sigma[(mu,)] for mu in range(4)})
    assert render_operator(poly, "φ", "χ", m) == expected


def test_render_constants_and_single_terms():
    eye = np.eye(2)
    assert render_operator(MatrixPolynomial.constant(eye), "φ", "χ") == "φ = χ"
    assert render_operator(MatrixPolynomial.constant(-eye), "φ", "χ") == "φ = -χ"
    assert render_operator(MatrixPolynomial.constant(2 * eye), "φ", "χ") == "φ = 2 χ"
    assert render_operator(MatrixPolynomial.zero((2, 2)), "φ", "χ") == "φ = 0"
    single = MatrixPolynomial((2, 2), {(0, 0, 0, 1): PAULI[3]})
    assert render_operator(single, "φ", "χ") == "m φ = -i σ³ ∂³ χ"
    diag = MatrixPolynomial.constant(np.diag([1.0, -1.0, -1.0, -1.0]))
    assert render_operator(diag, "A", "B") == "A = diag(1, -1, -1, -1) B"


def test_render_mixed_degrees_carries_mass_powers():
    eye = np.eye(2)
    poly = MatrixPolynomial((2, 2), {(0, 0, 0, 0): 2 * eye, (2, 0, 0, 0): eye})
    assert render_operator(poly, "A", "B") == "m² A = (-(∂⁰)² + 2 m²) B"
