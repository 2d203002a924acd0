import logging

import pytest

from helper_functions import (
    anchor_algebroid,
    flat_plane,
    largest,
    points,
    section,
    so3,
    structure,
)
from spraycheck.error_handling import POLICIES, StructureError
from spraycheck.geometry.algebroid import (
    BaseSection,
    anchor_apply,
    bracket_E,
    check_structure_equations,
    complete_lift_fn,
    complete_lift_vf,
    vertical_lift_vf,
)
from spraycheck.jet.field import parse_field


@pytest.fixture(params=[flat_plane, so3, anchor_algebroid])
def algebroid(request):
    return request.param()


def test_structure_functions_are_antisymmetric():
    A = anchor_algebroid()
    at = points(A)
    assert largest([A.L[0][0][1] + A.L[0][1][0]], at) == 0.0
    assert largest([A.L[0][0][1] - 1.0], at) == 0.0
    assert A.L[0][0][0].is_zero


def test_lower_indices_must_increase():
    with pytest.raises(ValueError, match="alpha < beta"):
        structure(0, 2, L={(1, 2, 1): "1"})


def test_anchor_must_be_base_only():
    with pytest.raises(ValueError, match="base coordinates only"):
        structure(1, 1, rho={(1, 1): "y1"})


def test_sections_must_be_base_only():
    A = flat_plane()
    with pytest.raises(ValueError):
        section(A, "y1", "0")
    with pytest.raises(ValueError, match="needs 2 components"):
        section(A, "1")


def test_builtin_structures_pass(algebroid):
    report = check_structure_equations(algebroid, points(algebroid))
    assert report.passed
    assert report.anchor.maximum <= 1e-12
    assert report.jacobi.maximum <= 1e-12


def test_broken_jacobi_raises():
    A = structure(0, 3, L={(3, 1, 2): "1", (1, 1, 3): "1"})
    with pytest.raises(StructureError, match="Jacobi"):
        check_structure_equations(A, points(A), on_failure=POLICIES["error"])


def test_broken_jacobi_warns(caplog):
    A = structure(0, 3, L={(3, 1, 2): "1", (1, 1, 3): "1"})
    with caplog.at_level(logging.WARNING):
        report = check_structure_equations(A, points(A))
    assert not report.passed
    assert report.anchor.within(1e-8)
    assert report.jacobi.maximum == pytest.approx(1.0)
    assert "Jacobi identity" in caplog.text


def test_broken_anchor_equation():
    A = structure(1, 2, rho={(1, 1): "1", (1, 2): "1"}, L={(1, 1, 2): "1"})
    report = check_structure_equations(A, points(A), on_failure=POLICIES["ignore"])
    assert report.anchor.maximum == pytest.approx(1.0)
    assert not report.passed


def test_bracket_follows_leibniz():
    A = anchor_algebroid()
    e1 = BaseSection.basis(A, 0)
    bracket = bracket_E(A, e1, section(A, "0", "x1^2"))
    expected = [parse_field("x1^2", 1, 2), parse_field("2*x1", 1, 2)]
    at = points(A)
    assert largest([a - b for a, b in zip(bracket.comp, expected)], at) < 1e-12


def test_bracket_is_antisymmetric(algebroid):
    A = algebroid
    xi = BaseSection(A, tuple(A.const(float(a + 1)) for a in range(A.m)))
    eta = BaseSection.basis(A, A.m - 1)
    left = bracket_E(A, xi, eta)
    right = bracket_E(A, eta, xi)
    assert largest([a + b for a, b in zip(left.comp, right.comp)], points(A)) < 1e-12


def test_complete_lift_of_function():
    A = anchor_algebroid()
    f = parse_field("x1^2", 1, 2)
    expected = parse_field("2*x1*y1 + 2*x1^2*y2", 1, 2)
    assert largest([complete_lift_fn(A, f) - expected], points(A)) < 1e-12


def test_lifts_act_on_complete_lifts():
    A = anchor_algebroid()
    f = parse_field("x1^3 + x1", 1, 2)
    xi = section(A, "x1^2", "1 + x1")
    at = points(A)
    rho_f = anchor_apply(A, xi, f)
    lift_f = complete_lift_fn(A, f)
    assert largest([vertical_lift_vf(A, xi).apply(lift_f) - rho_f], at) < 1e-10
    assert (
        largest(
            [complete_lift_vf(A, xi).apply(lift_f) - complete_lift_fn(A, rho_f)], at
        )
        < 1e-10
    )


def test_lift_brackets():
    A = anchor_algebroid()
    xi = section(A, "x1^2", "1 + x1")
    eta = BaseSection.basis(A, 1)
    bracket = bracket_E(A, xi, eta)
    at = points(A)
    xi_c, eta_c = complete_lift_vf(A, xi), complete_lift_vf(A, eta)
    xi_v, eta_v = vertical_lift_vf(A, xi), vertical_lift_vf(A, eta)
    assert (
        largest((xi_c.commutator(eta_c) - complete_lift_vf(A, bracket)).components(), at)
        < 1e-10
    )
    assert (
        largest((xi_c.commutator(eta_v) - vertical_lift_vf(A, bracket)).components(), at)
        < 1e-10
    )
    assert largest(xi_v.commutator(eta_v).components(), at) == 0.0
