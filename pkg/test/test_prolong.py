import pytest

from helper_functions import (
    anchor_algebroid,
    flat_plane,
    largest,
    points,
    section,
    so3,
    spray,
)
from spraycheck.geometry.algebroid import BaseSection, PullbackSection, bracket_E
from spraycheck.geometry.prolong import (
    ProlongSection,
    basis_V,
    basis_X,
    canonical_section,
    complete_lift_P,
    homogeneity_defect,
    liouville,
    map_i,
    map_j,
    prolong_bracket,
    vertical_endomorphism,
    vertical_lift_P,
)
from spraycheck.jet.field import parse_field


@pytest.fixture(params=[flat_plane, so3, anchor_algebroid])
def algebroid(request):
    return request.param()


def difference(first: ProlongSection, second: ProlongSection):
    return (first - second).components()


def test_basis_bracket_table(algebroid):
    A = algebroid
    at = points(A)
    for alpha in range(A.m):
        for beta in range(A.m):
            expected = ProlongSection(
                A, tuple(A.L[g][alpha][beta] for g in range(A.m)), (A.zero,) * A.m
            )
            bracket = prolong_bracket(A, basis_X(A, alpha), basis_X(A, beta))
            assert largest(difference(bracket, expected), at) == 0.0
            assert largest(
                prolong_bracket(A, basis_X(A, alpha), basis_V(A, beta)).components(), at
            ) == 0.0
            assert largest(
                prolong_bracket(A, basis_V(A, alpha), basis_V(A, beta)).components(), at
            ) == 0.0


def test_leibniz_rule():
    A = anchor_algebroid()
    f = parse_field("x1^2 + y2", 1, 2)
    bracket = prolong_bracket(A, basis_X(A, 1), basis_V(A, 0).scaled(f))
    # ρ(e2) = x d/dx, so the anchor of 𝒳_2 sends f to 2x²
    expected = basis_V(A, 0).scaled(parse_field("2*x1^2", 1, 2))
    assert largest(difference(bracket, expected), points(A)) < 1e-12


def test_jacobi_identity():
    A = anchor_algebroid()
    S = spray(A, "x1*y1^2", "y1*y2").section
    xi = basis_X(A, 0).scaled(parse_field("y2", 1, 2)) + basis_V(A, 1)
    eta = basis_X(A, 1).scaled(parse_field("x1", 1, 2)) + basis_V(A, 0).scaled(
        parse_field("y1^2", 1, 2)
    )
    cyclic = (
        prolong_bracket(A, S, prolong_bracket(A, xi, eta))
        + prolong_bracket(A, xi, prolong_bracket(A, eta, S))
        + prolong_bracket(A, eta, prolong_bracket(A, S, xi))
    )
    assert largest(cyclic.components(), points(A)) < 1e-10


def test_vertical_endomorphism(algebroid):
    A = algebroid
    at = points(A)
    S = spray(A).section
    assert largest(vertical_endomorphism(vertical_endomorphism(S)).components(), at) == 0.0
    assert largest(difference(vertical_endomorphism(S), liouville(A)), at) == 0.0
    assert largest(difference(map_i(canonical_section(A)), liouville(A)), at) == 0.0


def test_exact_sequence():
    A = anchor_algebroid()
    at = points(A)
    sigma = PullbackSection(A, (parse_field("y1*x1", 1, 2), parse_field("y2^2", 1, 2)))
    assert largest(map_j(map_i(sigma)).comp, at) == 0.0
    eta = section(A, "x1^2", "1 + x1")
    assert largest(
        [a - b for a, b in zip(map_j(complete_lift_P(A, eta)).comp, eta.comp)], at
    ) == 0.0
    assert largest(
        difference(vertical_endomorphism(complete_lift_P(A, eta)), vertical_lift_P(A, eta)),
        at,
    ) == 0.0


def test_liouville_homogeneity():
    A = flat_plane()
    at = points(A)
    sprays = [spray(A), spray(A, "-(y1^2 + y2^2)*x1", "-(y1^2 + y2^2)*x2")]
    for S in sprays:
        assert largest(homogeneity_defect(A, S.section, 2).components(), at) < 1e-12
    semispray = spray(A, "1", "0", is_spray=False)
    defect = homogeneity_defect(A, semispray.section, 2)
    assert largest(defect.components(), at) == pytest.approx(2.0)


def test_lifts_preserve_brackets():
    A = so3()
    at = points(A)
    e1, e2, e3 = (BaseSection.basis(A, a) for a in range(3))
    bracket = bracket_E(A, e1, e2)
    assert largest([a - b for a, b in zip(bracket.comp, e3.comp)], at) == 0.0
    assert largest(
        difference(
            prolong_bracket(A, complete_lift_P(A, e1), complete_lift_P(A, e2)),
            complete_lift_P(A, e3),
        ),
        at,
    ) < 1e-12
    assert largest(
        difference(
            prolong_bracket(A, complete_lift_P(A, e1), vertical_lift_P(A, e2)),
            vertical_lift_P(A, e3),
        ),
        at,
    ) < 1e-12


def test_complete_lift_bracket_with_anchor():
    A = anchor_algebroid()
    xi = section(A, "x1^2", "1 + x1")
    eta = BaseSection.basis(A, 1)
    lifted = prolong_bracket(A, complete_lift_P(A, xi), complete_lift_P(A, eta))
    assert largest(
        difference(lifted, complete_lift_P(A, bracket_E(A, xi, eta))), points(A)
    ) < 1e-10
