import pytest

from helper_functions import (
    anchor_algebroid,
    connection,
    flat_plane,
    largest,
    points,
    section,
    so3,
)
from spraycheck.error_handling import NotProjectableError
from spraycheck.geometry.algebroid import (
    BaseSection,
    PullbackSection,
    bracket_E,
    hat_lift,
)
from spraycheck.geometry.connection import horizontal_lift
from spraycheck.geometry.derivation import (
    ProjectableSection,
    TensorField,
    identity,
    lie_derivation,
    nabla_h_fn,
    nabla_h_sec,
    nabla_h_sec_from_brackets,
    nabla_v_fn,
    nabla_v_sec,
    nabla_v_tensor,
    tensor_with_delta,
    trace,
)
from spraycheck.geometry.prolong import (
    basis_X,
    canonical_section,
    complete_lift_P,
    vertical_lift_P,
)
from spraycheck.jet.field import parse_field


@pytest.fixture(
    params=[
        (flat_plane, ("-(y1^2 + y2^2)*x1", "-(y1^2 + y2^2)*x2"), ("-x2", "x1")),
        (so3, (), ("1", "0", "0")),
        (anchor_algebroid, ("x1*y1^2", "y1*y2"), ("x1^2", "1 + x1")),
    ]
)
def setting(request):
    build, spray_components, section_components = request.param
    A = build()
    return connection(A, *spray_components), section(A, *section_components)


def probe(A):
    return parse_field(" + ".join(f"y{a + 1}^2" for a in range(A.m)), A.n, A.m)


def test_vertical_differentials():
    A = flat_plane()
    Bc = connection(A)
    at = points(A)
    sigma = PullbackSection(A, (A.zero, parse_field("y1^2", 2, 2)))
    result = nabla_v_sec(Bc, PullbackSection.basis(A, 0), sigma)
    assert largest([result.comp[0], result.comp[1] - 2.0 * A.y(0)], at) < 1e-12
    dF = nabla_v_fn(Bc, parse_field("y1*y2", 2, 2))
    assert largest([dF[0] - A.y(1), dF[1] - A.y(0)], at) < 1e-12


def test_horizontal_differential_of_function():
    A = flat_plane()
    Bc = connection(A, "-(y1^2 + y2^2)*x1", "-(y1^2 + y2^2)*x2")
    at = points(A)
    # ∇^h_1 y1 = ℬ^1_1 = −y1 x1
    dF = nabla_h_fn(Bc, parse_field("y1", 2, 2))
    assert largest([dF[0] + A.y(0) * A.x(0)], at) < 1e-12


def test_h_berwald_differential_two_ways(setting):
    Bc, _ = setting
    A = Bc.structure
    at = points(A)
    F = probe(A)
    for alpha in range(A.m):
        for beta in range(A.m):
            xi = PullbackSection.basis(A, alpha)
            eta = PullbackSection.basis(A, beta).scaled(F)
            difference = nabla_h_sec(Bc, xi, eta) - nabla_h_sec_from_brackets(Bc, xi, eta)
            assert largest(difference.comp, at) < 1e-10


def test_lie_derivation_two_ways(setting):
    Bc, eta = setting
    A = Bc.structure
    at = points(A)
    derivation = lie_derivation(Bc, complete_lift_P(A, eta))
    for beta in range(A.m):
        sigma = PullbackSection.basis(A, beta).scaled(probe(A))
        difference = derivation.pullback(sigma) - derivation.pullback_local(sigma)
        assert largest(difference.comp, at) < 1e-10


def test_lie_derivation_along_lifts(setting):
    Bc, eta = setting
    A = Bc.structure
    at = points(A)
    sigma = PullbackSection(A, tuple(probe(A) * c for c in eta.comp))
    eta_hat = hat_lift(eta)
    along_V = lie_derivation(Bc, vertical_lift_P(A, eta))
    assert largest(
        (along_V.pullback(sigma) - nabla_v_sec(Bc, eta_hat, sigma)).comp, at
    ) < 1e-10
    along_h = lie_derivation(Bc, horizontal_lift(Bc, eta), at)
    assert largest(
        (along_h.pullback(sigma) - nabla_h_sec(Bc, eta_hat, sigma)).comp, at
    ) < 1e-10


def test_lie_derivation_of_hat_lifts(setting):
    Bc, eta = setting
    A = Bc.structure
    at = points(A)
    along_C = lie_derivation(Bc, complete_lift_P(A, eta))
    for beta in range(A.m):
        xi = BaseSection.basis(A, beta)
        difference = along_C.pullback(hat_lift(xi)) - hat_lift(bracket_E(A, eta, xi))
        assert largest(difference.comp, at) < 1e-10


def test_identity_and_canonical_section_are_invariant(setting):
    Bc, eta = setting
    A = Bc.structure
    at = points(A)
    along_C = lie_derivation(Bc, complete_lift_P(A, eta))
    assert largest(along_C(identity(A)).fields(), at) < 1e-12
    assert largest(along_C(canonical_section(A)).comp, at) < 1e-12


def test_leibniz_rule(setting):
    Bc, eta = setting
    A = Bc.structure
    at = points(A)
    F = probe(A)
    along_C = lie_derivation(Bc, complete_lift_P(A, eta))
    xi_hat = PullbackSection.basis(A, 0)
    lhs = along_C(xi_hat.scaled(F))
    rhs = xi_hat.scaled(along_C(F)) + along_C(xi_hat).scaled(F)
    assert largest((lhs - rhs).comp, at) < 1e-10


def test_lie_derivation_rejects_other_arguments():
    Bc = connection(flat_plane())
    derivation = lie_derivation(Bc, complete_lift_P(Bc.structure, section(Bc.structure, "1", "0")))
    with pytest.raises(TypeError):
        derivation(3)


def test_not_projectable():
    A = flat_plane()
    Bc = connection(A)
    moving = basis_X(A, 0).scaled(parse_field("y1", 2, 2))
    with pytest.raises(NotProjectableError):
        lie_derivation(Bc, moving)
    with pytest.raises(NotProjectableError) as err:
        lie_derivation(Bc, moving, points(A))
    assert err.value.component == 0
    assert err.value.residual == pytest.approx(1.0)


def test_projectable_after_cancellation():
    A = flat_plane()
    nominal = basis_X(A, 0).scaled(parse_field("x1 + y1 - y1", 2, 2))
    with pytest.raises(NotProjectableError):
        ProjectableSection.check(nominal)
    assert ProjectableSection.check(nominal, points(A)).section is nominal


def test_tensor_algebra():
    A = so3()
    at = points(A)
    Id = identity(A)
    assert largest([trace(Id).comp[()] - 3.0], at) == 0.0
    sigma = PullbackSection(A, (A.y(0), A.const(2.0), A.zero))
    image = Id(sigma)
    assert largest([a - b for a, b in zip(image.comp, sigma.comp)], at) < 1e-12
    with pytest.raises(ValueError):
        Id(sigma, sigma)
    with pytest.raises(ValueError):
        trace(TensorField.scalar(A, A.const(1.0)))


def test_tensor_derivatives():
    A = flat_plane()
    at = points(A)
    F = parse_field("y1^2*y2", 2, 2)
    dF = nabla_v_tensor(TensorField.scalar(A, F))
    assert dF.k == 1 and not dF.contravariant
    assert largest([dF.component(0) - 2.0 * A.y(0) * A.y(1)], at) < 1e-12
    omega_delta = tensor_with_delta(dF)
    assert omega_delta.contravariant
    assert largest(
        [omega_delta.component(1, 0) - dF.component(0) * A.y(1)], at
    ) < 1e-12
    with pytest.raises(ValueError):
        tensor_with_delta(identity(A))
