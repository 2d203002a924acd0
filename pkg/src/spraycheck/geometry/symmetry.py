"""Lie symmetries of a spray and the curvature collineations they induce.

A section η of E is a Lie symmetry of S when ⟦S, η^C⟧ = 0. Its complete
lift is then a curvature collineation of every tensor of the curvature
suite: L̃_{η^C} annihilates 𝒦, ℛ, ℋ, 𝒲°, 𝒲, 𝒲*, 𝔅 and 𝔇.
"""
import typing as t

import attr

from spraycheck.geometry.algebroid import (
    AlgebroidStructure,
    BaseSection,
    PullbackSection,
    bracket_E,
    complete_lift_coefficients,
)
from spraycheck.geometry.connection import (
    BerwaldConnection,
    Spray,
    horizontal_lift,
    vertical_projector,
)
from spraycheck.geometry.curvature import TENSORS, CurvatureSuite
from spraycheck.geometry.derivation import identity, lie_derivation
from spraycheck.geometry.prolong import (
    ProlongSection,
    basis_V,
    basis_X,
    canonical_section,
    complete_lift_P,
    map_i,
    prolong_bracket,
    vertical_endomorphism,
    vertical_lift_P,
)
from spraycheck.jet.field import ScalarField
from spraycheck.types import SamplePoints
from spraycheck.util import Residual, evaluator_for, measure


@attr.s(auto_attribs=True, frozen=True)
class LieSymmetryResidual:
    """⟦S, η^C⟧ at the sample points.

    `vertical` is its 𝒱-part, `horizontal` its 𝒳-part (which vanishes for
    every η), `local` the 𝒱-part computed from the coordinate expression
    and `disagreement` the difference of the two 𝒱-computations.
    """

    vertical: Residual
    horizontal: Residual
    local: Residual
    disagreement: Residual


def symmetry_condition_local(S: Spray, eta: BaseSection) -> t.Tuple[ScalarField, ...]:
    """The 𝒱-components of ⟦S, η^C⟧ written out in coordinates.

    y^β y^λ ρ^i_λ ∂η^α_|β/∂x^i − η^λ ρ^i_λ ∂S^α/∂x^i + S^λ η^α_|λ
    − y^β η^λ_|β ∂S^α/∂y^λ
    """
    A = S.structure
    D = complete_lift_coefficients(A, eta)
    m = A.m
    return tuple(
        A.sum(
            [
                A.y(beta) * A.y(lam) * A.anchor_derivative(lam, D[alpha][beta])
                for beta in range(m)
                for lam in range(m)
            ]
            + [-(eta.comp[lam] * A.anchor_derivative(lam, S.S[alpha])) for lam in range(m)]
            + [S.S[lam] * D[alpha][lam] for lam in range(m)]
            + [
                -(A.y(beta) * D[lam][beta] * S.S[alpha].diff_y(lam))
                for beta in range(m)
                for lam in range(m)
            ]
        )
        for alpha in range(m)
    )


def lie_symmetry_residual(
    S: Spray, eta: BaseSection, points: SamplePoints
) -> LieSymmetryResidual:
    A = S.structure
    bracket = prolong_bracket(A, S.section, complete_lift_P(A, eta))
    local = symmetry_condition_local(S, eta)
    evaluator = evaluator_for(points)
    return LieSymmetryResidual(
        measure(evaluator, bracket.V),
        measure(evaluator, bracket.Z),
        measure(evaluator, local),
        measure(evaluator, [a - b for a, b in zip(bracket.V, local)]),
    )


def A_section(Bc: BerwaldConnection, eta: BaseSection, xi: BaseSection) -> ProlongSection:
    """[η,ξ]^h − ⟦η^C, ξ^h⟧, a vertical section."""
    A = Bc.structure
    return horizontal_lift(Bc, bracket_E(A, eta, xi)) - prolong_bracket(
        A, complete_lift_P(A, eta), horizontal_lift(Bc, xi)
    )


def A_tensor(Bc: BerwaldConnection, eta: BaseSection, xi: BaseSection) -> PullbackSection:
    """A(η, ξ) as a pullback section, from lifts and brackets."""
    return PullbackSection(Bc.structure, A_section(Bc, eta, xi).V)


def A_tensor_local(
    Bc: BerwaldConnection, eta: BaseSection, xi: BaseSection
) -> PullbackSection:
    """A(η, ξ) in coordinates, tensorial in ξ.

    A^α = ξ^β(−η^λ ρ^i_λ ∂ℬ^α_β/∂x^i + y^γ ρ^i_β ∂η^α_|γ/∂x^i
    − y^γ η^λ_|γ ∂ℬ^α_β/∂y^λ + ℬ^λ_β η^α_|λ − η^γ_|β ℬ^α_γ)
    """
    A = Bc.structure
    B = Bc.B
    D = complete_lift_coefficients(A, eta)
    m = A.m
    comps = []
    for alpha in range(m):
        terms = []
        for beta in range(m):
            if xi.comp[beta].is_zero:
                continue
            inner = A.sum(
                [-(eta.comp[lam] * A.anchor_derivative(lam, B[alpha][beta])) for lam in range(m)]
                + [A.y(gamma) * A.anchor_derivative(beta, D[alpha][gamma]) for gamma in range(m)]
                + [
                    -(A.y(gamma) * D[lam][gamma] * B[alpha][beta].diff_y(lam))
                    for gamma in range(m)
                    for lam in range(m)
                ]
                + [B[lam][beta] * D[alpha][lam] for lam in range(m)]
                + [-(D[gamma][beta] * B[alpha][gamma]) for gamma in range(m)]
            )
            terms.append(xi.comp[beta] * inner)
        comps.append(A.sum(terms))
    return PullbackSection(A, tuple(comps))


def fn_bracket_J(
    A: AlgebroidStructure, eta: ProlongSection, xi: ProlongSection
) -> ProlongSection:
    """[J, η̃]^{F-N} ξ̃ = ⟦Jξ̃, η̃⟧ − J⟦ξ̃, η̃⟧."""
    return prolong_bracket(A, vertical_endomorphism(xi), eta) - vertical_endomorphism(
        prolong_bracket(A, xi, eta)
    )


def fn_bracket_v(
    Bc: BerwaldConnection, eta: ProlongSection, xi: ProlongSection
) -> ProlongSection:
    """[v, η̃]^{F-N} ξ̃ = ⟦vξ̃, η̃⟧ − v⟦ξ̃, η̃⟧."""
    A = Bc.structure
    return prolong_bracket(A, vertical_projector(Bc, xi), eta) - vertical_projector(
        Bc, prolong_bracket(A, xi, eta)
    )


def symmetry_lemma_residuals(
    Bc: BerwaldConnection, eta: BaseSection, points: SamplePoints
) -> t.Dict[str, Residual]:
    """Residuals of the statements equivalent to η being a Lie symmetry.

    ``A`` and ``FN_v_horizontal`` vanish exactly for symmetries; the other
    entries are identities that hold for every η; ``A_vertical`` is the 𝒳-part
    of [η,ξ]^h − ⟦η^C, ξ^h⟧, which is zero. [v, η^C] sends 𝒳_β to
    −i(A(η, e_β)), so ``FN_v_matches_A`` compares the two.
    """
    A = Bc.structure
    evaluator = evaluator_for(points)
    eta_C = complete_lift_P(A, eta)
    eta_V = vertical_lift_P(A, eta)
    a_values = []
    a_local = []
    a_horizontal = []
    fn_J = []
    fn_v_vertical = []
    fn_v_horizontal = []
    fn_v_matches = []
    for beta in range(A.m):
        e_beta = BaseSection.basis(A, beta)
        a = A_section(Bc, eta, e_beta)
        oracle = A_tensor_local(Bc, eta, e_beta)
        a_values.extend(a.V)
        a_horizontal.extend(a.Z)
        a_local.extend(x - y for x, y in zip(a.V, oracle.comp))
        for probe in (basis_X(A, beta), basis_V(A, beta)):
            fn_J.extend(fn_bracket_J(A, eta_C, probe).components())
            fn_J.extend(fn_bracket_J(A, eta_V, probe).components())
        fn_v_vertical.extend(fn_bracket_v(Bc, eta_C, basis_V(A, beta)).components())
        horizontal = fn_bracket_v(Bc, eta_C, basis_X(A, beta))
        fn_v_horizontal.extend(horizontal.components())
        fn_v_matches.extend(
            (horizontal + map_i(PullbackSection(A, a.V))).components()
        )
    return {
        "A": measure(evaluator, a_values),
        "A_vertical": measure(evaluator, a_horizontal),
        "A_local": measure(evaluator, a_local),
        "FN_J": measure(evaluator, fn_J),
        "FN_v_vertical": measure(evaluator, fn_v_vertical),
        "FN_v_horizontal": measure(evaluator, fn_v_horizontal),
        "FN_v_matches_A": measure(evaluator, fn_v_matches),
    }


@attr.s(auto_attribs=True)
class SymmetryReport:
    section: str
    tol: float
    symmetry: LieSymmetryResidual
    collineation: t.Dict[str, Residual] = attr.Factory(dict)
    lemmas: t.Dict[str, Residual] = attr.Factory(dict)

    @property
    def is_symmetry(self) -> bool:
        return self.symmetry.vertical.within(self.tol)

    def collineations(self) -> t.Dict[str, bool]:
        return {name: r.within(self.tol) for name, r in self.collineation.items()}


def collineation_residuals(
    suite: CurvatureSuite, eta: BaseSection, points: SamplePoints
) -> t.Dict[str, Residual]:
    """max |(L̃_{η^C}T)(ê..)| for every suite tensor, plus Id and δ."""
    Bc = suite.connection
    A = Bc.structure
    derivation = lie_derivation(Bc, complete_lift_P(A, eta))
    evaluator = evaluator_for(points)
    residuals = {
        name: measure(evaluator, derivation.tensor(suite.tensor(name)).fields())
        for name in TENSORS
    }
    residuals["Id"] = measure(evaluator, derivation.tensor(identity(A)).fields())
    residuals["delta"] = measure(
        evaluator, derivation.pullback(canonical_section(A)).comp
    )
    return residuals


def collineation_check(
    suite: CurvatureSuite,
    eta: BaseSection,
    points: SamplePoints,
    tol: float = 1e-8,
    name: str = "eta",
) -> SymmetryReport:
    Bc = suite.connection
    return SymmetryReport(
        name,
        tol,
        lie_symmetry_residual(Bc.spray, eta, points),
        collineation_residuals(suite, eta, points),
        symmetry_lemma_residuals(Bc, eta, points),
    )


__all__ = [
    "LieSymmetryResidual",
    "SymmetryReport",
    "lie_symmetry_residual",
    "symmetry_condition_local",
    "A_tensor",
    "A_tensor_local",
    "fn_bracket_J",
    "fn_bracket_v",
    "symmetry_lemma_residuals",
    "collineation_check",
    "collineation_residuals",
]
