"""Semisprays and the Berwald connection they induce."""
import typing as t

import attr

from spraycheck.cli import logger
from spraycheck.geometry.algebroid import (
    AlgebroidStructure,
    BaseSection,
    PullbackSection,
)
from spraycheck.geometry.prolong import (
    ProlongSection,
    complete_lift_P,
    prolong_bracket,
    vertical_lift_P,
)
from spraycheck.jet.field import ScalarField
from spraycheck.types import SamplePoints
from spraycheck.util import Residual, evaluator_for, measure


@attr.s(auto_attribs=True, frozen=True, eq=False)
class Spray:
    """S = y^α 𝒳_α + S^α 𝒱_α.

    `is_spray` flags S as homogeneous of degree 2; `euler_residual` checks it.
    """

    structure: AlgebroidStructure
    S: t.Tuple[ScalarField, ...]
    is_spray: bool = True

    def __attrs_post_init__(self):
        if len(self.S) != self.structure.m:
            raise ValueError(
                f"A semispray needs {self.structure.m} components, not {len(self.S)}"
            )
        self.structure.check_arity(self.S)

    @property
    def section(self) -> ProlongSection:
        A = self.structure
        return ProlongSection(A, tuple(A.y(a) for a in range(A.m)), self.S)

    def euler_defect(self) -> t.Tuple[ScalarField, ...]:
        """2S^β − y^α ∂S^β/∂y^α for every β."""
        A = self.structure
        return tuple(
            2.0 * s - A.sum(A.y(alpha) * s.diff_y(alpha) for alpha in range(A.m))
            for s in self.S
        )

    def euler_residual(self, points: SamplePoints) -> Residual:
        return measure(evaluator_for(points), self.euler_defect())


@attr.s(auto_attribs=True, frozen=True, eq=False)
class BerwaldConnection:
    spray: Spray
    B: t.Tuple[t.Tuple[ScalarField, ...], ...]
    warnings: t.Tuple[str, ...] = ()

    @property
    def structure(self) -> AlgebroidStructure:
        return self.spray.structure


def berwald_from_spray(
    A: AlgebroidStructure,
    S: Spray,
    points: t.Optional[SamplePoints] = None,
    tol: float = 1e-8,
) -> BerwaldConnection:
    """ℬ^γ_α = ½(∂S^γ/∂y^α − y^β L^γ_αβ).

    With `points`, the degree-2 homogeneity of S is checked first; a
    semispray still gets its coefficients, with a warning attached.
    """
    if S.structure is not A:
        raise ValueError("The semispray belongs to a different algebroid")
    warnings: t.List[str] = []
    if points is not None:
        residual = S.euler_residual(points)
        if not residual.within(tol):
            message = f"The semispray is not homogeneous of degree 2 (Euler defect up to {residual.maximum:.3g}); the Berwald connection is built regardless."
            logger.warning(message)
            warnings.append(message)
    B = tuple(
        tuple(
            0.5
            * (
                S.S[gamma].diff_y(alpha)
                - A.sum(
                    A.y(beta) * A.L[gamma][alpha][beta]
                    for beta in range(A.m)
                    if not A.L[gamma][alpha][beta].is_zero
                )
            )
            for alpha in range(A.m)
        )
        for gamma in range(A.m)
    )
    return BerwaldConnection(S, B, tuple(warnings))


def horizontal_lift(Bc: BerwaldConnection, eta: BaseSection) -> ProlongSection:
    """η^h = η^α δ_α."""
    return ehresmann(Bc, PullbackSection(eta.structure, eta.comp))


def horizontal_lift_from_brackets(Bc: BerwaldConnection, eta: BaseSection) -> ProlongSection:
    """η^h as ½(η^C + ⟦η^V, S⟧)."""
    A = Bc.structure
    return (
        complete_lift_P(A, eta)
        + prolong_bracket(A, vertical_lift_P(A, eta), Bc.spray.section)
    ).scaled(0.5)


def adapted_delta(Bc: BerwaldConnection, alpha: int) -> ProlongSection:
    """δ_α = 𝒳_α + ℬ^β_α 𝒱_β."""
    return horizontal_lift(Bc, BaseSection.basis(Bc.structure, alpha))


def ehresmann(Bc: BerwaldConnection, xi: PullbackSection) -> ProlongSection:
    """ℋ(ξ̄) = ξ̄^α δ_α."""
    A = Bc.structure
    return ProlongSection(
        A,
        xi.comp,
        tuple(
            A.sum(xi.comp[alpha] * Bc.B[beta][alpha] for alpha in range(A.m))
            for beta in range(A.m)
        ),
    )


def vertical_map(Bc: BerwaldConnection, xi: ProlongSection) -> PullbackSection:
    """𝒱(ξ̃) = (V^β − Z^α ℬ^β_α) ê_β, so that 𝒱∘i is the identity and 𝒱∘ℋ = 0."""
    A = Bc.structure
    return PullbackSection(
        A,
        tuple(
            xi.V[beta] - A.sum(xi.Z[alpha] * Bc.B[beta][alpha] for alpha in range(A.m))
            for beta in range(A.m)
        ),
    )


def horizontal_projector(Bc: BerwaldConnection, xi: ProlongSection) -> ProlongSection:
    """h(ξ̃) = Z^α δ_α."""
    return ehresmann(Bc, PullbackSection(xi.structure, xi.Z))


def vertical_projector(Bc: BerwaldConnection, xi: ProlongSection) -> ProlongSection:
    """v = Id − h."""
    return xi - horizontal_projector(Bc, xi)


def projectors(
    Bc: BerwaldConnection,
) -> t.Tuple[
    t.Callable[[ProlongSection], ProlongSection],
    t.Callable[[ProlongSection], ProlongSection],
]:
    return (
        lambda xi: horizontal_projector(Bc, xi),
        lambda xi: vertical_projector(Bc, xi),
    )


def connection_curvature(Bc: BerwaldConnection) -> t.Tuple[t.Tuple[t.Tuple[ScalarField, ...], ...], ...]:
    """R[γ][α][β], the vertical part of ⟦δ_α, δ_β⟧.

    R^γ_αβ = ρ^i_α ∂ℬ^γ_β/∂x^i − ρ^i_β ∂ℬ^γ_α/∂x^i + ℬ^λ_α ∂ℬ^γ_β/∂y^λ
    − ℬ^λ_β ∂ℬ^γ_α/∂y^λ + L^λ_βα ℬ^γ_λ.
    """
    A = Bc.structure
    B = Bc.B
    return tuple(
        tuple(
            tuple(
                A.anchor_derivative(alpha, B[gamma][beta])
                - A.anchor_derivative(beta, B[gamma][alpha])
                + A.sum(
                    B[lam][alpha] * B[gamma][beta].diff_y(lam)
                    - B[lam][beta] * B[gamma][alpha].diff_y(lam)
                    + A.L[lam][beta][alpha] * B[gamma][lam]
                    for lam in range(A.m)
                )
                for beta in range(A.m)
            )
            for alpha in range(A.m)
        )
        for gamma in range(A.m)
    )
