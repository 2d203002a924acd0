"""The prolongation ℒ^πE: sections, anchor, bracket, and the canonical maps.

A section Z^α 𝒳_α + V^α 𝒱_α is stored as its two component tuples. The
bracket is the one fixed by ⟦𝒳_α, 𝒳_β⟧ = L^γ_αβ 𝒳_γ, ⟦𝒳_α, 𝒱_β⟧ = 0,
⟦𝒱_α, 𝒱_β⟧ = 0 and the Leibniz rule along ρ_ℒ.
"""
import typing as t

import attr

from spraycheck.geometry.algebroid import (
    AlgebroidStructure,
    BaseSection,
    EVectorField,
    PullbackSection,
    complete_lift_coefficients,
)
from spraycheck.jet.field import ScalarField


@attr.s(auto_attribs=True, frozen=True, eq=False)
class ProlongSection:
    structure: AlgebroidStructure
    Z: t.Tuple[ScalarField, ...]
    V: t.Tuple[ScalarField, ...]

    def __attrs_post_init__(self):
        m = self.structure.m
        if len(self.Z) != m or len(self.V) != m:
            raise ValueError(
                f"A section of the prolongation needs {m}+{m} components, not {len(self.Z)}+{len(self.V)}"
            )
        self.structure.check_arity(self.Z + self.V)

    def components(self) -> t.Tuple[ScalarField, ...]:
        return self.Z + self.V

    def __add__(self, other: "ProlongSection") -> "ProlongSection":
        return ProlongSection(
            self.structure,
            tuple(a + b for a, b in zip(self.Z, other.Z)),
            tuple(a + b for a, b in zip(self.V, other.V)),
        )

    def __sub__(self, other: "ProlongSection") -> "ProlongSection":
        return ProlongSection(
            self.structure,
            tuple(a - b for a, b in zip(self.Z, other.Z)),
            tuple(a - b for a, b in zip(self.V, other.V)),
        )

    def __neg__(self) -> "ProlongSection":
        return ProlongSection(
            self.structure, tuple(-a for a in self.Z), tuple(-a for a in self.V)
        )

    def scaled(self, f: t.Union[ScalarField, float]) -> "ProlongSection":
        return ProlongSection(
            self.structure, tuple(f * a for a in self.Z), tuple(f * a for a in self.V)
        )


def basis_X(A: AlgebroidStructure, alpha: int) -> ProlongSection:
    unit = tuple(A.const(1.0 if b == alpha else 0.0) for b in range(A.m))
    return ProlongSection(A, unit, (A.zero,) * A.m)


def basis_V(A: AlgebroidStructure, alpha: int) -> ProlongSection:
    unit = tuple(A.const(1.0 if b == alpha else 0.0) for b in range(A.m))
    return ProlongSection(A, (A.zero,) * A.m, unit)


def zero_section(A: AlgebroidStructure) -> ProlongSection:
    return ProlongSection(A, (A.zero,) * A.m, (A.zero,) * A.m)


def rho_L(A: AlgebroidStructure, xi: ProlongSection) -> EVectorField:
    """The anchor of the prolongation: Z^α ρ^i_α ∂/∂x^i + V^α ∂/∂y^α."""
    return EVectorField(
        A,
        tuple(
            A.sum(xi.Z[alpha] * A.rho[i][alpha] for alpha in range(A.m))
            for i in range(A.n)
        ),
        xi.V,
    )


def prolong_bracket(
    A: AlgebroidStructure, xi: ProlongSection, eta: ProlongSection
) -> ProlongSection:
    act_xi = rho_L(A, xi)
    act_eta = rho_L(A, eta)
    Z = []
    V = []
    for gamma in range(A.m):
        Z.append(
            act_xi.apply(eta.Z[gamma])
            - act_eta.apply(xi.Z[gamma])
            + A.sum(
                xi.Z[alpha] * eta.Z[beta] * A.L[gamma][alpha][beta]
                for alpha in range(A.m)
                for beta in range(A.m)
                if not A.L[gamma][alpha][beta].is_zero
            )
        )
        V.append(act_xi.apply(eta.V[gamma]) - act_eta.apply(xi.V[gamma]))
    return ProlongSection(A, tuple(Z), tuple(V))


def map_i(xi: PullbackSection) -> ProlongSection:
    A = xi.structure
    return ProlongSection(A, (A.zero,) * A.m, xi.comp)


def map_j(xi: ProlongSection) -> PullbackSection:
    return PullbackSection(xi.structure, xi.Z)


def vertical_endomorphism(xi: ProlongSection) -> ProlongSection:
    """J = i∘j: moves the 𝒳-components to the 𝒱-slots."""
    return map_i(map_j(xi))


def liouville(A: AlgebroidStructure) -> ProlongSection:
    """C = y^α 𝒱_α."""
    return ProlongSection(A, (A.zero,) * A.m, tuple(A.y(a) for a in range(A.m)))


def canonical_section(A: AlgebroidStructure) -> PullbackSection:
    """δ, the pullback section with components y^α; i(δ) = C."""
    return PullbackSection(A, tuple(A.y(a) for a in range(A.m)))


def vertical_lift_P(A: AlgebroidStructure, eta: BaseSection) -> ProlongSection:
    return ProlongSection(A, (A.zero,) * A.m, eta.comp)


def complete_lift_P(A: AlgebroidStructure, eta: BaseSection) -> ProlongSection:
    """η^C = η^α 𝒳_α + y^β η^α_|β 𝒱_α."""
    D = complete_lift_coefficients(A, eta)
    return ProlongSection(
        A,
        eta.comp,
        tuple(A.sum(A.y(beta) * D[alpha][beta] for beta in range(A.m)) for alpha in range(A.m)),
    )


def homogeneity_defect(
    A: AlgebroidStructure, xi: ProlongSection, r: int
) -> ProlongSection:
    """⟦C, ξ̃⟧ − (r − 1)ξ̃, zero exactly when ξ̃ is homogeneous of degree r."""
    return prolong_bracket(A, liouville(A), xi) - xi.scaled(float(r - 1))
