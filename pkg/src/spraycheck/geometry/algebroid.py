"""A Lie algebroid in local data, its sections, and lifts to the total space E.

Indices are 0-based in code: ``rho[i][alpha]`` is the anchor component
ρ^(i+1)_(alpha+1) and ``L[gamma][alpha][beta]`` the structure function
L^(gamma+1)_(alpha+1)(beta+1).
"""
import itertools
import typing as t

import attr

from spraycheck.error_handling import FailureHandler, warn
from spraycheck.jet.field import ScalarField, constant, total, x, y
from spraycheck.types import SamplePoints
from spraycheck.util import Residual, evaluator_for, measure

Matrix = t.Tuple[t.Tuple[ScalarField, ...], ...]


def _require_base_only(field: ScalarField, what: str, arity=None) -> None:
    if arity is not None and field.arity != arity:
        raise ValueError(f"{what} has arity {field.arity}, expected {arity}")
    if field.depends_on_fibre():
        raise ValueError(f"{what} must be a function of the base coordinates only")


@attr.s(auto_attribs=True, frozen=True, eq=False)
class AlgebroidStructure:
    n: int
    m: int
    rho: Matrix
    L: t.Tuple[Matrix, ...]

    @classmethod
    def from_components(
        cls,
        n: int,
        m: int,
        rho: t.Mapping[t.Tuple[int, int], ScalarField],
        L: t.Mapping[t.Tuple[int, int, int], ScalarField],
    ) -> "AlgebroidStructure":
        """Build the structure from its nonzero components.

        `rho` maps (i, alpha) to ρ^i_alpha; `L` maps (gamma, alpha, beta) with
        alpha < beta to L^gamma_alpha,beta. The other half of L follows by
        antisymmetry.
        """
        arity = (n, m)
        zero = constant(arity, 0.0)
        anchor = [[zero] * m for _ in range(n)]
        for (i, alpha), field in rho.items():
            _require_base_only(
                field, f"Anchor component rho[{i + 1}][{alpha + 1}]", arity
            )
            anchor[i][alpha] = field
        structure = [[[zero] * m for _ in range(m)] for _ in range(m)]
        for (gamma, alpha, beta), field in L.items():
            if alpha >= beta:
                raise ValueError(
                    f"Structure function L[{gamma + 1}][{alpha + 1},{beta + 1}]: give only entries with alpha < beta"
                )
            _require_base_only(
                field, f"Structure function L[{gamma + 1}][{alpha + 1},{beta + 1}]", arity
            )
            structure[gamma][alpha][beta] = field
            structure[gamma][beta][alpha] = -field
        return cls(
            n,
            m,
            tuple(tuple(row) for row in anchor),
            tuple(tuple(tuple(row) for row in block) for block in structure),
        )

    @property
    def arity(self) -> t.Tuple[int, int]:
        return (self.n, self.m)

    @property
    def zero(self) -> ScalarField:
        return constant(self.arity, 0.0)

    def const(self, value: float) -> ScalarField:
        return constant(self.arity, value)

    def x(self, i: int) -> ScalarField:
        return x(self.arity, i)

    def y(self, alpha: int) -> ScalarField:
        return y(self.arity, alpha)

    def sum(self, fields: t.Iterable[ScalarField]) -> ScalarField:
        return total(fields, self.arity)

    def anchor_derivative(self, alpha: int, f: ScalarField) -> ScalarField:
        """ρ^i_alpha ∂f/∂x^i."""
        return self.sum(self.rho[i][alpha] * f.diff_x(i) for i in range(self.n))

    def check_arity(self, fields: t.Iterable[ScalarField]) -> None:
        for f in fields:
            if f.arity != self.arity:
                raise ValueError(
                    f"Field of arity {f.arity} used with an algebroid of arity {self.arity}"
                )


@attr.s(auto_attribs=True, frozen=True, eq=False)
class BaseSection:
    """A section ξ = ξ^α e_α of E; components depend on x only."""

    structure: AlgebroidStructure
    comp: t.Tuple[ScalarField, ...]

    def __attrs_post_init__(self):
        if len(self.comp) != self.structure.m:
            raise ValueError(
                f"A section needs {self.structure.m} components, not {len(self.comp)}"
            )
        self.structure.check_arity(self.comp)
        for alpha, c in enumerate(self.comp):
            _require_base_only(c, f"Component {alpha + 1} of a section of E")

    @classmethod
    def basis(cls, structure: AlgebroidStructure, alpha: int) -> "BaseSection":
        return cls(
            structure,
            tuple(structure.const(1.0 if b == alpha else 0.0) for b in range(structure.m)),
        )

    @classmethod
    def zero(cls, structure: AlgebroidStructure) -> "BaseSection":
        return cls(structure, (structure.zero,) * structure.m)

    def __add__(self, other: "BaseSection") -> "BaseSection":
        return BaseSection(self.structure, tuple(a + b for a, b in zip(self.comp, other.comp)))

    def __sub__(self, other: "BaseSection") -> "BaseSection":
        return BaseSection(self.structure, tuple(a - b for a, b in zip(self.comp, other.comp)))

    def scaled(self, f: t.Union[ScalarField, float]) -> "BaseSection":
        return BaseSection(self.structure, tuple(f * c for c in self.comp))


@attr.s(auto_attribs=True, frozen=True, eq=False)
class PullbackSection:
    """A section ξ̄ = ξ̄^α ê_α of the pullback bundle π*E over E."""

    structure: AlgebroidStructure
    comp: t.Tuple[ScalarField, ...]

    def __attrs_post_init__(self):
        if len(self.comp) != self.structure.m:
            raise ValueError(
                f"A pullback section needs {self.structure.m} components, not {len(self.comp)}"
            )
        self.structure.check_arity(self.comp)

    @classmethod
    def basis(cls, structure: AlgebroidStructure, alpha: int) -> "PullbackSection":
        return hat_lift(BaseSection.basis(structure, alpha))

    def __add__(self, other: "PullbackSection") -> "PullbackSection":
        return PullbackSection(
            self.structure, tuple(a + b for a, b in zip(self.comp, other.comp))
        )

    def __sub__(self, other: "PullbackSection") -> "PullbackSection":
        return PullbackSection(
            self.structure, tuple(a - b for a, b in zip(self.comp, other.comp))
        )

    def __neg__(self) -> "PullbackSection":
        return PullbackSection(self.structure, tuple(-a for a in self.comp))

    def scaled(self, f: t.Union[ScalarField, float]) -> "PullbackSection":
        return PullbackSection(self.structure, tuple(f * c for c in self.comp))


@attr.s(auto_attribs=True, frozen=True, eq=False)
class EVectorField:
    """A vector field X^i ∂/∂x^i + Y^α ∂/∂y^α on the total space E."""

    structure: AlgebroidStructure
    x_comp: t.Tuple[ScalarField, ...]
    y_comp: t.Tuple[ScalarField, ...]

    def apply(self, F: ScalarField) -> ScalarField:
        A = self.structure
        return A.sum(
            [X * F.diff_x(i) for i, X in enumerate(self.x_comp)]
            + [Y * F.diff_y(alpha) for alpha, Y in enumerate(self.y_comp)]
        )

    def components(self) -> t.Tuple[ScalarField, ...]:
        return self.x_comp + self.y_comp

    def commutator(self, other: "EVectorField") -> "EVectorField":
        """[X, Y] acting as X∘Y − Y∘X, componentwise X(Y^k) − Y(X^k)."""
        return EVectorField(
            self.structure,
            tuple(self.apply(b) - other.apply(a) for a, b in zip(self.x_comp, other.x_comp)),
            tuple(self.apply(b) - other.apply(a) for a, b in zip(self.y_comp, other.y_comp)),
        )

    def __sub__(self, other: "EVectorField") -> "EVectorField":
        return EVectorField(
            self.structure,
            tuple(a - b for a, b in zip(self.x_comp, other.x_comp)),
            tuple(a - b for a, b in zip(self.y_comp, other.y_comp)),
        )


def anchor_apply(A: AlgebroidStructure, xi: BaseSection, f: ScalarField) -> ScalarField:
    """ρ(ξ)f = ξ^α ρ^i_α ∂f/∂x^i."""
    return A.sum(xi.comp[alpha] * A.anchor_derivative(alpha, f) for alpha in range(A.m))


def bracket_E(A: AlgebroidStructure, xi: BaseSection, eta: BaseSection) -> BaseSection:
    """The algebroid bracket, from [e_α, e_β] = L^γ_αβ e_γ and the Leibniz rule."""
    comps = []
    for gamma in range(A.m):
        comps.append(
            anchor_apply(A, xi, eta.comp[gamma])
            - anchor_apply(A, eta, xi.comp[gamma])
            + A.sum(
                xi.comp[alpha] * eta.comp[beta] * A.L[gamma][alpha][beta]
                for alpha in range(A.m)
                for beta in range(A.m)
                if not A.L[gamma][alpha][beta].is_zero
            )
        )
    return BaseSection(A, tuple(comps))


def complete_lift_fn(A: AlgebroidStructure, f: ScalarField) -> ScalarField:
    """f^c = y^α ρ^i_α ∂f/∂x^i."""
    return A.sum(A.y(alpha) * A.anchor_derivative(alpha, f) for alpha in range(A.m))


def complete_lift_coefficients(A: AlgebroidStructure, eta: BaseSection) -> Matrix:
    """The matrix D[α][β] = η^α_|β = ρ^j_β ∂η^α/∂x^j − η^γ L^α_γβ.

    The complete lift of η moves the fibre along y^β η^α_|β.
    """
    return tuple(
        tuple(
            A.anchor_derivative(beta, eta.comp[alpha])
            - A.sum(
                eta.comp[gamma] * A.L[alpha][gamma][beta]
                for gamma in range(A.m)
                if not A.L[alpha][gamma][beta].is_zero
            )
            for beta in range(A.m)
        )
        for alpha in range(A.m)
    )


def complete_lift_vf(A: AlgebroidStructure, xi: BaseSection) -> EVectorField:
    """The complete lift ξ^c as a vector field on E.

    Its fibre part reads y^β(ρ^j_β ∂ξ^α/∂x^j − ξ^γ L^α_γβ), with ξ in both
    places.
    """
    D = complete_lift_coefficients(A, xi)
    return EVectorField(
        A,
        tuple(
            A.sum(xi.comp[alpha] * A.rho[i][alpha] for alpha in range(A.m))
            for i in range(A.n)
        ),
        tuple(
            A.sum(A.y(beta) * D[alpha][beta] for beta in range(A.m))
            for alpha in range(A.m)
        ),
    )


def vertical_lift_vf(A: AlgebroidStructure, xi: BaseSection) -> EVectorField:
    """The vertical lift ξ^∨ = ξ^α ∂/∂y^α."""
    return EVectorField(A, (A.zero,) * A.n, xi.comp)


def hat_lift(xi: BaseSection) -> PullbackSection:
    return PullbackSection(xi.structure, xi.comp)


@attr.s(auto_attribs=True, frozen=True)
class StructureReport:
    anchor: Residual
    jacobi: Residual
    tol: float

    @property
    def passed(self) -> bool:
        return self.anchor.within(self.tol) and self.jacobi.within(self.tol)


def anchor_residuals(A: AlgebroidStructure) -> t.List[ScalarField]:
    """ρ([e_α, e_β]) − [ρ(e_α), ρ(e_β)] componentwise, for α < β."""
    residuals = []
    for alpha, beta in itertools.combinations(range(A.m), 2):
        for i in range(A.n):
            residuals.append(
                A.anchor_derivative(alpha, A.rho[i][beta])
                - A.anchor_derivative(beta, A.rho[i][alpha])
                - A.sum(A.rho[i][gamma] * A.L[gamma][alpha][beta] for gamma in range(A.m))
            )
    return residuals


def jacobi_residuals(A: AlgebroidStructure) -> t.List[ScalarField]:
    """The cyclic sum ρ(e_α)L^ν_βγ + L^ν_αμ L^μ_βγ over (α, β, γ), for α < β < γ."""
    residuals = []
    for alpha, beta, gamma in itertools.combinations(range(A.m), 3):
        for nu in range(A.m):
            terms = []
            for a, b, c in ((alpha, beta, gamma), (beta, gamma, alpha), (gamma, alpha, beta)):
                terms.append(A.anchor_derivative(a, A.L[nu][b][c]))
                terms.extend(
                    A.L[nu][a][mu] * A.L[mu][b][c]
                    for mu in range(A.m)
                    if not (A.L[nu][a][mu].is_zero or A.L[mu][b][c].is_zero)
                )
            residuals.append(A.sum(terms))
    return residuals


def check_structure_equations(
    A: AlgebroidStructure,
    points: SamplePoints,
    tol: float = 1e-8,
    on_failure: FailureHandler = warn,
) -> StructureReport:
    """Evaluate both structure equations at the sample points.

    A failing structure is passed to `on_failure`, which may raise.
    """
    evaluator = evaluator_for(points)
    report = StructureReport(
        measure(evaluator, anchor_residuals(A)),
        measure(evaluator, jacobi_residuals(A)),
        tol,
    )
    if not report.anchor.within(tol):
        on_failure("The anchor equation ρ[e_α,e_β] = [ρe_α,ρe_β]", report.anchor.maximum)
    if not report.jacobi.within(tol):
        on_failure("The Jacobi identity of the structure functions", report.jacobi.maximum)
    return report
