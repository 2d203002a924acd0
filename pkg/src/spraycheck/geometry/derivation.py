"""Derivations along the projection: ∇^v, ∇^h and the Lie derivation L̃.

Tensors live over the pullback module and are stored by their components
on hat-lifted basis sections. A (1,k) tensor has keys ``(out, a1, .., ak)``,
a (0,k) tensor has keys ``(a1, .., ak)``. Differentials of tensors put the
derivative direction in the first slot: ∇^vT(X, Y1..Yk) = (∇^v_X T)(Y1..Yk).
"""
import itertools
import typing as t

import attr

from spraycheck.error_handling import NotProjectableError
from spraycheck.geometry.algebroid import AlgebroidStructure, PullbackSection
from spraycheck.geometry.connection import BerwaldConnection, ehresmann, vertical_map
from spraycheck.geometry.prolong import ProlongSection, map_i, prolong_bracket, rho_L
from spraycheck.jet.field import ScalarField
from spraycheck.types import SamplePoints
from spraycheck.util import evaluator_for, measure

OneForm = t.Tuple[ScalarField, ...]
Key = t.Tuple[int, ...]


@attr.s(auto_attribs=True, frozen=True, eq=False)
class TensorField:
    structure: AlgebroidStructure
    k: int
    contravariant: bool
    comp: t.Dict[Key, ScalarField]

    @classmethod
    def from_function(
        cls,
        structure: AlgebroidStructure,
        k: int,
        contravariant: bool,
        component: t.Callable[[Key], ScalarField],
    ) -> "TensorField":
        rank = k + (1 if contravariant else 0)
        return cls(
            structure,
            k,
            contravariant,
            {
                key: component(key)
                for key in itertools.product(range(structure.m), repeat=rank)
            },
        )

    @classmethod
    def from_sections(
        cls,
        structure: AlgebroidStructure,
        k: int,
        value: t.Callable[[Key], PullbackSection],
    ) -> "TensorField":
        """Materialize a (1,k) tensor from its values on basis arguments."""
        values = {
            args: value(args)
            for args in itertools.product(range(structure.m), repeat=k)
        }
        return cls.from_function(
            structure, k, True, lambda key: values[key[1:]].comp[key[0]]
        )

    @classmethod
    def scalar(cls, structure: AlgebroidStructure, value: ScalarField) -> "TensorField":
        return cls(structure, 0, False, {(): value})

    def keys(self) -> t.List[Key]:
        return list(self.comp)

    def fields(self) -> t.List[ScalarField]:
        return list(self.comp.values())

    def component(self, *key: int) -> ScalarField:
        return self.comp[key]

    def __call__(
        self, *args: PullbackSection
    ) -> t.Union[PullbackSection, ScalarField]:
        """Multilinear evaluation on pullback sections."""
        A = self.structure
        if len(args) != self.k:
            raise ValueError(f"A tensor with {self.k} slots got {len(args)} arguments")
        supports = [
            [(a, c) for a, c in enumerate(arg.comp) if not c.is_zero] for arg in args
        ]

        def contract(prefix: Key) -> ScalarField:
            terms = []
            for choice in itertools.product(*supports):
                coefficient = None
                for _, c in choice:
                    coefficient = c if coefficient is None else coefficient * c
                entry = self.comp[prefix + tuple(a for a, _ in choice)]
                terms.append(entry if coefficient is None else coefficient * entry)
            return A.sum(terms)

        if self.contravariant:
            return PullbackSection(A, tuple(contract((o,)) for o in range(A.m)))
        return contract(())

    def _combine(self, other: "TensorField", sign: float) -> "TensorField":
        if (self.k, self.contravariant) != (other.k, other.contravariant):
            raise ValueError("Cannot add tensors of different type")
        return TensorField(
            self.structure,
            self.k,
            self.contravariant,
            {key: self.comp[key] + sign * other.comp[key] for key in self.comp},
        )

    def __add__(self, other: "TensorField") -> "TensorField":
        return self._combine(other, 1.0)

    def __sub__(self, other: "TensorField") -> "TensorField":
        return self._combine(other, -1.0)

    def scaled(self, f: t.Union[ScalarField, float]) -> "TensorField":
        return TensorField(
            self.structure,
            self.k,
            self.contravariant,
            {key: f * c for key, c in self.comp.items()},
        )


def identity(A: AlgebroidStructure) -> TensorField:
    return TensorField.from_function(
        A, 1, True, lambda key: A.const(1.0 if key[0] == key[1] else 0.0)
    )


def trace(T: TensorField) -> TensorField:
    """Contract the output index with the first argument slot."""
    if not T.contravariant or T.k == 0:
        raise ValueError("Only (1,k) tensors with k ≥ 1 have a trace")
    A = T.structure
    return TensorField.from_function(
        A,
        T.k - 1,
        False,
        lambda rest: A.sum(T.comp[(alpha, alpha) + rest] for alpha in range(A.m)),
    )


def nabla_v_tensor(T: TensorField) -> TensorField:
    """∇^vT, componentwise ∂/∂y in the new first slot (∇^v ê_β = 0)."""
    A = T.structure

    if T.contravariant:

        def component(key: Key) -> ScalarField:
            return T.comp[(key[0],) + key[2:]].diff_y(key[1])

    else:

        def component(key: Key) -> ScalarField:
            return T.comp[key[1:]].diff_y(key[0])

    return TensorField.from_function(A, T.k + 1, T.contravariant, component)


def tensor_with_delta(omega: TensorField) -> TensorField:
    """ω ⊗ δ, the (1,k) tensor (X1..Xk) ↦ ω(X1..Xk) δ."""
    if omega.contravariant:
        raise ValueError("Only (0,k) tensors can be multiplied by δ")
    A = omega.structure
    return TensorField.from_function(
        A, omega.k, True, lambda key: omega.comp[key[1:]] * A.y(key[0])
    )


def nabla_v_fn(Bc: BerwaldConnection, F: ScalarField) -> OneForm:
    """∇^vF(ê_α) = ∂F/∂y^α."""
    return tuple(F.diff_y(alpha) for alpha in range(Bc.structure.m))


def nabla_v_sec(
    Bc: BerwaldConnection, xi: PullbackSection, eta: PullbackSection
) -> PullbackSection:
    """(∇^v_ξ̄ η̄)^β = ξ̄^α ∂η̄^β/∂y^α."""
    A = Bc.structure
    return PullbackSection(
        A,
        tuple(
            A.sum(xi.comp[alpha] * c.diff_y(alpha) for alpha in range(A.m))
            for c in eta.comp
        ),
    )


def nabla_h_fn(Bc: BerwaldConnection, F: ScalarField) -> OneForm:
    """∇^hF(ê_α) = ρ^i_α ∂F/∂x^i + ℬ^γ_α ∂F/∂y^γ."""
    A = Bc.structure
    return tuple(
        A.anchor_derivative(alpha, F)
        + A.sum(Bc.B[gamma][alpha] * F.diff_y(gamma) for gamma in range(A.m))
        for alpha in range(A.m)
    )


def nabla_h_sec(
    Bc: BerwaldConnection, xi: PullbackSection, eta: PullbackSection
) -> PullbackSection:
    """The h-Berwald differential in coordinates.

    (∇^h_ξ̄ η̄)^γ = −ξ̄^α η̄^β ∂ℬ^γ_α/∂y^β + ξ̄^α ρ^i_α ∂η̄^γ/∂x^i
    + ξ̄^α ℬ^β_α ∂η̄^γ/∂y^β
    """
    A = Bc.structure
    B = Bc.B
    comps = []
    for gamma in range(A.m):
        terms = []
        for alpha in range(A.m):
            if xi.comp[alpha].is_zero:
                continue
            inner = (
                A.anchor_derivative(alpha, eta.comp[gamma])
                + A.sum(B[beta][alpha] * eta.comp[gamma].diff_y(beta) for beta in range(A.m))
                - A.sum(eta.comp[beta] * B[gamma][alpha].diff_y(beta) for beta in range(A.m))
            )
            terms.append(xi.comp[alpha] * inner)
        comps.append(A.sum(terms))
    return PullbackSection(A, tuple(comps))


def nabla_h_sec_from_brackets(
    Bc: BerwaldConnection, xi: PullbackSection, eta: PullbackSection
) -> PullbackSection:
    """∇^h_ξ̄ η̄ as 𝒱⟦ℋξ̄, iη̄⟧."""
    A = Bc.structure
    return vertical_map(Bc, prolong_bracket(A, ehresmann(Bc, xi), map_i(eta)))


@attr.s(auto_attribs=True, frozen=True, eq=False)
class ProjectableSection:
    """A section of the prolongation whose 𝒳-components depend on x only."""

    section: ProlongSection

    @classmethod
    def check(
        cls,
        section: ProlongSection,
        points: t.Optional[SamplePoints] = None,
        tol: float = 1e-12,
    ) -> "ProjectableSection":
        """Accept `section` if its 𝒳-components are fibre-independent.

        Components that the field graph cannot rule out as fibre-dependent
        are tested numerically at `points`.
        """
        A = section.structure
        for alpha, Z in enumerate(section.Z):
            if not Z.depends_on_fibre():
                continue
            if points is None:
                raise NotProjectableError(alpha, float("nan"))
            residual = measure(
                evaluator_for(points), [Z.diff_y(beta) for beta in range(A.m)]
            )
            if not residual.within(tol):
                raise NotProjectableError(alpha, residual.maximum)
        return cls(section)


@attr.s(auto_attribs=True, frozen=True, eq=False)
class LieDerivation:
    """L̃ along a projectable section."""

    connection: BerwaldConnection
    along: ProjectableSection

    @property
    def structure(self) -> AlgebroidStructure:
        return self.connection.structure

    def function(self, F: ScalarField) -> ScalarField:
        return rho_L(self.structure, self.along.section).apply(F)

    def pullback(self, sigma: PullbackSection) -> PullbackSection:
        """i⁻¹⟦ξ̃, iσ̄⟧; the bracket is vertical because ξ̃ is projectable."""
        bracket = prolong_bracket(self.structure, self.along.section, map_i(sigma))
        return PullbackSection(self.structure, bracket.V)

    def pullback_local(self, sigma: PullbackSection) -> PullbackSection:
        """The same in coordinates: ρ_ℒ(ξ̃)σ̄^γ − σ̄^β ∂V^γ/∂y^β."""
        A = self.structure
        V = self.along.section.V
        return PullbackSection(
            A,
            tuple(
                self.function(sigma.comp[gamma])
                - A.sum(sigma.comp[beta] * V[gamma].diff_y(beta) for beta in range(A.m))
                for gamma in range(A.m)
            ),
        )

    def basis_images(self) -> t.Tuple[t.Tuple[ScalarField, ...], ...]:
        """M[γ][a], the γ-component of L̃ê_a."""
        A = self.structure
        images = [self.pullback(PullbackSection.basis(A, a)) for a in range(A.m)]
        return tuple(tuple(images[a].comp[gamma] for a in range(A.m)) for gamma in range(A.m))

    def tensor(self, T: TensorField) -> TensorField:
        """(L̃T)(ê..) = L̃(T(ê..)) − Σᵢ T(.., L̃ê_aᵢ, ..), in components."""
        A = self.structure
        M = self.basis_images()
        offset = 1 if T.contravariant else 0

        def component(key: Key) -> ScalarField:
            terms = [self.function(T.comp[key])]
            if T.contravariant:
                out = key[0]
                terms.extend(
                    M[out][gamma] * T.comp[(gamma,) + key[1:]]
                    for gamma in range(A.m)
                    if not M[out][gamma].is_zero
                )
            for slot in range(offset, len(key)):
                a = key[slot]
                terms.extend(
                    -(M[gamma][a] * T.comp[key[:slot] + (gamma,) + key[slot + 1:]])
                    for gamma in range(A.m)
                    if not M[gamma][a].is_zero
                )
            return A.sum(terms)

        return TensorField.from_function(A, T.k, T.contravariant, component)

    def __call__(self, thing):
        if isinstance(thing, ScalarField):
            return self.function(thing)
        if isinstance(thing, PullbackSection):
            return self.pullback(thing)
        if isinstance(thing, TensorField):
            return self.tensor(thing)
        raise TypeError(f"Lie derivation cannot act on {type(thing).__name__}")


def lie_derivation(
    Bc: BerwaldConnection,
    xi: t.Union[ProlongSection, ProjectableSection],
    points: t.Optional[SamplePoints] = None,
) -> LieDerivation:
    if not isinstance(xi, ProjectableSection):
        xi = ProjectableSection.check(xi, points)
    return LieDerivation(Bc, xi)
