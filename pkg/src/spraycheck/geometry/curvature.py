"""Curvature tensors of a spray: Jacobi endomorphism, affine and projective
curvatures, Berwald and Douglas curvature.

The projective and Douglas formulas divide by N − 1, N + 1 and N² − 1. N is
the rank m of E by default (traces run over m basis sections); the base
dimension n can be chosen instead with ``dimension="base"``. For E = TM the
two agree.
"""
import typing as t

import attr

from spraycheck.cli import logger
from spraycheck.error_handling import InconsistencyError, ProjectiveDimensionError
from spraycheck.geometry.algebroid import AlgebroidStructure, PullbackSection
from spraycheck.geometry.connection import (
    BerwaldConnection,
    adapted_delta,
    vertical_map,
)
from spraycheck.geometry.derivation import (
    TensorField,
    identity,
    nabla_h_sec,
    nabla_v_sec,
    nabla_v_tensor,
    tensor_with_delta,
    trace,
)
from spraycheck.geometry.prolong import prolong_bracket
from spraycheck.jet.field import ScalarField
from spraycheck.types import SamplePoints
from spraycheck.util import Residual, evaluator_for, measure

# Names accepted by the command line, in report order.
TENSORS = ("K", "R", "H", "W0", "W", "Wstar", "B", "D")

CONSISTENCY_TOLERANCE = 1e-10


def projective_dimension(A: AlgebroidStructure, mode: str = "rank") -> int:
    if mode == "rank":
        return A.m
    if mode == "base":
        return A.n
    raise ValueError(f"Unknown projective dimension mode {mode!r}; use 'rank' or 'base'")


def _require_projective(N: int) -> None:
    if N < 2:
        raise ProjectiveDimensionError(
            f"projective tensors undefined at rank {N}" if N == 1 else f"projective tensors undefined for dimension {N}"
        )


def jacobi_endomorphism(Bc: BerwaldConnection, via: str = "bracket") -> TensorField:
    """𝒦(ê_γ) = 𝒱⟦S, δ_γ⟧, or its expansion in coordinates with ``via="coordinates"``."""
    A = Bc.structure
    S = Bc.spray
    if via == "bracket":
        return TensorField.from_sections(
            A,
            1,
            lambda args: vertical_map(
                Bc, prolong_bracket(A, S.section, adapted_delta(Bc, args[0]))
            ),
        )
    if via != "coordinates":
        raise ValueError(f"Unknown path {via!r}")
    B = Bc.B
    m = A.m

    def component(key: t.Tuple[int, ...]) -> ScalarField:
        alpha, gamma = key
        return A.sum(
            [
                -(A.y(beta) * A.L[theta][beta][gamma] * B[alpha][theta])
                for beta in range(m)
                for theta in range(m)
                if not A.L[theta][beta][gamma].is_zero
            ]
            + [B[beta][gamma] * B[alpha][beta] for beta in range(m)]
            + [A.y(beta) * A.anchor_derivative(beta, B[alpha][gamma]) for beta in range(m)]
            + [-A.anchor_derivative(gamma, S.S[alpha])]
            + [S.S[beta] * B[alpha][gamma].diff_y(beta) for beta in range(m)]
            + [-(B[beta][gamma] * S.S[alpha].diff_y(beta)) for beta in range(m)]
        )

    return TensorField.from_function(A, 1, True, component)


def _antisymmetrized_derivative(T: TensorField) -> TensorField:
    """(η, ξ) ↦ ⅓(∇^vT(ξ, η) − ∇^vT(η, ξ)) for a (1,1) tensor T."""
    D = nabla_v_tensor(T)
    return TensorField.from_function(
        T.structure,
        2,
        True,
        lambda key: (D.comp[(key[0], key[2], key[1])] - D.comp[key]) / 3.0,
    )


def affine_curvatures(K: TensorField) -> t.Tuple[TensorField, TensorField]:
    """ℛ(η̄,ξ̄) = ⅓(∇^v𝒦(ξ̄,η̄) − ∇^v𝒦(η̄,ξ̄)) and ℋ = ∇^vℛ."""
    R = _antisymmetrized_derivative(K)
    return R, nabla_v_tensor(R)


@attr.s(auto_attribs=True, frozen=True, eq=False)
class ProjectiveTensors:
    K_ring: ScalarField
    W0: TensorField
    W0_rewritten: TensorField
    W: TensorField
    Wstar: TensorField


def projective_suite(K: TensorField, R: TensorField, N: int) -> ProjectiveTensors:
    """𝒦̊, both forms of the projective deviation 𝒲°, 𝒲 and 𝒲*."""
    _require_projective(N)
    A = K.structure
    trK = trace(K)
    K_ring = trK.comp[()] / float(N - 1)
    Id = identity(A)
    W0 = (
        K
        - Id.scaled(K_ring)
        + tensor_with_delta(trace(R)).scaled(3.0 / (N + 1))
        + tensor_with_delta(nabla_v_tensor(trK)).scaled((2.0 - N) / (N * N - 1))
    )
    W0_rewritten = (
        K
        - Id.scaled(K_ring)
        + tensor_with_delta(
            nabla_v_tensor(TensorField.scalar(A, K_ring)) - trace(nabla_v_tensor(K))
        ).scaled(1.0 / (N + 1))
    )
    W = _antisymmetrized_derivative(W0)
    return ProjectiveTensors(K_ring, W0, W0_rewritten, W, nabla_v_tensor(W))


def berwald_curvature(Bc: BerwaldConnection) -> TensorField:
    """𝔅(η̂,ξ̂)σ̂ = ∇^v_η̂ ∇^h_ξ̂ σ̂."""
    A = Bc.structure
    basis = [PullbackSection.basis(A, a) for a in range(A.m)]
    return TensorField.from_sections(
        A,
        3,
        lambda args: nabla_v_sec(
            Bc, basis[args[0]], nabla_h_sec(Bc, basis[args[1]], basis[args[2]])
        ),
    )


def berwald_douglas(Bc: BerwaldConnection, N: int) -> t.Tuple[TensorField, TensorField]:
    """The Berwald curvature and the Douglas tensor.

    𝔇 = 𝔅 − 1/(N+1) {(tr𝔅)⊙Id + ∇^v tr𝔅 ⊗ δ}, where (tr𝔅)⊙Id sends
    (X, Y, Z) to tr𝔅(X,Y)Z + tr𝔅(Y,Z)X + tr𝔅(Z,X)Y.
    """
    A = Bc.structure
    Bw = berwald_curvature(Bc)
    _require_projective(N)
    trB = trace(Bw)

    def symmetric(key: t.Tuple[int, ...]) -> ScalarField:
        out, a, b, c = key
        return A.sum(
            trB.comp[pair]
            for pair, slot in (((a, b), c), ((b, c), a), ((c, a), b))
            if slot == out
        )

    correction = TensorField.from_function(A, 3, True, symmetric) + tensor_with_delta(
        nabla_v_tensor(trB)
    )
    return Bw, Bw - correction.scaled(1.0 / (N + 1))


@attr.s(auto_attribs=True, frozen=True, eq=False)
class CurvatureSuite:
    connection: BerwaldConnection
    dimension: int
    K: TensorField
    K_local: TensorField
    R: TensorField
    H: TensorField
    K_ring: ScalarField
    W0: TensorField
    W0_rewritten: TensorField
    W: TensorField
    Wstar: TensorField
    Bw: TensorField
    Dg: TensorField

    @classmethod
    def build(
        cls,
        Bc: BerwaldConnection,
        points: t.Optional[SamplePoints] = None,
        dimension: str = "rank",
    ) -> "CurvatureSuite":
        """Build every tensor; with `points`, cross-check the two-way ones.

        Raises
        ======
        InconsistencyError
            The two computations of 𝒦 or of 𝒲° disagree at the points.
        """
        A = Bc.structure
        N = projective_dimension(A, dimension)
        K = jacobi_endomorphism(Bc, "bracket")
        K_local = jacobi_endomorphism(Bc, "coordinates")
        R, H = affine_curvatures(K)
        projective = projective_suite(K, R, N)
        Bw, Dg = berwald_douglas(Bc, N)
        suite = cls(
            Bc,
            N,
            K,
            K_local,
            R,
            H,
            projective.K_ring,
            projective.W0,
            projective.W0_rewritten,
            projective.W,
            projective.Wstar,
            Bw,
            Dg,
        )
        if points is not None:
            for name, residual in suite.consistency(points).items():
                if not residual.within(CONSISTENCY_TOLERANCE):
                    raise InconsistencyError(
                        f"The two computations of {name} disagree by {residual.maximum:.3g}"
                    )
                logger.debug(f"{name}: both computations agree to {residual.maximum:.3g}")
        return suite

    def consistency(self, points: SamplePoints) -> t.Dict[str, Residual]:
        evaluator = evaluator_for(points)
        return {
            "K": measure(evaluator, (self.K - self.K_local).fields()),
            "W0": measure(evaluator, (self.W0 - self.W0_rewritten).fields()),
        }

    def tensor(self, name: str) -> TensorField:
        return {
            "K": self.K,
            "R": self.R,
            "H": self.H,
            "W0": self.W0,
            "W": self.W,
            "Wstar": self.Wstar,
            "B": self.Bw,
            "D": self.Dg,
        }[name]
