"""Run every check a scenario asks for and collect the verdicts.

The stages run in a fixed order: structure equations, lifts to E, spray
homogeneity, bracket tables and operator identities, the requested symmetry
checks, and the cross-checks between computations that take different
routes to the same object. A failed structure check skips everything after
it.
"""
import itertools
import math
import time
import typing as t

import attr

import spraycheck
from spraycheck import cli
from spraycheck.cli import logger
from spraycheck.error_handling import (
    NotProjectableError,
    POLICIES,
    ProjectiveDimensionError,
    StructureError,
)
from spraycheck.geometry.algebroid import (
    AlgebroidStructure,
    BaseSection,
    PullbackSection,
    anchor_apply,
    bracket_E,
    check_structure_equations,
    complete_lift_fn,
    complete_lift_vf,
    hat_lift,
    vertical_lift_vf,
)
from spraycheck.geometry.connection import (
    BerwaldConnection,
    adapted_delta,
    berwald_from_spray,
    connection_curvature,
    ehresmann,
    horizontal_lift,
    horizontal_lift_from_brackets,
    projectors,
    vertical_map,
)
from spraycheck.geometry.curvature import (
    CONSISTENCY_TOLERANCE,
    TENSORS,
    CurvatureSuite,
    berwald_curvature,
    jacobi_endomorphism,
)
from spraycheck.geometry.derivation import (
    TensorField,
    lie_derivation,
    nabla_h_sec,
    nabla_h_sec_from_brackets,
    nabla_v_sec,
)
from spraycheck.geometry.prolong import (
    ProlongSection,
    basis_V,
    basis_X,
    complete_lift_P,
    homogeneity_defect,
    liouville,
    map_i,
    map_j,
    prolong_bracket,
    rho_L,
    vertical_endomorphism,
    vertical_lift_P,
)
from spraycheck.geometry.symmetry import (
    collineation_residuals,
    lie_symmetry_residual,
    symmetry_lemma_residuals,
)
from spraycheck.importer.scenario import CheckRequest, Scenario
from spraycheck.jet.field import Evaluator, ScalarField, from_expr
from spraycheck.types import SamplePoints, Verdict
from spraycheck.util import Residual, evaluator_for, measure


@attr.s(auto_attribs=True, frozen=True)
class RunOptions:
    """Command-line overrides; None keeps the scenario's value."""

    points: t.Optional[int] = None
    seed: t.Optional[int] = None
    tol: t.Optional[float] = None
    projective_dimension: t.Optional[str] = None


@attr.s(auto_attribs=True, frozen=True)
class CheckResult:
    name: str
    stage: str
    verdict: Verdict
    residual_max: t.Optional[float] = None
    residual_mean: t.Optional[float] = None
    points_evaluated: int = 0
    points_skipped: int = 0
    tolerance: t.Optional[float] = None
    note: str = ""


@attr.s(auto_attribs=True)
class Report:
    scenario: str
    digest: str
    points: int
    seed: int
    projective_dimension: str
    results: t.List[CheckResult] = attr.Factory(list)
    version: str = spraycheck.__version__
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return not any(r.verdict.failing for r in self.results)

    def counts(self) -> t.Dict[str, int]:
        return {
            verdict.value: sum(1 for r in self.results if r.verdict is verdict)
            for verdict in Verdict
        }


def judge(
    name: str,
    stage: str,
    residual: Residual,
    tol: float,
    expect_zero: bool = True,
    note: str = "",
) -> CheckResult:
    """Turn a residual summary into a result.

    With `expect_zero` unset the check passes when the residual exceeds the
    tolerance, which is how expected non-symmetries are confirmed.
    """
    if residual.inconclusive:
        logger.warning(
            f"{name}: {residual.skipped} of {residual.evaluated + residual.skipped} points could not be evaluated; the check is inconclusive."
        )
        verdict = Verdict.INCONCLUSIVE
    elif (residual.maximum <= tol) == expect_zero:
        verdict = Verdict.PASS
    else:
        verdict = Verdict.FAIL
    if residual.skipped and not residual.inconclusive:
        logger.warning(f"{name}: skipped {residual.skipped} points")
    return CheckResult(
        name,
        stage,
        verdict,
        residual.maximum,
        residual.mean,
        residual.evaluated,
        residual.skipped,
        tol,
        note,
    )


def noted(name: str, stage: str, residual: Residual, note: str) -> CheckResult:
    return CheckResult(
        name,
        stage,
        Verdict.NOTED,
        residual.maximum,
        residual.mean,
        residual.evaluated,
        residual.skipped,
        None,
        note,
    )


def skipped(name: str, stage: str, note: str) -> CheckResult:
    return CheckResult(name, stage, Verdict.SKIPPED, note=note)


def agreement(
    name: str,
    stage: str,
    evaluator: Evaluator,
    first: t.Sequence[ScalarField],
    second: t.Sequence[ScalarField],
) -> CheckResult:
    """Compare two computations of the same components.

    The tolerance is CONSISTENCY_TOLERANCE relative to the size of the
    compared values, and never below it.
    """
    difference = measure(evaluator, [a - b for a, b in zip(first, second)])
    size = measure(evaluator, first).maximum
    scale = max(1.0, size) if math.isfinite(size) else 1.0
    return judge(name, stage, difference, CONSISTENCY_TOLERANCE * scale)


def base_probe(A: AlgebroidStructure) -> ScalarField:
    """Σ (x^i)² + Σ_{i<j} x^i x^j, a generic function on M."""
    return A.sum(
        [A.x(i) * A.x(i) for i in range(A.n)]
        + [A.x(i) * A.x(j) for i, j in itertools.combinations(range(A.n), 2)]
    )


def fibre_probe(A: AlgebroidStructure) -> ScalarField:
    """Σ (y^α)² + Σ x^i y^1, a generic function on E."""
    return A.sum(
        [A.y(a) * A.y(a) for a in range(A.m)] + [A.x(i) * A.y(0) for i in range(A.n)]
    )


class _Run:
    """State shared by the stages of one run."""

    def __init__(self, scenario: Scenario, options: RunOptions):
        self.scenario = scenario
        self.points: SamplePoints = scenario.points(options.points, options.seed)
        self.seed = scenario.sampling.seed if options.seed is None else options.seed
        self.tol = scenario.default_tol if options.tol is None else options.tol
        self.dimension = options.projective_dimension or scenario.options.projective_dimension
        self.evaluator = evaluator_for(self.points)
        self.A = scenario.structure()
        self.spray = scenario.spray(self.A)
        self.sections = {
            name: scenario.section(self.A, name) for name in scenario.sections
        }
        self._connection: t.Optional[BerwaldConnection] = None
        self._suite: t.Optional[CurvatureSuite] = None
        self._suite_error: t.Optional[str] = None
        self.results: t.List[CheckResult] = []

    def measure(self, fields: t.Iterable[ScalarField]) -> Residual:
        return measure(self.evaluator, list(fields))

    def judge(self, name: str, stage: str, fields: t.Iterable[ScalarField], **kwargs):
        tol = kwargs.pop("tol", self.tol)
        self.results.append(judge(name, stage, self.measure(fields), tol, **kwargs))

    @property
    def connection(self) -> BerwaldConnection:
        if self._connection is None:
            self._connection = berwald_from_spray(
                self.A, self.spray, self.points if self.spray.is_spray else None, self.tol
            )
        return self._connection

    def suite(self) -> t.Optional[CurvatureSuite]:
        """The curvature suite, or None with the reason in `_suite_error`."""
        if self._suite is None and self._suite_error is None:
            try:
                self._suite = CurvatureSuite.build(self.connection, None, self.dimension)
            except ProjectiveDimensionError as e:
                self._suite_error = str(e)
                logger.warning(f"No curvature suite: {e}")
        return self._suite

    def basis(self) -> t.List[BaseSection]:
        return [BaseSection.basis(self.A, a) for a in range(self.A.m)]


def structure_stage(run: _Run) -> bool:
    """The structure equations. Returns whether later stages may run."""
    policy = POLICIES[run.scenario.options.structure_policy]
    try:
        report = check_structure_equations(run.A, run.points, run.tol, policy)
    except StructureError as e:
        logger.error(str(e))
        report = check_structure_equations(run.A, run.points, run.tol, POLICIES["ignore"])
        run.results.append(judge("anchor_equation", "structure", report.anchor, run.tol))
        run.results.append(judge("jacobi_identity", "structure", report.jacobi, run.tol))
        return False
    run.results.append(judge("anchor_equation", "structure", report.anchor, run.tol))
    run.results.append(judge("jacobi_identity", "structure", report.jacobi, run.tol))
    return True


def lifts_stage(run: _Run) -> None:
    """Complete and vertical lifts of sections and functions to E."""
    A = run.A
    f = base_probe(A)
    sections = run.basis() + list(run.sections.values())
    lift_f = complete_lift_fn(A, f)
    vertical, complete, mixed, brackets_c, brackets_cv, brackets_vv = ([] for _ in range(6))
    for xi in sections:
        rho_f = anchor_apply(A, xi, f)
        vertical.append(vertical_lift_vf(A, xi).apply(lift_f) - rho_f)
        complete.append(complete_lift_vf(A, xi).apply(lift_f) - complete_lift_fn(A, rho_f))
        mixed.append(vertical_lift_vf(A, xi).apply(f))
    for xi, eta in itertools.combinations(sections, 2):
        bracket = bracket_E(A, xi, eta)
        xi_c, eta_c = complete_lift_vf(A, xi), complete_lift_vf(A, eta)
        xi_v, eta_v = vertical_lift_vf(A, xi), vertical_lift_vf(A, eta)
        brackets_c.extend((xi_c.commutator(eta_c) - complete_lift_vf(A, bracket)).components())
        brackets_cv.extend((xi_c.commutator(eta_v) - vertical_lift_vf(A, bracket)).components())
        brackets_vv.extend(xi_v.commutator(eta_v).components())
    run.judge("vertical_lift_on_complete_lift", "lifts", vertical)
    run.judge("complete_lift_on_complete_lift", "lifts", complete)
    run.judge("vertical_lift_on_base_function", "lifts", mixed)
    run.judge("complete_lift_bracket", "lifts", brackets_c)
    run.judge("complete_vertical_bracket", "lifts", brackets_cv)
    run.judge("vertical_vertical_bracket", "lifts", brackets_vv)


def spray_stage(run: _Run) -> None:
    """Semispray condition, homogeneity and its consequences."""
    A = run.A
    S = run.spray
    run.judge(
        "semispray_condition",
        "spray",
        (vertical_endomorphism(S.section) - liouville(A)).components(),
    )
    Bc = run.connection
    euler_fields = {
        "euler_spray": S.euler_defect(),
        "liouville_bracket": homogeneity_defect(A, S.section, 2).components(),
        "berwald_horizontal_lifts": [
            c
            for alpha in range(A.m)
            for c in homogeneity_defect(A, adapted_delta(Bc, alpha), 1).components()
        ],
        "euler_berwald_coefficients": _euler_defects(
            A, [b for row in Bc.B for b in row], 1
        ),
        "euler_jacobi_endomorphism": _euler_defects(
            A, jacobi_endomorphism(Bc).fields(), 2
        ),
        "euler_berwald_curvature": _euler_defects(
            A, berwald_curvature(Bc).fields(), -1
        ),
    }
    for name, fields in euler_fields.items():
        if S.is_spray:
            run.judge(name, "spray", fields)
        else:
            run.results.append(
                noted(name, "spray", run.measure(fields), "declared a semispray")
            )


def _euler_defects(
    A: AlgebroidStructure, fields: t.Sequence[ScalarField], degree: int
) -> t.List[ScalarField]:
    """y^α ∂F/∂y^α − degree·F for each field."""
    return [
        A.sum(A.y(alpha) * F.diff_y(alpha) for alpha in range(A.m)) - float(degree) * F
        for F in fields
    ]


def bracket_stage(run: _Run) -> None:
    """Bracket tables of the prolongation and identities of J, h and v."""
    A = run.A
    Bc = run.connection
    S = run.spray.section
    m = A.m
    X = [basis_X(A, a) for a in range(m)]
    V = [basis_V(A, a) for a in range(m)]
    delta = [adapted_delta(Bc, a) for a in range(m)]
    R = connection_curvature(Bc)

    table = []
    for alpha, beta in itertools.product(range(m), repeat=2):
        expected = ProlongSection(
            A, tuple(A.L[gamma][alpha][beta] for gamma in range(m)), (A.zero,) * m
        )
        table.extend((prolong_bracket(A, X[alpha], X[beta]) - expected).components())
        table.extend(prolong_bracket(A, X[alpha], V[beta]).components())
        table.extend(prolong_bracket(A, V[alpha], V[beta]).components())
    run.judge("basis_bracket_table", "brackets", table)

    adapted = []
    vertical = []
    for alpha, beta in itertools.product(range(m), repeat=2):
        expected = ProlongSection(
            A,
            tuple(A.L[gamma][alpha][beta] for gamma in range(m)),
            tuple(
                A.sum(A.L[gamma][alpha][beta] * Bc.B[lam][gamma] for gamma in range(m))
                + R[lam][alpha][beta]
                for lam in range(m)
            ),
        )
        adapted.extend((prolong_bracket(A, delta[alpha], delta[beta]) - expected).components())
        vertical.extend(
            (
                prolong_bracket(A, delta[alpha], V[beta])
                + ProlongSection(
                    A,
                    (A.zero,) * m,
                    tuple(Bc.B[gamma][alpha].diff_y(beta) for gamma in range(m)),
                )
            ).components()
        )
    run.judge("adapted_bracket_table", "brackets", adapted)
    run.judge("adapted_vertical_bracket_table", "brackets", vertical)
    run.judge(
        "connection_curvature_antisymmetry",
        "brackets",
        [
            R[gamma][alpha][beta] + R[gamma][beta][alpha]
            for gamma in range(m)
            for alpha, beta in itertools.combinations_with_replacement(range(m), 2)
        ],
    )

    jacobi = []
    for alpha, beta in itertools.combinations(range(m), 2):
        a, b = delta[alpha], delta[beta]
        cyclic = (
            prolong_bracket(A, S, prolong_bracket(A, a, b))
            + prolong_bracket(A, a, prolong_bracket(A, b, S))
            + prolong_bracket(A, b, prolong_bracket(A, S, a))
        )
        jacobi.extend(cyclic.components())
    run.judge("prolongation_jacobi_identity", "brackets", jacobi)

    probes = X + V + [S, liouville(A)]
    h, v = projectors(Bc)
    J = vertical_endomorphism
    identities: t.Dict[str, t.List[ScalarField]] = {
        "J_squared": [],
        "hJ_hv_Jv": [],
        "projectors_idempotent": [],
        "Jh_vJ": [],
        "exactness": [],
    }
    for xi in probes:
        identities["J_squared"].extend(J(J(xi)).components())
        for zero in (h(J(xi)), h(v(xi)), J(v(xi))):
            identities["hJ_hv_Jv"].extend(zero.components())
        identities["projectors_idempotent"].extend((h(h(xi)) - h(xi)).components())
        identities["projectors_idempotent"].extend((v(v(xi)) - v(xi)).components())
        identities["Jh_vJ"].extend((J(h(xi)) - J(xi)).components())
        identities["Jh_vJ"].extend((v(J(xi)) - J(xi)).components())
        identities["exactness"].extend(map_j(map_i(map_j(xi))).comp)
    for eta in run.basis() + list(run.sections.values()):
        identities["exactness"].extend(
            (map_i(hat_lift(eta)) - vertical_lift_P(A, eta)).components()
        )
        identities["exactness"].extend(
            a - b for a, b in zip(map_j(complete_lift_P(A, eta)).comp, eta.comp)
        )
    for name, fields in identities.items():
        run.judge(name, "brackets", fields)

    ehresmann_fields = []
    for alpha in range(m):
        e_hat = PullbackSection.basis(A, alpha)
        ehresmann_fields.extend(
            a - b for a, b in zip(map_j(ehresmann(Bc, e_hat)).comp, e_hat.comp)
        )
        ehresmann_fields.extend(vertical_map(Bc, ehresmann(Bc, e_hat)).comp)
        ehresmann_fields.extend(
            a + b
            for a, b in zip(
                vertical_map(Bc, X[alpha]).comp, (Bc.B[beta][alpha] for beta in range(m))
            )
        )
    run.judge("ehresmann_axioms", "brackets", ehresmann_fields)


def symmetry_check(run: _Run, request: CheckRequest) -> None:
    tol = request.tol if request.tol is not None else run.tol
    symmetric = request.expect == "symmetry"
    eta = run.sections[request.section]
    Bc = run.connection
    name = request.name
    if request.kind == "lie_symmetry":
        residual = lie_symmetry_residual(run.spray, eta, run.points)
        run.results.append(
            judge(name, "symmetry", residual.vertical, tol, expect_zero=symmetric)
        )
        run.results.append(
            judge(f"{name}:horizontal_part", "symmetry", residual.horizontal, CONSISTENCY_TOLERANCE)
        )
        size = residual.local.maximum
        scale = max(1.0, size) if math.isfinite(size) else 1.0
        run.results.append(
            judge(
                f"{name}:coordinate_expression",
                "symmetry",
                residual.disagreement,
                CONSISTENCY_TOLERANCE * scale,
            )
        )
    elif request.kind == "collineation":
        suite = run.suite()
        residuals = collineation_residuals(suite, eta, run.points) if suite else None
        for tensor in TENSORS:
            label = f"{name}:{tensor}"
            if residuals is None:
                run.results.append(skipped(label, "symmetry", run._suite_error or ""))
            elif symmetric:
                run.results.append(judge(label, "symmetry", residuals[tensor], tol))
            else:
                run.results.append(
                    noted(label, "symmetry", residuals[tensor], "not a symmetry; recorded only")
                )
        if residuals is not None:
            for always in ("Id", "delta"):
                run.results.append(
                    judge(f"{name}:{always}", "symmetry", residuals[always], tol)
                )
    elif request.kind == "symmetry_lemma":
        residuals = symmetry_lemma_residuals(Bc, eta, run.points)
        for key in ("A", "FN_v_horizontal"):
            run.results.append(
                judge(f"{name}:{key}", "symmetry", residuals[key], tol, expect_zero=symmetric)
            )
        for key in ("A_vertical", "A_local", "FN_J", "FN_v_vertical", "FN_v_matches_A"):
            run.results.append(judge(f"{name}:{key}", "symmetry", residuals[key], tol))
    else:
        derivation_identities(run, request, eta, tol)


def derivation_identities(
    run: _Run, request: CheckRequest, eta: BaseSection, tol: float
) -> None:
    """Identities between L̃, ∇^v and ∇^h along lifts of `eta`."""
    A = run.A
    Bc = run.connection
    xi = run.sections[request.with_section or request.section]
    F = (
        fibre_probe(A)
        if request.function is None
        else from_expr(request.function, A.n, A.m)
    )
    name = request.name
    eta_hat, xi_hat = hat_lift(eta), hat_lift(xi)
    sigma = PullbackSection(A, tuple(F * c for c in xi.comp))
    eta_C = complete_lift_P(A, eta)
    along_C = lie_derivation(Bc, eta_C, run.points)
    bracket = bracket_E(A, eta, xi)
    stage = "symmetry"

    def record(key: str, fields: t.Iterable[ScalarField]) -> None:
        run.results.append(judge(f"{name}:{key}", stage, run.measure(fields), tol))

    record(
        "vertical_lift",
        (
            lie_derivation(Bc, vertical_lift_P(A, eta)).pullback(sigma)
            - nabla_v_sec(Bc, eta_hat, sigma)
        ).comp,
    )
    record(
        "horizontal_lift",
        (
            lie_derivation(Bc, horizontal_lift(Bc, eta), run.points).pullback(sigma)
            - nabla_h_sec(Bc, eta_hat, sigma)
        ).comp,
    )
    record("hat_bracket", (along_C.pullback(xi_hat) - hat_lift(bracket)).comp)

    flat = []
    probes = [basis_X(A, a).scaled(F) for a in range(A.m)]
    probes += [basis_V(A, a).scaled(F) for a in range(A.m)]
    probes.append(run.spray.section)
    for zeta in probes:
        flat.extend(
            (along_C.pullback(map_j(zeta)) - map_j(prolong_bracket(A, eta_C, zeta))).comp
        )
    record("projection", flat)

    def nabla_v_f(G: ScalarField) -> ScalarField:
        return A.sum(xi.comp[a] * G.diff_y(a) for a in range(A.m))

    along_V = lie_derivation(Bc, vertical_lift_P(A, bracket))
    commutator_v = [
        along_C.function(nabla_v_f(F))
        - nabla_v_f(along_C.function(F))
        - along_V.function(F)
    ]
    commutator_v.extend(
        (
            along_C.pullback(nabla_v_sec(Bc, xi_hat, sigma))
            - nabla_v_sec(Bc, xi_hat, along_C.pullback(sigma))
            - along_V.pullback(sigma)
        ).comp
    )
    record("vertical_commutator", commutator_v)

    xi_h = horizontal_lift(Bc, xi)
    try:
        along_bracket = lie_derivation(
            Bc, prolong_bracket(A, eta_C, xi_h), run.points
        )
    except NotProjectableError as e:
        run.results.append(skipped(f"{name}:horizontal_commutator", stage, str(e)))
    else:
        h_xi = rho_L(A, xi_h)
        commutator_h = [
            along_C.function(h_xi.apply(F))
            - h_xi.apply(along_C.function(F))
            - along_bracket.function(F)
        ]
        commutator_h.extend(
            (
                along_C.pullback(nabla_h_sec(Bc, xi_hat, sigma))
                - nabla_h_sec(Bc, xi_hat, along_C.pullback(sigma))
                - along_bracket.pullback(sigma)
            ).comp
        )
        record("horizontal_commutator", commutator_h)

    record(
        "vertical_of_lie_derivative",
        [
            c
            for a in range(A.m)
            for c in nabla_v_sec(
                Bc, PullbackSection.basis(A, a), along_C.pullback(xi_hat)
            ).comp
        ],
    )

    dF = TensorField(A, 1, False, {(a,): F.diff_y(a) for a in range(A.m)})
    lhs = along_C.tensor(dF)(xi_hat)
    rhs = rho_L(A, vertical_lift_P(A, xi)).apply(along_C.function(F))
    record("lie_derivative_of_vertical_differential", [lhs - rhs])

    record(
        "leibniz",
        (
            along_C.pullback(sigma)
            - PullbackSection(A, tuple(along_C.function(F) * c for c in xi_hat.comp))
            - along_C.pullback(xi_hat).scaled(F)
        ).comp,
    )


def consistency_stage(run: _Run) -> None:
    """Objects computed along two routes must agree."""
    A = run.A
    Bc = run.connection
    ev = run.evaluator
    stage = "consistency"
    run.results.append(
        agreement(
            "jacobi_endomorphism",
            stage,
            ev,
            jacobi_endomorphism(Bc, "bracket").fields(),
            jacobi_endomorphism(Bc, "coordinates").fields(),
        )
    )
    suite = run.suite()
    if suite is None:
        run.results.append(skipped("projective_deviation", stage, run._suite_error or ""))
    else:
        run.results.append(
            agreement(
                "projective_deviation", stage, ev, suite.W0.fields(), suite.W0_rewritten.fields()
            )
        )
    lifts_a, lifts_b = [], []
    for eta in run.basis() + list(run.sections.values()):
        lifts_a.extend(horizontal_lift(Bc, eta).components())
        lifts_b.extend(horizontal_lift_from_brackets(Bc, eta).components())
    run.results.append(agreement("horizontal_lift", stage, ev, lifts_a, lifts_b))

    F = fibre_probe(A)
    h_a, h_b = [], []
    for alpha, beta in itertools.product(range(A.m), repeat=2):
        xi = PullbackSection.basis(A, alpha)
        eta = PullbackSection.basis(A, beta).scaled(F)
        h_a.extend(nabla_h_sec(Bc, xi, eta).comp)
        h_b.extend(nabla_h_sec_from_brackets(Bc, xi, eta).comp)
    run.results.append(agreement("h_berwald_differential", stage, ev, h_a, h_b))

    l_a, l_b = [], []
    for eta in run.basis() + list(run.sections.values()):
        derivation = lie_derivation(Bc, complete_lift_P(A, eta))
        for beta in range(A.m):
            sigma = PullbackSection.basis(A, beta).scaled(F)
            l_a.extend(derivation.pullback(sigma).comp)
            l_b.extend(derivation.pullback_local(sigma).comp)
    run.results.append(agreement("lie_derivation", stage, ev, l_a, l_b))


def run_checks(scenario: Scenario, options: RunOptions = RunOptions()) -> Report:
    """Run all stages and the scenario's checks; see the module docstring."""
    start = time.perf_counter()
    run = _Run(scenario, options)
    report = Report(
        scenario.name,
        scenario.digest,
        run.points.count,
        run.seed,
        run.dimension,
    )
    logger.info(
        f"Checking {scenario.name} (n={scenario.n}, m={scenario.m}) at {run.points.count} points, seed {run.seed}"
    )
    stages: t.List[t.Tuple[str, t.Callable[[], t.Any]]] = [
        ("lifts", lambda: lifts_stage(run)),
        ("spray", lambda: spray_stage(run)),
        ("brackets", lambda: bracket_stage(run)),
    ]
    stages.extend(
        (request.name, lambda request=request: symmetry_check(run, request))
        for request in scenario.checks
    )
    stages.append(("consistency", lambda: consistency_stage(run)))

    if structure_stage(run):
        for _, stage in cli.tq(stages, task="Running checks", total=len(stages)):
            stage()
    else:
        note = "structure equations failed"
        for name, _ in stages:
            run.results.append(skipped(name, "skipped", note))

    report.results = run.results
    report.wall_time = time.perf_counter() - start
    failing = [r.name for r in report.results if r.verdict.failing]
    if failing:
        logger.info(f"{len(failing)} checks did not pass: {', '.join(failing)}")
    else:
        logger.info(f"All {len(report.results)} checks passed or were noted.")
    return report
