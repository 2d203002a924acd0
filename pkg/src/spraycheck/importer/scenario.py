"""Read scenario files.

A scenario is a plain-text file of bracketed block headers followed by
``key = value`` lines. Values are either double-quoted strings or numbers;
coordinate expressions are always quoted. Lines starting with ``#`` are
comments.

>>> scenario = parse_scenario('''
... [algebroid]
... n = 2
... m = 2
... rho[1][1] = "1"
... rho[2][2] = "1"
...
... [section eta]
... eta[1] = "-x2"
... eta[2] = "x1"
...
... [check]
... kind = "lie_symmetry"
... section = "eta"
... ''')
>>> scenario.n, scenario.m, len(scenario.checks)
(2, 2, 1)
>>> scenario.sampling.points, scenario.sampling.seed, scenario.default_tol
(100, 42, 1e-08)
"""
import typing as t
from pathlib import Path

import attr
import regex

from spraycheck import cli
from spraycheck.cli import logger
from spraycheck.error_handling import ExpressionSyntaxError, ScenarioError
from spraycheck.geometry.algebroid import AlgebroidStructure, BaseSection
from spraycheck.geometry.connection import Spray
from spraycheck.jet import expression
from spraycheck.jet.field import from_expr
from spraycheck.types import SamplePoints
from spraycheck.util import fs, sample_points

HEADER = regex.compile(r"\[\s*(?P<block>[a-z]+)(?:\s+(?P<name>[A-Za-z_][A-Za-z0-9_]*))?\s*\]")
ENTRY = regex.compile(
    r"(?P<key>[A-Za-z_][A-Za-z0-9_]*)(?P<indices>(?:\s*\[[^\]]*\])*)\s*=\s*(?P<value>.*?)\s*"
)
INDEX = regex.compile(r"\[\s*(\d+)\s*(?:,\s*(\d+)\s*)?\]")
STRING = regex.compile(r'"(?P<text>[^"]*)"')
NUMBER = regex.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")

BLOCKS = ("algebroid", "spray", "section", "check", "sampling", "options")
CHECK_KINDS = ("lie_symmetry", "collineation", "symmetry_lemma", "derivation_identities")
EXPECTATIONS = ("symmetry", "non-symmetry")
DEFAULT_TOLERANCE = 1e-8
TRANSCENDENTAL_TOLERANCE = 1e-6


@attr.s(auto_attribs=True, frozen=True)
class Value:
    """A raw right-hand side, with the position of its first character."""

    content: t.Union[str, float]
    quoted: bool
    line: int
    column: int

    def fail(self, message: str) -> t.NoReturn:
        raise ScenarioError(message, self.line, self.column)

    def string(self, key: str) -> str:
        if not self.quoted:
            self.fail(f"{key} needs a quoted string value")
        return t.cast(str, self.content)

    def number(self, key: str) -> float:
        if self.quoted:
            self.fail(f"{key} needs a number, not a quoted string")
        return t.cast(float, self.content)

    def integer(self, key: str, minimum: int = 0) -> int:
        number = self.number(key)
        if number != int(number) or number < minimum:
            self.fail(f"{key} needs an integer of at least {minimum}, not {number}")
        return int(number)

    def expression(self, key: str, n: int, m: int) -> expression.Expr:
        text = self.string(key)
        try:
            return expression.parse(text, n, m)
        except ExpressionSyntaxError as e:
            # The expression starts one column after the opening quote.
            raise ScenarioError(
                f"{key}: {e.message}", self.line, self.column + 1 + e.offset
            )


@attr.s(auto_attribs=True, frozen=True)
class Sampling:
    points: int = 100
    seed: int = 42
    x_min: float = -1.0
    x_max: float = 1.0
    y_min: float = 0.5
    y_max: float = 2.0


@attr.s(auto_attribs=True, frozen=True)
class Options:
    projective_dimension: str = "rank"
    structure_policy: str = "error"


@attr.s(auto_attribs=True, frozen=True)
class CheckRequest:
    kind: str
    section: str
    with_section: t.Optional[str] = None
    function: t.Optional[expression.Expr] = None
    expect: str = "symmetry"
    tol: t.Optional[float] = None
    line: int = 0

    @property
    def name(self) -> str:
        if self.with_section:
            return f"{self.kind}({self.section}, {self.with_section})"
        return f"{self.kind}({self.section})"


@attr.s(auto_attribs=True, frozen=True)
class Scenario:
    name: str
    n: int
    m: int
    rho: t.Dict[t.Tuple[int, int], expression.Expr]
    L: t.Dict[t.Tuple[int, int, int], expression.Expr]
    S: t.Tuple[expression.Expr, ...]
    homogeneous: bool
    sections: t.Dict[str, t.Tuple[expression.Expr, ...]]
    checks: t.Tuple[CheckRequest, ...]
    sampling: Sampling
    options: Options
    digest: str

    def expressions(self) -> t.Iterator[expression.Expr]:
        yield from self.rho.values()
        yield from self.L.values()
        yield from self.S
        for components in self.sections.values():
            yield from components
        for check in self.checks:
            if check.function is not None:
                yield check.function

    @property
    def transcendental(self) -> bool:
        return any(e.functions() for e in self.expressions())

    @property
    def default_tol(self) -> float:
        return TRANSCENDENTAL_TOLERANCE if self.transcendental else DEFAULT_TOLERANCE

    def structure(self) -> AlgebroidStructure:
        return AlgebroidStructure.from_components(
            self.n,
            self.m,
            {key: from_expr(e, self.n, self.m) for key, e in self.rho.items()},
            {key: from_expr(e, self.n, self.m) for key, e in self.L.items()},
        )

    def spray(self, structure: AlgebroidStructure) -> Spray:
        return Spray(
            structure,
            tuple(from_expr(e, self.n, self.m) for e in self.S),
            self.homogeneous,
        )

    def section(self, structure: AlgebroidStructure, name: str) -> BaseSection:
        return BaseSection(
            structure, tuple(from_expr(e, self.n, self.m) for e in self.sections[name])
        )

    def points(
        self, count: t.Optional[int] = None, seed: t.Optional[int] = None
    ) -> SamplePoints:
        s = self.sampling
        return sample_points(
            self.n,
            self.m,
            s.points if count is None else count,
            s.seed if seed is None else seed,
            (s.x_min, s.x_max),
            (s.y_min, s.y_max),
        )


def _uses_fibre(expr: expression.Expr) -> bool:
    if isinstance(expr, expression.Variable):
        return expr.kind == "y"
    return any(_uses_fibre(c) for c in expr.children())


def _value(text: str, line: int, column: int) -> Value:
    if STRING.fullmatch(text):
        return Value(text[1:-1], True, line, column)
    if NUMBER.fullmatch(text):
        return Value(float(text), False, line, column)
    raise ScenarioError(
        f"Value {text!r} is neither a quoted string nor a number", line, column
    )


@attr.s(auto_attribs=True)
class _Entry:
    key: str
    indices: t.Tuple[t.Tuple[int, ...], ...]
    value: Value
    line: int
    column: int

    def fail(self, message: str) -> t.NoReturn:
        raise ScenarioError(message, self.line, self.column)

    @property
    def label(self) -> str:
        return self.key + "".join(
            "[" + ",".join(str(i) for i in index) + "]" for index in self.indices
        )


@attr.s(auto_attribs=True)
class _Block:
    kind: str
    name: t.Optional[str]
    line: int
    entries: t.List[_Entry] = attr.Factory(list)

    def single(self, key: str) -> t.Optional[_Entry]:
        found = [e for e in self.entries if e.key == key and not e.indices]
        return found[0] if found else None


def _read_blocks(text: str) -> t.List[_Block]:
    blocks: t.List[_Block] = []
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        indent = len(raw) - len(raw.lstrip())
        header = HEADER.fullmatch(line)
        if header:
            kind = header["block"]
            if kind not in BLOCKS:
                raise ScenarioError(
                    f"Unknown block [{kind}]. Known blocks: {', '.join(BLOCKS)}",
                    number,
                    indent + 1,
                )
            if (kind == "section") != bool(header["name"]):
                raise ScenarioError(
                    "Only [section NAME] blocks carry a name", number, indent + 1
                )
            blocks.append(_Block(kind, header["name"], number))
            continue
        entry = ENTRY.fullmatch(line)
        if not entry:
            raise ScenarioError(
                f"Expected a [block] header or a 'key = value' line, found {line!r}",
                number,
                indent + 1,
            )
        if not blocks:
            raise ScenarioError(
                "Entries must follow a [block] header", number, indent + 1
            )
        indices = []
        rest = regex.sub(r"\s+", "", entry["indices"])
        for index in INDEX.finditer(rest):
            indices.append(tuple(int(i) for i in index.groups() if i is not None))
        if "".join(f"[{','.join(str(i) for i in index)}]" for index in indices) != rest:
            raise ScenarioError(
                f"Malformed index {entry['indices'].strip()!r}",
                number,
                indent + 1 + entry.start("indices"),
            )
        value_column = indent + 1 + entry.start("value")
        blocks[-1].entries.append(
            _Entry(
                entry["key"],
                tuple(indices),
                _value(entry["value"], number, value_column),
                number,
                indent + 1,
            )
        )
    return blocks


def _check_duplicates(block: _Block) -> None:
    seen: t.Dict[t.Tuple[str, t.Tuple[t.Tuple[int, ...], ...]], int] = {}
    for entry in block.entries:
        key = (entry.key, entry.indices)
        if key in seen:
            entry.fail(f"{entry.label} was already given in line {seen[key]}")
        seen[key] = entry.line


def _in_range(entry: _Entry, index: int, bound: int, what: str) -> int:
    if not 1 <= index <= bound:
        entry.fail(
            f"{entry.label}: {what} index {index} out of range 1..{bound}"
            if bound
            else f"{entry.label}: there are no {what} indices"
        )
    return index - 1


def _base_expression(entry: _Entry, n: int, m: int) -> expression.Expr:
    expr = entry.value.expression(entry.label, n, m)
    if _uses_fibre(expr):
        entry.value.fail(f"{entry.label} must depend on x1..x{n} only")
    return expr


def _component_list(
    block: _Block, key: str, n: int, m: int, base_only: bool
) -> t.Tuple[expression.Expr, ...]:
    components: t.List[expression.Expr] = [expression.Number(0.0)] * m
    for entry in block.entries:
        if entry.key != key or len(entry.indices) != 1 or len(entry.indices[0]) != 1:
            entry.fail(f"Unknown key {entry.label} in [{block.kind}]; expected {key}[α]")
        alpha = _in_range(entry, entry.indices[0][0], m, "fibre")
        components[alpha] = (
            _base_expression(entry, n, m)
            if base_only
            else entry.value.expression(entry.label, n, m)
        )
    return tuple(components)


def _algebroid(block: _Block) -> t.Tuple[int, int, t.Dict, t.Dict]:
    n_entry = block.single("n")
    m_entry = block.single("m")
    if n_entry is None or m_entry is None:
        raise ScenarioError("[algebroid] needs the dimensions n and m", block.line, 1)
    n = n_entry.value.integer("n")
    m = m_entry.value.integer("m", minimum=1)
    rho: t.Dict[t.Tuple[int, int], expression.Expr] = {}
    L: t.Dict[t.Tuple[int, int, int], expression.Expr] = {}
    L_lines: t.Dict[t.Tuple[int, int, int], int] = {}
    for entry in block.entries:
        if entry.key in ("n", "m") and not entry.indices:
            continue
        shape = tuple(len(i) for i in entry.indices)
        if entry.key == "rho" and shape == (1, 1):
            i = _in_range(entry, entry.indices[0][0], n, "base")
            alpha = _in_range(entry, entry.indices[1][0], m, "fibre")
            rho[i, alpha] = _base_expression(entry, n, m)
        elif entry.key == "L" and shape == (1, 2):
            gamma = _in_range(entry, entry.indices[0][0], m, "fibre")
            alpha = _in_range(entry, entry.indices[1][0], m, "fibre")
            beta = _in_range(entry, entry.indices[1][1], m, "fibre")
            if alpha == beta:
                entry.fail(f"{entry.label}: L vanishes for equal lower indices")
            if (gamma, beta, alpha) in L_lines:
                entry.fail(
                    f"{entry.label}: the other order was given in line {L_lines[gamma, beta, alpha]}; give each structure function once"
                )
            if alpha > beta:
                entry.fail(
                    f"{entry.label}: give L[{gamma + 1}][{beta + 1},{alpha + 1}] instead, lower indices in increasing order"
                )
            L_lines[gamma, alpha, beta] = entry.line
            L[gamma, alpha, beta] = _base_expression(entry, n, m)
        else:
            entry.fail(
                f"Unknown key {entry.label} in [algebroid]; expected n, m, rho[i][α] or L[γ][α,β]"
            )
    return n, m, rho, L


def _spray(block: t.Optional[_Block], n: int, m: int) -> t.Tuple[t.Tuple, bool]:
    if block is None:
        return (expression.Number(0.0),) * m, True
    homogeneous = True
    kind = block.single("type")
    if kind is not None:
        text = kind.value.string("type")
        if text not in ("spray", "semispray"):
            kind.value.fail(f"type must be 'spray' or 'semispray', not {text!r}")
        homogeneous = text == "spray"
    rest = _Block(block.kind, block.name, block.line, [e for e in block.entries if e is not kind])
    return _component_list(rest, "S", n, m, base_only=False), homogeneous


def _sampling(block: t.Optional[_Block]) -> Sampling:
    if block is None:
        return Sampling()
    values: t.Dict[str, t.Any] = {}
    for entry in block.entries:
        if entry.indices or entry.key not in attr.fields_dict(Sampling):
            entry.fail(
                f"Unknown key {entry.label} in [sampling]; expected one of {', '.join(attr.fields_dict(Sampling))}"
            )
        if entry.key == "points":
            values["points"] = entry.value.integer("points", minimum=1)
        elif entry.key == "seed":
            values["seed"] = entry.value.integer("seed")
        else:
            values[entry.key] = entry.value.number(entry.key)
    sampling = Sampling(**values)
    if sampling.x_min > sampling.x_max or not 0 < sampling.y_min <= sampling.y_max:
        raise ScenarioError(
            "[sampling] needs x_min <= x_max and 0 < y_min <= y_max", block.line, 1
        )
    return sampling


def _options(block: t.Optional[_Block]) -> Options:
    if block is None:
        return Options()
    allowed = {
        "projective_dimension": ("rank", "base"),
        "structure_policy": ("error", "warn"),
    }
    values = {}
    for entry in block.entries:
        if entry.indices or entry.key not in allowed:
            entry.fail(
                f"Unknown key {entry.label} in [options]; expected one of {', '.join(allowed)}"
            )
        text = entry.value.string(entry.key)
        if text not in allowed[entry.key]:
            entry.value.fail(
                f"{entry.key} must be one of {', '.join(allowed[entry.key])}, not {text!r}"
            )
        values[entry.key] = text
    return Options(**values)


def _check(block: _Block, n: int, m: int, sections: t.Container[str]) -> CheckRequest:
    allowed = ("kind", "section", "with", "function", "expect", "tol")
    for entry in block.entries:
        if entry.indices or entry.key not in allowed:
            entry.fail(
                f"Unknown key {entry.label} in [check]; expected one of {', '.join(allowed)}"
            )

    def string(key: str) -> t.Optional[str]:
        entry = block.single(key)
        return None if entry is None else entry.value.string(key)

    kind = string("kind")
    if kind not in CHECK_KINDS:
        raise ScenarioError(
            f"[check] needs a kind, one of {', '.join(CHECK_KINDS)}; found {kind!r}",
            block.line,
            1,
        )
    for key in ("section", "with"):
        entry = block.single(key)
        if entry is not None and entry.value.string(key) not in sections:
            entry.value.fail(f"Check refers to undeclared section {entry.value.content!r}")
    section = string("section")
    if section is None:
        raise ScenarioError("[check] needs a section", block.line, 1)
    with_section = string("with")
    if with_section is not None and kind != "derivation_identities":
        raise ScenarioError(
            "Only derivation_identities checks take a second section", block.line, 1
        )
    function_entry = block.single("function")
    function = None
    if function_entry is not None:
        if kind != "derivation_identities":
            function_entry.fail("Only derivation_identities checks take a function")
        function = function_entry.value.expression("function", n, m)
    expect = string("expect") or "symmetry"
    if expect not in EXPECTATIONS:
        block.single("expect").value.fail(
            f"expect must be one of {', '.join(EXPECTATIONS)}, not {expect!r}"
        )
    tol_entry = block.single("tol")
    tol = None
    if tol_entry is not None:
        tol = tol_entry.value.number("tol")
        if tol <= 0:
            tol_entry.value.fail("tol must be positive")
    return CheckRequest(kind, section, with_section, function, expect, tol, block.line)


def parse_scenario(text: str, name: str = "<scenario>") -> Scenario:
    """Parse and validate the text of a scenario file.

    Raises
    ======
    ScenarioError
        With the line and column of the offending entry.
    """
    blocks = _read_blocks(text)
    singletons: t.Dict[str, _Block] = {}
    sections: t.Dict[str, _Block] = {}
    checks: t.List[_Block] = []
    for block in blocks:
        _check_duplicates(block)
        if block.kind == "check":
            checks.append(block)
        elif block.kind == "section":
            if block.name in sections:
                raise ScenarioError(
                    f"Section {block.name!r} was already declared in line {sections[block.name].line}",
                    block.line,
                    1,
                )
            sections[block.name] = block
        elif block.kind in singletons:
            raise ScenarioError(
                f"Block [{block.kind}] was already given in line {singletons[block.kind].line}",
                block.line,
                1,
            )
        else:
            singletons[block.kind] = block
    if "algebroid" not in singletons:
        raise ScenarioError("The scenario declares no [algebroid]")
    n, m, rho, L = _algebroid(singletons["algebroid"])
    S, homogeneous = _spray(singletons.get("spray"), n, m)
    section_components = {
        section_name: _component_list(block, section_name, n, m, base_only=True)
        for section_name, block in sections.items()
    }
    scenario = Scenario(
        name,
        n,
        m,
        rho,
        L,
        S,
        homogeneous,
        section_components,
        tuple(_check(block, n, m, sections) for block in checks),
        _sampling(singletons.get("sampling")),
        _options(singletons.get("options")),
        fs.digest(text),
    )
    logger.debug(
        f"Read scenario {name}: n={n}, m={m}, {len(sections)} sections, {len(checks)} checks"
    )
    return scenario


def load_scenario(path: Path) -> Scenario:
    return parse_scenario(fs.read_scenario_text(path), path.stem)


def load_builtin(name: str) -> Scenario:
    return load_scenario(fs.builtin_scenario(name))


def scenario_from_args(args) -> Scenario:
    """The scenario named on the command line, or exit with status 2."""
    try:
        if args.builtin:
            return load_builtin(args.builtin)
        return load_scenario(args.scenario)
    except FileNotFoundError as e:
        cli.Exit.FILE_NOT_FOUND(str(e))
    except ScenarioError as e:
        cli.Exit.INVALID_SCENARIO(f"Invalid scenario: {e}")
