"""The expression language for coordinate functions.

Expressions are written over the base coordinates ``x1 .. xn`` and the fibre
coordinates ``y1 .. ym``. The grammar, from loosest to tightest binding::

    expression := term (("+" | "-") term)*
    term       := unary (("*" | "/") unary)*
    unary      := "-" unary | power
    power      := atom ("^" exponent)?
    exponent   := "-" exponent | power          (an integer constant)
    atom       := number | "pi" | variable | function "(" expression ")"
                | "(" expression ")"

>>> e = parse("y1^2 + x2", n=2, m=2)
>>> print(e)
((y1^2) + x2)
>>> parse("-x1^2", n=1, m=1)
Negate(operand=Power(base=Variable(kind='x', index=1), exponent=2))
>>> print(parse("2^3^2", 0, 1))
(2.0^9)
"""
import math
import typing as t

import attr
import regex

from spraycheck.error_handling import ExpressionSyntaxError

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh")

TOKEN = regex.compile(
    r"""
    (?P<space>\s+)
    |(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
    |(?P<name>[A-Za-z_][A-Za-z0-9_]*)
    |(?P<op>[-+*/^()])
    """,
    regex.VERBOSE,
)
VARIABLE = regex.compile(r"([xy])([1-9][0-9]*)")


class Expr:
    """Base class of the expression tree."""

    def functions(self) -> t.Set[str]:
        return set().union(*(c.functions() for c in self.children()))

    def children(self) -> t.Tuple["Expr", ...]:
        return ()


@attr.s(auto_attribs=True, frozen=True, str=False)
class Number(Expr):
    value: float

    def __str__(self):
        if self.value < 0:
            return f"(-{-self.value!r})"
        return repr(float(self.value))


@attr.s(auto_attribs=True, frozen=True, str=False)
class Variable(Expr):
    kind: str
    index: int

    def __str__(self):
        return f"{self.kind}{self.index}"


@attr.s(auto_attribs=True, frozen=True, str=False)
class Negate(Expr):
    operand: Expr

    def children(self):
        return (self.operand,)

    def __str__(self):
        return f"(-{self.operand})"


@attr.s(auto_attribs=True, frozen=True, str=False)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@attr.s(auto_attribs=True, frozen=True, str=False)
class Power(Expr):
    base: Expr
    exponent: int

    def children(self):
        return (self.base,)

    def __str__(self):
        return f"({self.base}^{self.exponent})"


@attr.s(auto_attribs=True, frozen=True, str=False)
class Call(Expr):
    function: str
    argument: Expr

    def children(self):
        return (self.argument,)

    def functions(self):
        return {self.function} | self.argument.functions()

    def __str__(self):
        return f"{self.function}({self.argument})"


def constant_value(expr: Expr) -> t.Optional[float]:
    """The value of an expression without variables, or None.

    >>> constant_value(parse("2*(3-1)^2", 0, 0))
    8.0
    >>> constant_value(parse("x1", 1, 0)) is None
    True
    """
    if isinstance(expr, Number):
        return float(expr.value)
    if isinstance(expr, Variable):
        return None
    values = [constant_value(c) for c in expr.children()]
    if any(v is None for v in values):
        return None
    if isinstance(expr, Negate):
        return -values[0]
    if isinstance(expr, Power):
        return values[0] ** expr.exponent
    if isinstance(expr, Call):
        return getattr(math, expr.function)(values[0])
    assert isinstance(expr, Binary)
    left, right = values
    return {
        "+": lambda: left + right,
        "-": lambda: left - right,
        "*": lambda: left * right,
        "/": lambda: left / right,
    }[expr.op]()


class _Parser:
    def __init__(self, text: str, n: int, m: int):
        self.text = text
        self.n = n
        self.m = m
        self.tokens: t.List[t.Tuple[str, str, int]] = []
        position = 0
        while position < len(text):
            match = TOKEN.match(text, position)
            if match is None:
                self.fail(f"Unexpected character {text[position]!r}", position)
            if match.lastgroup != "space":
                self.tokens.append((match.lastgroup, match.group(), position))
            position = match.end()
        self.tokens.append(("end", "", len(text)))
        self.current = 0

    def fail(self, message: str, position: int) -> t.NoReturn:
        raise ExpressionSyntaxError(message, len(self.text[:position].encode("utf-8")))

    def peek(self) -> t.Tuple[str, str, int]:
        return self.tokens[self.current]

    def take(self) -> t.Tuple[str, str, int]:
        token = self.tokens[self.current]
        self.current += 1
        return token

    def expect(self, text: str) -> None:
        kind, value, position = self.take()
        if value != text or kind != "op":
            self.fail(f"Expected {text!r}, found {value or 'end of input'!r}", position)

    def at(self, *ops: str) -> bool:
        kind, value, _ = self.peek()
        return kind == "op" and value in ops

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            self.fail("Empty expression", 0)
        expr = self.expression()
        kind, value, position = self.peek()
        if kind != "end":
            self.fail(f"Unexpected {value!r}", position)
        return expr

    def expression(self) -> Expr:
        left = self.term()
        while self.at("+", "-"):
            op = self.take()[1]
            left = Binary(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.at("*", "/"):
            op = self.take()[1]
            left = Binary(op, left, self.unary())
        return left

    def unary(self) -> Expr:
        if self.at("-"):
            self.take()
            return Negate(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if not self.at("^"):
            return base
        self.take()
        position = self.peek()[2]
        try:
            exponent = constant_value(self.exponent())
        except (ArithmeticError, ValueError):
            exponent = math.nan
        if (
            exponent is None
            or not math.isfinite(exponent)
            or not float(exponent).is_integer()
        ):
            self.fail("The exponent of ^ must be a finite integer constant", position)
        return Power(base, int(exponent))

    def exponent(self) -> Expr:
        if self.at("-"):
            self.take()
            return Negate(self.exponent())
        return self.power()

    def atom(self) -> Expr:
        kind, value, position = self.take()
        if kind == "number":
            return Number(float(value))
        if kind == "op" and value == "(":
            inner = self.expression()
            self.expect(")")
            return inner
        if kind == "name":
            if self.at("("):
                if value not in FUNCTIONS:
                    self.fail(f"Unknown function {value!r}", position)
                self.take()
                argument = self.expression()
                self.expect(")")
                return Call(value, argument)
            if value == "pi":
                return Number(math.pi)
            variable = VARIABLE.fullmatch(value)
            if variable is None:
                self.fail(f"Unknown identifier {value!r}", position)
            coordinate, index = variable.group(1), int(variable.group(2))
            bound = self.n if coordinate == "x" else self.m
            if index > bound:
                self.fail(
                    f"Variable {value} out of range: only {coordinate}1..{coordinate}{bound} exist",
                    position,
                )
            return Variable(coordinate, index)
        self.fail(f"Unexpected {value or 'end of input'!r}", position)


def parse(text: str, n: int, m: int) -> Expr:
    """Parse an expression over x1..xn and y1..ym.

    >>> parse("y3", n=1, m=2)
    Traceback (most recent call last):
    ...
    spraycheck.error_handling.ExpressionSyntaxError: Variable y3 out of range: only y1..y2 exist (at byte 0)
    """
    return _Parser(text, n, m).parse()
