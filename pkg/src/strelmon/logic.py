"""Formula syntax tree, concrete grammar, parser, printer and desugaring.

The grammar, with `|` binding loosest and unary operators tightest:

    formula  := or ;
    or       := and { "|" and } ;
    and      := temporal { "&" temporal } ;
    temporal := unary { ("U"|"S") interval unary
                      | "reach" "(" ident ")" [interval] unary
                      | "surround" "(" ident ")" [interval] unary } ;
    unary    := "!" unary | "F" [interval] unary | "G" [interval] unary
              | "escape" "(" ident ")" [interval] unary
              | "somewhere" "(" ident ")" [interval] unary
              | "everywhere" "(" ident ")" [interval] unary
              | atom | "(" formula ")" ;
    interval := "[" number "," (number | "inf") "]" ;
    atom     := ident | ident cmp number ; cmp := ">"|"<"|">="|"<=" ;

Binary operators are left-associative.  An omitted interval means [0, inf].
`inf` is only meaningful as a distance bound; temporal operators must carry
bounded intervals (an omitted F/G interval is evaluated up to the trace
horizon).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterator, Optional


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        self.line = line
        self.column = column
        self.expected = expected
        suffix = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"{line}:{column}: {message}{suffix}")


UNBOUNDED = None


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: Optional[float]  # None means unbounded

    def __post_init__(self):
        if self.lo < 0:
            raise ValueError(f"interval lower bound must be nonnegative, got {self.lo}")
        if self.hi is not None and self.hi < self.lo:
            raise ValueError(f"malformed interval [{self.lo}, {self.hi}]")

    @property
    def bounded(self) -> bool:
        return self.hi is not None


FULL = Interval(0.0, UNBOUNDED)


class Formula:
    """Base class; nodes are frozen dataclasses and hash by structure."""

    __slots__ = ()


@dataclass(frozen=True)
class Atomic(Formula):
    name: str
    op: Optional[str] = None  # one of > < >= <= for comparison atoms
    threshold: Optional[float] = None

    def __post_init__(self):
        if (self.op is None) != (self.threshold is None):
            raise ValueError("comparison atoms need both op and threshold")
        if self.op is not None and self.op not in (">", "<", ">=", "<="):
            raise ValueError(f"unknown comparison operator {self.op!r}")


TRUE = Atomic("true")
FALSE = Atomic("false")


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Until(Formula):
    interval: Interval
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Since(Formula):
    interval: Interval
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    interval: Interval
    child: Formula


@dataclass(frozen=True)
class Globally(Formula):
    interval: Interval
    child: Formula


@dataclass(frozen=True)
class Reach(Formula):
    interval: Interval
    distance: str
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Escape(Formula):
    interval: Interval
    distance: str
    child: Formula


@dataclass(frozen=True)
class Somewhere(Formula):
    interval: Interval
    distance: str
    child: Formula


@dataclass(frozen=True)
class Everywhere(Formula):
    interval: Interval
    distance: str
    child: Formula


@dataclass(frozen=True)
class Surround(Formula):
    interval: Interval
    distance: str
    left: Formula
    right: Formula


KEYWORDS = {"U", "S", "F", "G", "reach", "escape", "somewhere", "everywhere", "surround", "inf"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>-?\d+(\.\d+)?([eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<cmp>>=|<=|>|<)
  | (?P<sym>[()\[\],!&|])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # number | ident | cmp | sym | end
    text: str
    line: int
    column: int


def _tokenize(text: str) -> Iterator[_Token]:
    line = 1
    line_start = 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            col = pos - line_start + 1
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        if m.lastgroup != "ws":
            yield _Token(m.lastgroup, m.group(), line, m.start() - line_start + 1)
        else:
            for i in range(m.start(), m.end()):
                if text[i] == "\n":
                    line += 1
                    line_start = i + 1
        pos = m.end()
    yield _Token("end", "", line, len(text) - line_start + 1)


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, expected: tuple[str, ...] = ()) -> ParseError:
        tok = self.peek()
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        return ParseError(f"{message}, found {found}", tok.line, tok.column, expected)

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "end":
            raise self.error(f"expected {text!r}", (text,))
        return self.advance()

    def parse(self) -> Formula:
        node = self.parse_or()
        if self.peek().kind != "end":
            raise self.error("trailing input after formula", ("end of input",))
        return node

    def parse_or(self) -> Formula:
        node = self.parse_and()
        while self.peek().text == "|":
            self.advance()
            node = Or(node, self.parse_and())
        return node

    def parse_and(self) -> Formula:
        node = self.parse_temporal()
        while self.peek().text == "&":
            self.advance()
            node = And(node, self.parse_temporal())
        return node

    def parse_temporal(self) -> Formula:
        node = self.parse_unary()
        while True:
            tok = self.peek()
            if tok.kind == "ident" and tok.text in ("U", "S"):
                self.advance()
                interval = self.parse_interval(temporal=True, operator=tok.text)
                right = self.parse_unary()
                node = (Until if tok.text == "U" else Since)(interval, node, right)
            elif tok.kind == "ident" and tok.text in ("reach", "surround"):
                self.advance()
                dist = self.parse_distance_name()
                interval = self.parse_optional_interval(operator=tok.text)
                right = self.parse_unary()
                node = (Reach if tok.text == "reach" else Surround)(interval, dist, node, right)
            else:
                return node

    def parse_unary(self) -> Formula:
        tok = self.peek()
        if tok.text == "!":
            self.advance()
            return Not(self.parse_unary())
        if tok.kind == "ident" and tok.text in ("F", "G"):
            self.advance()
            interval = self.parse_optional_interval(operator=tok.text, temporal=True)
            child = self.parse_unary()
            return (Eventually if tok.text == "F" else Globally)(interval, child)
        if tok.kind == "ident" and tok.text in ("escape", "somewhere", "everywhere"):
            self.advance()
            dist = self.parse_distance_name()
            interval = self.parse_optional_interval(operator=tok.text)
            child = self.parse_unary()
            ctor = {"escape": Escape, "somewhere": Somewhere, "everywhere": Everywhere}[tok.text]
            return ctor(interval, dist, child)
        if tok.text == "(":
            self.advance()
            node = self.parse_or()
            self.expect(")")
            return node
        if tok.kind == "ident":
            if tok.text in KEYWORDS:
                raise self.error(f"{tok.text!r} is a reserved word, not an atom", ("atom",))
            return self.parse_atom()
        raise self.error("expected a formula", ("atom", "!", "(", "F", "G"))

    def parse_atom(self) -> Formula:
        name = self.advance().text
        tok = self.peek()
        if tok.kind == "cmp":
            op = self.advance().text
            num = self.peek()
            if num.kind != "number":
                raise self.error("expected a number after comparison operator", ("number",))
            self.advance()
            return Atomic(name, op, float(num.text))
        return Atomic(name)

    def parse_distance_name(self) -> str:
        self.expect("(")
        tok = self.peek()
        if tok.kind != "ident":
            raise self.error("expected a distance-function name", ("identifier",))
        self.advance()
        self.expect(")")
        return tok.text

    def parse_optional_interval(self, operator: str, temporal: bool = False) -> Interval:
        if self.peek().text == "[":
            return self.parse_interval(temporal=temporal, operator=operator)
        return FULL

    def parse_interval(self, temporal: bool, operator: str) -> Interval:
        self.expect("[")
        lo_tok = self.peek()
        if lo_tok.kind != "number":
            raise self.error("expected a number as interval lower bound", ("number",))
        self.advance()
        lo = float(lo_tok.text)
        self.expect(",")
        hi_tok = self.peek()
        if hi_tok.kind == "number":
            self.advance()
            hi: Optional[float] = float(hi_tok.text)
        elif hi_tok.text == "inf":
            if temporal:
                raise ParseError(
                    f"temporal operator {operator!r} requires a bounded interval",
                    hi_tok.line,
                    hi_tok.column,
                    ("number",),
                )
            self.advance()
            hi = UNBOUNDED
        else:
            raise self.error("expected a number or 'inf' as interval upper bound", ("number", "inf"))
        self.expect("]")
        try:
            return Interval(lo, hi)
        except ValueError as exc:
            raise ParseError(str(exc), lo_tok.line, lo_tok.column) from None


def parse(text: str) -> Formula:
    return _Parser(text).parse()


def _fmt_number(x: float) -> str:
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _fmt_interval(i: Interval) -> str:
    hi = "inf" if i.hi is None else _fmt_number(i.hi)
    return f"[{_fmt_number(i.lo)},{hi}]"


# precedence levels for printing; higher binds tighter
_LEVEL_OR = 1
_LEVEL_AND = 2
_LEVEL_TEMPORAL = 3
_LEVEL_UNARY = 4


def _fmt(node: Formula, parent_level: int) -> str:
    if isinstance(node, Atomic):
        if node.op is None:
            return node.name
        return f"{node.name} {node.op} {_fmt_number(node.threshold)}"
    if isinstance(node, Not):
        return "!" + _fmt(node.child, _LEVEL_UNARY)
    if isinstance(node, (Eventually, Globally)):
        op = "F" if isinstance(node, Eventually) else "G"
        if node.interval == FULL:
            return f"{op} {_fmt(node.child, _LEVEL_UNARY)}"
        return f"{op}{_fmt_interval(node.interval)} {_fmt(node.child, _LEVEL_UNARY)}"
    if isinstance(node, (Escape, Somewhere, Everywhere)):
        op = {Escape: "escape", Somewhere: "somewhere", Everywhere: "everywhere"}[type(node)]
        body = f"{op}({node.distance}){_fmt_interval(node.interval)} {_fmt(node.child, _LEVEL_UNARY)}"
        return body
    if isinstance(node, (And, Or)):
        level = _LEVEL_AND if isinstance(node, And) else _LEVEL_OR
        op = "&" if isinstance(node, And) else "|"
        text = f"{_fmt(node.left, level)} {op} {_fmt(node.right, level + 1)}"
        return f"({text})" if level < parent_level else text
    if isinstance(node, (Until, Since)):
        op = "U" if isinstance(node, Until) else "S"
        text = (
            f"{_fmt(node.left, _LEVEL_TEMPORAL)} {op}{_fmt_interval(node.interval)} "
            f"{_fmt(node.right, _LEVEL_UNARY)}"
        )
        return f"({text})" if _LEVEL_TEMPORAL < parent_level else text
    if isinstance(node, (Reach, Surround)):
        op = "reach" if isinstance(node, Reach) else "surround"
        text = (
            f"{_fmt(node.left, _LEVEL_TEMPORAL)} {op}({node.distance})"
            f"{_fmt_interval(node.interval)} {_fmt(node.right, _LEVEL_UNARY)}"
        )
        return f"({text})" if _LEVEL_TEMPORAL < parent_level else text
    raise TypeError(f"not a formula node: {node!r}")


def format_formula(node: Formula) -> str:
    """Inverse of parse up to whitespace: parse(format_formula(f)) == f."""
    return _fmt(node, 0)


def desugar(node: Formula) -> Formula:
    """Rewrite derived operators into the core fragment.

    Core nodes are Atomic, Not, And, Until, Since, Reach and Escape.  The
    rewrites: disjunction via De Morgan, eventually as a true-until,
    globally as its dual, somewhere as a true-reach, everywhere as the dual
    of somewhere, and surround as the region-enclosure conjunction
    phi1 & !reach(phi1, !(phi1|phi2)) & !escape[hi, inf](phi1).
    """
    if isinstance(node, Atomic):
        return node
    if isinstance(node, Not):
        return Not(desugar(node.child))
    if isinstance(node, And):
        return And(desugar(node.left), desugar(node.right))
    if isinstance(node, Or):
        return Not(And(Not(desugar(node.left)), Not(desugar(node.right))))
    if isinstance(node, Until):
        return Until(node.interval, desugar(node.left), desugar(node.right))
    if isinstance(node, Since):
        return Since(node.interval, desugar(node.left), desugar(node.right))
    if isinstance(node, Eventually):
        return Until(node.interval, TRUE, desugar(node.child))
    if isinstance(node, Globally):
        return Not(Until(node.interval, TRUE, Not(desugar(node.child))))
    if isinstance(node, Reach):
        return Reach(node.interval, node.distance, desugar(node.left), desugar(node.right))
    if isinstance(node, Escape):
        return Escape(node.interval, node.distance, desugar(node.child))
    if isinstance(node, Somewhere):
        return Reach(node.interval, node.distance, TRUE, desugar(node.child))
    if isinstance(node, Everywhere):
        return Not(Reach(node.interval, node.distance, TRUE, Not(desugar(node.child))))
    if isinstance(node, Surround):
        left = desugar(node.left)
        right = desugar(node.right)
        # !(phi1 | phi2) with the disjunction already pushed through De Morgan
        outside = And(Not(left), Not(right))
        blocked = Not(Reach(node.interval, node.distance, left, outside))
        hi = node.interval.hi if node.interval.hi is not None else math.inf
        no_escape = Not(Escape(Interval(hi, UNBOUNDED), node.distance, left))
        return And(And(left, blocked), no_escape)
    raise TypeError(f"not a formula node: {node!r}")


CORE_TYPES = (Atomic, Not, And, Until, Since, Reach, Escape)


def is_core(node: Formula) -> bool:
    if isinstance(node, Atomic):
        return True
    if isinstance(node, Not):
        return is_core(node.child)
    if isinstance(node, (And, Until, Since, Reach)):
        return is_core(node.left) and is_core(node.right)
    if isinstance(node, Escape):
        return is_core(node.child)
    return False


def iter_subformulas(node: Formula) -> Iterator[Formula]:
    yield node
    for attr in ("child", "left", "right"):
        sub = getattr(node, attr, None)
        if isinstance(sub, Formula):
            yield from iter_subformulas(sub)
