"""The ``.prob`` file format and the probability query language.

Both are parsed by one recursive-descent parser with a single token of
lookahead. Set expressions use ``|`` (union), ``&`` (intersection) and
``~`` (complement); ``~`` binds tightest, then ``&``, then ``|``.

Inside ``P(...)`` the first top-level ``|`` is the conditioning bar, so the
left operand is an intersection-level expression: write ``P((A | B))`` for
the probability of a union. The right operand is a full set expression.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Union as _U

from . import conditional, events as ev, measure as ms
from .errors import (
    ArityError,
    DuplicateName,
    InvalidWeight,
    ProbError,
    ProbSyntaxError,
    UnknownName,
)

Pos = tuple[int, int]

MAX_NESTING = 200

PREDICATES = ("indep", "mutindep", "pme", "partition", "sigma")

# ---------------------------------------------------------------------------
# Tokens

IDENT, INT, EOF = "IDENT", "INT", "EOF"
_PUNCT = set("{}()[],:=|&~/")
_TOKEN_RE = re.compile(r"(?P<ws>[ \t\r\f\v]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
                       r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>[0-9]+)")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: Pos


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, line_start = 0, 1, 0
    n = len(text)
    while i < n:
        col = i - line_start + 1
        ch = text[i]
        if ch in _PUNCT:
            tokens.append(Token(ch, ch, (line, col)))
            i += 1
            continue
        match = _TOKEN_RE.match(text, i)
        if match is None:
            raise ProbSyntaxError(f"unexpected character {ch!r}", (line, col))
        kind = match.lastgroup
        if kind == "nl":
            line += 1
            line_start = match.end()
        elif kind == "ident":
            tokens.append(Token(IDENT, match.group(), (line, col)))
        elif kind == "int":
            tokens.append(Token(INT, match.group(), (line, col)))
        i = match.end()
    tokens.append(Token(EOF, "", (line, n - line_start + 1)))
    return tokens


def _describe_expected(kind: str) -> str:
    if kind == IDENT:
        return "identifier"
    if kind == INT:
        return "integer"
    if kind == EOF:
        return "end of input"
    return f"'{kind}'"


def _describe_found(tok: Token) -> str:
    if tok.kind == IDENT:
        return f"identifier '{tok.text}'"
    if tok.kind == INT:
        return f"integer {tok.text}"
    if tok.kind == EOF:
        return "end of input"
    return f"'{tok.text}'"


# ---------------------------------------------------------------------------
# Syntax tree. Positions are carried for error reporting and ignored by
# equality, so a reparsed query compares equal to the original.


@dataclass(frozen=True)
class Ref:
    name: str
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class SetLiteral:
    outcomes: tuple[str, ...]
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Complement:
    operand: SetExpr
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Union:
    left: SetExpr
    right: SetExpr
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Intersection:
    left: SetExpr
    right: SetExpr
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


SetExpr = _U[Ref, SetLiteral, Complement, Union, Intersection]


@dataclass(frozen=True)
class Prob:
    event: SetExpr
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class CondProb:
    event: SetExpr
    given: SetExpr
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Predicate:
    name: str
    args: tuple[SetExpr, ...]
    pos: Pos = field(default=(0, 0), compare=False, repr=False)


Query = _U[Prob, CondProb, Predicate]


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.i = 0
        self.expected: set[str] = set()
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def at(self, kind: str) -> bool:
        self.expected.add(kind)
        return self.tok.kind == kind

    def at_word(self, word: str) -> bool:
        self.expected.add(word)
        return self.tok.kind == IDENT and self.tok.text == word

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        self.expected = set()
        return tok

    def expect(self, kind: str) -> Token:
        if self.at(kind):
            return self.advance()
        self.fail()

    def expect_word(self, word: str) -> Token:
        if self.at_word(word):
            return self.advance()
        self.fail()

    def fail(self):
        names = sorted(_describe_expected(k) for k in self.expected)
        if len(names) == 1:
            want = names[0]
        else:
            want = "one of " + ", ".join(names)
        raise ProbSyntaxError(
            f"expected {want} but found {_describe_found(self.tok)}",
            self.tok.pos,
            tuple(names),
        )

    # set-expr = term { "|" term }
    def set_expr(self) -> SetExpr:
        node = self.term()
        while self.at("|"):
            pos = self.advance().pos
            node = Union(node, self.term(), pos)
        return node

    # term = factor { "&" factor }
    def term(self) -> SetExpr:
        node = self.factor()
        while self.at("&"):
            pos = self.advance().pos
            node = Intersection(node, self.factor(), pos)
        return node

    # factor = "~" factor | IDENT | literal | "(" set-expr ")"
    def factor(self) -> SetExpr:
        negations: list[Pos] = []
        while self.at("~"):
            negations.append(self.advance().pos)
        if self.at(IDENT):
            tok = self.advance()
            node: SetExpr = Ref(tok.text, tok.pos)
        elif self.at("{"):
            node = self.literal()
        elif self.at("("):
            open_tok = self.advance()
            self.depth += 1
            if self.depth > MAX_NESTING:
                raise ProbSyntaxError(
                    f"parentheses nested deeper than {MAX_NESTING}", open_tok.pos
                )
            node = self.set_expr()
            self.expect(")")
            self.depth -= 1
        else:
            self.fail()
        for pos in reversed(negations):
            node = Complement(node, pos)
        return node

    # literal = "{" [ IDENT { "," IDENT } ] "}"
    def literal(self) -> SetLiteral:
        pos = self.expect("{").pos
        labels = []
        if self.at(IDENT):
            labels.append(self.advance().text)
            while self.at(","):
                self.advance()
                labels.append(self.expect(IDENT).text)
        self.expect("}")
        return SetLiteral(tuple(labels), pos)

    def query(self) -> Query:
        if self.at_word("P"):
            pos = self.advance().pos
            self.expect("(")
            event = self.term()
            if self.at("|"):
                self.advance()
                given = self.set_expr()
                self.expect(")")
                node: Query = CondProb(event, given, pos)
            else:
                self.expect(")")
                node = Prob(event, pos)
        else:
            for word in PREDICATES:
                if self.at_word(word):
                    break
            else:
                self.fail()
            tok = self.advance()
            self.expect("(")
            args = [self.set_expr()]
            while self.at(","):
                self.advance()
                args.append(self.set_expr())
            self.expect(")")
            node = Predicate(tok.text, tuple(args), tok.pos)
        self.expect(EOF)
        return node

    def rational(self) -> tuple[Fraction, Pos]:
        tok = self.expect(INT)
        den = 1
        if self.at("/"):
            self.advance()
            den_tok = self.expect(INT)
            den = int(den_tok.text)
            if den == 0:
                raise InvalidWeight("zero denominator in weight", pos=den_tok.pos)
        return Fraction(int(tok.text), den), tok.pos


def parse_query(text: str) -> Query:
    """Parse one query; raises :class:`ProbSyntaxError` on malformed input."""
    return _Parser(text).query()


def parse_set_expr(text: str) -> SetExpr:
    p = _Parser(text)
    node = p.set_expr()
    p.expect(EOF)
    return node


# ---------------------------------------------------------------------------
# Formatting


def format_set_expr(node: SetExpr, min_prec: int = 1) -> str:
    if isinstance(node, Ref):
        text, prec = node.name, 4
    elif isinstance(node, SetLiteral):
        text, prec = "{" + ", ".join(node.outcomes) + "}", 4
    elif isinstance(node, Complement):
        text, prec = "~" + format_set_expr(node.operand, 3), 3
    elif isinstance(node, Intersection):
        text = f"{format_set_expr(node.left, 2)} & {format_set_expr(node.right, 3)}"
        prec = 2
    elif isinstance(node, Union):
        text = f"{format_set_expr(node.left, 1)} | {format_set_expr(node.right, 2)}"
        prec = 1
    else:
        raise TypeError(f"not a set expression: {node!r}")
    return f"({text})" if prec < min_prec else text


def format_query(q: Query) -> str:
    if isinstance(q, Prob):
        return f"P({format_set_expr(q.event, 2)})"
    if isinstance(q, CondProb):
        return f"P({format_set_expr(q.event, 2)} | {format_set_expr(q.given)})"
    if isinstance(q, Predicate):
        return f"{q.name}({', '.join(format_set_expr(a) for a in q.args)})"
    raise TypeError(f"not a query: {q!r}")


# ---------------------------------------------------------------------------
# Space files


@dataclass(frozen=True)
class SpaceFile:
    name: str
    space: ev.SampleSpace
    measure: ms.ProbabilityMeasure
    events: Mapping[str, ev.Event]
    partitions: Mapping[str, tuple[ev.Event, ...]]


def _resolve(
    node: SetExpr,
    space: ev.SampleSpace,
    events: Mapping[str, ev.Event],
    partitions: Mapping[str, tuple[ev.Event, ...]],
) -> ev.Event:
    if isinstance(node, Ref):
        if node.name in events:
            return events[node.name]
        if node.name in partitions:
            raise UnknownName(
                f"'{node.name}' is a partition, not an event", node.pos
            )
        raise UnknownName(f"unknown event '{node.name}'", node.pos)
    if isinstance(node, SetLiteral):
        mask = 0
        for label in node.outcomes:
            if label not in space:
                raise UnknownName(f"unknown outcome '{label}'", node.pos)
            mask |= 1 << space.index(label)
        return ev.Event(space, mask)
    if isinstance(node, Complement):
        return ev.complement(_resolve(node.operand, space, events, partitions))
    if isinstance(node, Union):
        return ev.union(
            _resolve(node.left, space, events, partitions),
            _resolve(node.right, space, events, partitions),
        )
    if isinstance(node, Intersection):
        return ev.intersection(
            _resolve(node.left, space, events, partitions),
            _resolve(node.right, space, events, partitions),
        )
    raise TypeError(f"not a set expression: {node!r}")


def parse_space_file(text: str) -> SpaceFile:
    """Parse and validate a ``.prob`` file.

    Weights must form a probability measure; otherwise :class:`InvalidWeight`
    is raised carrying the axiom report.
    """
    p = _Parser(text)
    start = p.expect_word("space")
    name = p.expect(IDENT).text
    p.expect("{")
    labels: list[str] = []
    weights: list[Fraction] = []
    seen: set[str] = set()
    while True:
        tok = p.expect(IDENT)
        if tok.text in seen:
            raise DuplicateName(f"duplicate outcome '{tok.text}'", tok.pos)
        seen.add(tok.text)
        p.expect(":")
        w, _ = p.rational()
        labels.append(tok.text)
        weights.append(w)
        if not p.at(","):
            break
        p.advance()
    p.expect("}")
    space = ev.SampleSpace(labels)
    measure = ms.ProbabilityMeasure(space, weights, validate=False)
    report = ms.validate_measure(measure)
    if not report.ok:
        raise InvalidWeight(
            "invalid weights: " + "; ".join(report.witnesses), report, start.pos
        )

    events: dict[str, ev.Event] = {}
    partitions: dict[str, tuple[ev.Event, ...]] = {}
    while True:
        if p.at_word("event"):
            p.advance()
            tok = p.expect(IDENT)
            if tok.text in events or tok.text in partitions:
                raise DuplicateName(f"duplicate name '{tok.text}'", tok.pos)
            p.expect("=")
            expr = p.set_expr()
            events[tok.text] = _resolve(expr, space, events, partitions)
        elif p.at_word("partition"):
            p.advance()
            tok = p.expect(IDENT)
            if tok.text in events or tok.text in partitions:
                raise DuplicateName(f"duplicate name '{tok.text}'", tok.pos)
            p.expect("=")
            p.expect("[")
            blocks = [_resolve(Ref(*_ref(p)), space, events, partitions)]
            while p.at(","):
                p.advance()
                blocks.append(_resolve(Ref(*_ref(p)), space, events, partitions))
            p.expect("]")
            partitions[tok.text] = tuple(blocks)
        elif p.at(EOF):
            break
        else:
            p.fail()
    return SpaceFile(
        name, space, measure, MappingProxyType(events), MappingProxyType(partitions)
    )


def _ref(p: _Parser) -> tuple[str, Pos]:
    tok = p.expect(IDENT)
    return tok.text, tok.pos


# ---------------------------------------------------------------------------
# Evaluation

QueryResult = _U[Fraction, bool, conditional.MutualIndependence, ev.SigmaCheck]


def resolve_set_expr(sf: SpaceFile, node: SetExpr) -> ev.Event:
    return _resolve(node, sf.space, sf.events, sf.partitions)


def _family(sf: SpaceFile, args: tuple[SetExpr, ...]) -> list[ev.Event]:
    # A bare partition name among the arguments stands for its blocks.
    out: list[ev.Event] = []
    for a in args:
        if isinstance(a, Ref) and a.name not in sf.events and a.name in sf.partitions:
            out.extend(sf.partitions[a.name])
        else:
            out.append(resolve_set_expr(sf, a))
    return out


def family_labels(sf: SpaceFile, args: tuple[SetExpr, ...]) -> list[str]:
    """Display names aligned with the events a predicate's arguments expand to."""
    out: list[str] = []
    for a in args:
        if isinstance(a, Ref) and a.name not in sf.events and a.name in sf.partitions:
            out.extend(f"{a.name}[{k + 1}]" for k in range(len(sf.partitions[a.name])))
        else:
            out.append(format_set_expr(a))
    return out


def eval_query(sf: SpaceFile, q: Query) -> QueryResult:
    """Evaluate a parsed query; errors carry the offending source position."""
    try:
        return _eval(sf, q)
    except ProbError as err:
        if err.pos is None:
            err.pos = q.given.pos if isinstance(q, CondProb) else q.pos
        raise


def _eval(sf: SpaceFile, q: Query) -> QueryResult:
    m = sf.measure
    if isinstance(q, Prob):
        return ms.prob(m, resolve_set_expr(sf, q.event))
    if isinstance(q, CondProb):
        a = resolve_set_expr(sf, q.event)
        b = resolve_set_expr(sf, q.given)
        return conditional.cond_prob(m, a, b)
    if not isinstance(q, Predicate):
        raise TypeError(f"not a query: {q!r}")
    family = _family(sf, q.args)
    if q.name == "indep":
        if len(family) != 2:
            raise ArityError(f"indep takes 2 events, got {len(family)}", q.pos)
        return conditional.is_independent(m, family[0], family[1])
    if q.name == "mutindep":
        if len(family) < 2:
            raise ArityError(f"mutindep takes at least 2 events, got {len(family)}", q.pos)
        return conditional.is_mutually_independent(m, family)
    if q.name == "pme":
        return ev.is_pme_family(family)
    if q.name == "partition":
        return ev.is_partition(family)
    if q.name == "sigma":
        return ev.is_sigma_algebra(sf.space, family)
    raise ArityError(f"unknown predicate '{q.name}'", q.pos)


def run_query(sf: SpaceFile, text: str) -> QueryResult:
    return eval_query(sf, parse_query(text))


__all__ = [
    "Complement",
    "CondProb",
    "Intersection",
    "Predicate",
    "Prob",
    "Query",
    "Ref",
    "SetExpr",
    "SetLiteral",
    "SpaceFile",
    "Token",
    "Union",
    "eval_query",
    "family_labels",
    "format_query",
    "format_set_expr",
    "parse_query",
    "parse_set_expr",
    "parse_space_file",
    "run_query",
    "tokenize",
]
