"""Condition language for selecting individuals.

Grammar (see README for the EBNF):

    expr    = term   {("or")  term}
    term    = factor {("and") factor}
    factor  = "not" factor | "(" expr ")" | "true" | "false" | atom
    atom    = "type" "=" name
            | name {"/" name} "=" name
            | name op quoted-literal        op in  =  !=  <  <=  >  >=

Names are `prefix:local`, `:local` (default namespace), or a bare local
name, resolved against the document's namespace map at parse time.
Keywords are case-insensitive.  Literals are single-quoted with no escape
mechanism, so a literal cannot contain a quote.

Evaluation is existential: a data or object atom holds when at least one
matching assertion exists.  Mismatches between an atom and the declared
schema raise :class:`EvalError` instead of quietly evaluating to false.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import (
    DATATYPES,
    Individual,
    Iri,
    Literal,
    NamespaceMap,
    Ontology,
    typed_value,
    valid_lexical,
)

ORDERED_DATATYPES = ("integer", "decimal", "date")
OPS = ("=", "!=", "<", "<=", ">", ">=")


class FilterSyntaxError(Exception):
    """Bad filter text; `position` is the 0-based character offset."""

    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class EvalError(Exception):
    """A filter that cannot be answered against the given schema.

    kind is one of `unknown-property` (an IRI in the filter is not
    declared), `type-mismatch` (atom shape disagrees with the declared
    property kind or range), `non-comparable` (ordering comparison on a
    datatype with no order).
    """

    KINDS = ("unknown-property", "type-mismatch", "non-comparable")

    def __init__(self, kind: str, detail: str):
        if kind not in self.KINDS:
            raise ValueError(f"unknown EvalError kind: {kind!r}")
        self.kind = kind
        self.detail = detail
        super().__init__(f"{kind}: {detail}")


# ----------------------------------------------------------------------
# AST


class FilterExpr:
    """Base class for filter nodes; all nodes are immutable."""

    __slots__ = ()


@dataclass(frozen=True)
class TrueFilter(FilterExpr):
    pass


@dataclass(frozen=True)
class FalseFilter(FilterExpr):
    pass


@dataclass(frozen=True)
class Not(FilterExpr):
    child: FilterExpr


@dataclass(frozen=True)
class And(FilterExpr):
    children: tuple[FilterExpr, ...]

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise ValueError("And needs at least two children")


@dataclass(frozen=True)
class Or(FilterExpr):
    children: tuple[FilterExpr, ...]

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise ValueError("Or needs at least two children")


@dataclass(frozen=True)
class DataAtom(FilterExpr):
    property: Iri
    op: str
    literal: Literal

    def __post_init__(self) -> None:
        if self.op not in OPS:
            raise ValueError(f"unknown operator {self.op!r}")
        if self.op not in ("=", "!=") and self.literal.datatype not in ORDERED_DATATYPES:
            raise ValueError(
                f"operator {self.op} is not defined for {self.literal.datatype} literals")


@dataclass(frozen=True)
class ObjectAtom(FilterExpr):
    property: Iri
    target: Iri


@dataclass(frozen=True)
class PathAtom(FilterExpr):
    path: tuple[Iri, ...]
    target: Iri

    def __post_init__(self) -> None:
        if len(self.path) < 2:
            raise ValueError("a path needs at least two properties")


@dataclass(frozen=True)
class TypeAtom(FilterExpr):
    cls: Iri


# ----------------------------------------------------------------------
# tokenizer

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<op><=|>=|!=|=|<|>)"
    r"|(?P<lparen>\()"
    r"|(?P<rparen>\))"
    r"|(?P<slash>/)"
    r"|(?P<literal>'[^']*')"
    r"|(?P<name>(?:[A-Za-z_][\w.\-]*)?:[A-Za-z_][\w.\-]*|[A-Za-z_][\w.\-]*)"
    r")")

_KEYWORDS = ("and", "or", "not", "true", "false", "type")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.lastgroup is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise FilterSyntaxError(f"unexpected character {stripped[0]!r}", at)
        kind = m.lastgroup
        value = m.group(kind)
        at = m.end() - len(value)
        if kind == "name" and value.lower() in _KEYWORDS:
            kind = value.lower()
        tokens.append(_Token(kind, value, at))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


# ----------------------------------------------------------------------
# parser

def _infer_literal(lexical: str) -> Literal:
    for tag in ("date", "integer", "decimal", "boolean"):
        if valid_lexical(lexical, tag):
            return Literal(lexical, tag)
    return Literal(lexical, "string")


class _FilterParser:
    def __init__(self, text: str, ns: NamespaceMap):
        self.tokens = _tokenize(text)
        self.ns = ns
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self, kind: str | None = None) -> _Token:
        tok = self.tokens[self.i]
        if kind is not None and tok.kind != kind:
            raise FilterSyntaxError(
                f"expected {kind}, found {tok.text or 'end of input'!r}", tok.pos)
        self.i += 1
        return tok

    def resolve(self, tok: _Token) -> Iri:
        try:
            return self.ns.resolve(tok.text)
        except KeyError as exc:
            raise FilterSyntaxError(str(exc.args[0]), tok.pos) from exc

    def parse(self) -> FilterExpr:
        expr = self.expr()
        tail = self.peek()
        if tail.kind != "end":
            raise FilterSyntaxError(f"unexpected {tail.text!r}", tail.pos)
        return expr

    def expr(self) -> FilterExpr:
        children = [self.term()]
        while self.peek().kind == "or":
            self.take()
            children.append(self.term())
        return children[0] if len(children) == 1 else Or(tuple(children))

    def term(self) -> FilterExpr:
        children = [self.factor()]
        while self.peek().kind == "and":
            self.take()
            children.append(self.factor())
        return children[0] if len(children) == 1 else And(tuple(children))

    def factor(self) -> FilterExpr:
        tok = self.peek()
        if tok.kind == "not":
            self.take()
            return Not(self.factor())
        if tok.kind == "lparen":
            self.take()
            inner = self.expr()
            self.take("rparen")
            return inner
        if tok.kind == "true":
            self.take()
            return TrueFilter()
        if tok.kind == "false":
            self.take()
            return FalseFilter()
        if tok.kind == "type":
            self.take()
            op_tok = self.take("op")
            if op_tok.text != "=":
                raise FilterSyntaxError("type tests use =", op_tok.pos)
            cls = self.resolve(self.take("name"))
            return TypeAtom(cls)
        if tok.kind == "name":
            return self.atom()
        raise FilterSyntaxError(
            f"expected a condition, found {tok.text or 'end of input'!r}", tok.pos)

    def atom(self) -> FilterExpr:
        first = self.take("name")
        path = [self.resolve(first)]
        while self.peek().kind == "slash":
            self.take()
            path.append(self.resolve(self.take("name")))
        op_tok = self.take("op")
        if len(path) > 1:
            if op_tok.text != "=":
                raise FilterSyntaxError("path conditions use =", op_tok.pos)
            target = self.resolve(self.take("name"))
            return PathAtom(tuple(path), target)
        rhs = self.peek()
        if rhs.kind == "literal":
            self.take()
            lit = _infer_literal(rhs.text[1:-1])
            try:
                return DataAtom(path[0], op_tok.text, lit)
            except ValueError as exc:
                raise FilterSyntaxError(str(exc), op_tok.pos) from exc
        if rhs.kind == "name":
            if op_tok.text != "=":
                raise FilterSyntaxError(
                    "individual comparisons use =", op_tok.pos)
            self.take()
            return ObjectAtom(path[0], self.resolve(rhs))
        raise FilterSyntaxError(
            f"expected a quoted literal or a name, found {rhs.text or 'end of input'!r}",
            rhs.pos)


def parse_filter(text: str, ns: NamespaceMap) -> FilterExpr:
    """Parse filter text into a :class:`FilterExpr`.

    `not` binds tightest, then `and`, then `or`; parentheses group.
    Raises :class:`FilterSyntaxError` for bad syntax or unknown prefixes.
    """
    return _FilterParser(text, ns).parse()


# ----------------------------------------------------------------------
# binding: resolve every atom against a schema up front

@dataclass(frozen=True)
class BoundData:
    property: Iri
    op: str
    value: object  # typed comparison value matching the declared range


@dataclass(frozen=True)
class BoundObject:
    property: Iri
    target: Iri


@dataclass(frozen=True)
class BoundPath:
    path: tuple[Iri, ...]
    target: Iri


@dataclass(frozen=True)
class BoundType:
    matches: frozenset[Iri]  # classes whose instances satisfy the atom


def _bind_data(atom: DataAtom, o: Ontology) -> BoundData:
    decl = o.datatype_properties.get(atom.property)
    if decl is None:
        if atom.property in o.object_properties:
            raise EvalError("type-mismatch",
                            f"{atom.property} is an object property, not a "
                            f"datatype property")
        raise EvalError("unknown-property",
                        f"datatype property {atom.property} is not declared")
    lit = atom.literal
    if lit.datatype != decl.range:
        if not valid_lexical(lit.lexical, decl.range):
            raise EvalError(
                "type-mismatch",
                f"literal {lit.lexical!r} is not a valid {decl.range} for "
                f"{atom.property}")
        lit = Literal(lit.lexical, decl.range)
    if atom.op not in ("=", "!=") and lit.datatype not in ORDERED_DATATYPES:
        raise EvalError(
            "non-comparable",
            f"{atom.op} is not defined for {lit.datatype} values of {atom.property}")
    return BoundData(atom.property, atom.op, typed_value(lit))


def _bind(f: FilterExpr, o: Ontology):
    if isinstance(f, (TrueFilter, FalseFilter)):
        return f
    if isinstance(f, Not):
        return Not(_bind(f.child, o))
    if isinstance(f, And):
        return And(tuple(_bind(c, o) for c in f.children))
    if isinstance(f, Or):
        return Or(tuple(_bind(c, o) for c in f.children))
    if isinstance(f, DataAtom):
        return _bind_data(f, o)
    if isinstance(f, ObjectAtom):
        if f.property not in o.object_properties:
            if f.property in o.datatype_properties:
                raise EvalError("type-mismatch",
                                f"{f.property} is a datatype property, not an "
                                f"object property")
            raise EvalError("unknown-property",
                            f"object property {f.property} is not declared")
        return BoundObject(f.property, f.target)
    if isinstance(f, PathAtom):
        for hop in f.path:
            if hop not in o.object_properties:
                if hop in o.datatype_properties:
                    raise EvalError("type-mismatch",
                                    f"path step {hop} is a datatype property")
                raise EvalError("unknown-property",
                                f"object property {hop} is not declared")
        return BoundPath(f.path, f.target)
    if isinstance(f, TypeAtom):
        if f.cls not in o.classes:
            raise EvalError("unknown-property",
                            f"class {f.cls} is not declared")
        return BoundType(o.subclass_closure(f.cls))
    raise TypeError(f"not a filter node: {f!r}")


def bind(f: FilterExpr, o: Ontology):
    """Check every atom in `f` against `o`'s schema, raising EvalError
    for any problem, and return a bound tree ready for evaluation.

    Binding up front means error behaviour cannot depend on which
    individuals happen to be examined.
    """
    return _bind(f, o)


# ----------------------------------------------------------------------
# evaluation

def _compare(op: str, left, right) -> bool:
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    if op == "<":
        return left < right
    if op == "<=":
        return left <= right
    if op == ">":
        return left > right
    return left >= right


def _eval_bound(b, ind: Individual, o: Ontology) -> bool:
    if isinstance(b, TrueFilter):
        return True
    if isinstance(b, FalseFilter):
        return False
    if isinstance(b, Not):
        return not _eval_bound(b.child, ind, o)
    if isinstance(b, And):
        return all(_eval_bound(c, ind, o) for c in b.children)
    if isinstance(b, Or):
        return any(_eval_bound(c, ind, o) for c in b.children)
    if isinstance(b, BoundData):
        for prop, lit in ind.data_assertions:
            if prop == b.property and _compare(b.op, typed_value(lit), b.value):
                return True
        return False
    if isinstance(b, BoundObject):
        return (b.property, b.target) in ind.object_assertions
    if isinstance(b, BoundPath):
        frontier = {ind.id}
        for hop in b.path:
            nxt = set()
            for node in frontier:
                for prop, target in o.individuals[node].object_assertions:
                    if prop == hop:
                        nxt.add(target)
            frontier = nxt
            if not frontier:
                return False
        return b.target in frontier
    if isinstance(b, BoundType):
        return any(t in b.matches for t in ind.types)
    raise TypeError(f"not a bound node: {b!r}")


def evaluate(f: FilterExpr, ind: Individual, o: Ontology) -> bool:
    """Decide whether `ind` satisfies `f` against ontology `o`.

    Every atom is checked against the schema first, so an atom the
    individual's data never reaches still raises EvalError.
    """
    return _eval_bound(bind(f, o), ind, o)
