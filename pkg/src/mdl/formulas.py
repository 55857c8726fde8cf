"""Modal and hybrid formula syntax trees, a reader for the text grammar and renderers.

Text grammar, loosest binding first::

    formula := disj ( '->' formula )?          # right associative
    disj    := conj ( '|' conj )*
    conj    := unary ( '&' unary )*
    unary   := '~' unary | '<' label '>' unary | '[' label ']' unary | atom
    atom    := 'p'<k> | 'j'<k> | 'false' | 'true' | '(' formula ')'

``true`` is read as ``~false``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Union

from .errors import FormulaSyntaxError


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Nominal:
    index: int


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    items: tuple["Formula", ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if not self.items:
            raise ValueError("And needs at least one conjunct")


@dataclass(frozen=True)
class Or:
    items: tuple["Formula", ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if not self.items:
            raise ValueError("Or needs at least one disjunct")


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Diamond:
    label: str
    sub: "Formula"


@dataclass(frozen=True)
class Box:
    label: str
    sub: "Formula"


Formula = Union[Bot, Var, Nominal, Not, And, Or, Implies, Diamond, Box]

TOP = Not(Bot())


def conj(items) -> Formula:
    """Conjunction that collapses the one-element case."""
    items = tuple(items)
    return items[0] if len(items) == 1 else And(items)


def disj(items) -> Formula:
    items = tuple(items)
    return items[0] if len(items) == 1 else Or(items)


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, (Not, Diamond, Box)):
        return (phi.sub,)
    if isinstance(phi, (And, Or)):
        return phi.items
    if isinstance(phi, Implies):
        return (phi.left, phi.right)
    return ()


def walk(phi: Formula) -> Iterator[Formula]:
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def variables(phi: Formula) -> frozenset[int]:
    return frozenset(n.index for n in walk(phi) if isinstance(n, Var))


def nominals(phi: Formula) -> frozenset[int]:
    return frozenset(n.index for n in walk(phi) if isinstance(n, Nominal))


def labels(phi: Formula) -> frozenset[str]:
    return frozenset(n.label for n in walk(phi) if isinstance(n, (Diamond, Box)))


def size(phi: Formula) -> int:
    return sum(1 for _ in walk(phi))


def map_leaves(phi: Formula, leaf: Callable[[Formula], Formula]) -> Formula:
    memo: dict[int, Formula] = {}

    def go(node: Formula) -> Formula:
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, (Bot, Var, Nominal)):
            out = leaf(node)
        elif isinstance(node, Not):
            out = Not(go(node.sub))
        elif isinstance(node, And):
            out = And(tuple(go(c) for c in node.items))
        elif isinstance(node, Or):
            out = Or(tuple(go(c) for c in node.items))
        elif isinstance(node, Implies):
            out = Implies(go(node.left), go(node.right))
        elif isinstance(node, Diamond):
            out = Diamond(node.label, go(node.sub))
        elif isinstance(node, Box):
            out = Box(node.label, go(node.sub))
        else:
            raise TypeError(f"not a formula: {node!r}")
        memo[key] = out
        return out

    return go(phi)


def substitute(
    phi: Formula,
    nominal_map: Mapping[int, Formula] | None = None,
    var_map: Mapping[int, Formula] | None = None,
) -> Formula:
    """Replace nominals ``j_k`` and variables ``p_k`` by formulas; unmapped leaves stay."""
    nominal_map = nominal_map or {}
    var_map = var_map or {}

    def leaf(node: Formula) -> Formula:
        if isinstance(node, Nominal):
            return nominal_map.get(node.index, node)
        if isinstance(node, Var):
            return var_map.get(node.index, node)
        return node

    return map_leaves(phi, leaf)


def to_primitive(phi: Formula) -> Formula:
    """Rewrite into Bot, Var, Nominal, Implies and Diamond only."""
    if isinstance(phi, (Bot, Var, Nominal)):
        return phi
    if isinstance(phi, Not):
        return Implies(to_primitive(phi.sub), Bot())
    if isinstance(phi, Implies):
        return Implies(to_primitive(phi.left), to_primitive(phi.right))
    if isinstance(phi, Diamond):
        return Diamond(phi.label, to_primitive(phi.sub))
    if isinstance(phi, Box):
        return Implies(Diamond(phi.label, Implies(to_primitive(phi.sub), Bot())), Bot())
    parts = [to_primitive(c) for c in phi.items]
    if isinstance(phi, And):
        out = parts[-1]
        for p in reversed(parts[:-1]):
            # a & b == ~(a -> ~b)
            out = Implies(Implies(p, Implies(out, Bot())), Bot())
        return out
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Implies(Implies(p, Bot()), out)
    return out


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

_PREC = {Implies: 1, Or: 2, And: 3}


def _prec(phi: Formula) -> int:
    return _PREC.get(type(phi), 4)


def render(phi: Formula, format: str = "text") -> str:
    if format == "text":
        return _render(phi, _TEXT)
    if format == "latex":
        return _render(phi, _LATEX)
    raise ValueError(f"unknown format {format!r}")


_TEXT = {
    "bot": "false",
    "var": "p{}",
    "nom": "j{}",
    "not": "~",
    "and": " & ",
    "or": " | ",
    "imp": " -> ",
    "dia": "<{}> ",
    "box": "[{}] ",
}
_LATEX = {
    "bot": r"\bot",
    "var": "p_{{{}}}",
    "nom": "j_{{{}}}",
    "not": r"\neg ",
    "and": r" \land ",
    "or": r" \lor ",
    "imp": r" \to ",
    "dia": r"\Diamond_{{{}}} ",
    "box": r"\Box_{{{}}} ",
}


def _render(phi: Formula, sym: dict[str, str]) -> str:
    def wrap(child: Formula, parent_prec: int) -> str:
        s = _render(child, sym)
        # same-precedence children are bracketed so n-ary nesting survives a round trip
        return f"({s})" if _prec(child) <= parent_prec else s

    if isinstance(phi, Bot):
        return sym["bot"]
    if isinstance(phi, Var):
        return sym["var"].format(phi.index)
    if isinstance(phi, Nominal):
        return sym["nom"].format(phi.index)
    if isinstance(phi, Not):
        return sym["not"] + wrap(phi.sub, 3)
    if isinstance(phi, Diamond):
        return sym["dia"].format(phi.label) + wrap(phi.sub, 3)
    if isinstance(phi, Box):
        return sym["box"].format(phi.label) + wrap(phi.sub, 3)
    if isinstance(phi, And):
        if len(phi.items) == 1:
            return _render(phi.items[0], sym)
        return sym["and"].join(wrap(c, 3) for c in phi.items)
    if isinstance(phi, Or):
        if len(phi.items) == 1:
            return _render(phi.items[0], sym)
        return sym["or"].join(wrap(c, 2) for c in phi.items)
    if isinstance(phi, Implies):
        return wrap(phi.left, 1) + sym["imp"] + wrap(phi.right, 1)
    raise TypeError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------------------
# reading
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<imp>->)|(?P<dia><\s*(?P<dl>[A-Za-z_][A-Za-z0-9_]*)\s*>)"
    r"|(?P<box>\[\s*(?P<bl>[A-Za-z_][A-Za-z0-9_]*)\s*\])"
    r"|(?P<atom>[pj]\d+|false|true)|(?P<sym>[~&|()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        start = m.start(m.lastgroup) if m.lastgroup else pos
        if m.group("imp"):
            tokens.append(("->", "", start))
        elif m.group("dia"):
            tokens.append(("<>", m.group("dl"), start))
        elif m.group("box"):
            tokens.append(("[]", m.group("bl"), start))
        elif m.group("atom"):
            tokens.append(("atom", m.group("atom"), start))
        else:
            tokens.append((m.group("sym"), "", start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Reader:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        if tok[0] != kind:
            raise FormulaSyntaxError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        self.i += 1
        return tok

    def formula(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.take("->")
            return Implies(left, self.formula())
        return left

    def disj(self) -> Formula:
        items = [self.conj()]
        while self.peek() == "|":
            self.take("|")
            items.append(self.conj())
        return items[0] if len(items) == 1 else Or(tuple(items))

    def conj(self) -> Formula:
        items = [self.unary()]
        while self.peek() == "&":
            self.take("&")
            items.append(self.unary())
        return items[0] if len(items) == 1 else And(tuple(items))

    def unary(self) -> Formula:
        kind = self.peek()
        if kind == "~":
            self.take("~")
            return Not(self.unary())
        if kind == "<>":
            label = self.take("<>")[1]
            return Diamond(label, self.unary())
        if kind == "[]":
            label = self.take("[]")[1]
            return Box(label, self.unary())
        if kind == "(":
            self.take("(")
            inner = self.formula()
            self.take(")")
            return inner
        text = self.take("atom")[1]
        if text == "false":
            return Bot()
        if text == "true":
            return TOP
        cls = Var if text[0] == "p" else Nominal
        return cls(int(text[1:]))


def parse_formula(text: str) -> Formula:
    reader = _Reader(text)
    phi = reader.formula()
    tok = reader.tokens[reader.i]
    if tok[0] != "eof":
        raise FormulaSyntaxError(f"unexpected {tok[0]!r}", tok[2])
    return phi
