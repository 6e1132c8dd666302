"""Formula AST, parser and printer for the closure logic.

Grammar (loosest binding first)::

    formula  := until ('->' formula)?                 right associative
    until    := disj (('U' | 'S') disj)*              left associative
    disj     := conj ('|' conj)*
    conj     := unary ('&' unary)*
    unary    := '!' unary | 'C' unary | 'B' unary | 'R' ('[' INT ']')? unary
              | ('E' | 'A') VAR ':' SORT '.' formula
              | primary
    primary  := 'true' | 'false' | '(' formula ')'
              | NAME '(' VAR (',' VAR)* ')' | VAR '=' VAR | NAME

Quantifier bodies extend as far to the right as possible. The single
letters ``C B R U S E A`` and the words ``true``/``false`` are reserved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from ..errors import FormulaSyntaxError


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def children(self) -> tuple[Formula, ...]:
        return ()

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str
    args: tuple[str, ...] = ()


@dataclass(frozen=True)
class Not(Formula):
    body: Formula

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class _Binary(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class And(_Binary):
    pass


@dataclass(frozen=True)
class Or(_Binary):
    pass


@dataclass(frozen=True)
class Implies(_Binary):
    pass


@dataclass(frozen=True)
class Until(_Binary):
    pass


@dataclass(frozen=True)
class Surrounded(_Binary):
    pass


@dataclass(frozen=True)
class Closure(Formula):
    body: Formula

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class Boundary(Formula):
    body: Formula

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class Reach(Formula):
    body: Formula
    bound: int | None = None

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    sort: str
    body: Formula

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    sort: str
    body: Formula

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str


TRUE = Top()
FALSE = Bottom()


def subformulas(phi: Formula) -> Iterator[Formula]:
    """Post-order walk."""
    for c in phi.children():
        yield from subformulas(c)
    yield phi


def atoms_of(phi: Formula) -> set[str]:
    return {f.name for f in subformulas(phi) if isinstance(f, Atom)}


def free_vars(phi: Formula) -> set[str]:
    if isinstance(phi, Atom):
        return set(phi.args)
    if isinstance(phi, Eq):
        return {phi.left, phi.right}
    if isinstance(phi, (Exists, Forall)):
        return free_vars(phi.body) - {phi.var}
    out: set[str] = set()
    for c in phi.children():
        out |= free_vars(c)
    return out


# -- lexer ----------------------------------------------------------------

RESERVED = {"C", "B", "R", "U", "S", "E", "A", "true", "false"}

_ALIASES = {"¬": "!", "∧": "&", "∨": "|", "→": "->", "⊤": "true", "⊥": "false",
            "𝒞": "C", "𝒰": "U", "𝒮": "S", "ℛ": "R", "∃": "E", "∀": "A", "∂": "B"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<int>[0-9]+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[()!&|=:.,\[\]])
  | (?P<alias>[¬∧∨→⊤⊥𝒞𝒰𝒮ℛ∃∀∂])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int  # character offset


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", text, _byte_offset(text, pos))
        kind = m.lastgroup
        tok = m.group()
        if kind == "alias":
            tok = _ALIASES[tok]
            kind = "arrow" if tok == "->" else ("name" if tok.isalpha() else "punct")
        if kind == "name" and tok in RESERVED:
            kind = "kw"
        if kind != "ws":
            out.append(Token(kind if kind != "arrow" else "punct", tok, pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


# -- parser ---------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, message: str, tok: Token | None = None) -> FormulaSyntaxError:
        tok = tok or self.tok
        return FormulaSyntaxError(message, self.text, _byte_offset(self.text, tok.pos))

    def at(self, text: str) -> bool:
        return self.tok.kind in ("punct", "kw") and self.tok.text == text

    def eat(self, text: str) -> Token:
        if not self.at(text):
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            raise self.error(f"expected {text!r}, found {found}")
        tok = self.tok
        self.i += 1
        return tok

    def name(self, what: str) -> str:
        if self.tok.kind != "name":
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            raise self.error(f"expected {what}, found {found}")
        tok = self.tok
        self.i += 1
        return tok.text

    def parse(self) -> Formula:
        phi = self.formula()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return phi

    def formula(self) -> Formula:
        left = self.until()
        if self.at("->"):
            self.i += 1
            return Implies(left, self.formula())
        return left

    def until(self) -> Formula:
        left = self.disj()
        while self.at("U") or self.at("S"):
            op = self.tok.text
            self.i += 1
            right = self.disj()
            left = Until(left, right) if op == "U" else Surrounded(left, right)
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.at("|"):
            self.i += 1
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.at("&"):
            self.i += 1
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.tok
        if self.at("!"):
            self.i += 1
            return Not(self.unary())
        if self.at("C"):
            self.i += 1
            return Closure(self.unary())
        if self.at("B"):
            self.i += 1
            return Boundary(self.unary())
        if self.at("R"):
            self.i += 1
            bound = None
            if self.at("["):
                self.i += 1
                if self.tok.kind != "int":
                    raise self.error("expected a positive bound")
                bound = int(self.tok.text)
                if bound < 1:
                    raise self.error("reach bound must be positive")
                self.i += 1
                self.eat("]")
            return Reach(self.unary(), bound)
        if self.at("E") or self.at("A"):
            self.i += 1
            var = self.name("a variable")
            self.eat(":")
            sort = self.name("a sort")
            self.eat(".")
            body = self.formula()
            return Exists(var, sort, body) if tok.text == "E" else Forall(var, sort, body)
        return self.primary()

    def primary(self) -> Formula:
        tok = self.tok
        if self.at("true"):
            self.i += 1
            return TRUE
        if self.at("false"):
            self.i += 1
            return FALSE
        if self.at("("):
            self.i += 1
            phi = self.formula()
            self.eat(")")
            return phi
        if tok.kind == "name":
            self.i += 1
            if self.at("("):
                self.i += 1
                args = [self.name("a variable")]
                while self.at(","):
                    self.i += 1
                    args.append(self.name("a variable"))
                self.eat(")")
                return Atom(tok.text, tuple(args))
            if self.at("="):
                self.i += 1
                return Eq(tok.text, self.name("a variable"))
            return Atom(tok.text)
        if tok.kind == "eof":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {tok.text!r}")


def parse_formula(text: str) -> Formula:
    """Parse ``text``; raises :class:`FormulaSyntaxError` carrying a byte offset."""
    return _Parser(text).parse()


# -- printer --------------------------------------------------------------

_PREC = {Implies: 1, Until: 2, Surrounded: 2, Or: 3, And: 4}
_SYMBOL = {Implies: "->", Until: "U", Surrounded: "S", Or: "|", And: "&"}


def _prec(phi: Formula) -> int:
    if isinstance(phi, (Exists, Forall)):
        return 0
    return _PREC.get(type(phi), 5)


def pretty(phi: Formula, need: int = 0) -> str:
    """Print ``phi`` so that :func:`parse_formula` gives it back unchanged."""
    text = _pretty(phi)
    return f"({text})" if _prec(phi) < need else text


def _pretty(phi: Formula) -> str:
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bottom):
        return "false"
    if isinstance(phi, Atom):
        return phi.name if not phi.args else f"{phi.name}({', '.join(phi.args)})"
    if isinstance(phi, Eq):
        return f"{phi.left} = {phi.right}"
    if isinstance(phi, Not):
        return "!" + pretty(phi.body, 5)
    if isinstance(phi, Closure):
        return f"C({pretty(phi.body)})"
    if isinstance(phi, Boundary):
        return f"B({pretty(phi.body)})"
    if isinstance(phi, Reach):
        head = "R" if phi.bound is None else f"R[{phi.bound}]"
        return f"{head}({pretty(phi.body)})"
    if isinstance(phi, (Exists, Forall)):
        q = "E" if isinstance(phi, Exists) else "A"
        return f"{q} {phi.var}:{phi.sort}. {pretty(phi.body)}"
    p = _PREC[type(phi)]
    if isinstance(phi, Implies):
        left, right = pretty(phi.left, p + 1), pretty(phi.right, p)
    else:
        left, right = pretty(phi.left, p), pretty(phi.right, p + 1)
    return f"{left} {_SYMBOL[type(phi)]} {right}"
