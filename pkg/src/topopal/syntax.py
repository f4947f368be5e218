"""Formula language: AST, concrete grammar, printer and the complexity measure.

Stored trees only use the primitive constructors below.  The derived
connectives ``|``, ``->``, ``<->``, ``<phi>psi`` and ``[]`` are expanded by
the parser, so ``p -> q`` is stored as ``~(p & ~q)``.

Concrete grammar (loosest binding first)::

    iff    := imp ('<->' imp)*              left-assoc
    imp    := or ('->' imp)?                right-assoc
    or     := and ('|' and)*
    and    := unary ('&' unary)*
    unary  := '~' unary | 'K' unary | 'int' '(' iff ')'
            | '[' iff ']' unary | '<' iff '>' unary
            | '<>' unary | '[]' unary | atom
    atom   := IDENT | 'true' | 'false' | '(' iff ')'
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator

__all__ = [
    "Formula", "Prop", "Top", "Bot", "Not", "And", "Know", "Int", "Announce", "Effort", "TOP", "BOT",
    "Fragment", "ParseError", "ComplexityUndefined",
    "parse", "render", "complexity", "fragment", "has_announcement", "depth", "size", "subformulas",
    "implies", "disj", "iff", "dual_announce", "substitute", "props_of",
]

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
RESERVED = frozenset({"K", "int", "true", "false"})


class ComplexityUndefined(ValueError):
    """Raised when the complexity measure meets an effort subformula."""


class Formula:
    """Base class of all formula nodes.

    Nodes are immutable and hashable; the hash, depth and complexity are
    computed once at construction so that large shared trees stay cheap to
    use as dictionary keys.
    """

    __slots__ = ()
    _args: tuple
    _hash: int
    _depth: int
    _cx: int | None
    _kinds: int
    _kids: tuple

    def _finish(self, args: tuple, kids: tuple, cx: int | None, dp: int, kind: int = 0) -> None:
        for k in kids:
            kind |= k._kinds
        d = self.__dict__
        d["_kinds"] = kind
        d["_args"] = args
        d["_kids"] = kids
        d["_hash"] = hash((type(self).__name__,) + args)
        d["_cx"] = cx
        d["_depth"] = dp

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:  # type: ignore[attr-defined]
            return False
        return self._args == other._args  # type: ignore[attr-defined]

    def __ne__(self, other: object) -> bool:
        return not self == other

    def __str__(self) -> str:
        return render(self)

    @property
    def children(self) -> tuple[Formula, ...]:
        return self._kids

    # operator sugar for building formulas in code
    def __invert__(self) -> Formula:
        return Not(self)

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return disj(self, other)

    def __rshift__(self, other: Formula) -> Formula:
        return implies(self, other)


@dataclass(frozen=True, eq=False)
class Prop(Formula):
    name: str

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not _IDENT.match(self.name) or self.name in RESERVED:
            raise ValueError(f"invalid proposition identifier: {self.name!r}")
        self._finish((self.name,), (), 1, 0)


@dataclass(frozen=True, eq=False)
class Top(Formula):

    def __post_init__(self) -> None:
        self._finish((), (), 1, 0)


@dataclass(frozen=True, eq=False)
class Bot(Formula):

    def __post_init__(self) -> None:
        self._finish((), (), 1, 0)


@dataclass(frozen=True, eq=False)
class Not(Formula):
    sub: Formula

    def __post_init__(self) -> None:
        s = self.sub
        self._finish((s,), (s,), None if s._cx is None else s._cx + 1, s._depth + 1)


@dataclass(frozen=True, eq=False)
class And(Formula):
    left: Formula
    right: Formula

    def __post_init__(self) -> None:
        a, b = self.left, self.right
        cx = None if a._cx is None or b._cx is None else a._cx + b._cx + 1
        self._finish((a, b), (a, b), cx, max(a._depth, b._depth) + 1)


@dataclass(frozen=True, eq=False)
class Know(Formula):
    sub: Formula

    def __post_init__(self) -> None:
        s = self.sub
        self._finish((s,), (s,), None if s._cx is None else s._cx + 1, s._depth + 1)


@dataclass(frozen=True, eq=False)
class Int(Formula):
    sub: Formula

    def __post_init__(self) -> None:
        s = self.sub
        self._finish((s,), (s,), None if s._cx is None else s._cx + 1, s._depth + 1, 1)


@dataclass(frozen=True, eq=False)
class Announce(Formula):
    announced: Formula
    body: Formula

    def __post_init__(self) -> None:
        a, b = self.announced, self.body
        cx = None if a._cx is None or b._cx is None else (a._cx + 6) * b._cx
        self._finish((a, b), (a, b), cx, max(a._depth, b._depth) + 1, 2)


@dataclass(frozen=True, eq=False)
class Effort(Formula):
    sub: Formula

    def __post_init__(self) -> None:
        self._finish((self.sub,), (self.sub,), None, self.sub._depth + 1, 4)


TOP = Top()
BOT = Bot()


def implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def disj(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def iff(a: Formula, b: Formula) -> Formula:
    return And(implies(a, b), implies(b, a))


def dual_announce(a: Formula, b: Formula) -> Formula:
    return Not(Announce(a, Not(b)))


# ---------------------------------------------------------------------------
# measures and traversal


def complexity(f: Formula) -> int:
    """Weight that strictly decreases under every announcement reduction.

    ``c(p) = c(true) = c(false) = 1``, unary connectives add one, conjunction
    adds the two sides plus one, and ``c([a]b) = (c(a) + 6) * c(b)``.
    """
    if f._cx is None:
        raise ComplexityUndefined(f"complexity is undefined for effort formulas: {render(f)}")
    return f._cx


def depth(f: Formula) -> int:
    return f._depth


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal, left to right."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(g.children))


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def props_of(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Prop)}


def substitute(f: Formula, mapping: dict[str, Formula]) -> Formula:
    """Replace propositions named in ``mapping`` by formulas."""
    if isinstance(f, Prop):
        return mapping.get(f.name, f)
    if isinstance(f, (Top, Bot)):
        return f
    kids = [substitute(c, mapping) for c in f.children]
    if all(k is c for k, c in zip(kids, f.children)):
        return f
    return type(f)(*kids)


class Fragment(enum.IntEnum):
    EL = 0
    EL_INT = 1
    PAL = 2
    PAL_EFFORT = 3


def fragment(f: Formula) -> Fragment:
    """Smallest language fragment containing ``f``."""
    k = f._kinds
    if k & 4:
        return Fragment.PAL_EFFORT
    if k & 2:
        return Fragment.PAL
    if k & 1:
        return Fragment.EL_INT
    return Fragment.EL


def has_announcement(f: Formula) -> bool:
    return bool(f._kinds & 2)


# ---------------------------------------------------------------------------
# lexer / parser


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


_SYMBOLS = [
    ("<->", "IFF"), ("->", "IMP"), ("<>", "DIAMOND"), ("[]", "BOX"),
    ("~", "NOT"), ("!", "NOT"), ("&", "AND"), ("|", "OR"),
    ("(", "LPAREN"), (")", "RPAREN"), ("[", "LBRACK"), ("]", "RBRACK"),
    ("<", "LANGLE"), (">", "RANGLE"),
    # unicode spellings
    ("↔", "IFF"), ("→", "IMP"), ("◇", "DIAMOND"), ("□", "BOX"), ("¬", "NOT"),
    ("∧", "AND"), ("∨", "OR"), ("⊤", "TRUE"), ("⊥", "FALSE"),
]
_WORD = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        m = _WORD.match(text, i)
        if m:
            word = m.group()
            kind = {"K": "KNOW", "int": "INT", "true": "TRUE", "false": "FALSE"}.get(word, "IDENT")
            toks.append(Token(kind, word, i))
            i = m.end()
            continue
        for sym, kind in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(Token(kind, sym, i))
                i += len(sym)
                break
        else:
            raise ParseError(f"unknown token {ch!r}", i, text)
    toks.append(Token("EOF", "", n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def take(self, kind: str) -> Token:
        t = self.tok
        if t.kind != kind:
            found = "end of input" if t.kind == "EOF" else repr(t.value)
            raise ParseError(f"expected {kind}, found {found}", t.pos, self.text)
        self.i += 1
        return t

    def parse(self) -> Formula:
        f = self.iff()
        self.take("EOF")
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.tok.kind == "IFF":
            self.i += 1
            f = iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.tok.kind == "IMP":
            self.i += 1
            return implies(f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.tok.kind == "OR":
            self.i += 1
            f = disj(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.tok.kind == "AND":
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        k = self.tok.kind
        if k == "NOT":
            self.i += 1
            return Not(self.unary())
        if k == "KNOW":
            self.i += 1
            return Know(self.unary())
        if k == "INT":
            self.i += 1
            self.take("LPAREN")
            f = self.iff()
            self.take("RPAREN")
            return Int(f)
        if k == "LBRACK":
            self.i += 1
            a = self.iff()
            self.take("RBRACK")
            return Announce(a, self.unary())
        if k == "LANGLE":
            self.i += 1
            a = self.iff()
            self.take("RANGLE")
            return dual_announce(a, self.unary())
        if k == "DIAMOND":
            self.i += 1
            return Effort(self.unary())
        if k == "BOX":
            self.i += 1
            return Not(Effort(Not(self.unary())))
        return self.atom()

    def atom(self) -> Formula:
        t = self.tok
        if t.kind == "IDENT":
            self.i += 1
            return Prop(t.value)
        if t.kind == "TRUE":
            self.i += 1
            return TOP
        if t.kind == "FALSE":
            self.i += 1
            return BOT
        if t.kind == "LPAREN":
            self.i += 1
            f = self.iff()
            self.take("RPAREN")
            return f
        found = "end of input" if t.kind == "EOF" else repr(t.value)
        raise ParseError(f"unexpected {found}", t.pos, self.text)


def parse(text: str) -> Formula:
    """Parse a formula string; derived connectives are expanded."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printer

# binding levels: atoms/unary 4, & 3, -> 1
_UNARY, _AND, _IMP = 4, 3, 1


def _as_implication(f: Formula) -> tuple[Formula, Formula] | None:
    if isinstance(f, Not) and isinstance(f.sub, And) and isinstance(f.sub.right, Not):
        return f.sub.left, f.sub.right.sub
    return None


def _level(f: Formula, sugar: bool) -> int:
    if sugar and _as_implication(f) is not None:
        return _IMP
    if isinstance(f, And):
        return _AND
    return _UNARY


def _wrap(f: Formula, need: int, sugar: bool) -> str:
    s = _render(f, sugar)
    return f"({s})" if _level(f, sugar) < need else s


def _render(f: Formula, sugar: bool) -> str:
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if sugar:
        if isinstance(f, Not) and isinstance(f.sub, Announce) and isinstance(f.sub.body, Not):
            return f"<{_render(f.sub.announced, sugar)}>{_wrap(f.sub.body.sub, _UNARY, sugar)}"
        imp = _as_implication(f)
        if imp is not None:
            return f"{_wrap(imp[0], _IMP + 1, sugar)} -> {_wrap(imp[1], _IMP, sugar)}"
    if isinstance(f, And):
        return f"{_wrap(f.left, _AND, sugar)} & {_wrap(f.right, _AND + 1, sugar)}"
    if isinstance(f, Not):
        return "~" + _wrap(f.sub, _UNARY, sugar)
    if isinstance(f, Know):
        inner = _wrap(f.sub, _UNARY, sugar)
        return "K" + inner if inner.startswith("(") else "K " + inner
    if isinstance(f, Int):
        return f"int({_render(f.sub, sugar)})"
    if isinstance(f, Announce):
        return f"[{_render(f.announced, sugar)}]{_wrap(f.body, _UNARY, sugar)}"
    if isinstance(f, Effort):
        return "<>" + _wrap(f.sub, _UNARY, sugar)
    raise TypeError(f"not a formula: {f!r}")


def render(f: Formula, sugar: bool = False) -> str:
    """Minimal-parenthesis string that parses back to ``f``.

    With ``sugar=True`` the pattern ``~(a & ~b)`` is printed as ``a -> b``
    and ``~[a]~b`` as ``<a>b``.
    """
    return _render(f, sugar)
