"""Formulas of propositional modal logic: parsing, printing, vocabulary, weight.

Primitive connectives: atoms, top, bot, &, |, ->, [].  Negation and diamond
are input sugar only: ~f reads as (f -> bot) and <>f as ~[]~f.  The printer
reconstructs both abbreviations, so round-trips are stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class Formula:
    """Base class for formula nodes. Instances are immutable and hashable."""

    __slots__ = ()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({render_formula(self)!r})"


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str


@dataclass(frozen=True, repr=False)
class Top(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Bot(Formula):
    pass


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Box(Formula):
    child: Formula


top = Top()
bot = Bot()


def neg(f: Formula) -> Formula:
    """Derived negation, always stored denormalized."""
    return Implies(f, bot)


def diamond(f: Formula) -> Formula:
    """Derived diamond ~[]~f, always stored denormalized."""
    return neg(Box(neg(f)))


def is_neg(f: Formula) -> bool:
    return isinstance(f, Implies) and f.right == bot


def is_diamond(f: Formula) -> bool:
    return is_neg(f) and isinstance(f.left, Box) and is_neg(f.left.child)


# ---------------------------------------------------------------------------
# Parsing

RESERVED = {"top": top, "bot": bot}

# UTF-8 aliases are accepted on input only; the printer emits ASCII.
_ALIASES = {
    "¬": "~",       # negation sign
    "∧": "&",       # logical and
    "∨": "|",       # logical or
    "→": "->",      # rightwards arrow
    "□": "[]",      # white square
    "◇": "<>",      # white diamond
    "⊤": "top",
    "⊥": "bot",
}


class ParseError(ValueError):
    """Syntax error carrying the byte offset and the acceptable token set."""

    def __init__(self, offset: int, expected: frozenset[str], found: str):
        self.offset = offset
        self.expected = expected
        self.found = found
        want = ", ".join(sorted(expected))
        super().__init__(f"at byte {offset}: expected one of {want}, found {found}")


@dataclass(frozen=True)
class _Token:
    kind: str      # one of ~ & | -> [] <> ( ) atom top bot end
    text: str
    offset: int    # byte offset into the utf-8 encoding of the input


def _tokenize(text: str) -> list[_Token]:
    toks: list[_Token] = []
    i = 0
    byte = 0
    n = len(text)
    while i < n:
        ch = text[i]
        blen = len(ch.encode("utf-8"))
        if ch in " \t\r\n":
            i += 1
            byte += blen
            continue
        if ch in _ALIASES:
            alias = _ALIASES[ch]
            toks.append(_Token(alias, alias, byte))
            i += 1
            byte += blen
            continue
        if ch in "~&|()":
            toks.append(_Token(ch, ch, byte))
            i += 1
            byte += 1
            continue
        if ch == "-":
            if i + 1 < n and text[i + 1] == ">":
                toks.append(_Token("->", "->", byte))
                i += 2
                byte += 2
                continue
            raise ParseError(byte, frozenset({"->"}), repr(ch))
        if ch == "[":
            if i + 1 < n and text[i + 1] == "]":
                toks.append(_Token("[]", "[]", byte))
                i += 2
                byte += 2
                continue
            raise ParseError(byte, frozenset({"[]"}), repr(ch))
        if ch == "<":
            if i + 1 < n and text[i + 1] == ">":
                toks.append(_Token("<>", "<>", byte))
                i += 2
                byte += 2
                continue
            raise ParseError(byte, frozenset({"<>"}), repr(ch))
        if ch.isalpha() and ch.isascii():
            j = i
            while j < n and ((text[j].isalnum() and text[j].isascii()) or text[j] == "_"):
                j += 1
            name = text[i:j]
            kind = name if name in RESERVED else "atom"
            toks.append(_Token(kind, name, byte))
            byte += j - i
            i = j
            continue
        raise ParseError(byte, frozenset({"atom", "(", "~", "[]", "<>", "top", "bot"}), repr(ch))
    toks.append(_Token("end", "", byte))
    return toks


_UNARY_STARTERS = frozenset({"atom", "top", "bot", "(", "~", "[]", "<>"})


class _Parser:
    """Recursive descent over the token list.

    Precedence, loosest first: -> (right assoc), |, & (both left assoc),
    then the prefix operators ~ [] <>.
    """

    def __init__(self, toks: list[_Token]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def take(self) -> _Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def fail(self, expected: frozenset[str]) -> ParseError:
        t = self.peek()
        found = "end of input" if t.kind == "end" else repr(t.text)
        return ParseError(t.offset, expected, found)

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek().kind == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek().kind == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek().kind == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        t = self.peek()
        if t.kind == "~":
            self.take()
            return neg(self.unary())
        if t.kind == "[]":
            self.take()
            return Box(self.unary())
        if t.kind == "<>":
            self.take()
            return diamond(self.unary())
        if t.kind == "atom":
            self.take()
            return Atom(t.text)
        if t.kind in ("top", "bot"):
            self.take()
            return RESERVED[t.kind]
        if t.kind == "(":
            self.take()
            f = self.implication()
            if self.peek().kind != ")":
                raise self.fail(frozenset({")", "->", "|", "&"}))
            self.take()
            return f
        raise self.fail(_UNARY_STARTERS)


def parse_formula(text: str) -> Formula:
    p = _Parser(_tokenize(text))
    f = p.implication()
    if p.peek().kind != "end":
        raise p.fail(frozenset({"end", "->", "|", "&"}))
    return f


# ---------------------------------------------------------------------------
# Printing

# binding strength: higher binds tighter
_LEVEL_IMPLIES = 0
_LEVEL_OR = 1
_LEVEL_AND = 2
_LEVEL_UNARY = 3


def _render(f: Formula, ctx: int, right_of_arrow: bool = False) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Box):
        return "[]" + _render(f.child, _LEVEL_UNARY)
    if is_diamond(f):
        return "<>" + _render(f.left.child.left, _LEVEL_UNARY)  # type: ignore[attr-defined]
    if is_neg(f):
        return "~" + _render(f.left, _LEVEL_UNARY)  # type: ignore[attr-defined]
    if isinstance(f, And):
        s = _render(f.left, _LEVEL_AND) + " & " + _render(f.right, _LEVEL_AND + 1)
        return s if ctx <= _LEVEL_AND else "(" + s + ")"
    if isinstance(f, Or):
        s = _render(f.left, _LEVEL_OR) + " | " + _render(f.right, _LEVEL_OR + 1)
        return s if ctx <= _LEVEL_OR else "(" + s + ")"
    if isinstance(f, Implies):
        s = _render(f.left, _LEVEL_IMPLIES + 1) + " -> " + _render(f.right, _LEVEL_IMPLIES)
        return s if ctx <= _LEVEL_IMPLIES else "(" + s + ")"
    raise TypeError(f"not a formula: {f!r}")


def render_formula(f: Formula) -> str:
    """Canonical ASCII rendering; parse_formula(render_formula(f)) == f."""
    return _render(f, _LEVEL_IMPLIES)


# ---------------------------------------------------------------------------
# Vocabulary, subformulas, weight

@dataclass(frozen=True)
class SignedVocabulary:
    positive: frozenset[str]
    negative: frozenset[str]

    @property
    def all(self) -> frozenset[str]:
        return self.positive | self.negative

    def flipped(self) -> "SignedVocabulary":
        return SignedVocabulary(self.negative, self.positive)

    def union(self, other: "SignedVocabulary") -> "SignedVocabulary":
        return SignedVocabulary(self.positive | other.positive,
                                self.negative | other.negative)


_EMPTY = SignedVocabulary(frozenset(), frozenset())


@lru_cache(maxsize=None)
def signed_vocabulary(f: Formula) -> SignedVocabulary:
    """Atoms of f split by polarity; -> flips the polarity of its antecedent."""
    if isinstance(f, Atom):
        return SignedVocabulary(frozenset({f.name}), frozenset())
    if isinstance(f, (Top, Bot)):
        return _EMPTY
    if isinstance(f, (And, Or)):
        return signed_vocabulary(f.left).union(signed_vocabulary(f.right))
    if isinstance(f, Implies):
        return signed_vocabulary(f.left).flipped().union(signed_vocabulary(f.right))
    if isinstance(f, Box):
        return signed_vocabulary(f.child)
    raise TypeError(f"not a formula: {f!r}")


def vocabulary(f: Formula) -> frozenset[str]:
    return signed_vocabulary(f).all


def subformulas(f: Formula) -> frozenset[Formula]:
    """Reflexive-transitive subterm closure."""
    acc: set[Formula] = set()

    def walk(g: Formula) -> None:
        if g in acc:
            return
        acc.add(g)
        if isinstance(g, (And, Or, Implies)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, Box):
            walk(g.child)

    walk(f)
    return frozenset(acc)


@lru_cache(maxsize=None)
def weight(f: Formula) -> int:
    """Total symbol count: atoms, constants, and connectives each count 1."""
    if isinstance(f, (Atom, Top, Bot)):
        return 1
    if isinstance(f, (And, Or, Implies)):
        return 1 + weight(f.left) + weight(f.right)
    if isinstance(f, Box):
        return 1 + weight(f.child)
    raise TypeError(f"not a formula: {f!r}")
