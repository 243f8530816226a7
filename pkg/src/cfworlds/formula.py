"""Formula AST, concrete syntax parser and printer, and sublanguage classification.

The counterfactual conditional is written ``a ~> b``.  An intervention prefix
``[X<-1; Y<-0]body`` is sugar for the conditional whose antecedent is the
conjunction ``X=1 & Y=0``; the AST keeps a flag recording that the formula was
written (and should be printed) in prefix form.  The flag never participates in
equality: a prefix and its spelled-out conditional are the same formula.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field

Value = int | str


class FormulaSyntaxError(ValueError):
    """Raised on malformed concrete syntax; carries the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class UnknownOperator(FormulaSyntaxError):
    pass


class Formula:
    """Base class; instances are immutable and hashable."""

    __slots__ = ()

    def __str__(self) -> str:
        return fmt(self)


@dataclass(frozen=True)
class Atom(Formula):
    var: str
    value: Value


@dataclass(frozen=True)
class Truth(Formula):
    pass


@dataclass(frozen=True)
class Falsity(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Cf(Formula):
    """Counterfactual conditional.  With sugar=True the antecedent must be a
    conjunction chain of atoms and the formula prints in prefix form."""

    ant: Formula
    con: Formula
    sugar: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.sugar and bindings_of(self.ant) is None:
            raise ValueError("prefix form needs a conjunction of atoms as antecedent")


TRUE = Truth()
FALSE = Falsity()


def conj(parts: list[Formula]) -> Formula:
    """Left-associated conjunction; empty list gives true."""
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: list[Formula]) -> Formula:
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def bindings_of(f: Formula) -> list[tuple[str, Value]] | None:
    """Flatten a conjunction chain of atoms into (var, value) pairs.

    Returns None if f is not such a chain.  Duplicate variables are kept;
    well_formed reports them.  The constant true counts as the empty chain,
    so an explicit [] prefix (hold nothing fixed) has bindings [].
    """
    if isinstance(f, Truth):
        return []
    if isinstance(f, Atom):
        return [(f.var, f.value)]
    if isinstance(f, And):
        left = bindings_of(f.left)
        right = bindings_of(f.right)
        if left is None or right is None:
            return None
        return left + right
    return None


def prefix(bindings: list[tuple[str, Value]], body: Formula) -> Formula:
    """[X1<-x1; ...; Xk<-xk]body; with no bindings this is just body."""
    if not bindings:
        return body
    return Cf(conj([Atom(v, x) for v, x in bindings]), body, sugar=True)


def diamond(bindings: list[tuple[str, Value]], body: Formula) -> Formula:
    """<X<-x>body, the dual prefix: some solution satisfies body."""
    if not bindings:
        return body
    return Not(prefix(bindings, Not(body)))


class LangClass(enum.IntEnum):
    """Sublanguage classes, smallest first; comparisons follow containment."""

    LPROP = 0
    LEX = 1
    LC1 = 2
    LC = 3


def _is_propositional(f: Formula) -> bool:
    if isinstance(f, (Atom, Truth, Falsity)):
        return True
    if isinstance(f, Not):
        return _is_propositional(f.sub)
    if isinstance(f, (And, Or, Implies, Iff)):
        return _is_propositional(f.left) and _is_propositional(f.right)
    return False


def _contains_cf(f: Formula) -> bool:
    if isinstance(f, Cf):
        return True
    if isinstance(f, Not):
        return _contains_cf(f.sub)
    if isinstance(f, (And, Or, Implies, Iff)):
        return _contains_cf(f.left) or _contains_cf(f.right)
    return False


def classify(f: Formula) -> LangClass:
    """Smallest sublanguage containing f.

    The two smallest classes require every conditional to be an intervention
    prefix (the sugar flag, not just the antecedent's shape): a spelled-out
    ``a & b ~> c`` classifies above LEX even though it evaluates identically
    in counterfactual structures.
    """
    level = LangClass.LPROP
    for node in _walk(f):
        if not isinstance(node, Cf):
            continue
        if _contains_cf(node.ant) or _contains_cf(node.con):
            return LangClass.LC
        if not node.sugar:
            level = max(level, LangClass.LC1)
        elif not isinstance(node.con, Atom):
            level = max(level, LangClass.LEX)
    return level


def _walk(f: Formula):
    yield f
    if isinstance(f, Not):
        yield from _walk(f.sub)
    elif isinstance(f, (And, Or, Implies, Iff)):
        yield from _walk(f.left)
        yield from _walk(f.right)
    elif isinstance(f, Cf):
        yield from _walk(f.ant)
        yield from _walk(f.con)


def atoms_of(f: Formula) -> set[tuple[str, Value]]:
    return {(n.var, n.value) for n in _walk(f) if isinstance(n, Atom)}


def well_formed(f: Formula, sig) -> list[str]:
    """Diagnostics for f against a signature; empty list means well formed.

    Checks that every atom names a known endogenous variable with an in-range
    value and that every intervention prefix binds distinct variables.
    """
    out: list[str] = []
    for node in _walk(f):
        if isinstance(node, Atom):
            if node.var in sig.exogenous:
                out.append(f"{node.var} is exogenous; atoms range over endogenous variables")
            elif node.var not in sig.endogenous:
                out.append(f"unknown variable {node.var}")
            elif node.value not in sig.range[node.var]:
                out.append(f"value {node.value!r} not in range of {node.var}")
        elif isinstance(node, Cf) and node.sugar:
            seen: set[str] = set()
            for var, _ in bindings_of(node.ant) or []:
                if var in seen:
                    out.append(f"variable {var} bound twice in one prefix")
                seen.add(var)
    return out


# --- concrete syntax ---

_PUNCT = [
    ("<->", "IFF"),
    ("->", "IMP"),
    ("<-", "BIND"),
    ("~>", "CF"),
    ("[", "LBRACK"),
    ("]", "RBRACK"),
    ("(", "LPAREN"),
    (")", "RPAREN"),
    ("<", "LANGLE"),
    (">", "RANGLE"),
    (";", "SEMI"),
    ("!", "NOT"),
    ("&", "AND"),
    ("|", "OR"),
    ("=", "EQ"),
]


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        for lit, kind in _PUNCT:
            if text.startswith(lit, i):
                toks.append((kind, lit, i))
                i += len(lit)
                break
        else:
            if c.isalpha() or c == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                word = text[i:j]
                kind = {"true": "TRUE", "false": "FALSE"}.get(word, "IDENT")
                toks.append((kind, word, i))
                i = j
            elif c.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                toks.append(("INT", text[i:j], i))
                i = j
            else:
                raise UnknownOperator(f"unknown operator {c!r}", i)
    toks.append(("EOF", "", n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.toks[self.i][0]

    def next(self) -> tuple[str, str, int]:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> tuple[str, str, int]:
        t = self.toks[self.i]
        if t[0] != kind:
            raise FormulaSyntaxError(f"expected {kind}, found {t[1]!r}", t[2])
        return self.next()

    def formula(self) -> Formula:
        left = self.imp()
        if self.peek() == "CF":
            self.next()
            right = self.imp()
            return Cf(left, right, sugar=False)
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek() == "IMP":
            self.next()
            return Implies(left, self.disj())
        if self.peek() == "IFF":
            self.next()
            return Iff(left, self.disj())
        return left

    def disj(self) -> Formula:
        out = self.conj()
        while self.peek() == "OR":
            self.next()
            out = Or(out, self.conj())
        return out

    def conj(self) -> Formula:
        out = self.unary()
        while self.peek() == "AND":
            self.next()
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        kind = self.peek()
        if kind == "NOT":
            self.next()
            return Not(self.unary())
        if kind == "LBRACK":
            self.next()
            bindings = self.bindings("RBRACK")
            return Cf(conj([Atom(v, x) for v, x in bindings]), self.unary(), sugar=True)
        if kind == "LANGLE":
            self.next()
            bindings = self.bindings("RANGLE")
            body = self.unary()
            return Not(Cf(conj([Atom(v, x) for v, x in bindings]), Not(body), sugar=True))
        return self.atom()

    def bindings(self, close: str) -> list[tuple[str, Value]]:
        if self.peek() == close:
            self.next()
            return []
        out = [self.binding()]
        while self.peek() == "SEMI":
            self.next()
            out.append(self.binding())
        self.expect(close)
        return out

    def binding(self) -> tuple[str, Value]:
        _, name, _ = self.expect("IDENT")
        self.expect("BIND")
        return name, self.value()

    def value(self) -> Value:
        kind, word, pos = self.next()
        if kind == "INT":
            return int(word)
        if kind == "IDENT":
            return word
        raise FormulaSyntaxError(f"expected a value, found {word!r}", pos)

    def atom(self) -> Formula:
        kind, word, pos = self.next()
        if kind == "TRUE":
            return TRUE
        if kind == "FALSE":
            return FALSE
        if kind == "LPAREN":
            f = self.formula()
            self.expect("RPAREN")
            return f
        if kind == "IDENT":
            self.expect("EQ")
            return Atom(word, self.value())
        raise FormulaSyntaxError(f"expected a formula, found {word!r}", pos)


def parse(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    kind, word, pos = p.toks[p.i]
    if kind != "EOF":
        raise FormulaSyntaxError(f"trailing input {word!r}", pos)
    return f


# precedence levels for printing, loosest first
_CF, _IMP, _OR, _AND, _UNARY = range(5)


def fmt(f: Formula) -> str:
    """Concrete syntax with minimal parentheses; parse(fmt(f)) == f."""
    return _fmt(f, _CF)


def _paren(s: str, need: bool) -> str:
    return f"({s})" if need else s


def _fmt(f: Formula, ctx: int) -> str:
    if isinstance(f, Atom):
        return f"{f.var}={f.value}"
    if isinstance(f, Truth):
        return "true"
    if isinstance(f, Falsity):
        return "false"
    if isinstance(f, Not):
        return "!" + _fmt(f.sub, _UNARY)
    if isinstance(f, And):
        s = f"{_fmt(f.left, _AND)} & {_fmt(f.right, _UNARY)}"
        return _paren(s, ctx > _AND)
    if isinstance(f, Or):
        s = f"{_fmt(f.left, _OR)} | {_fmt(f.right, _AND)}"
        return _paren(s, ctx > _OR)
    if isinstance(f, (Implies, Iff)):
        op = "->" if isinstance(f, Implies) else "<->"
        s = f"{_fmt(f.left, _OR)} {op} {_fmt(f.right, _OR)}"
        return _paren(s, ctx > _IMP)
    if isinstance(f, Cf):
        if f.sugar:
            parts = "; ".join(f"{v}<-{x}" for v, x in bindings_of(f.ant))
            return f"[{parts}]" + _fmt(f.con, _UNARY)
        s = f"{_fmt(f.ant, _IMP)} ~> {_fmt(f.con, _IMP)}"
        return _paren(s, ctx > _CF)
    raise TypeError(f"not a formula: {f!r}")


def strict_equal(f: Formula, g: Formula) -> bool:
    """Structural equality that also compares prefix-sugar flags."""
    if f != g:
        return False
    if isinstance(f, Cf):
        return (
            f.sugar == g.sugar
            and strict_equal(f.ant, g.ant)
            and strict_equal(f.con, g.con)
        )
    if isinstance(f, Not):
        return strict_equal(f.sub, g.sub)
    if isinstance(f, (And, Or, Implies, Iff)):
        return strict_equal(f.left, g.left) and strict_equal(f.right, g.right)
    return True


def random_formula(rng: random.Random, vocab: list[tuple[str, list[Value]]], depth: int) -> Formula:
    """Random AST over the given (variable, range) vocabulary, for round-trip
    and search tests.  Prefix antecedents always bind distinct variables."""
    if depth <= 0 or rng.random() < 0.3:
        r = rng.random()
        if r < 0.1:
            return TRUE
        if r < 0.2:
            return FALSE
        var, values = rng.choice(vocab)
        return Atom(var, rng.choice(values))
    kind = rng.choice(["not", "and", "or", "imp", "iff", "cf", "prefix"])
    if kind == "not":
        return Not(random_formula(rng, vocab, depth - 1))
    if kind == "prefix":
        k = rng.randint(1, min(3, len(vocab)))
        chosen = rng.sample(vocab, k)
        return prefix(
            [(v, rng.choice(vals)) for v, vals in chosen],
            random_formula(rng, vocab, depth - 1),
        )
    left = random_formula(rng, vocab, depth - 1)
    right = random_formula(rng, vocab, depth - 1)
    if kind == "and":
        return And(left, right)
    if kind == "or":
        return Or(left, right)
    if kind == "imp":
        return Implies(left, right)
    if kind == "iff":
        return Iff(left, right)
    return Cf(left, right, sugar=False)
