"""Hilbert-style proof checking for the closest-world axioms.

A proof script is a sequence of lines, each a formula plus a justification:
an axiom template instance, modus ponens on two earlier lines, one of the
two conditional rewrite rules applied to an earlier line, or a claimed
propositional tautology.  Tautology claims are settled by brute force:
atoms and conditional subformulas are treated as opaque letters (at most
eight distinct ones) and the truth table is enumerated.

The checker only verifies; it never searches.  check_proof walks the lines
in order and reports the first violation, or the conclusion of the last
line when every justification holds.  Axiom bases are configurable so that
the same script can be re-checked with a schema withheld.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Cf,
    Falsity,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Truth,
    conj,
    disj,
    fmt,
    parse,
)


class ProofError(ValueError):
    """Base for everything check_line can report."""


class BadSubstitution(ProofError):
    """Axiom arguments malformed, or the line is not the built instance."""


class SideConditionViolated(ProofError):
    pass


class RuleMismatch(ProofError):
    """Cited lines do not have the shape the rule requires."""


class ForwardReference(ProofError):
    """A justification cites the current line or a later one."""


class SchemaDisabled(ProofError):
    """The cited schema or rule is not part of the active base."""


ALL_AXIOMS = ("A0", "A1", "A2", "A3", "A4", "A5", "A6", "A7", "V1", "V2", "V3")
ALL_RULES = ("MP", "RA1", "RA2")


@dataclass(frozen=True)
class AxiomBase:
    """Enabled axiom schemas and inference rules.

    A0 (tautologies) and modus ponens cannot be disabled; the constructor
    adds them back silently so that subtraction stays convenient.
    """

    axioms: frozenset
    rules: frozenset

    def __post_init__(self):
        object.__setattr__(self, "axioms", frozenset(self.axioms) | {"A0"})
        object.__setattr__(self, "rules", frozenset(self.rules) | {"MP"})
        bad = self.axioms - set(ALL_AXIOMS)
        if bad:
            raise ValueError(f"unknown axiom schemas: {sorted(bad)}")
        bad = self.rules - set(ALL_RULES)
        if bad:
            raise ValueError(f"unknown rules: {sorted(bad)}")

    def extend(self, *names: str) -> "AxiomBase":
        ax = set(self.axioms)
        ru = set(self.rules)
        for n in names:
            if n in ALL_AXIOMS:
                ax.add(n)
            elif n in ALL_RULES:
                ru.add(n)
            else:
                raise ValueError(f"unknown schema or rule {n!r}")
        return AxiomBase(frozenset(ax), frozenset(ru))

    def without(self, *names: str) -> "AxiomBase":
        if "A0" in names or "MP" in names:
            raise ValueError("A0 and modus ponens are always enabled")
        return AxiomBase(self.axioms - set(names), self.rules - set(names))


AX = AxiomBase(
    frozenset({"A1", "A2", "A3", "A4", "A5", "A6"}),
    frozenset({"MP", "RA1", "RA2"}),
)
AX_PLUS = AX.extend("V2", "V3")


# --- justifications ---


@dataclass
class AxiomInstance:
    schema: str
    args: dict


@dataclass
class MP:
    """Line j proves an implication whose premise is line i."""

    i: int
    j: int


@dataclass
class RA1:
    """From a proved biconditional a <-> b, conclude (a ~> c) -> (b ~> c)."""

    i: int


@dataclass
class RA2:
    """From a proved implication a -> b, conclude (c ~> a) -> (c ~> b)."""

    i: int


@dataclass
class TautologyInstance:
    pass


@dataclass
class ProofLine:
    formula: Formula
    by: object


@dataclass
class ProofScript:
    """Lines plus the optional variable ranges the V schemas draw on."""

    lines: tuple
    signature: dict | None = None


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class Verified:
    conclusion: Formula

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class FirstFailure:
    line: int
    violation: Violation

    def __bool__(self) -> bool:
        return False


# --- tautology checking ---


def opaque_letters(f: Formula) -> list:
    """Distinct atoms and conditional subformulas, outermost first.

    These are the letters of the propositional skeleton: inside them the
    structure is invisible to truth-table reasoning."""
    out: list = []

    def walk(g: Formula):
        if isinstance(g, (Truth, Falsity)):
            return
        if isinstance(g, (Atom, Cf)):
            if g not in out:
                out.append(g)
            return
        if isinstance(g, Not):
            walk(g.sub)
            return
        if isinstance(g, (And, Or, Implies, Iff)):
            walk(g.left)
            walk(g.right)
            return
        raise TypeError(f"not a formula: {g!r}")

    walk(f)
    return out


def is_tautology(f: Formula, cap: int = 8) -> bool:
    """Truth-table the propositional skeleton of f.

    Raises RuleMismatch when the skeleton has more than cap letters; the
    checker refuses rather than grinding through a huge table."""
    letters = opaque_letters(f)
    if len(letters) > cap:
        raise RuleMismatch(
            f"skeleton has {len(letters)} opaque letters, more than {cap}"
        )

    def ev(g: Formula, env: dict) -> bool:
        if isinstance(g, (Atom, Cf)):
            return env[g]
        if isinstance(g, Truth):
            return True
        if isinstance(g, Falsity):
            return False
        if isinstance(g, Not):
            return not ev(g.sub, env)
        if isinstance(g, And):
            return ev(g.left, env) and ev(g.right, env)
        if isinstance(g, Or):
            return ev(g.left, env) or ev(g.right, env)
        if isinstance(g, Implies):
            return (not ev(g.left, env)) or ev(g.right, env)
        return ev(g.left, env) == ev(g.right, env)

    for bits in itertools.product((False, True), repeat=len(letters)):
        if not ev(f, dict(zip(letters, bits))):
            return False
    return True


# --- axiom templates ---


@dataclass(frozen=True)
class AxiomTemplate:
    """A schema as the proof checker sees it: named arguments plus a builder.

    Argument kinds: formula (an AST), name (a variable), value (one point of
    a range), assign (a {variable: value} dict)."""

    name: str
    params: tuple
    shape: str
    build: Callable = field(default=None, compare=False, repr=False)


def _t_a1(a, vocab):
    return Cf(a["phi"], a["phi"], sugar=False)


def _t_a2(a, vocab):
    f, g1, g2 = a["phi"], a["psi1"], a["psi2"]
    return Implies(
        And(Cf(f, g1, sugar=False), Cf(f, g2, sugar=False)),
        Cf(f, And(g1, g2), sugar=False),
    )


def _t_a3(a, vocab):
    f1, f2, g = a["phi1"], a["phi2"], a["psi"]
    return Implies(
        And(Cf(f1, f2, sugar=False), Cf(f1, g, sugar=False)),
        Cf(And(f1, f2), g, sugar=False),
    )


def _t_a4(a, vocab):
    f1, f2, g = a["phi1"], a["phi2"], a["psi"]
    return Implies(
        And(Cf(f1, g, sugar=False), Cf(f2, g, sugar=False)),
        Cf(Or(f1, f2), g, sugar=False),
    )


def _t_a5(a, vocab):
    return Not(Cf(TRUE, FALSE, sugar=False))


def _t_a6(a, vocab):
    f, g = a["phi"], a["psi"]
    return Implies(f, Iff(g, Cf(f, g, sugar=False)))


def _t_a7(a, vocab):
    f, g1, g2 = a["phi"], a["psi1"], a["psi2"]
    return Implies(
        Cf(f, Or(g1, g2), sugar=False),
        Or(Cf(f, g1, sugar=False), Cf(f, g2, sugar=False)),
    )


def _range_of(vocab: dict, var: str):
    if var not in vocab:
        raise BadSubstitution(f"variable {var!r} is not in the script signature")
    return vocab[var]


def _t_v1(a, vocab):
    values = _range_of(vocab, a["var"])
    return disj([Atom(a["var"], v) for v in values])


def _t_v2(a, vocab):
    var, val, other = a["var"], a["val"], a["other"]
    values = _range_of(vocab, var)
    if val not in values or other not in values:
        raise BadSubstitution(f"value outside the range of {var!r}")
    if val == other:
        raise SideConditionViolated("the two values must differ")
    return Implies(Atom(var, val), Not(Atom(var, other)))


def _t_v3(a, vocab):
    assign = a["assign"]
    if not assign:
        raise SideConditionViolated("needs at least one fixed variable")
    for var, val in assign.items():
        if val not in _range_of(vocab, var):
            raise BadSubstitution(f"value {val!r} outside the range of {var!r}")
    ante = conj([Atom(v, assign[v]) for v in vocab if v in assign])
    return Not(Cf(ante, FALSE, sugar=False))


TEMPLATES: dict = {
    t.name: t
    for t in [
        AxiomTemplate("A1", (("phi", "formula"),), "phi ~> phi", _t_a1),
        AxiomTemplate(
            "A2",
            (("phi", "formula"), ("psi1", "formula"), ("psi2", "formula")),
            "((phi ~> psi1) & (phi ~> psi2)) -> (phi ~> psi1 & psi2)",
            _t_a2,
        ),
        AxiomTemplate(
            "A3",
            (("phi1", "formula"), ("phi2", "formula"), ("psi", "formula")),
            "((phi1 ~> phi2) & (phi1 ~> psi)) -> (phi1 & phi2 ~> psi)",
            _t_a3,
        ),
        AxiomTemplate(
            "A4",
            (("phi1", "formula"), ("phi2", "formula"), ("psi", "formula")),
            "((phi1 ~> psi) & (phi2 ~> psi)) -> (phi1 | phi2 ~> psi)",
            _t_a4,
        ),
        AxiomTemplate("A5", (), "!(true ~> false)", _t_a5),
        AxiomTemplate(
            "A6",
            (("phi", "formula"), ("psi", "formula")),
            "phi -> (psi <-> (phi ~> psi))",
            _t_a6,
        ),
        AxiomTemplate(
            "A7",
            (("phi", "formula"), ("psi1", "formula"), ("psi2", "formula")),
            "(phi ~> psi1 | psi2) -> ((phi ~> psi1) | (phi ~> psi2))",
            _t_a7,
        ),
        AxiomTemplate("V1", (("var", "name"),), "X=x1 | ... | X=xk", _t_v1),
        AxiomTemplate(
            "V2",
            (("var", "name"), ("val", "value"), ("other", "value")),
            "X=x -> !(X=x')",
            _t_v2,
        ),
        AxiomTemplate(
            "V3",
            (("assign", "assign"),),
            "!(X1=x1 & ... & Xk=xk ~> false)",
            _t_v3,
        ),
    ]
}


def _check_arg_kind(schema: str, name: str, kind: str, value) -> None:
    ok = True
    if kind == "formula":
        ok = isinstance(value, Formula)
    elif kind == "name":
        ok = isinstance(value, str)
    elif kind == "value":
        ok = isinstance(value, (int, str))
    elif kind == "assign":
        ok = isinstance(value, dict) and all(isinstance(k, str) for k in value)
    if not ok:
        raise BadSubstitution(f"{schema}: argument {name!r} has the wrong kind")


def instantiate_axiom(schema: str, args: dict, vocab: dict | None = None) -> Formula:
    """Build the schema instance named by args, enforcing side conditions."""
    t = TEMPLATES.get(schema)
    if t is None:
        raise BadSubstitution(f"no proof template for {schema!r}")
    expected = [n for n, _ in t.params]
    if set(args) != set(expected):
        raise BadSubstitution(
            f"{schema} takes arguments {expected}, got {sorted(args)}"
        )
    for name, kind in t.params:
        _check_arg_kind(schema, name, kind, args[name])
        if kind != "formula" and vocab is None:
            raise BadSubstitution(f"{schema} needs a script signature")
    return t.build(args, vocab)


# --- checking ---


def _cited(script: ProofScript, current: int, n) -> Formula:
    """Formula of the 1-based line n, which must precede current (0-based)."""
    if not isinstance(n, int) or n < 1 or n > current:
        raise ForwardReference(
            f"line {current + 1} cites line {n!r}, which does not precede it"
        )
    return script.lines[n - 1].formula


def _check(base: AxiomBase, script: ProofScript, i: int) -> None:
    line = script.lines[i]
    by = line.by
    if isinstance(by, AxiomInstance):
        if by.schema == "A0":
            raise BadSubstitution("tautologies are claimed with the taut kind")
        if by.schema not in TEMPLATES:
            raise BadSubstitution(f"no proof template for {by.schema!r}")
        if by.schema not in base.axioms:
            raise SchemaDisabled(f"{by.schema} is not in the active base")
        built = instantiate_axiom(by.schema, by.args, script.signature)
        if built != line.formula:
            raise BadSubstitution(
                f"line is not the {by.schema} instance {fmt(built)}"
            )
    elif isinstance(by, TautologyInstance):
        if not is_tautology(line.formula):
            raise RuleMismatch("not a tautology over its opaque letters")
    elif isinstance(by, MP):
        premise = _cited(script, i, by.i)
        imp = _cited(script, i, by.j)
        if not isinstance(imp, Implies):
            raise RuleMismatch(f"line {by.j} is not an implication")
        if imp.left != premise:
            raise RuleMismatch(
                f"line {by.j} does not have line {by.i} as its premise"
            )
        if imp.right != line.formula:
            raise RuleMismatch("line is not the conclusion of the cited implication")
    elif isinstance(by, RA1):
        if "RA1" not in base.rules:
            raise SchemaDisabled("RA1 is not in the active base")
        cited = _cited(script, i, by.i)
        if not isinstance(cited, Iff):
            raise RuleMismatch(f"line {by.i} is not a biconditional")
        f = line.formula
        if not (
            isinstance(f, Implies)
            and isinstance(f.left, Cf)
            and isinstance(f.right, Cf)
            and f.left.ant == cited.left
            and f.right.ant == cited.right
            and f.left.con == f.right.con
        ):
            raise RuleMismatch(
                "line must rewrite the antecedent along the cited biconditional"
            )
    elif isinstance(by, RA2):
        if "RA2" not in base.rules:
            raise SchemaDisabled("RA2 is not in the active base")
        cited = _cited(script, i, by.i)
        if not isinstance(cited, Implies):
            raise RuleMismatch(f"line {by.i} is not an implication")
        f = line.formula
        if not (
            isinstance(f, Implies)
            and isinstance(f.left, Cf)
            and isinstance(f.right, Cf)
            and f.left.ant == f.right.ant
            and f.left.con == cited.left
            and f.right.con == cited.right
        ):
            raise RuleMismatch(
                "line must rewrite the consequent along the cited implication"
            )
    else:
        raise RuleMismatch(f"unknown justification {by!r}")


def check_line(base: AxiomBase, script: ProofScript, i: int) -> Violation | None:
    """Check the 0-based line i; None when it is in order."""
    try:
        _check(base, script, i)
    except ProofError as err:
        return Violation(type(err).__name__, str(err))
    return None


def check_proof(base: AxiomBase, script: ProofScript):
    """Walk the script; Verified(conclusion) or FirstFailure(line, violation).

    Reported line numbers are 1-based, matching the serialized form."""
    if not script.lines:
        raise ValueError("empty script has no conclusion")
    for i in range(len(script.lines)):
        v = check_line(base, script, i)
        if v is not None:
            return FirstFailure(i + 1, v)
    return Verified(script.lines[-1].formula)


# --- serialization ---


def _args_to_json(schema: str, args: dict) -> dict:
    out = {}
    for name, kind in TEMPLATES[schema].params:
        v = args[name]
        out[name] = fmt(v) if kind == "formula" else v
    return out


def _args_from_json(schema: str, raw: dict) -> dict:
    t = TEMPLATES.get(schema)
    if t is None:
        raise BadSubstitution(f"no proof template for {schema!r}")
    if not isinstance(raw, dict):
        raise BadSubstitution(f"{schema}: arguments must be an object")
    out = {}
    for name, kind in t.params:
        if name not in raw:
            raise BadSubstitution(f"{schema}: missing argument {name!r}")
        out[name] = parse(raw[name]) if kind == "formula" else raw[name]
    extra = set(raw) - {n for n, _ in t.params}
    if extra:
        raise BadSubstitution(f"{schema}: unknown arguments {sorted(extra)}")
    return out


def _by_to_json(by) -> dict:
    if isinstance(by, AxiomInstance):
        return {
            "kind": "axiom",
            "schema": by.schema,
            "args": _args_to_json(by.schema, by.args),
        }
    if isinstance(by, MP):
        return {"kind": "mp", "i": by.i, "j": by.j}
    if isinstance(by, RA1):
        return {"kind": "ra1", "i": by.i}
    if isinstance(by, RA2):
        return {"kind": "ra2", "i": by.i}
    if isinstance(by, TautologyInstance):
        return {"kind": "taut"}
    raise TypeError(f"unknown justification {by!r}")


def _by_from_json(raw: dict):
    kind = raw.get("kind")
    if kind == "axiom":
        schema = raw.get("schema", "")
        return AxiomInstance(schema, _args_from_json(schema, raw.get("args", {})))
    if kind == "mp":
        return MP(raw["i"], raw["j"])
    if kind == "ra1":
        return RA1(raw["i"])
    if kind == "ra2":
        return RA2(raw["i"])
    if kind == "taut":
        return TautologyInstance()
    raise ValueError(f"unknown justification kind {kind!r}")


def script_to_json(base: AxiomBase, script: ProofScript) -> dict:
    out = {
        "base": {
            "axioms": sorted(base.axioms),
            "rules": sorted(base.rules),
        },
        "lines": [
            {"formula": fmt(line.formula), "by": _by_to_json(line.by)}
            for line in script.lines
        ],
    }
    if script.signature is not None:
        out["signature"] = {v: list(vals) for v, vals in script.signature.items()}
    return out


def script_from_json(data: dict):
    """Parse a serialized proof; returns (base, script)."""
    raw_base = data.get("base", {})
    base = AxiomBase(
        frozenset(raw_base.get("axioms", ())),
        frozenset(raw_base.get("rules", ())),
    )
    signature = None
    if "signature" in data:
        signature = {v: tuple(vals) for v, vals in data["signature"].items()}
    lines = tuple(
        ProofLine(parse(raw["formula"]), _by_from_json(raw["by"]))
        for raw in data.get("lines", ())
    )
    return base, ProofScript(lines, signature)
