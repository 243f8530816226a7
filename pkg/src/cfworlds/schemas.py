"""Axiom schema library with bounded, deterministic instantiation.

Each schema couples a readable template string with a builder that expands
the metavariables over a signature or vocabulary within declared bounds.
Side conditions (value distinctness, variable freshness) are enforced during
building, so every returned formula is a genuine instance.  Instance lists
are deterministic: same inputs, same order.

Schemas over intervention prefixes use the sugar form of the conditional and
so can be evaluated both on causal models and, read as closest-world
conditionals over assignment atoms, on counterfactual structures.  Schemas
with arbitrary formulas on the left of the conditional use the raw form and
make sense only on structures.
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
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    conj,
    disj,
    prefix,
)
from .models import Signature


class BoundsTooLarge(ValueError):
    """Instance count (or metavariable pool) exceeds the configured cap."""


@dataclass(frozen=True)
class Bounds:
    """Instantiation bounds.

    depth and letters shape the formula pool used for formula metavariables;
    max_prefix caps intervention vector size (None means no cap); cap bounds
    the number of instances one schema may produce.
    """

    depth: int = 1
    letters: tuple = ("p", "q")
    max_prefix: int | None = None
    cap: int = 100_000


DEFAULT_BOUNDS = Bounds()


def formula_pool(bounds: Bounds) -> tuple[Formula, ...]:
    """Pool for formula metavariables: the letters as value-1 atoms, closed
    depth times under negation and pairwise and/or, then the constants."""
    pool: list[Formula] = [Atom(x, 1) for x in bounds.letters]
    for _ in range(bounds.depth):
        layer: list[Formula] = [Not(a) for a in pool]
        layer.extend(And(a, b) for a, b in itertools.combinations(pool, 2))
        layer.extend(Or(a, b) for a, b in itertools.combinations(pool, 2))
        seen = set(pool)
        for f in layer:
            if f not in seen:
                pool.append(f)
                seen.add(f)
        if len(pool) > 1000:
            raise BoundsTooLarge(f"formula pool exceeds 1000 at depth {bounds.depth}")
    pool.append(TRUE)
    pool.append(FALSE)
    return tuple(pool)


def _vocab(sig) -> dict:
    """Variable ranges from either a signature or a plain dict."""
    if isinstance(sig, Signature):
        return {x: sig.range[x] for x in sig.endogenous}
    if isinstance(sig, dict):
        return dict(sig)
    raise TypeError("expected a Signature or a {var: values} dict")


def _interventions(sig: Signature, bounds: Bounds):
    """Interventions as binding tuples in variable order, empty first."""
    out = []
    for iv in sig.interventions(bounds.max_prefix):
        out.append(tuple((v, iv[v]) for v in sig.endogenous if v in iv))
    return out


def _box(bindings, body: Formula) -> Formula:
    """[bindings]body; the empty prefix stays explicit so that the whole
    formula still quantifies over solutions (or ranked worlds)."""
    if not bindings:
        return Cf(TRUE, body, sugar=True)
    return prefix(list(bindings), body)


def _dia(bindings, body: Formula) -> Formula:
    return Not(_box(bindings, Not(body)))


# Canonical tautology shapes used for the two tautology schemas.
_TAUT_SHAPES: tuple[tuple[int, Callable], ...] = (
    (1, lambda p: Or(p, Not(p))),
    (1, lambda p: Implies(p, p)),
    (1, lambda p: Not(And(p, Not(p)))),
    (2, lambda p, q: Implies(p, Implies(q, p))),
    (2, lambda p, q: Implies(And(p, q), p)),
    (2, lambda p, q: Implies(And(Implies(p, q), p), q)),
)


def _tautology_instances(pool):
    for arity, shape in _TAUT_SHAPES:
        for args in itertools.product(pool, repeat=arity):
            yield shape(*args)


# --- builders, one per schema ---


def _c0(sig, bounds):
    atoms = [Atom(x, v) for x in sig.endogenous for v in sig.range[x]]
    pool: list[Formula] = list(atoms)
    for y, yv in [(x, v) for x in sig.endogenous for v in sig.range[x]]:
        for a in atoms:
            if a.var != y:
                pool.append(prefix([(y, yv)], a))
    pool.append(TRUE)
    pool.append(FALSE)
    yield from _tautology_instances(pool)


def _c1(sig, bounds):
    for iv in _interventions(sig, bounds):
        for x in sig.endogenous:
            for xv, xw in itertools.permutations(sig.range[x], 2):
                yield Implies(_box(iv, Atom(x, xv)), Not(_box(iv, Atom(x, xw))))


def _c2(sig, bounds):
    for iv in _interventions(sig, bounds):
        for x in sig.endogenous:
            yield disj([_box(iv, Atom(x, v)) for v in sig.range[x]])


def _c3(sig, bounds):
    for iv in _interventions(sig, bounds):
        bound = {v for v, _ in iv}
        for w_var in sig.endogenous:
            if w_var in bound:
                continue
            for wv in sig.range[w_var]:
                for y_var in sig.endogenous:
                    for yv in sig.range[y_var]:
                        ante = And(
                            _box(iv, Atom(w_var, wv)), _box(iv, Atom(y_var, yv))
                        )
                        longer = iv + ((w_var, wv),)
                        yield Implies(ante, _box(longer, Atom(y_var, yv)))


def _c4(sig, bounds):
    for x in sig.endogenous:
        for xv in sig.range[x]:
            for rest in _interventions(sig, bounds):
                if any(v == x for v, _ in rest):
                    continue
                yield _box(((x, xv),) + rest, Atom(x, xv))


def _c5(sig, bounds):
    for iv in _interventions(sig, bounds):
        bound = {v for v, _ in iv}
        free = [v for v in sig.endogenous if v not in bound]
        for w_var, y_var in itertools.permutations(free, 2):
            for wv in sig.range[w_var]:
                for yv in sig.range[y_var]:
                    a1 = _box(iv + ((w_var, wv),), Atom(y_var, yv))
                    a2 = _box(iv + ((y_var, yv),), Atom(w_var, wv))
                    yield Implies(And(a1, a2), _box(iv, Atom(y_var, yv)))


def _gr(sig, bounds):
    for iv in _interventions(sig, bounds):
        bound = {v for v, _ in iv}
        free = [v for v in sig.endogenous if v not in bound]
        for w_var, y_var in itertools.permutations(free, 2):
            zvars = [v for v in free if v not in (w_var, y_var)]
            for wv in sig.range[w_var]:
                for yv in sig.range[y_var]:
                    for zvals in itertools.product(*(sig.range[z] for z in zvars)):
                        z = [Atom(zv, zx) for zv, zx in zip(zvars, zvals)]
                        a1 = _dia(iv + ((y_var, yv),), conj([Atom(w_var, wv)] + z))
                        a2 = _dia(iv + ((w_var, wv),), conj([Atom(y_var, yv)] + z))
                        con = _dia(iv, conj([Atom(w_var, wv), Atom(y_var, yv)] + z))
                        yield Implies(And(a1, a2), con)


def _a0(sig, bounds):
    yield from _tautology_instances(formula_pool(bounds))


def _a1(sig, bounds):
    for f in formula_pool(bounds):
        yield Cf(f, f, sugar=False)


def _a2(sig, bounds):
    pool = formula_pool(bounds)
    for f, g1, g2 in itertools.product(pool, repeat=3):
        yield Implies(
            And(Cf(f, g1, sugar=False), Cf(f, g2, sugar=False)),
            Cf(f, And(g1, g2), sugar=False),
        )


def _a3(sig, bounds):
    pool = formula_pool(bounds)
    for f1, f2, g in itertools.product(pool, repeat=3):
        yield Implies(
            And(Cf(f1, f2, sugar=False), Cf(f1, g, sugar=False)),
            Cf(And(f1, f2), g, sugar=False),
        )


def _a4(sig, bounds):
    pool = formula_pool(bounds)
    for f1, f2, g in itertools.product(pool, repeat=3):
        yield Implies(
            And(Cf(f1, g, sugar=False), Cf(f2, g, sugar=False)),
            Cf(Or(f1, f2), g, sugar=False),
        )


def _a5(sig, bounds):
    yield Not(Cf(TRUE, FALSE, sugar=False))


def _a6(sig, bounds):
    pool = formula_pool(bounds)
    for f, g in itertools.product(pool, repeat=2):
        yield Implies(f, Iff(g, Cf(f, g, sugar=False)))


def _a7(sig, bounds):
    pool = formula_pool(bounds)
    for f, g1, g2 in itertools.product(pool, repeat=3):
        yield Implies(
            Cf(f, Or(g1, g2), sugar=False),
            Or(Cf(f, g1, sugar=False), Cf(f, g2, sugar=False)),
        )


def _d4(sig, bounds):
    pool = formula_pool(bounds)
    for f1, f2, g in itertools.product(pool, repeat=3):
        both = Or(f1, f2)
        yield Or(
            Or(Cf(both, f1, sugar=False), Cf(both, f2, sugar=False)),
            Iff(
                Cf(both, g, sugar=False),
                Or(Cf(f1, g, sugar=False), Cf(f2, g, sugar=False)),
            ),
        )


def _equiv_pairs(bounds):
    """A few tautological equivalences phi <-> phi', both directions."""
    letters = [Atom(x, 1) for x in bounds.letters[:2]]
    p = letters[0]
    q = letters[1] if len(letters) > 1 else letters[0]
    pairs = [
        (p, Not(Not(p))),
        (And(p, q), And(q, p)),
        (Or(p, q), Or(q, p)),
        (p, And(p, Or(p, q))),
        (p, Or(p, And(p, q))),
    ]
    for a, b in pairs:
        yield a, b
        yield b, a


def _ra1(sig, bounds):
    pool = formula_pool(bounds)
    for a, b in _equiv_pairs(bounds):
        for g in pool:
            yield Implies(Cf(a, g, sugar=False), Cf(b, g, sugar=False))


def _entail_pairs(bounds):
    """A few tautological entailments psi => psi'."""
    letters = [Atom(x, 1) for x in bounds.letters[:2]]
    p = letters[0]
    q = letters[1] if len(letters) > 1 else letters[0]
    return [
        (And(p, q), p),
        (And(p, q), q),
        (p, Or(p, q)),
        (q, Or(p, q)),
        (FALSE, p),
        (p, TRUE),
    ]


def _ra2(sig, bounds):
    pool = formula_pool(bounds)
    for a, b in _entail_pairs(bounds):
        for f in pool:
            yield Implies(Cf(f, a, sugar=False), Cf(f, b, sugar=False))


def _v1(sig, bounds):
    vocab = _vocab(sig)
    for x, values in vocab.items():
        yield disj([Atom(x, v) for v in values])


def _v2(sig, bounds):
    vocab = _vocab(sig)
    for x, values in vocab.items():
        for v, w in itertools.permutations(values, 2):
            yield Implies(Atom(x, v), Not(Atom(x, w)))


def _v3(sig, bounds):
    vocab = _vocab(sig)
    names = list(vocab)
    for k in range(1, len(names) + 1):
        for combo in itertools.combinations(names, k):
            for vals in itertools.product(*(vocab[x] for x in combo)):
                ante = conj([Atom(x, v) for x, v in zip(combo, vals)])
                yield Not(Cf(ante, FALSE, sugar=False))


@dataclass(frozen=True)
class Schema:
    """A named axiom template.  build yields instances within bounds; the
    template and side_conditions fields document the shape being expanded."""

    name: str
    side: str
    template: str
    side_conditions: tuple = ()
    build: Callable = field(default=None, compare=False, repr=False)


SCHEMAS: dict[str, Schema] = {
    s.name: s
    for s in [
        Schema("C0", "both", "any tautology over prefixed and plain atoms", (), _c0),
        Schema(
            "C1",
            "both",
            "[ivs](X=x) -> ![ivs](X=x')",
            ("x != x'",),
            _c1,
        ),
        Schema("C2", "both", "[ivs](X=x1) | ... | [ivs](X=xk)", (), _c2),
        Schema(
            "C3",
            "both",
            "([ivs](W=w) & [ivs](Y=y)) -> [ivs; W<-w](Y=y)",
            ("W not set by ivs",),
            _c3,
        ),
        Schema("C4", "both", "[X<-x; rest](X=x)", ("X not set by rest",), _c4),
        Schema(
            "C5",
            "both",
            "([ivs; W<-w](Y=y) & [ivs; Y<-y](W=w)) -> [ivs](Y=y)",
            ("Y != W", "W, Y not set by ivs"),
            _c5,
        ),
        Schema(
            "GR",
            "causal",
            "(<ivs; Y<-y>(W=w & Z=z) & <ivs; W<-w>(Y=y & Z=z)) -> <ivs>(W=w & Y=y & Z=z)",
            ("Y != W", "Z lists every variable not in ivs, W, Y"),
            _gr,
        ),
        Schema("A0", "structure", "any tautology over the formula pool", (), _a0),
        Schema("A1", "structure", "phi ~> phi", (), _a1),
        Schema(
            "A2",
            "structure",
            "((phi ~> psi1) & (phi ~> psi2)) -> (phi ~> psi1 & psi2)",
            (),
            _a2,
        ),
        Schema(
            "A3",
            "structure",
            "((phi1 ~> phi2) & (phi1 ~> psi)) -> (phi1 & phi2 ~> psi)",
            (),
            _a3,
        ),
        Schema(
            "A4",
            "structure",
            "((phi1 ~> psi) & (phi2 ~> psi)) -> (phi1 | phi2 ~> psi)",
            (),
            _a4,
        ),
        Schema("A5", "structure", "!(true ~> false)", (), _a5),
        Schema("A6", "structure", "phi -> (psi <-> (phi ~> psi))", (), _a6),
        Schema(
            "A7",
            "structure",
            "(phi ~> psi1 | psi2) -> ((phi ~> psi1) | (phi ~> psi2))",
            (),
            _a7,
        ),
        Schema(
            "D4",
            "structure",
            "(phi1 | phi2 ~> phi1) | (phi1 | phi2 ~> phi2) | "
            "((phi1 | phi2 ~> psi) <-> ((phi1 ~> psi) | (phi2 ~> psi)))",
            (),
            _d4,
        ),
        Schema(
            "RA1",
            "structure",
            "(phi ~> psi) -> (phi' ~> psi)",
            ("phi <-> phi' is a tautology",),
            _ra1,
        ),
        Schema(
            "RA2",
            "structure",
            "(phi ~> psi) -> (phi ~> psi')",
            ("psi -> psi' is a tautology",),
            _ra2,
        ),
        Schema("V1", "structure", "X=x1 | ... | X=xk", (), _v1),
        Schema(
            "V2",
            "structure",
            "X=x -> !(X=x')",
            ("x != x'",),
            _v2,
        ),
        Schema(
            "V3",
            "structure",
            "!(X1=x1 & ... & Xk=xk ~> false)",
            ("k >= 1", "the Xi are distinct variables"),
            _v3,
        ),
    ]
}

SCHEMA_ORDER = tuple(SCHEMAS)


def instantiate(schema, sig=None, bounds: Bounds | None = None) -> tuple[Formula, ...]:
    """All instances of the schema within bounds, deterministic order."""
    if isinstance(schema, str):
        schema = SCHEMAS[schema]
    if bounds is None:
        bounds = DEFAULT_BOUNDS
    out = []
    for f in schema.build(sig, bounds):
        out.append(f)
        if len(out) > bounds.cap:
            raise BoundsTooLarge(
                f"{schema.name}: more than {bounds.cap} instances at these bounds"
            )
    return tuple(out)
