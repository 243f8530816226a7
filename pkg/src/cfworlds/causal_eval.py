"""Evaluation of intervention formulas in causal models, and the rewriter
that pushes prefixes down to single atoms.

A maximal prefix-free subformula under (or outside) a prefix is checked
against each solution as a whole, so a disjunction inside one prefix is not
distributed over separate prefixed formulas; the two readings differ as soon
as equations admit several solutions.
"""

from __future__ import annotations

from .formula import (
    And, Atom, Cf, Falsity, Formula, Iff, Implies, LangClass, Not, Or, Truth,
    bindings_of, classify, prefix, well_formed, _is_propositional,
)
from .models import CausalModel, Value, intervene, solutions


class LanguageTooRich(ValueError):
    pass


class IllFormed(ValueError):
    pass


def sat(assignment: dict[str, Value], f: Formula) -> bool:
    """Classical truth of a prefix-free formula in one total assignment."""
    if isinstance(f, Atom):
        return assignment[f.var] == f.value
    if isinstance(f, Truth):
        return True
    if isinstance(f, Falsity):
        return False
    if isinstance(f, Not):
        return not sat(assignment, f.sub)
    if isinstance(f, And):
        return sat(assignment, f.left) and sat(assignment, f.right)
    if isinstance(f, Or):
        return sat(assignment, f.left) or sat(assignment, f.right)
    if isinstance(f, Implies):
        return (not sat(assignment, f.left)) or sat(assignment, f.right)
    if isinstance(f, Iff):
        return sat(assignment, f.left) == sat(assignment, f.right)
    raise LanguageTooRich(f"not prefix-free: {f}")


def eval_causal(model: CausalModel, context: dict[str, Value], f: Formula) -> bool:
    """Truth of f in the model at the context.

    Only intervention prefixes are meaningful here, so any conditional not in
    prefix form is rejected.  A prefixed formula holds when every solution of
    the pinned equations satisfies the body, vacuously so with no solutions.
    """
    if classify(f) > LangClass.LEX:
        raise LanguageTooRich("conditionals in causal models must be intervention prefixes")
    problems = well_formed(f, model.signature)
    if problems:
        raise IllFormed(problems[0])
    cache: dict[frozenset, list[dict[str, Value]]] = {}

    def solve(bindings: frozenset) -> list[dict[str, Value]]:
        if bindings not in cache:
            cache[bindings] = solutions(intervene(model, dict(bindings)), context)
        return cache[bindings]

    def ev(g: Formula) -> bool:
        if _is_propositional(g):
            return all(sat(s, g) for s in solve(frozenset()))
        if isinstance(g, Cf):
            bindings = frozenset(bindings_of(g.ant))
            return all(sat(s, g.con) for s in solve(bindings))
        if isinstance(g, Not):
            return not ev(g.sub)
        if isinstance(g, And):
            return ev(g.left) and ev(g.right)
        if isinstance(g, Or):
            return ev(g.left) or ev(g.right)
        if isinstance(g, Implies):
            return (not ev(g.left)) or ev(g.right)
        if isinstance(g, Iff):
            return ev(g.left) == ev(g.right)
        raise LanguageTooRich(f"cannot evaluate {g}")

    return ev(f)


def to_lprop(f: Formula) -> Formula:
    """Push every prefix through its body until only single atoms remain in
    scope.  The rewrite relies on equations having unique solutions: with
    several (or no) solutions the result can disagree with the input."""
    if classify(f) > LangClass.LEX:
        raise LanguageTooRich("conditionals must be intervention prefixes")

    def push(bindings, body: Formula) -> Formula:
        if isinstance(body, Atom):
            return prefix(bindings, body)
        if isinstance(body, Truth):
            return Truth()
        if isinstance(body, Falsity):
            return Falsity()
        if isinstance(body, Not):
            return Not(push(bindings, body.sub))
        if isinstance(body, And):
            return And(push(bindings, body.left), push(bindings, body.right))
        if isinstance(body, Or):
            return Or(push(bindings, body.left), push(bindings, body.right))
        if isinstance(body, Implies):
            return push(bindings, Or(Not(body.left), body.right))
        if isinstance(body, Iff):
            both = And(body.left, body.right)
            neither = And(Not(body.left), Not(body.right))
            return push(bindings, Or(both, neither))
        raise LanguageTooRich(f"cannot push a prefix into {body}")

    def walk(g: Formula) -> Formula:
        if isinstance(g, Cf):
            return push(bindings_of(g.ant), g.con)
        if isinstance(g, Not):
            return Not(walk(g.sub))
        if isinstance(g, And):
            return And(walk(g.left), walk(g.right))
        if isinstance(g, Or):
            return Or(walk(g.left), walk(g.right))
        if isinstance(g, Implies):
            return Implies(walk(g.left), walk(g.right))
        if isinstance(g, Iff):
            return Iff(walk(g.left), walk(g.right))
        return g

    return walk(f)
