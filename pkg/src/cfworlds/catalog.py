"""Named example models and structures shared by the tests, the shipped
fixtures, and the demonstration subcommand.

tstar is the three-variable cyclic model whose equations have exactly one
solution under every intervention yet admit no dependence order; its
signature formula (tstar_formula) pins down all three single-variable
interventions at once.  example_c5 is the eight-world structure whose
comparison order at the all-zero world breaks the reversibility pattern.
branching is a five-world structure with two incomparable chains, where a
conditional with a disjunctive consequent cannot be split.
"""

from __future__ import annotations

import itertools

from .formula import Atom, Formula, conj, prefix
from .models import CausalModel, Signature, make_model, table_from_fn
from .structures import CounterfactualStructure, chain_order, make_structure


def tstar() -> CausalModel:
    sig = Signature(
        exogenous=("U",),
        endogenous=("X1", "X2", "X3"),
        range={"U": (0,), "X1": (0, 1), "X2": (0, 1), "X3": (0, 1)},
    )
    tables = {
        "X1": table_from_fn(sig, "X1", lambda e: 1 if (e["X2"], e["X3"]) == (0, 1) else 0),
        "X2": table_from_fn(sig, "X2", lambda e: 1 if (e["X1"], e["X3"]) == (1, 0) else 0),
        "X3": table_from_fn(sig, "X3", lambda e: 1 if (e["X1"], e["X2"]) == (0, 1) else 0),
    }
    return make_model(sig, tables)


def tstar_formula() -> Formula:
    """After forcing any one variable to 1, the other two land on the values
    the tstar equations dictate.  True at (tstar, U=0); false at every world
    of every full acceptable structure."""
    return conj([
        prefix([("X1", 1)], conj([Atom("X2", 1), Atom("X3", 0)])),
        prefix([("X2", 1)], conj([Atom("X3", 1), Atom("X1", 0)])),
        prefix([("X3", 1)], conj([Atom("X1", 1), Atom("X2", 0)])),
    ])


def forest_fire() -> CausalModel:
    """Fire breaks out iff lightning strikes or the match is lit; both causes
    are read off one exogenous variable (bit 0 lightning, bit 1 match)."""
    sig = Signature(
        exogenous=("E",),
        endogenous=("L", "ML", "F"),
        range={"E": (0, 1, 2, 3), "L": (0, 1), "ML": (0, 1), "F": (0, 1)},
    )
    tables = {
        "L": table_from_fn(sig, "L", lambda e: e["E"] & 1),
        "ML": table_from_fn(sig, "ML", lambda e: (e["E"] >> 1) & 1),
        "F": table_from_fn(sig, "F", lambda e: max(e["L"], e["ML"])),
    }
    return make_model(sig, tables)


def example_c5() -> CounterfactualStructure:
    """One world per assignment to three binary variables.  Seen from 000 the
    closest change is 100, then 111, then the rest in numeric order, which
    makes forcing X1 alone behave unlike forcing X1 via the other two.  Every
    other world uses the plain numeric order starting from itself."""
    bits = list(itertools.product((0, 1), repeat=3))
    wid = lambda b: "".join(str(x) for x in b)
    worlds = [wid(b) for b in bits]
    assign = {wid(b): {"X1": b[0], "X2": b[1], "X3": b[2]} for b in bits}
    near = ["000", "100", "111"]
    order = {}
    for w in worlds:
        if w == "000":
            order[w] = chain_order(near + sorted(x for x in worlds if x not in near))
        else:
            order[w] = chain_order([w] + sorted(x for x in worlds if x != w))
    ranges = {"X1": (0, 1), "X2": (0, 1), "X3": (0, 1)}
    return make_structure(worlds, assign, order, ranges)


def branching() -> CounterfactualStructure:
    """Five worlds over p1, p2, q.  Seen from 000, two q-worlds (one making
    p1 true, one making p2 true) are nearest and incomparable, and each
    farther not-q world is ranked only behind the OTHER branch's near world.
    So among all (p1 or p2)-worlds only the two near ones are minimal, but
    among the p1-worlds alone both p1-worlds are minimal (the far one's only
    dominator makes p2, not p1), and likewise for p2.  A conditional can
    then promise a disjunction without promising either disjunct, and can
    promise q from the disjunction while promising it from neither disjunct
    alone."""
    rows = {
        "000": (0, 0, 0),
        "101": (1, 0, 1),
        "011": (0, 1, 1),
        "100": (1, 0, 0),
        "010": (0, 1, 0),
    }
    assign = {w: {"p1": a, "p2": b, "q": c} for w, (a, b, c) in rows.items()}
    order = {w: {(w, w)} for w in rows}
    order["000"] = (
        {(w, w) for w in rows}
        | {("000", u) for u in rows}
        | {("101", "010"), ("011", "100")}
    )
    ranges = {"p1": (0, 1), "p2": (0, 1), "q": (0, 1)}
    return make_structure(list(rows), assign, order, ranges)
