"""Translations between the two semantics.

causal_to_structure turns a causal model with a dependence order into a
closest-world structure: one world per total assignment, worlds grouped by
context, and comparison orders arranged so that the nearest world forcing an
intervention is exactly the world the pinned equations would produce.
structure_to_causal goes the other way, reading equation tables off nested
intervention queries at a chosen world.  certify_equivalence replays a
formula corpus on both sides and reports the first disagreement, which is
how the tests establish that the two translations preserve truth.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .formula import And, Atom, Formula, Not, Or, conj, fmt, prefix
from .causal_eval import eval_causal
from .models import (
    CausalModel, Signature, Value, intervene, is_recursive, make_model,
    solutions, table_from_fn,
)
from .structures import (
    CounterfactualStructure, chain_order, classify_structure, closest, eval_cf,
    make_structure,
)


class NotRecursive(ValueError):
    pass


class NotRecursiveStructure(ValueError):
    pass


@dataclass(frozen=True)
class WorldNaming:
    """Names the worlds of a translated structure.

    of_context maps a context value tuple to its equation-solution world;
    of_intervention maps (context tuple, sorted intervention items) to the
    world holding that intervention's solution.  The empty intervention maps
    to the context's own world.
    """

    exogenous: tuple[str, ...]
    endogenous: tuple[str, ...]
    of_context: dict[tuple, str]
    of_intervention: dict[tuple, str]

    def world_of(self, context: dict[str, Value], intervention=None) -> str:
        u = tuple(context[x] for x in self.exogenous)
        if not intervention:
            return self.of_context[u]
        return self.of_intervention[(u, tuple(sorted(intervention.items())))]


def _wid(u: tuple, v: tuple) -> str:
    return ",".join(str(x) for x in u) + "|" + ",".join(str(x) for x in v)


def causal_to_structure(model: CausalModel) -> tuple[CounterfactualStructure, WorldNaming]:
    """Build the closest-world counterpart of a model with a dependence order.

    Worlds are all assignments to every variable; each world sees exactly the
    worlds of its own context.  At a context's solution world the order is a
    topological sort of the forced-before constraints: the solution under any
    intervention sits strictly before every other world matching that
    intervention.  At any other world, worlds are ordered by how much of the
    starting world they rewrite, so the nearest world matching an
    intervention just patches those values in.  Both properties are verified
    after construction and violations raise rather than mis-translate.
    """
    wit = is_recursive(model)
    if not wit:
        raise NotRecursive(f"equations admit no dependence order (cycle {wit.cycle})")
    sig = model.signature
    endo_space = list(itertools.product(*(sig.range[x] for x in sig.endogenous)))

    worlds: list[str] = []
    assign: dict[str, dict[str, Value]] = {}
    order: dict[str, set] = {}
    of_context: dict[tuple, str] = {}
    of_intervention: dict[tuple, str] = {}

    for context in sig.contexts():
        u = tuple(context[x] for x in sig.exogenous)
        members = {v: _wid(u, v) for v in endo_space}
        worlds.extend(members[v] for v in endo_space)
        for v in endo_space:
            assign[members[v]] = dict(zip(sig.endogenous, v))

        targets: dict[tuple, tuple] = {}
        for iv in sig.interventions():
            sols = solutions(intervene(model, iv), context)
            if len(sols) != 1:
                raise NotRecursive("intervened equations failed to force a unique solution")
            targets[tuple(sorted(iv.items()))] = tuple(sols[0][x] for x in sig.endogenous)
        hub = members[targets[()]]
        of_context[u] = hub
        for items, v in targets.items():
            of_intervention[(u, items)] = members[v]

        # Hub world: linearize "solution of iv comes before every other
        # iv-matching world" by Kahn's algorithm with sorted tie-breaking.
        after: dict[str, set] = {w: set() for w in members.values()}
        for items, tv in targets.items():
            iv = dict(items)
            for v in endo_space:
                if v != tv and all(dict(zip(sig.endogenous, v))[x] == val for x, val in iv.items()):
                    after[members[tv]].add(members[v])
        indeg = {w: 0 for w in members.values()}
        for w, succs in after.items():
            for s in succs:
                indeg[s] += 1
        ready = sorted(w for w, d in indeg.items() if d == 0)
        seq: list[str] = []
        while ready:
            w = ready.pop(0)
            seq.append(w)
            grew = False
            for s in after[w]:
                indeg[s] -= 1
                if indeg[s] == 0:
                    ready.append(s)
                    grew = True
            if grew:
                ready.sort()
        if len(seq) != len(members):
            raise RuntimeError("forced-before constraints form a cycle; translation bug")
        order[hub] = chain_order(seq)

        # Other worlds: sort by which variables get rewritten, fewest first.
        for v in endo_space:
            w = members[v]
            if w == hub:
                continue

            def rewrite_key(v2):
                diff = [i for i, x in enumerate(sig.endogenous) if v2[i] != v[i]]
                idx = tuple(sig.range[x].index(v2[i]) for i, x in enumerate(sig.endogenous))
                return (len(diff), tuple(diff), idx)

            order[w] = chain_order(members[v2] for v2 in sorted(endo_space, key=rewrite_key))

    ranges = {x: sig.range[x] for x in sig.endogenous}
    struct = make_structure(worlds, assign, order, ranges)

    for context in sig.contexts():
        u = tuple(context[x] for x in sig.exogenous)
        for iv in sig.interventions():
            items = tuple(sorted(iv.items()))
            want = conj([Atom(x, val) for x, val in items])
            for v in endo_space:
                w = _wid(u, v)
                if w == of_context[u]:
                    expect = of_intervention[(u, items)]
                else:
                    patched = tuple(iv.get(x, val) for x, val in zip(sig.endogenous, v))
                    expect = _wid(u, patched)
                got = closest(struct, w, want)
                if got != {expect}:
                    raise RuntimeError(
                        f"order completion broke the nearest-world property at {w} for {iv}")

    naming = WorldNaming(sig.exogenous, sig.endogenous, of_context, of_intervention)
    return struct, naming


def structure_to_causal(struct: CounterfactualStructure, w: str,
                        per_world_contexts: bool = False) -> CausalModel:
    """Read a causal model off a structure at world w.

    The structure must be recursive: every world admits a variable order
    with no back-effect.  Only the order at w matters for the tables, since
    every counterfactual in the construction is read at w.  The first
    variable's equation is the constant it takes at w; each later variable's
    equation answers, for given earlier-variable values, what the nearest
    world forcing those values says.  Later variables and the context are
    ignored, so with the default single context the model is
    context-independent.  With per_world_contexts, each world of the
    structure gets its own context and contributes its own tables; that
    variant needs one order that works at every world, because the model has
    a single variable order to share.
    """
    cls = classify_structure(struct)
    if not cls.recursive:
        raise NotRecursiveStructure("some world admits no variable order")
    if w not in struct.order:
        raise ValueError(f"unknown world {w!r}")
    if per_world_contexts:
        if cls.uniform_order is None:
            raise NotRecursiveStructure("no single variable order works at every world")
        vorder = cls.uniform_order
    else:
        vorder = cls.witness_orders[w]

    exo = "U"
    while exo in struct.ranges:
        exo += "0"
    if per_world_contexts:
        exo_range = tuple(range(len(struct.worlds)))
        world_of_ctx = {i: struct.worlds[i] for i in exo_range}
    else:
        exo_range = (0,)
        world_of_ctx = {0: w}
    sig = Signature(
        exogenous=(exo,),
        endogenous=tuple(vorder),
        range={exo: exo_range, **{x: struct.ranges[x] for x in vorder}},
    )

    def fn_for(k):
        var = vorder[k]

        def fn(env):
            base = world_of_ctx[env[exo]]
            ant = [(vorder[i], env[vorder[i]]) for i in range(k)]
            for val in struct.ranges[var]:
                if eval_cf(struct, base, prefix(ant, Atom(var, val))):
                    return val
            raise RuntimeError(f"no value of {var} at the nearest world; translation bug")

        return fn

    tables = {vorder[k]: table_from_fn(sig, vorder[k], fn_for(k)) for k in range(len(vorder))}
    return make_model(sig, tables)


@dataclass(frozen=True)
class EquivalenceReport:
    agreed: bool
    formulas: int
    pairs: int
    disagreement: dict | None

    def __bool__(self) -> bool:
        return self.agreed


def certify_equivalence(model: CausalModel, struct: CounterfactualStructure,
                        pairing, corpus) -> EquivalenceReport:
    """Evaluate every corpus formula at every (context, world) pair on both
    sides; report the first disagreement if any.

    pairing is an iterable of (context dict, world id) pairs.
    """
    pairs = list(pairing)
    formulas = list(corpus)
    for f in formulas:
        for context, world in pairs:
            left = eval_causal(model, context, f)
            right = eval_cf(struct, world, f)
            if left != right:
                return EquivalenceReport(False, len(formulas), len(pairs), {
                    "formula": fmt(f),
                    "context": dict(context),
                    "world": world,
                    "causal": left,
                    "structure": right,
                })
    return EquivalenceReport(True, len(formulas), len(pairs), None)


def lprop_corpus(sig: Signature, combine: bool = True, limit: int | None = None):
    """Deterministic formula corpus: every prefixed atom, its negation, and
    (optionally) all pairwise conjunctions and disjunctions."""
    units: list[Formula] = []
    for iv in sig.interventions():
        items = sorted(iv.items())
        for x in sig.endogenous:
            for val in sig.range[x]:
                units.append(prefix(items, Atom(x, val)))
    out: list[Formula] = list(units)
    out.extend(Not(a) for a in units)
    if combine:
        for i, a in enumerate(units):
            for b in units[i + 1:]:
                out.append(And(a, b))
                out.append(Or(a, b))
    if limit is not None:
        out = out[:limit]
    return out
