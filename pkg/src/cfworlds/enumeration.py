"""Exhaustive populations of small models and structures.

The validity checks sweep every member of a class at a fixed small bound, so
this module enumerates them deterministically: every equation-table
combination on the causal side, and every combination of per-world
valuations and comparison orders on the structure side.  Structure
populations factor into independent per-world options; the option tables
are exposed so the array engine can expand index grids instead of looping
over structure objects one at a time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .models import CausalModel, Signature, in_Tun, is_recursive, make_model
from .structures import CounterfactualStructure, classify_structure

# ---------------------------------------------------------------------------
# Causal side.


def two_var_signature() -> Signature:
    return Signature(
        exogenous=("U",),
        endogenous=("X1", "X2"),
        range={"U": (0, 1), "X1": (0, 1), "X2": (0, 1)},
    )


def three_var_signature() -> Signature:
    return Signature(
        exogenous=("U",),
        endogenous=("X1", "X2", "X3"),
        range={"U": (0,), "X1": (0, 1), "X2": (0, 1), "X3": (0, 1)},
    )


def causal_count(sig: Signature) -> int:
    n = 1
    for x in sig.endogenous:
        rows = 1
        for v in sig.inputs_of(x):
            rows *= len(sig.range[v])
        n *= len(sig.range[x]) ** rows
    return n


def causal_models(sig: Signature):
    """Every model over sig, in a fixed order: each endogenous variable's
    table runs through all functions from its input space to its range."""
    per_var = []
    for x in sig.endogenous:
        rows = list(itertools.product(*(sig.range[v] for v in sig.inputs_of(x))))
        tables = [dict(zip(rows, outs))
                  for outs in itertools.product(sig.range[x], repeat=len(rows))]
        per_var.append(tables)
    for combo in itertools.product(*per_var):
        yield make_model(sig, dict(zip(sig.endogenous, combo)))


def causal_population(name: str, sig: Signature):
    """Members of T, Tun or Trec over sig, by filtering the full sweep."""
    for model in causal_models(sig):
        if name == "T":
            yield model
        elif name == "Tun":
            if in_Tun(model):
                yield model
        elif name == "Trec":
            if is_recursive(model):
                yield model
        else:
            raise ValueError(f"unknown causal class {name!r}")


def random_recursive_model(rng, sig: Signature) -> CausalModel:
    """Random model whose equations respect a random variable order: each
    table reads only earlier endogenous variables and the context."""
    vorder = list(sig.endogenous)
    rng.shuffle(vorder)
    seen: set[str] = set()
    tables = {}
    for x in vorder:
        allowed = tuple(v for v in sig.variables if v in seen or v in sig.exogenous)
        inputs = sig.inputs_of(x)
        fn_rows = list(itertools.product(*(sig.range[v] for v in allowed)))
        fn = {row: rng.choice(sig.range[x]) for row in fn_rows}
        table = {}
        for combo in itertools.product(*(sig.range[v] for v in inputs)):
            env = dict(zip(inputs, combo))
            key = tuple(env[v] for v in allowed)
            table[combo] = fn[key]
        tables[x] = table
        seen.add(x)
    return make_model(sig, tables)


# ---------------------------------------------------------------------------
# Structure side.  Populations share a fixed world id list; each world picks
# one "anchored order" (itself strictly first) and one valuation
# independently, so a population is a product of per-world option lists.


@dataclass(frozen=True)
class WorldOption:
    """One choice of comparison order for a single anchor world, as pairs
    over the shared world list."""

    pairs: frozenset


@lru_cache(maxsize=None)
def preorders(elems: tuple) -> tuple:
    """All reflexive transitive relations on elems, brute force."""
    cand = [(a, b) for a in elems for b in elems if a != b]
    out = []
    for bits in itertools.product((False, True), repeat=len(cand)):
        rel = {p for p, keep in zip(cand, bits) if keep}
        rel |= {(a, a) for a in elems}
        if all((a, d) in rel for (a, b) in rel for (c, d) in rel if b == c):
            out.append(frozenset(rel))
    return tuple(out)


@lru_cache(maxsize=None)
def anchored_orders(w: str, others: tuple, total: bool, require_all: bool) -> tuple:
    """Orders for anchor w over subsets of the remaining worlds.

    With require_all, w must see every other world (the shape fullness
    forces).  With total, the seen worlds are strictly chained.
    """
    subsets = [others] if require_all else [
        s for k in range(len(others) + 1) for s in itertools.combinations(others, k)
    ]
    out = []
    for s in subsets:
        if total:
            rels = []
            for perm in itertools.permutations(s):
                rel = {(a, a) for a in perm}
                rel.update((perm[i], perm[j]) for i in range(len(perm))
                           for j in range(i + 1, len(perm)))
                rels.append(frozenset(rel))
        else:
            rels = list(preorders(s))
        for rel in rels:
            pairs = set(rel)
            pairs.add((w, w))
            pairs.update((w, u) for u in s)
            out.append(WorldOption(frozenset(pairs)))
    return tuple(out)


GENERIC_WORLDS = ("w0", "w1", "w2")
GENERIC_VOCAB = {"p": (0, 1), "q": (0, 1)}
GENERIC_ATOMS = (("p", 1), ("q", 1))

ASSIGN_VOCAB = {"X1": (0, 1), "X2": (0, 1)}
FULL_WORLDS = ("00", "01", "10", "11")
FULL_ASSIGN = {w: {"X1": int(w[0]), "X2": int(w[1])} for w in FULL_WORLDS}


def generic_valuations() -> tuple:
    """Per-world truth options over the raw letters p and q."""
    opts = []
    for bits in itertools.product((0, 1), repeat=len(GENERIC_ATOMS)):
        opts.append(frozenset(a for a, keep in zip(GENERIC_ATOMS, bits) if keep))
    return tuple(opts)


def assignment_valuations() -> tuple:
    """Per-world total assignments over two binary variables, as atom sets."""
    opts = []
    for x1, x2 in itertools.product((0, 1), repeat=2):
        opts.append(frozenset({("X1", x1), ("X2", x2)}))
    return tuple(opts)


def _assemble(worlds, ranges, val_choice, order_choice) -> CounterfactualStructure:
    valuation = {w: val_choice[i] for i, w in enumerate(worlds)}
    order = {w: order_choice[i].pairs for i, w in enumerate(worlds)}
    return CounterfactualStructure(tuple(worlds), dict(ranges), valuation, order)


def _product_population(worlds, ranges, val_options, order_options):
    val_space = itertools.product(val_options, repeat=len(worlds))
    orders_per_world = [order_options[w] for w in worlds]
    for vals in val_space:
        for orders in itertools.product(*orders_per_world):
            yield _assemble(worlds, ranges, vals, orders)


def structures_generic(total: bool):
    """The class of all structures (or all with total orders) over two raw
    letters and three worlds."""
    worlds = GENERIC_WORLDS
    order_options = {
        w: anchored_orders(w, tuple(x for x in worlds if x != w), total, False)
        for w in worlds
    }
    return _product_population(worlds, GENERIC_VOCAB, generic_valuations(), order_options)


def structures_acceptable(total: bool):
    """Acceptable structures: same shapes, assignment valuations."""
    worlds = GENERIC_WORLDS
    order_options = {
        w: anchored_orders(w, tuple(x for x in worlds if x != w), total, False)
        for w in worlds
    }
    return _product_population(worlds, ASSIGN_VOCAB, assignment_valuations(), order_options)


def structures_full(total: bool):
    """Full acceptable structures: one world per assignment, every world
    seeing all four, orders free (or total)."""
    worlds = FULL_WORLDS
    order_options = {
        w: anchored_orders(w, tuple(x for x in worlds if x != w), total, True)
        for w in worlds
    }
    fixed_vals = [frozenset(FULL_ASSIGN[w].items()) for w in worlds]
    for orders in itertools.product(*(order_options[w] for w in worlds)):
        yield _assemble(worlds, ASSIGN_VOCAB, fixed_vals, orders)


def structures_mrec():
    for struct in structures_full(total=True):
        if classify_structure(struct).recursive:
            yield struct


def structure_population(name: str):
    if name == "M":
        return structures_generic(total=False)
    if name == "M+":
        return structures_generic(total=True)
    if name == "M_a":
        return structures_acceptable(total=False)
    if name == "M_a+":
        return structures_acceptable(total=True)
    if name == "M_f":
        return structures_full(total=False)
    if name == "M_f+":
        return structures_full(total=True)
    if name == "Mrec":
        return structures_mrec()
    raise ValueError(f"unknown structure class {name!r}")


@dataclass(frozen=True)
class PopulationSpec:
    """Product shape of an enumerated class: per-world valuation options
    (None when the valuation is fixed) and per-world order options.  Member
    index i decodes in mixed radix over the same dims the generators use,
    valuation choices first, then order choices, last world fastest."""

    worlds: tuple
    ranges: dict
    val_options: tuple | None
    fixed_vals: tuple | None
    order_options: tuple  # per world, aligned with worlds


def population_spec(name: str) -> PopulationSpec:
    if name in ("M", "M+", "M_a", "M_a+"):
        total = name.endswith("+")
        worlds = GENERIC_WORLDS
        orders = tuple(
            anchored_orders(w, tuple(x for x in worlds if x != w), total, False)
            for w in worlds
        )
        if name.startswith("M_a"):
            return PopulationSpec(worlds, dict(ASSIGN_VOCAB), assignment_valuations(),
                                  None, orders)
        return PopulationSpec(worlds, dict(GENERIC_VOCAB), generic_valuations(),
                              None, orders)
    if name in ("M_f", "M_f+"):
        worlds = FULL_WORLDS
        orders = tuple(
            anchored_orders(w, tuple(x for x in worlds if x != w), name.endswith("+"), True)
            for w in worlds
        )
        fixed = tuple(frozenset(FULL_ASSIGN[w].items()) for w in worlds)
        return PopulationSpec(worlds, dict(ASSIGN_VOCAB), None, fixed, orders)
    raise ValueError(f"no product spec for class {name!r}")


def population_dims(name: str) -> list[int]:
    spec = population_spec(name)
    dims = []
    if spec.val_options is not None:
        dims.extend([len(spec.val_options)] * len(spec.worlds))
    dims.extend(len(opts) for opts in spec.order_options)
    return dims


def population_size(name: str) -> int:
    n = 1
    for d in population_dims(name):
        n *= d
    return n


def population_member(name: str, index: int) -> CounterfactualStructure:
    """The index-th structure of the class, in generator order."""
    spec = population_spec(name)
    dims = population_dims(name)
    if not 0 <= index < population_size(name):
        raise IndexError(index)
    digits = []
    rem = index
    for d in reversed(dims):
        digits.append(rem % d)
        rem //= d
    digits.reverse()
    nw = len(spec.worlds)
    if spec.val_options is not None:
        vals = tuple(spec.val_options[digits[i]] for i in range(nw))
        ords = digits[nw:]
    else:
        vals = spec.fixed_vals
        ords = digits
    orders = tuple(spec.order_options[i][ords[i]] for i in range(nw))
    return _assemble(spec.worlds, spec.ranges, vals, orders)


def population_vocab(name: str) -> dict:
    return dict(GENERIC_VOCAB) if name in ("M", "M+") else dict(ASSIGN_VOCAB)


def random_full_structure(rng, n_vars: int = 3) -> CounterfactualStructure:
    """Random full acceptable structure with total orders: one world per
    assignment over n_vars binary variables, each world ranking the others
    in a random strict chain after itself."""
    names = tuple(f"X{i + 1}" for i in range(n_vars))
    ranges = {x: (0, 1) for x in names}
    bits = list(itertools.product((0, 1), repeat=n_vars))
    wid = lambda b: "".join(str(x) for x in b)
    worlds = tuple(wid(b) for b in bits)
    valuation = {wid(b): frozenset(zip(names, b)) for b in bits}
    order = {}
    for w in worlds:
        rest = [x for x in worlds if x != w]
        rng.shuffle(rest)
        seq = [w] + rest
        pairs = set()
        for i, a in enumerate(seq):
            for b in seq[i:]:
                pairs.add((a, b))
        order[w] = frozenset(pairs)
    return CounterfactualStructure(worlds, ranges, valuation, order)
