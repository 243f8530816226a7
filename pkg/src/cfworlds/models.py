"""Signatures, causal models with explicit equation tables, interventions,
brute-force solving, and the recursive / unique-solution / unrestricted
classification.

Equation tables are extensional: for each endogenous X, a total mapping from
the values of all other variables to a value for X.  Dependence is semantic
(the output actually changes), so padding a table with unused inputs never
creates a cycle.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

Value = int | str


class ModelError(ValueError):
    pass


class MissingTable(ModelError):
    pass


class NonTotalTable(ModelError):
    pass


class ValueOutOfRange(ModelError):
    pass


class NotEndogenous(ModelError):
    pass


class PartialContext(ModelError):
    pass


@dataclass(frozen=True)
class Signature:
    exogenous: tuple[str, ...]
    endogenous: tuple[str, ...]
    range: dict[str, tuple[Value, ...]]

    def __post_init__(self):
        object.__setattr__(self, "exogenous", tuple(self.exogenous))
        object.__setattr__(self, "endogenous", tuple(self.endogenous))
        object.__setattr__(self, "range", {v: tuple(r) for v, r in self.range.items()})
        names = self.exogenous + self.endogenous
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")
        for v in names:
            r = self.range.get(v)
            if not r:
                raise ValueError(f"{v} needs a nonempty range")
            if len(set(r)) != len(r):
                raise ValueError(f"range of {v} has repeated values")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.exogenous + self.endogenous

    def inputs_of(self, var: str) -> tuple[str, ...]:
        return tuple(v for v in self.variables if v != var)

    def contexts(self):
        """All total assignments to the exogenous variables, in range order."""
        ranges = [self.range[u] for u in self.exogenous]
        for combo in itertools.product(*ranges):
            yield dict(zip(self.exogenous, combo))

    def endo_assignments(self):
        ranges = [self.range[v] for v in self.endogenous]
        for combo in itertools.product(*ranges):
            yield dict(zip(self.endogenous, combo))

    def interventions(self, max_size: int | None = None):
        """All partial assignments to endogenous variables (the empty one
        first), deterministic order."""
        ranges = [(None,) + self.range[v] for v in self.endogenous]
        for combo in itertools.product(*ranges):
            a = {v: x for v, x in zip(self.endogenous, combo) if x is not None}
            if max_size is not None and len(a) > max_size:
                continue
            yield a


@dataclass(frozen=True)
class CausalModel:
    signature: Signature
    equations: dict[str, dict[tuple, Value]]
    pinned: frozenset[str] = field(default_factory=frozenset)


def make_model(sig: Signature, tables: dict[str, dict[tuple, Value]]) -> CausalModel:
    """Validate one total table per endogenous variable.

    Table keys are value tuples in the order sig.inputs_of(X); values must lie
    in range(X).
    """
    equations: dict[str, dict[tuple, Value]] = {}
    for x in sig.endogenous:
        if x not in tables:
            raise MissingTable(f"no table for {x}")
        table = dict(tables[x])
        keys = set(itertools.product(*[sig.range[v] for v in sig.inputs_of(x)]))
        given = set(table)
        if given != keys:
            missing = keys - given
            if missing:
                raise NonTotalTable(f"table for {x} misses {sorted(missing, key=repr)[0]}")
            raise NonTotalTable(f"table for {x} has rows outside the input space")
        for key, out in table.items():
            if out not in sig.range[x]:
                raise ValueOutOfRange(f"table for {x} emits {out!r}")
        equations[x] = table
    return CausalModel(sig, equations)


def table_from_fn(sig: Signature, var: str, fn) -> dict[tuple, Value]:
    """Tabulate fn over the full input space; fn receives a dict of the other
    variables' values."""
    inputs = sig.inputs_of(var)
    table = {}
    for combo in itertools.product(*[sig.range[v] for v in inputs]):
        table[combo] = fn(dict(zip(inputs, combo)))
    return table


def intervene(model: CausalModel, assignment: dict[str, Value]) -> CausalModel:
    """Pin each assigned variable to a constant; other equations unchanged."""
    sig = model.signature
    for x, val in assignment.items():
        if x not in sig.endogenous:
            raise NotEndogenous(f"{x} is not endogenous")
        if val not in sig.range[x]:
            raise ValueOutOfRange(f"{val!r} not in range of {x}")
    if not assignment:
        return model
    equations = dict(model.equations)
    for x, val in assignment.items():
        equations[x] = {key: val for key in model.equations[x]}
    return CausalModel(sig, equations, model.pinned | frozenset(assignment))


def _lookup(model: CausalModel, x: str, total: dict[str, Value]) -> Value:
    key = tuple(total[v] for v in model.signature.inputs_of(x))
    return model.equations[x][key]


def solutions(model: CausalModel, context: dict[str, Value]) -> list[dict[str, Value]]:
    """All simultaneous solutions of the equations in the given context, by
    brute force over the endogenous value space; may be empty or plural."""
    sig = model.signature
    if not set(sig.exogenous) <= set(context):
        missing = sorted(set(sig.exogenous) - set(context))
        raise PartialContext(f"context misses {missing[0]}")
    for u in sig.exogenous:
        if context[u] not in sig.range[u]:
            raise ValueOutOfRange(f"{context[u]!r} not in range of {u}")
    out = []
    for v in sig.endo_assignments():
        total = {**context, **v}
        if all(_lookup(model, x, total) == v[x] for x in sig.endogenous):
            out.append(v)
    return out


def solution_tuples(model: CausalModel, context: dict[str, Value]) -> list[tuple]:
    sig = model.signature
    return [tuple(s[v] for v in sig.endogenous) for s in solutions(model, context)]


def depends_on(model: CausalModel, x: str, y: str) -> bool:
    """True if the equation for x reacts to y: some two inputs differing only
    at y give different outputs."""
    if y == x or y not in model.signature.variables:
        return False
    return _depends_on(model, x, y)


def _depends_on(model: CausalModel, x: str, y: str) -> bool:
    sig = model.signature
    inputs = sig.inputs_of(x)
    pos = inputs.index(y)
    table = model.equations[x]
    rest = [sig.range[v] for v in inputs if v != y]
    yvals = sig.range[y]
    for combo in itertools.product(*rest):
        outs = set()
        for yv in yvals:
            key = combo[:pos] + (yv,) + combo[pos:]
            outs.add(table[key])
        if len(outs) > 1:
            return True
    return False


def dependence_graph(model: CausalModel) -> dict[str, set[str]]:
    """feeds[y] = endogenous variables whose equations react to y."""
    sig = model.signature
    feeds: dict[str, set[str]] = {y: set() for y in sig.endogenous}
    for x in sig.endogenous:
        for y in sig.endogenous:
            if x != y and _depends_on(model, x, y):
                feeds[y].add(x)
    return feeds


@dataclass(frozen=True)
class RecursionWitness:
    recursive: bool
    order: tuple[str, ...] | None = None
    cycle: tuple[str, ...] | None = None

    def __bool__(self) -> bool:
        return self.recursive


def is_recursive(model: CausalModel) -> RecursionWitness:
    """A model is recursive when some total order of the endogenous variables
    has every equation independent of all later variables; decided on the
    semantic dependence graph.  Returns a topological order or a cycle."""
    sig = model.signature
    feeds = dependence_graph(model)
    needs = {x: {y for y in sig.endogenous if x in feeds[y]} for x in sig.endogenous}
    order = []
    pending = dict(needs)
    while pending:
        free = [x for x in sig.endogenous if x in pending and not pending[x]]
        if not free:
            break
        head = free[0]
        order.append(head)
        del pending[head]
        for deps in pending.values():
            deps.discard(head)
    if not pending:
        return RecursionWitness(True, order=tuple(order))
    start = next(x for x in sig.endogenous if x in pending)
    seen = [start]
    cur = start
    while True:
        cur = min(pending[cur] & set(pending), key=str)
        if cur in seen:
            cycle = tuple(seen[seen.index(cur):]) + (cur,)
            return RecursionWitness(False, cycle=cycle)
        seen.append(cur)


@dataclass(frozen=True)
class UniquenessWitness:
    unique: bool
    intervention: dict[str, Value] | None = None
    context: dict[str, Value] | None = None
    count: int | None = None

    def __bool__(self) -> bool:
        return self.unique


def in_Tun(model: CausalModel) -> UniquenessWitness:
    """True when every intervention yields exactly one solution in every
    context; otherwise reports the first failure."""
    sig = model.signature
    for a in sig.interventions():
        pinned = intervene(model, a)
        for u in sig.contexts():
            n = len(solutions(pinned, u))
            if n != 1:
                return UniquenessWitness(False, intervention=a, context=u, count=n)
    return UniquenessWitness(True)


def class_of(model: CausalModel) -> str:
    """"Trec", "Tun-only", or "T-only"."""
    if is_recursive(model):
        return "Trec"
    if in_Tun(model):
        return "Tun-only"
    return "T-only"


# --- file format ---

def _parse_value(token: str, allowed: tuple[Value, ...]) -> Value:
    for v in allowed:
        if str(v) == token:
            return v
    raise ValueOutOfRange(f"{token!r} not among {allowed}")


def model_to_json(model: CausalModel) -> dict:
    """Tables are written over their semantically minimal inputs; omitted
    inputs mean the table is constant in them."""
    sig = model.signature
    equations = {}
    for x in sig.endogenous:
        deps = tuple(v for v in sig.inputs_of(x) if _depends_on(model, x, v))
        table = {}
        for combo in itertools.product(*[sig.range[v] for v in deps]):
            total = dict(zip(deps, combo))
            for v in sig.inputs_of(x):
                total.setdefault(v, sig.range[v][0])
            table[",".join(str(c) for c in combo)] = _lookup(model, x, total)
        equations[x] = {"inputs": list(deps), "table": table}
    return {
        "exogenous": {u: list(sig.range[u]) for u in sig.exogenous},
        "endogenous": {v: list(sig.range[v]) for v in sig.endogenous},
        "equations": equations,
    }


def model_from_json(data: dict) -> CausalModel:
    sig = Signature(
        exogenous=tuple(data["exogenous"]),
        endogenous=tuple(data["endogenous"]),
        range={**{u: tuple(r) for u, r in data["exogenous"].items()},
               **{v: tuple(r) for v, r in data["endogenous"].items()}},
    )
    tables = {}
    for x in sig.endogenous:
        spec = data.get("equations", {}).get(x)
        if spec is None:
            raise MissingTable(f"no table for {x}")
        declared = tuple(spec.get("inputs", sig.inputs_of(x)))
        for v in declared:
            if v not in sig.variables or v == x:
                raise ModelError(f"table for {x} lists bad input {v}")
        small: dict[tuple, Value] = {}
        for key, out in spec["table"].items():
            tokens = key.split(",") if key else []
            if len(tokens) != len(declared):
                raise NonTotalTable(f"table for {x}: row {key!r} does not match inputs")
            combo = tuple(_parse_value(t.strip(), sig.range[v]) for t, v in zip(tokens, declared))
            small[combo] = _parse_value(str(out), sig.range[x])
        expected = set(itertools.product(*[sig.range[v] for v in declared]))
        if set(small) != expected:
            raise NonTotalTable(f"table for {x} misses a row over inputs {declared}")
        inputs = sig.inputs_of(x)
        pos = [inputs.index(v) for v in declared]
        full = {}
        for combo in itertools.product(*[sig.range[v] for v in inputs]):
            full[combo] = small[tuple(combo[p] for p in pos)]
        tables[x] = full
    return make_model(sig, tables)


def load_model(path: str) -> CausalModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_json(json.load(fh))


def save_model(model: CausalModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_json(model), fh, indent=2, sort_keys=True)
        fh.write("\n")
