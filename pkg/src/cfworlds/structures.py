"""Closest-world structures for the counterfactual conditional.

A structure is a finite set of worlds, a truth assignment to atoms at each
world, and for each world w a comparison preorder over the worlds that w can
see.  The conditional a ~> b holds at w when b holds at every minimal a-world
among those w sees.  Classification predicates (acceptable, full, total,
recursive) pick out the subclasses on which the various axioms are sound.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .formula import (
    And, Atom, Cf, Falsity, Formula, Iff, Implies, Not, Or, Truth, atoms_of,
)
from .models import Value, _parse_value


class StructureError(ValueError):
    pass


class SelfNotInWw(StructureError):
    """The order at w fails to rank w itself."""


class NotReflexive(StructureError):
    pass


class NotTransitive(StructureError):
    pass


class SelfNotMinimal(StructureError):
    """Some ranked world is not strictly further from w than w itself."""


class UnknownAtom(StructureError):
    pass


@dataclass(frozen=True)
class CounterfactualStructure:
    """Worlds with per-world truth sets and per-world comparison orders.

    valuation maps a world id to the frozenset of (variable, value) atoms
    true there; order maps a world w to a frozenset of pairs (a, b) meaning
    a is at least as close to w as b is.  ranges records the value range of
    every variable in the vocabulary.
    """

    worlds: tuple[str, ...]
    ranges: dict[str, tuple[Value, ...]]
    valuation: dict[str, frozenset]
    order: dict[str, frozenset]


def ranked(struct: CounterfactualStructure, w: str) -> frozenset:
    """The worlds that w's comparison order ranks (w always among them)."""
    return frozenset(a for a, _ in struct.order[w])


def chain_order(seq) -> set[tuple[str, str]]:
    """Reflexive-transitive pairs of a strict chain, first element closest."""
    pairs = set()
    seq = list(seq)
    for i, a in enumerate(seq):
        for b in seq[i:]:
            pairs.add((a, b))
    return pairs


def atoms_true(struct: CounterfactualStructure, w: str) -> frozenset:
    return struct.valuation[w]


def value_at(struct: CounterfactualStructure, w: str, var: str):
    """The unique value of var at w, or None if not exactly one atom holds."""
    hits = [v for (x, v) in struct.valuation[w] if x == var]
    if len(hits) == 1:
        return hits[0]
    return None


def assignment_at(struct: CounterfactualStructure, w: str) -> dict[str, Value] | None:
    """Total assignment read off w's atoms, or None if any variable fails to
    take exactly one value there."""
    out = {}
    for var in struct.ranges:
        v = value_at(struct, w, var)
        if v is None or v not in struct.ranges[var]:
            return None
        out[var] = v
    return out


def make_structure(worlds, valuation, order, variables=None) -> CounterfactualStructure:
    """Validate and build a structure.

    worlds: iterable of world ids.  valuation: world -> assignment dict or
    iterable of (variable, value) pairs.  order: world -> iterable of (a, b)
    pairs, a at least as close as b.  variables: optional variable -> value
    range; inferred from the valuation when omitted.

    Checks, in order: ids are known; each world ranks itself; each order is
    reflexive, then transitive, on the worlds it ranks; each world is
    strictly closer to itself than every other ranked world.
    """
    ids = tuple(str(w) for w in worlds)
    if not ids:
        raise ValueError("a structure needs at least one world")
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate world ids")
    known = set(ids)

    val_in = {str(k): v for k, v in valuation.items()}
    for w in val_in:
        if w not in known:
            raise ValueError(f"valuation mentions unknown world {w!r}")
    val: dict[str, frozenset] = {}
    for w in ids:
        entry = val_in.get(w, ())
        if isinstance(entry, dict):
            pairs = frozenset((str(x), v) for x, v in entry.items())
        else:
            pairs = frozenset((str(x), v) for x, v in entry)
        val[w] = pairs

    if variables is not None:
        ranges = {str(x): tuple(vs) for x, vs in variables.items()}
        for x, vs in ranges.items():
            if not vs:
                raise ValueError(f"empty range for variable {x!r}")
            if len(set(vs)) != len(vs):
                raise ValueError(f"duplicate values in range of {x!r}")
        for w, pairs in val.items():
            for x, v in pairs:
                if x not in ranges or v not in ranges[x]:
                    raise ValueError(f"atom {x}={v!r} at world {w} outside the declared ranges")
    else:
        seen: dict[str, set] = {}
        for pairs in val.values():
            for x, v in pairs:
                seen.setdefault(x, set()).add(v)
        ranges = {x: tuple(sorted(vs, key=repr)) for x, vs in sorted(seen.items())}

    order_in = {str(k): v for k, v in order.items()}
    for w in order_in:
        if w not in known:
            raise ValueError(f"order given for unknown world {w!r}")
    rel: dict[str, frozenset] = {}
    for w in ids:
        pairs = frozenset((str(a), str(b)) for a, b in order_in.get(w, ()))
        for a, b in pairs:
            if a not in known or b not in known:
                raise ValueError(f"order at {w} mentions unknown world")
        rel[w] = pairs

    for w in ids:
        pairs = rel[w]
        left = {a for a, _ in pairs}
        mentioned = left | {b for _, b in pairs}
        if w not in left:
            raise SelfNotInWw(f"world {w} does not rank itself")
        for u in mentioned:
            if (u, u) not in pairs:
                raise NotReflexive(f"order at {w} is missing {u} <= {u}")
        for a, b in pairs:
            for c, d in pairs:
                if b == c and (a, d) not in pairs:
                    raise NotTransitive(f"order at {w}: {a} <= {b} <= {d} but not {a} <= {d}")
        for u in mentioned:
            if u == w:
                continue
            if (w, u) not in pairs or (u, w) in pairs:
                raise SelfNotMinimal(f"world {w} is not strictly closest to itself (vs {u})")

    return CounterfactualStructure(ids, ranges, val, rel)


def _check_atoms(struct: CounterfactualStructure, f: Formula) -> None:
    for var, value in atoms_of(f):
        if var not in struct.ranges or value not in struct.ranges[var]:
            raise UnknownAtom(f"atom {var}={value!r} is outside this structure's vocabulary")


def _ev(struct: CounterfactualStructure, w: str, f: Formula) -> bool:
    if isinstance(f, Atom):
        return (f.var, f.value) in struct.valuation[w]
    if isinstance(f, Truth):
        return True
    if isinstance(f, Falsity):
        return False
    if isinstance(f, Not):
        return not _ev(struct, w, f.sub)
    if isinstance(f, And):
        return _ev(struct, w, f.left) and _ev(struct, w, f.right)
    if isinstance(f, Or):
        return _ev(struct, w, f.left) or _ev(struct, w, f.right)
    if isinstance(f, Implies):
        return (not _ev(struct, w, f.left)) or _ev(struct, w, f.right)
    if isinstance(f, Iff):
        return _ev(struct, w, f.left) == _ev(struct, w, f.right)
    if isinstance(f, Cf):
        return all(_ev(struct, v, f.con) for v in _closest(struct, w, f.ant))
    raise TypeError(f"not a formula: {f!r}")


def _closest(struct: CounterfactualStructure, w: str, f: Formula) -> frozenset:
    pairs = struct.order[w]
    hits = [u for u in ranked(struct, w) if _ev(struct, u, f)]
    return frozenset(
        u for u in hits
        if not any(v != u and (v, u) in pairs and (u, v) not in pairs for v in hits)
    )


def closest(struct: CounterfactualStructure, w: str, f: Formula) -> frozenset:
    """Minimal f-worlds among those w sees; empty when none satisfies f."""
    if w not in struct.order:
        raise ValueError(f"unknown world {w!r}")
    _check_atoms(struct, f)
    return _closest(struct, w, f)


def eval_cf(struct: CounterfactualStructure, w: str, f: Formula) -> bool:
    """Truth of f at w; conditionals may nest arbitrarily."""
    if w not in struct.order:
        raise ValueError(f"unknown world {w!r}")
    _check_atoms(struct, f)
    return _ev(struct, w, f)


@dataclass(frozen=True)
class StructureClass:
    """Classification flags plus witnesses for the recursive check.

    recursive means every world admits a variable order with no back-effect;
    recursive_uniform means a single order works at every world.  The
    witness dicts record the first working order found.
    """

    acceptable: bool
    full: bool
    total: bool
    recursive: bool
    recursive_uniform: bool
    witness_orders: dict[str, tuple[str, ...]]
    uniform_order: tuple[str, ...] | None


def _is_total(struct: CounterfactualStructure, w: str) -> bool:
    pairs = struct.order[w]
    dom = ranked(struct, w)
    for a in dom:
        for b in dom:
            if a == b:
                continue
            fwd = (a, b) in pairs
            back = (b, a) in pairs
            if fwd and back:
                return False
            if not fwd and not back:
                return False
    return True


def _closest_match(struct, w, assigns, partial):
    """The unique nearest world to w whose assignment extends partial.
    Assumes the structure is acceptable, full and total at w."""
    pairs = struct.order[w]
    best = None
    for u in ranked(struct, w):
        a = assigns[u]
        if any(a[x] != v for x, v in partial):
            continue
        if best is None or ((u, best) in pairs and (best, u) not in pairs):
            best = u
    return best


def classify_structure(struct: CounterfactualStructure) -> StructureClass:
    """Compute all class flags.

    acceptable: every variable takes exactly one value at every world.
    full: acceptable, and every total assignment is realized among the
    worlds each world sees.  total: every comparison order is a strict
    total order.  recursive additionally needs, per world, some ordering of
    the variables under which intervening on a later variable never changes
    the value an earlier variable takes at the nearest matching world.
    """
    assigns = {w: assignment_at(struct, w) for w in struct.worlds}
    acceptable = all(a is not None for a in assigns.values())

    variables = tuple(struct.ranges)
    full = False
    if acceptable and variables:
        space = set(itertools.product(*(struct.ranges[x] for x in variables)))
        full = all(
            {tuple(assigns[u][x] for x in variables) for u in ranked(struct, w)} == space
            for w in struct.worlds
        )
    elif acceptable:
        full = True

    total = all(_is_total(struct, w) for w in struct.worlds)

    if not (acceptable and full and total):
        return StructureClass(acceptable, full, total, False, False, {}, None)

    def no_back_effect(w, early, late):
        rest = tuple(x for x in variables if x not in (early, late))
        for sub in itertools.chain.from_iterable(
            itertools.combinations(rest, k) for k in range(len(rest) + 1)
        ):
            for base in itertools.product(*(struct.ranges[x] for x in sub)):
                partial = tuple(zip(sub, base))
                ref = assigns[_closest_match(struct, w, assigns, partial)][early]
                for y in struct.ranges[late]:
                    u = _closest_match(struct, w, assigns, partial + ((late, y),))
                    if assigns[u][early] != ref:
                        return False
        return True

    witness_orders: dict[str, tuple[str, ...]] = {}
    working: dict[str, set] = {}
    recursive = True
    for w in struct.worlds:
        ok_pairs = {
            (a, b): no_back_effect(w, a, b)
            for a in variables for b in variables if a != b
        }
        good = {
            perm
            for perm in itertools.permutations(variables)
            if all(ok_pairs[(perm[i], perm[j])]
                   for i in range(len(perm)) for j in range(i + 1, len(perm)))
        }
        working[w] = good
        if good:
            witness_orders[w] = min(good)
        else:
            recursive = False
    shared = set(itertools.permutations(variables))
    for w in struct.worlds:
        shared &= working[w]
    uniform = min(shared) if shared else None
    return StructureClass(
        acceptable, full, total, recursive, uniform is not None,
        witness_orders if recursive else {}, uniform,
    )


def structure_to_json(struct: CounterfactualStructure) -> dict:
    """Plain-dict form.  Assignment-backed structures list each world's
    assignment; others list each atom's worlds.  Reflexive order pairs are
    left implicit."""
    data: dict = {"variables": {x: list(vs) for x, vs in struct.ranges.items()}}
    assigns = {w: assignment_at(struct, w) for w in struct.worlds}
    if all(a is not None for a in assigns.values()):
        data["worlds"] = {w: assigns[w] for w in struct.worlds}
    else:
        data["worlds"] = list(struct.worlds)
        atom_worlds: dict[str, list] = {}
        for w in struct.worlds:
            for x, v in sorted(struct.valuation[w], key=repr):
                atom_worlds.setdefault(f"{x}={v}", []).append(w)
        data["atom_worlds"] = atom_worlds
    data["order"] = {
        w: sorted([a, b] for a, b in struct.order[w] if a != b)
        for w in struct.worlds
    }
    return data


def structure_from_json(data: dict) -> CounterfactualStructure:
    variables = {x: tuple(vs) for x, vs in data["variables"].items()}
    raw_worlds = data["worlds"]
    if isinstance(raw_worlds, dict):
        ids = list(raw_worlds)
        valuation = {w: dict(raw_worlds[w]) for w in ids}
    else:
        ids = list(raw_worlds)
        valuation = {w: set() for w in ids}
        for key, ws in data.get("atom_worlds", {}).items():
            var, _, tok = key.partition("=")
            if var not in variables:
                raise ValueError(f"atom_worlds mentions unknown variable {var!r}")
            value = _parse_value(tok, variables[var])
            for w in ws:
                valuation[w].add((var, value))
    order = {}
    for w, pairs in data.get("order", {}).items():
        full_pairs = {(str(a), str(b)) for a, b in pairs}
        mentioned = {x for p in full_pairs for x in p} | {str(w)}
        full_pairs |= {(u, u) for u in mentioned}
        order[w] = full_pairs
    return make_structure(ids, valuation, order, variables)


def load_structure(path: str) -> CounterfactualStructure:
    with open(path) as fh:
        return structure_from_json(json.load(fh))


def save_structure(struct: CounterfactualStructure, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(structure_to_json(struct), fh, indent=2, sort_keys=True)
        fh.write("\n")
