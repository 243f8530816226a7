"""Array engine for evaluating formulas over whole structure populations.

The per-structure evaluator is fine for a handful of structures, but the
validity sweeps touch tens of thousands to hundreds of thousands of
structures times hundreds of schema instances.  This module packs a
population into boolean arrays (truth of each atom per world, membership of
each world in each comparison order, and the strictly-closer relation) and
evaluates a formula for every structure and world at once.  The conditional
step has two interchangeable implementations: a compiled kernel (numba) and
a pure-numpy broadcast.  Set CFWORLDS_BACKEND=numpy or =numba to force one;
the default is the kernel when numba imports, numpy otherwise.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .formula import And, Atom, Cf, Falsity, Formula, Iff, Implies, Not, Or, Truth
from .structures import UnknownAtom, ranked
from . import enumeration

try:
    import numba

    HAS_NUMBA = True
except ImportError:
    numba = None
    HAS_NUMBA = False


def _pick_backend() -> str:
    env = os.environ.get("CFWORLDS_BACKEND", "").strip().lower()
    if env not in ("", "numba", "numpy"):
        raise ValueError(f"CFWORLDS_BACKEND must be 'numba' or 'numpy', not {env!r}")
    if env == "numpy":
        return "numpy"
    if env == "numba" and not HAS_NUMBA:
        raise RuntimeError("CFWORLDS_BACKEND=numba but numba is not importable")
    return "numba" if HAS_NUMBA else "numpy"


_BACKEND = _pick_backend()


def backend() -> str:
    return _BACKEND


if HAS_NUMBA:

    @numba.njit(cache=True, parallel=True)
    def _cf_nb(inw, strict, ant, con, out):
        ns, nw, nv = inw.shape
        for s in numba.prange(ns):
            for w in range(nw):
                ok = True
                for v in range(nv):
                    if inw[s, w, v] and ant[s, v]:
                        dominated = False
                        for u in range(nv):
                            if inw[s, w, u] and ant[s, u] and strict[s, w, u, v]:
                                dominated = True
                                break
                        if not dominated and not con[s, v]:
                            ok = False
                            break
                out[s, w] = ok


def _cf_numpy(inw, strict, ant, con):
    cand = inw & ant[:, None, :]
    dominated = (cand[:, :, :, None] & strict).any(axis=2)
    minimal = cand & ~dominated
    return ~(minimal & ~con[:, None, :]).any(axis=2)


def cf_step(inw, strict, ant, con, force_backend: str | None = None):
    """Truth of (ant ~> con) per structure and world, given truth arrays of
    the parts per structure and candidate world."""
    which = force_backend or _BACKEND
    if which == "numba":
        out = np.empty(inw.shape[:2], dtype=np.bool_)
        _cf_nb(inw, strict, ant, con, out)
        return out
    return _cf_numpy(inw, strict, ant, con)


@dataclass
class Pack:
    """A packed population: worlds and atoms give the axis labels, val is
    atom truth per world, inw marks which worlds each world's order ranks,
    and strict is the strictly-closer relation per ranking world."""

    worlds: tuple
    atoms: tuple
    val: np.ndarray     # [S, W, A] bool
    inw: np.ndarray     # [S, W, V] bool
    strict: np.ndarray  # [S, W, U, V] bool

    @property
    def size(self) -> int:
        return self.val.shape[0]


def pack_structures(structs, atoms) -> Pack:
    """Pack an iterable of structures sharing one world list (object loop;
    meant for samples and cross-checks, not the big sweeps)."""
    atoms = tuple(atoms)
    rows_val, rows_inw, rows_strict = [], [], []
    worlds = None
    for st in structs:
        if worlds is None:
            worlds = st.worlds
            index = {w: i for i, w in enumerate(worlds)}
        elif st.worlds != worlds:
            raise ValueError("structures in one pack must share the world list")
        nv = len(worlds)
        val = np.zeros((nv, len(atoms)), dtype=np.bool_)
        for wi, w in enumerate(worlds):
            for ai, atom in enumerate(atoms):
                val[wi, ai] = atom in st.valuation[w]
        inw = np.zeros((nv, nv), dtype=np.bool_)
        strict = np.zeros((nv, nv, nv), dtype=np.bool_)
        for wi, w in enumerate(worlds):
            pairs = st.order[w]
            for u in ranked(st, w):
                inw[wi, index[u]] = True
            for (a, b) in pairs:
                if (b, a) not in pairs:
                    strict[wi, index[a], index[b]] = True
        rows_val.append(val)
        rows_inw.append(inw)
        rows_strict.append(strict)
    if worlds is None:
        raise ValueError("empty population")
    return Pack(worlds, atoms,
                np.stack(rows_val), np.stack(rows_inw), np.stack(rows_strict))


def pack_population(name: str, atoms) -> Pack:
    """Pack a whole enumerated class by meshing its per-world option tables;
    row i is exactly enumeration.population_member(name, i)."""
    spec = enumeration.population_spec(name)
    atoms = tuple(atoms)
    worlds = spec.worlds
    nw = len(worlds)
    index = {w: i for i, w in enumerate(worlds)}

    dims = enumeration.population_dims(name)
    grids = np.indices(dims).reshape(len(dims), -1)
    size = grids.shape[1]

    if spec.val_options is not None:
        val_tab = np.array(
            [[atom in choice for atom in atoms] for choice in spec.val_options],
            dtype=np.bool_,
        )
        val = np.stack([val_tab[grids[i]] for i in range(nw)], axis=1)
        ord_idx = grids[nw:]
    else:
        fixed = np.array(
            [[atom in spec.fixed_vals[i] for atom in atoms] for i in range(nw)],
            dtype=np.bool_,
        )
        val = np.broadcast_to(fixed, (size, nw, len(atoms))).copy()
        ord_idx = grids

    inw_parts, strict_parts = [], []
    for i, w in enumerate(worlds):
        opts = spec.order_options[i]
        leq = np.zeros((len(opts), nw, nw), dtype=np.bool_)
        for oi, opt in enumerate(opts):
            for (a, b) in opt.pairs:
                leq[oi, index[a], index[b]] = True
        opt_inw = np.einsum("ouu->ou", leq).copy()
        opt_strict = leq & ~leq.transpose(0, 2, 1)
        inw_parts.append(opt_inw[ord_idx[i]])
        strict_parts.append(opt_strict[ord_idx[i]])
    inw = np.stack(inw_parts, axis=1)
    strict = np.stack(strict_parts, axis=1)
    return Pack(worlds, atoms, val, inw, strict)


def eval_block(pack: Pack, f: Formula, force_backend: str | None = None) -> np.ndarray:
    """Truth of f at every (structure, world) of the pack, as [S, W] bool."""
    atom_index = {a: i for i, a in enumerate(pack.atoms)}

    def ev(g: Formula) -> np.ndarray:
        if isinstance(g, Atom):
            key = (g.var, g.value)
            if key not in atom_index:
                raise UnknownAtom(f"atom {g.var}={g.value!r} not packed")
            return pack.val[:, :, atom_index[key]]
        if isinstance(g, Truth):
            return np.ones(pack.val.shape[:2], dtype=np.bool_)
        if isinstance(g, Falsity):
            return np.zeros(pack.val.shape[:2], dtype=np.bool_)
        if isinstance(g, Not):
            return ~ev(g.sub)
        if isinstance(g, And):
            return ev(g.left) & ev(g.right)
        if isinstance(g, Or):
            return ev(g.left) | ev(g.right)
        if isinstance(g, Implies):
            return ~ev(g.left) | ev(g.right)
        if isinstance(g, Iff):
            return ev(g.left) == ev(g.right)
        if isinstance(g, Cf):
            ant = np.ascontiguousarray(ev(g.ant))
            con = np.ascontiguousarray(ev(g.con))
            return cf_step(pack.inw, pack.strict, ant, con, force_backend)
        raise TypeError(f"not a formula: {g!r}")

    return ev(f)
