"""Validity checking over enumerated model and structure classes.

A ClassDescriptor names a finite population: a causal class (all equation
tables over a small signature, optionally filtered to unique-solution or
recursive models) or a structure class (the enumerated order/valuation
combinations).  check_validity sweeps a formula over every point of the
population and returns either a bounded-validity verdict or the first
countermodel in enumeration order.  find_countermodel samples instead, for
populations too big to sweep.  soundness_matrix runs the whole schema-by-
class table and compares each cell against its expected verdict.

Structure populations are evaluated through the array engine in batch;
causal populations and the recursive structure class go through the plain
evaluators.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

import numpy as np

from . import batch, enumeration
from .bridge import causal_to_structure
from .causal_eval import eval_causal
from .formula import Formula, fmt
from .models import Signature
from .schemas import DEFAULT_BOUNDS, Bounds, BoundsTooLarge, instantiate
from .structures import CounterfactualStructure, eval_cf

CAUSAL_CLASSES = ("T", "Tun", "Trec")
STRUCTURE_CLASSES = ("M", "M+", "M_a", "M_a+", "M_f", "M_f+", "Mrec")


@dataclass(frozen=True)
class ClassDescriptor:
    """A checkable population.  side is "causal" or "structure"; cls names
    the class; sig overrides the default signature on the causal side; vars
    picks the shape (2 keeps the exhaustive bound, 3 is sampling-only)."""

    side: str
    cls: str
    sig: Signature | None = None
    vars: int = 2
    cap: int = 2_000_000

    def __post_init__(self):
        if self.side not in ("causal", "structure"):
            raise ValueError(f"unknown side {self.side!r}")
        table = CAUSAL_CLASSES if self.side == "causal" else STRUCTURE_CLASSES
        if self.cls not in table:
            raise ValueError(f"unknown {self.side} class {self.cls!r}")

    def resolved_sig(self) -> Signature:
        if self.sig is not None:
            return self.sig
        if self.vars == 2:
            return enumeration.two_var_signature()
        if self.vars == 3:
            return enumeration.three_var_signature()
        raise ValueError(f"no default signature for vars={self.vars}")


@dataclass(frozen=True)
class ValidAtBound:
    """The formula held at every point of the enumerated population."""

    cls: str
    points: int

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Countermodel:
    """First falsifying point found: a model plus context, or a structure
    plus world.  index is the population position when one is defined."""

    cls: str
    index: int | None = None
    model: object = None
    context: dict | None = None
    structure: CounterfactualStructure | None = None
    world: str | None = None

    def __bool__(self):
        return False


@dataclass(frozen=True)
class NotFound:
    """Sampling exhausted its budget without a falsifying point."""

    cls: str
    trials: int
    seed: int

    def __bool__(self):
        return True


def _structure_atoms(name: str) -> tuple:
    vocab = enumeration.population_vocab(name)
    return tuple((x, v) for x in vocab for v in vocab[x])


def _materialize(cd: ClassDescriptor):
    """Population carrier for exhaustive checks.

    Causal: (models, contexts).  Structure: (pack, object lookup) where the
    lookup recovers the structure behind a pack row.
    """
    if cd.side == "causal":
        sig = cd.resolved_sig()
        if enumeration.causal_count(sig) > cd.cap:
            raise BoundsTooLarge(
                f"{enumeration.causal_count(sig)} causal models exceed cap {cd.cap}"
            )
        models = list(enumeration.causal_population(cd.cls, sig))
        contexts = list(sig.contexts())
        return models, contexts
    if cd.vars != 2:
        raise BoundsTooLarge(
            f"structure class {cd.cls} is enumerable only at the built-in "
            f"shape; use find_countermodel for vars={cd.vars}"
        )
    atoms = _structure_atoms(cd.cls)
    if cd.cls == "Mrec":
        pop = list(enumeration.structures_mrec())
        pack = batch.pack_structures(pop, atoms)
        return pack, pop.__getitem__
    pack = batch.pack_population(cd.cls, atoms)
    return pack, lambda i: enumeration.population_member(cd.cls, i)


def check_many(formulas, cd: ClassDescriptor, carrier=None) -> list:
    """Verdict per formula, sharing one enumeration of the population."""
    if carrier is None:
        carrier = _materialize(cd)
    out = []
    if cd.side == "causal":
        models, contexts = carrier
        for f in formulas:
            verdict = None
            points = 0
            for i, m in enumerate(models):
                for ctx in contexts:
                    points += 1
                    if not eval_causal(m, ctx, f):
                        verdict = Countermodel(cd.cls, i, model=m, context=dict(ctx))
                        break
                if verdict is not None:
                    break
            out.append(verdict if verdict is not None else ValidAtBound(cd.cls, points))
        return out
    pack, lookup = carrier
    for f in formulas:
        grid = batch.eval_block(pack, f)
        if grid.all():
            out.append(ValidAtBound(cd.cls, int(grid.size)))
        else:
            s, w = (int(x) for x in np.argwhere(~grid)[0])
            out.append(
                Countermodel(cd.cls, s, structure=lookup(s), world=pack.worlds[w])
            )
    return out


def check_validity(f: Formula, cd: ClassDescriptor):
    """Sweep one formula over the whole population."""
    return check_many([f], cd)[0]


def _sample_structure(cd: ClassDescriptor, rng: random.Random):
    if cd.vars == 2:
        if cd.cls == "Mrec":
            pop = getattr(_sample_structure, "_mrec", None)
            if pop is None:
                pop = list(enumeration.structures_mrec())
                _sample_structure._mrec = pop
            return rng.choice(pop)
        size = enumeration.population_size(cd.cls)
        return enumeration.population_member(cd.cls, rng.randrange(size))
    if cd.cls in ("M_f", "M_f+"):
        return enumeration.random_full_structure(rng, cd.vars)
    if cd.cls == "Mrec":
        model = enumeration.random_recursive_model(rng, cd.resolved_sig())
        return causal_to_structure(model)[0]
    raise ValueError(f"no sampler for structure class {cd.cls} at vars={cd.vars}")


def find_countermodel(f: Formula, cd: ClassDescriptor, budget: int, seed: int = 0):
    """Randomized falsification: budget samples, every point of each sample
    checked, first failure returned.  Same seed, same outcome."""
    rng = random.Random(seed)
    if cd.side == "causal":
        sig = cd.resolved_sig()
        contexts = list(sig.contexts())
        small = enumeration.causal_count(sig) <= 100_000
        pop = list(enumeration.causal_population(cd.cls, sig)) if small else None
        if pop is None and cd.cls != "Trec":
            raise BoundsTooLarge(
                f"sampling beyond the enumeration bound supports Trec only, not {cd.cls}"
            )
        for _ in range(budget):
            m = rng.choice(pop) if pop is not None else enumeration.random_recursive_model(rng, sig)
            for ctx in contexts:
                if not eval_causal(m, ctx, f):
                    return Countermodel(cd.cls, model=m, context=dict(ctx))
        return NotFound(cd.cls, budget, seed)
    for _ in range(budget):
        st = _sample_structure(cd, rng)
        for w in st.worlds:
            if not eval_cf(st, w, f):
                return Countermodel(cd.cls, structure=st, world=w)
    return NotFound(cd.cls, budget, seed)


@dataclass(frozen=True)
class MatrixCell:
    """One (schema, class) cell of the soundness table."""

    schema: str
    cls: str
    side: str
    expected: str  # "valid" or "countermodel"
    verdict: str
    instances: int
    points: int
    seconds: float
    witness: Countermodel | None = None
    failing_instance: str | None = None

    @property
    def ok(self) -> bool:
        return self.expected == self.verdict

    def to_json(self) -> dict:
        out = {
            "schema": self.schema,
            "class": self.cls,
            "side": self.side,
            "expected": self.expected,
            "verdict": self.verdict,
            "ok": self.ok,
            "instances": self.instances,
            "points": self.points,
            "seconds": round(self.seconds, 3),
        }
        if self.witness is not None:
            out["countermodel"] = {
                "index": self.witness.index,
                "world": self.witness.world,
                "context": self.witness.context,
                "formula": self.failing_instance,
            }
        return out


# Expected verdict for every cell the matrix sweeps.  The causal cells run
# over unique-solution models (GR over all models); the structure cells run
# over the enumerated order/valuation populations.
MATRIX_PLAN: tuple = (
    ("C0", "causal", "Tun", "valid"),
    ("C1", "causal", "Tun", "valid"),
    ("C2", "causal", "Tun", "valid"),
    ("C3", "causal", "Tun", "valid"),
    ("C4", "causal", "Tun", "valid"),
    ("C5", "causal", "Tun", "valid"),
    ("GR", "causal", "T", "valid"),
    ("A0", "structure", "M", "valid"),
    ("A1", "structure", "M", "valid"),
    ("A2", "structure", "M", "valid"),
    ("A3", "structure", "M", "valid"),
    ("A4", "structure", "M", "valid"),
    ("A5", "structure", "M", "valid"),
    ("A6", "structure", "M", "valid"),
    ("A7", "structure", "M", "countermodel"),
    ("A7", "structure", "M+", "valid"),
    ("D4", "structure", "M", "countermodel"),
    ("D4", "structure", "M+", "valid"),
    ("RA1", "structure", "M", "valid"),
    ("RA2", "structure", "M", "valid"),
    ("V1", "structure", "M_a", "valid"),
    ("V2", "structure", "M_a", "valid"),
    ("C3", "structure", "M_a", "valid"),
    ("C4", "structure", "M_a", "valid"),
    ("C2", "structure", "M_a+", "valid"),
    ("V3", "structure", "M_f", "valid"),
    ("C1", "structure", "M_f", "valid"),
    ("C5", "structure", "M_f+", "countermodel"),
    ("GR", "structure", "M_f+", "countermodel"),
    ("C5", "structure", "Mrec", "valid"),
)


def _schema_argument(schema: str, cd: ClassDescriptor, bounds: Bounds):
    """What the schema's builder substitutes over for this class."""
    if schema.startswith(("A", "D", "RA")):
        return None
    if schema.startswith("V"):
        return enumeration.population_vocab(cd.cls) if cd.side == "structure" else cd.resolved_sig()
    return enumeration.two_var_signature() if cd.side == "structure" else cd.resolved_sig()


def check_schema(schema: str, cd: ClassDescriptor, expected: str,
                 bounds: Bounds = DEFAULT_BOUNDS, carrier=None) -> MatrixCell:
    """Sweep every instance of one schema over one population."""
    t0 = time.time()
    inst = instantiate(schema, _schema_argument(schema, cd, bounds), bounds)
    verdicts = check_many(inst, cd, carrier=carrier)
    witness = None
    failing = None
    points = 0
    for f, v in zip(inst, verdicts):
        if isinstance(v, ValidAtBound):
            points = max(points, v.points)
        elif witness is None:
            witness = v
            failing = fmt(f)
    return MatrixCell(
        schema=schema,
        cls=cd.cls,
        side=cd.side,
        expected=expected,
        verdict="countermodel" if witness is not None else "valid",
        instances=len(inst),
        points=points,
        seconds=time.time() - t0,
        witness=witness,
        failing_instance=failing,
    )


def soundness_matrix(bounds: Bounds = DEFAULT_BOUNDS, progress=None) -> list[MatrixCell]:
    """Run every cell of MATRIX_PLAN, reusing one population carrier per
    class.  Returns the cells in plan order."""
    carriers: dict = {}
    cells = []
    for schema, side, cls, expected in MATRIX_PLAN:
        cd = ClassDescriptor(side, cls)
        key = (side, cls)
        if key not in carriers:
            carriers[key] = _materialize(cd)
        cell = check_schema(schema, cd, expected, bounds, carrier=carriers[key])
        cells.append(cell)
        if progress is not None:
            progress(cell)
    return cells
