"""Golden reproductions: every headline behavior rechecked from the shipped
fixtures, each behind one named claim.

run_suite executes the full set and returns one ClaimResult per claim; the
command line renders them as a pass/fail table.  Budgets are sized so the
whole suite finishes in a few minutes; the acceptance tests run the same
functions and assert on the results.

write_fixtures regenerates the shipped fixture files from the catalog and
the derivation builders.  Fixtures are committed, so regeneration is only
needed after changing either source; a test guards against drift.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass
from pathlib import Path

from .bridge import (
    causal_to_structure,
    certify_equivalence,
    lprop_corpus,
    structure_to_causal,
)
from .catalog import example_c5, forest_fire, tstar, tstar_formula
from .causal_eval import eval_causal
from .checklab import ClassDescriptor, check_validity, find_countermodel, soundness_matrix
from .derivations import impossibility_script, transitivity_script
from .enumeration import (
    causal_models,
    causal_population,
    random_full_structure,
    random_recursive_model,
    three_var_signature,
    two_var_signature,
)
from .formula import Not, fmt, parse
from .models import (
    CausalModel,
    Signature,
    dependence_graph,
    in_Tun,
    intervene,
    is_recursive,
    load_model,
    make_model,
    save_model,
    solutions,
)
from .proofs import (
    AxiomInstance,
    FirstFailure,
    SchemaDisabled,
    check_proof,
    script_from_json,
    script_to_json,
)
from .structures import classify_structure, eval_cf, load_structure, save_structure

FIXTURE_DIR = Path(__file__).with_name("fixtures")

FIXTURES = ("tstar.json", "forestfire.json", "example-c5.json",
            "lemma-a1.json", "neg-phi.json")


def fixture_path(name: str) -> Path:
    if name not in FIXTURES:
        raise ValueError(f"unknown fixture {name!r}")
    return FIXTURE_DIR / name


def fixture_payloads() -> dict[str, dict]:
    """The five fixtures as JSON-ready dicts, regenerated from source."""
    out = {}
    from .models import model_to_json
    from .structures import structure_to_json

    out["tstar.json"] = model_to_json(tstar())
    out["forestfire.json"] = model_to_json(forest_fire())
    out["example-c5.json"] = structure_to_json(example_c5())
    out["lemma-a1.json"] = script_to_json(*transitivity_script())
    out["neg-phi.json"] = script_to_json(*impossibility_script())
    return out


def write_fixtures(target: Path | None = None) -> list[Path]:
    target = FIXTURE_DIR if target is None else Path(target)
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for name, payload in fixture_payloads().items():
        path = target / name
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        written.append(path)
    return written


@dataclass
class ClaimResult:
    claim: str
    ok: bool
    detail: str
    seconds: float

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "ok": self.ok,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


def _done(claim: str, ok: bool, detail: str, t0: float) -> ClaimResult:
    return ClaimResult(claim, ok, detail, time.time() - t0)


# --- the claims ---


def claim_cycle_solutions() -> ClaimResult:
    """Unique solution under every intervention of the three-way cycle."""
    t0 = time.time()
    model = load_model(fixture_path("tstar.json"))
    ctx = {"U": 0}
    expected = {
        (): (0, 0, 0),
        (("X1", 1),): (1, 1, 0),
        (("X2", 1),): (0, 1, 1),
        (("X3", 1),): (1, 0, 1),
        (("X1", 0),): (0, 0, 0),
        (("X2", 0),): (0, 0, 0),
        (("X3", 0),): (0, 0, 0),
    }
    f1 = {(0, 0): 0, (0, 1): 1, (1, 0): 0, (1, 1): 0}
    f2 = {(0, 0): 0, (0, 1): 0, (1, 0): 1, (1, 1): 0}
    f3 = {(0, 0): 0, (0, 1): 1, (1, 0): 0, (1, 1): 0}
    for a, b in itertools.product((0, 1), repeat=2):
        expected[(("X1", a), ("X2", b))] = (a, b, f3[(a, b)])
        expected[(("X1", a), ("X3", b))] = (a, f2[(a, b)], b)
        expected[(("X2", a), ("X3", b))] = (f1[(a, b)], a, b)
    bad = []
    for items, want in expected.items():
        sols = solutions(intervene(model, dict(items)), ctx)
        got = [tuple(s[x] for x in ("X1", "X2", "X3")) for s in sols]
        if got != [want]:
            bad.append(f"{dict(items)} -> {got}, wanted [{want}]")
    detail = f"{len(expected)} interventions, all unique and as forced"
    if bad:
        detail = "; ".join(bad)
    return _done("cycle-solutions", not bad, detail, t0)


def claim_cycle_class() -> ClaimResult:
    """The cycle model has unique solutions but no dependence order, and
    satisfies its own signature formula."""
    t0 = time.time()
    model = load_model(fixture_path("tstar.json"))
    unique = bool(in_Tun(model))
    rec = bool(is_recursive(model))
    holds = eval_causal(model, {"U": 0}, tstar_formula())
    ok = unique and not rec and holds
    detail = f"unique solutions {unique}, recursive {rec}, formula holds {holds}"
    return _done("cycle-class", ok, detail, t0)


def claim_reversibility_example() -> ClaimResult:
    """The eight-world structure refuting mutual-support reversibility."""
    t0 = time.time()
    struct = load_structure(fixture_path("example-c5.json"))
    ante = parse("[X1<-1; X3<-1]X2=1 & [X1<-1; X2<-1]X3=1")
    concl = parse("[X1<-1]X2=1")
    w = "000"
    a = eval_cf(struct, w, ante)
    c = eval_cf(struct, w, concl)
    cls = classify_structure(struct)
    flags = (cls.acceptable, cls.full, cls.total, cls.recursive)
    ok = a and not c and flags == (True, True, True, False)
    detail = (
        f"antecedent {a}, conclusion {c} at {w}; "
        f"acceptable {cls.acceptable}, full {cls.full}, total {cls.total}, "
        f"recursive {cls.recursive}"
    )
    return _done("reversibility-example", ok, detail, t0)


def claim_soundness_matrix(progress=None) -> ClaimResult:
    """Every schema/class cell of the soundness table lands as expected."""
    t0 = time.time()
    cells = soundness_matrix(progress=progress)
    bad = [c for c in cells if not c.ok]
    detail = f"{len(cells)} cells"
    if bad:
        detail += "; unexpected: " + ", ".join(
            f"{c.schema}/{c.cls}={c.verdict}" for c in bad
        )
    return _done("soundness-matrix", not bad, detail, t0)


def claim_translation_models() -> ClaimResult:
    """Every recursive two-variable model agrees with its induced structure
    on the full corpus, pairing each context with its solution world."""
    t0 = time.time()
    sig = two_var_signature()
    corpus = lprop_corpus(sig, combine=True)
    count = 0
    for model in causal_population("Trec", sig):
        struct, naming = causal_to_structure(model)
        pairs = [(ctx, naming.world_of(ctx)) for ctx in sig.contexts()]
        report = certify_equivalence(model, struct, pairs, corpus)
        if not report:
            return _done(
                "translation-models",
                False,
                f"model {count} disagrees: {report.disagreement}",
                t0,
            )
        count += 1
    detail = f"{count} recursive models x {len(corpus)} formulas x 2 contexts"
    return _done("translation-models", True, detail, t0)


def _widen_context(model: CausalModel, copies: int = 2) -> CausalModel:
    """Replicate the model's single context into several identical ones, so
    context-independence of the equations becomes observable."""
    sig = model.signature
    (exo,) = sig.exogenous
    new_sig = Signature(
        sig.exogenous,
        sig.endogenous,
        {exo: tuple(range(copies)), **{x: sig.range[x] for x in sig.endogenous}},
    )
    tables = {}
    for x in sig.endogenous:
        inputs = new_sig.inputs_of(x)
        at = inputs.index(exo)
        table = {}
        for key in itertools.product(*(new_sig.range[v] for v in inputs)):
            old = key[:at] + (0,) + key[at + 1:]
            table[key] = model.equations[x][old]
        tables[x] = table
    return make_model(new_sig, tables)


def claim_translation_structures() -> ClaimResult:
    """Every enumerated recursive structure, read off at any world, yields a
    model that agrees there at every context of a widened signature."""
    t0 = time.time()
    from .enumeration import structures_mrec

    sig = two_var_signature()
    corpus = lprop_corpus(sig, combine=True)
    structs = list(structures_mrec())
    checked = 0
    for si, struct in enumerate(structs):
        for w in struct.worlds:
            model = _widen_context(structure_to_causal(struct, w))
            exo = model.signature.exogenous[0]
            pairs = [({exo: v}, w) for v in model.signature.range[exo]]
            report = certify_equivalence(model, struct, pairs, corpus)
            if not report:
                return _done(
                    "translation-structures",
                    False,
                    f"structure {si} at {w} disagrees: {report.disagreement}",
                    t0,
                )
            checked += 1
    detail = (
        f"{len(structs)} structures x 4 worlds x {len(corpus)} formulas, "
        f"2 contexts each"
    )
    return _done("translation-structures", True, detail, t0)


def wide_three_var_signature() -> Signature:
    """Three binary variables with a binary context; the sampling space for
    the refutation search (the single-context space is exhaustible)."""
    return Signature(
        exogenous=("U",),
        endogenous=("X1", "X2", "X3"),
        range={"U": (0, 1), "X1": (0, 1), "X2": (0, 1), "X3": (0, 1)},
    )


def _model_key(model: CausalModel) -> tuple:
    return tuple(
        (x, tuple(sorted(model.equations[x].items())))
        for x in model.signature.endogenous
    )


def claim_refutation_models(distinct: int = 10_000, seed: int = 11) -> ClaimResult:
    """No recursive three-variable model satisfies the cycle formula.

    Three sweeps: exhaustive over the single-context space, a seeded sample
    of distinct recursive models over the binary-context space, and a
    budget-limited randomized search whose outcome must be NotFound."""
    t0 = time.time()
    from .checklab import NotFound

    neg = Not(tstar_formula())

    narrow = 0
    for model in causal_models(three_var_signature()):
        if not is_recursive(model):
            continue
        narrow += 1
        if not eval_causal(model, {"U": 0}, neg):
            return _done(
                "refutation-models", False,
                f"exhaustive sweep found a countermodel: {_model_key(model)}", t0,
            )

    sig = wide_three_var_signature()
    contexts = list(sig.contexts())
    rng = random.Random(seed)
    seen: set = set()
    shapes: set = set()
    while len(seen) < distinct:
        model = random_recursive_model(rng, sig)
        key = _model_key(model)
        if key in seen:
            continue
        seen.add(key)
        shapes.add(
            frozenset((x, frozenset(d)) for x, d in dependence_graph(model).items())
        )
        for ctx in contexts:
            if not eval_causal(model, ctx, neg):
                return _done(
                    "refutation-models", False,
                    f"sampled model refutes at context {ctx}", t0,
                )

    outcome = find_countermodel(
        neg, ClassDescriptor("causal", "Trec", sig=sig, vars=3),
        budget=distinct, seed=seed,
    )
    if not isinstance(outcome, NotFound):
        return _done(
            "refutation-models", False,
            f"randomized search did not come back NotFound: {outcome}", t0,
        )
    detail = (
        f"{narrow} recursive models exhaustively at the single-context bound; "
        f"{len(seen)} distinct sampled models ({len(shapes)} dependence shapes) "
        f"plus a NotFound search of {outcome.trials} trials, no countermodel"
    )
    return _done("refutation-models", True, detail, t0)


def claim_refutation_structures(budget: int = 100_000, seed: int = 7) -> ClaimResult:
    """No sampled full eight-world structure falsifies the cycle negation."""
    t0 = time.time()
    neg = Not(tstar_formula())
    cd = ClassDescriptor("structure", "M_f", vars=3)
    outcome = find_countermodel(neg, cd, budget=budget, seed=seed)
    from .checklab import NotFound

    ok = isinstance(outcome, NotFound)
    if ok:
        detail = f"{outcome.trials} seeded structures x 8 worlds, no countermodel"
    elif not outcome:
        detail = f"countermodel at world {outcome.world}"
    else:
        detail = f"unexpected exhaustive verdict {outcome}"
    return _done("refutation-structures", ok, detail, t0)


def _load_script(name: str):
    with open(fixture_path(name)) as fh:
        return script_from_json(json.load(fh))


def claim_derivation_transitivity() -> ClaimResult:
    """The chained-conditional script checks, and its conclusion is valid
    over the generic structure population."""
    t0 = time.time()
    base, script = _load_script("lemma-a1.json")
    result = check_proof(base, script)
    if not result:
        return _done(
            "derivation-transitivity", False,
            f"line {result.line}: {result.violation}", t0,
        )
    sound = check_validity(result.conclusion, ClassDescriptor("structure", "M"))
    ok = bool(sound)
    detail = (
        f"{len(script.lines)} lines verified; conclusion "
        f"{fmt(result.conclusion)} valid over {sound.points} points"
        if ok
        else f"conclusion fails in the generic population: {sound}"
    )
    return _done("derivation-transitivity", ok, detail, t0)


def claim_derivation_impossibility(sample: int = 400, seed: int = 5) -> ClaimResult:
    """The cycle refutation checks under its base, fails exactly at the
    first disjoined-antecedent axiom when that schema is withheld, and its
    conclusion holds across sampled full structures."""
    t0 = time.time()
    base, script = _load_script("neg-phi.json")
    result = check_proof(base, script)
    if not result:
        return _done(
            "derivation-impossibility", False,
            f"line {result.line}: {result.violation}", t0,
        )
    if result.conclusion != Not(tstar_formula()):
        return _done(
            "derivation-impossibility", False,
            f"conclusion is {fmt(result.conclusion)}", t0,
        )

    ablated = check_proof(base.without("A4"), script)
    first_a4 = min(
        i + 1
        for i, line in enumerate(script.lines)
        if isinstance(line.by, AxiomInstance) and line.by.schema == "A4"
    )
    ablation_ok = (
        isinstance(ablated, FirstFailure)
        and ablated.line == first_a4
        and ablated.violation.kind == SchemaDisabled.__name__
    )
    if not ablation_ok:
        return _done(
            "derivation-impossibility", False,
            f"ablation landed at {ablated}", t0,
        )

    rng = random.Random(seed)
    for _ in range(sample):
        struct = random_full_structure(rng, 3)
        for w in struct.worlds:
            if not eval_cf(struct, w, result.conclusion):
                return _done(
                    "derivation-impossibility", False,
                    f"conclusion fails at sampled world {w}", t0,
                )
    detail = (
        f"{len(script.lines)} lines verified; ablation fails at line "
        f"{first_a4}; conclusion holds on {sample} sampled structures"
    )
    return _done("derivation-impossibility", True, detail, t0)


CLAIMS = (
    ("cycle-solutions", claim_cycle_solutions),
    ("cycle-class", claim_cycle_class),
    ("reversibility-example", claim_reversibility_example),
    ("soundness-matrix", claim_soundness_matrix),
    ("translation-models", claim_translation_models),
    ("translation-structures", claim_translation_structures),
    ("refutation-models", claim_refutation_models),
    ("refutation-structures", claim_refutation_structures),
    ("derivation-transitivity", claim_derivation_transitivity),
    ("derivation-impossibility", claim_derivation_impossibility),
)


def run_suite(progress=None) -> list[ClaimResult]:
    results = []
    for name, fn in CLAIMS:
        if progress:
            progress(name)
        results.append(fn())
    return results
