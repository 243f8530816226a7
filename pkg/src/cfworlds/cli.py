"""Command line front end.

Subcommands:

  solve      print the solutions of a model under a context and intervention
  eval       evaluate a formula on a model at a context, or on a structure
             at a world
  classify   report the class of a formula, model, or structure
  translate  convert between the two semantics, optionally certifying the
             result against the exhaustive depth-1 corpus
  axcheck    sweep one axiom schema over a model or structure class
  prove      replay a proof script and report the first bad line, if any
  paper-suite  run every golden reproduction and print the pass/fail matrix

Exit codes: 0 when the verdict is positive, 1 when it is negative (prove
reports the failing line number), 2 on usage or input errors.  Every
subcommand takes --report out.json and writes a machine-readable run record:
input files with hashes, verdict, witness paths, wall time, and seed.
Randomized modes never default the seed; pass --seed explicitly.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from .bridge import (
    NotRecursiveStructure,
    causal_to_structure,
    certify_equivalence,
    lprop_corpus,
    structure_to_causal,
)
from .causal_eval import eval_causal
from .checklab import (
    CAUSAL_CLASSES,
    STRUCTURE_CLASSES,
    ClassDescriptor,
    Countermodel,
    check_many,
    find_countermodel,
)
from .formula import FormulaSyntaxError, classify, fmt, parse
from .models import (
    Signature,
    class_of,
    in_Tun,
    intervene,
    is_recursive,
    load_model,
    save_model,
    solutions,
)
from .proofs import FirstFailure, check_proof, script_from_json
from .schemas import Bounds, SCHEMAS, instantiate
from .structures import classify_structure, eval_cf, load_structure, save_structure
from .suite import run_suite


class UsageError(ValueError):
    pass


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _load_model(path: str, inputs: dict):
    p = Path(path)
    try:
        model = load_model(p)
    except OSError as err:
        raise UsageError(f"cannot read model {path}: {err}")
    except ValueError as err:
        raise UsageError(f"bad model file {path}: {err}")
    inputs[path] = _sha256(p)
    return model


def _load_structure(path: str, inputs: dict):
    p = Path(path)
    try:
        struct = load_structure(p)
    except OSError as err:
        raise UsageError(f"cannot read structure {path}: {err}")
    except ValueError as err:
        raise UsageError(f"bad structure file {path}: {err}")
    inputs[path] = _sha256(p)
    return struct


def _parse_formula(text: str):
    try:
        return parse(text)
    except FormulaSyntaxError as err:
        raise UsageError(f"bad formula: {err}")


def _value_in(token: str, allowed, what: str):
    for v in allowed:
        if str(v) == token:
            return v
    raise UsageError(f"{what}: {token!r} not among {tuple(allowed)}")


def _parse_context(text: str, sig: Signature) -> dict:
    """"U=0" or "U=0,V=1" over the exogenous variables."""
    ctx = {}
    for part in text.replace(",", " ").split():
        if "=" not in part:
            raise UsageError(f"context binding {part!r} is not NAME=VALUE")
        name, _, raw = part.partition("=")
        if name not in sig.exogenous:
            raise UsageError(f"{name!r} is not an exogenous variable")
        ctx[name] = _value_in(raw, sig.range[name], f"context value for {name}")
    missing = [u for u in sig.exogenous if u not in ctx]
    if missing:
        raise UsageError(f"context leaves {missing} unbound")
    return ctx


def _parse_settings(texts, sig: Signature) -> dict:
    """Intervention bindings "X2<-1", several per flag separated by ";"."""
    out = {}
    for text in texts:
        for part in text.split(";"):
            part = part.strip()
            if not part:
                continue
            if "<-" not in part:
                raise UsageError(f"setting {part!r} is not NAME<-VALUE")
            name, _, raw = part.partition("<-")
            name = name.strip()
            if name not in sig.endogenous:
                raise UsageError(f"{name!r} is not an endogenous variable")
            out[name] = _value_in(raw.strip(), sig.range[name], f"value for {name}")
    return out


def _report(args, subcommand: str, inputs: dict, verdict: str,
            witnesses: list, seconds: float, seed, details: dict):
    if not args.report:
        return
    payload = {
        "subcommand": subcommand,
        "inputs": inputs,
        "verdict": verdict,
        "witnesses": witnesses,
        "seconds": round(seconds, 3),
        "seed": seed,
        "details": details,
    }
    with open(args.report, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# --- subcommands ---


def cmd_solve(args) -> int:
    t0 = time.time()
    inputs: dict = {}
    model = _load_model(args.model, inputs)
    sig = model.signature
    ctx = _parse_context(args.context, sig)
    setting = _parse_settings(args.set or [], sig)
    if setting:
        model = intervene(model, setting)
    sols = solutions(model, ctx)
    for s in sols:
        print("(" + ",".join(str(s[x]) for x in sig.endogenous) + ")")
    if not sols:
        print("no solution")
    verdict = f"{len(sols)} solution(s)"
    _report(args, "solve", inputs, verdict, [], time.time() - t0, None,
            {"context": ctx, "set": setting, "solutions": len(sols)})
    return 0 if sols else 1


def cmd_eval(args) -> int:
    t0 = time.time()
    inputs: dict = {}
    f = _parse_formula(args.formula)
    if args.model:
        model = _load_model(args.model, inputs)
        ctx = _parse_context(args.context, model.signature)
        try:
            value = eval_causal(model, ctx, f)
        except ValueError as err:
            raise UsageError(str(err))
        at = {"context": ctx}
    else:
        struct = _load_structure(args.structure, inputs)
        if args.world not in struct.worlds:
            raise UsageError(f"unknown world {args.world!r}")
        value = eval_cf(struct, args.world, f)
        at = {"world": args.world}
    print("true" if value else "false")
    _report(args, "eval", inputs, "true" if value else "false", [],
            time.time() - t0, None, {"formula": fmt(f), **at})
    return 0 if value else 1


def cmd_classify(args) -> int:
    t0 = time.time()
    inputs: dict = {}
    details: dict = {}
    if args.formula:
        f = _parse_formula(args.formula)
        name = classify(f).name
        print(name)
        details = {"formula": fmt(f), "language_class": name}
    elif args.model:
        model = _load_model(args.model, inputs)
        cls = class_of(model)
        unique = bool(in_Tun(model))
        rec = bool(is_recursive(model))
        print(f"{cls} (unique solutions: {unique}, recursive: {rec})")
        details = {"class": cls, "unique_solutions": unique, "recursive": rec}
    else:
        struct = _load_structure(args.structure, inputs)
        sc = classify_structure(struct)
        flags = {
            "acceptable": sc.acceptable,
            "full": sc.full,
            "total": sc.total,
            "recursive": sc.recursive,
            "recursive_uniform": sc.recursive_uniform,
        }
        print(", ".join(f"{k}: {v}" for k, v in flags.items()))
        details = flags
    _report(args, "classify", inputs, "classified", [], time.time() - t0,
            None, details)
    return 0


def cmd_translate(args) -> int:
    t0 = time.time()
    inputs: dict = {}
    witnesses: list = []
    if args.to == "structure":
        model = _load_model(args.infile, inputs)
        try:
            struct, naming = causal_to_structure(model)
        except ValueError as err:
            print(f"translation failed: {err}", file=sys.stderr)
            _report(args, "translate", inputs, "failed", [], time.time() - t0,
                    None, {"error": str(err)})
            return 1
        if args.out:
            save_structure(struct, args.out)
            witnesses.append(args.out)
        certified = None
        if args.certify:
            sig = model.signature
            corpus = lprop_corpus(sig, combine=True)
            pairs = [(ctx, naming.world_of(ctx)) for ctx in sig.contexts()]
            certified = certify_equivalence(model, struct, pairs, corpus)
        detail = {"worlds": len(struct.worlds)}
    else:
        struct = _load_structure(args.infile, inputs)
        if not args.world:
            raise UsageError("--world is required with --to model")
        if args.world not in struct.worlds:
            raise UsageError(f"unknown world {args.world!r}")
        try:
            model = structure_to_causal(struct, args.world)
        except NotRecursiveStructure as err:
            print(f"translation failed: {err}", file=sys.stderr)
            _report(args, "translate", inputs, "failed", [], time.time() - t0,
                    None, {"error": str(err)})
            return 1
        if args.out:
            save_model(model, args.out)
            witnesses.append(args.out)
        certified = None
        if args.certify:
            sig = model.signature
            corpus = lprop_corpus(sig, combine=True)
            pairs = [(ctx, args.world) for ctx in sig.contexts()]
            certified = certify_equivalence(model, struct, pairs, corpus)
        detail = {"variables": len(model.signature.endogenous)}
    if certified is not None:
        detail["certified"] = {
            "agreed": certified.agreed,
            "formulas": certified.formulas,
            "pairs": certified.pairs,
        }
        if not certified:
            detail["certified"]["disagreement"] = {
                k: fmt(v) if k == "formula" else v
                for k, v in certified.disagreement.items()
            }
            print("certification failed:", detail["certified"]["disagreement"])
            _report(args, "translate", inputs, "disagreed", witnesses,
                    time.time() - t0, None, detail)
            return 1
        print(f"certified on {certified.formulas} formulas "
              f"x {certified.pairs} pair(s)")
    else:
        print("translated")
    _report(args, "translate", inputs, "ok", witnesses, time.time() - t0,
            None, detail)
    return 0


_ASSIGN_CLASSES = ("M_f", "M_f+", "Mrec")


def _axcheck_setup(args):
    """Class descriptor, bounds, and schema instances matched to the
    population's vocabulary."""
    from . import enumeration

    if args.schema not in SCHEMAS:
        raise UsageError(f"unknown schema {args.schema!r}")
    if args.cls in CAUSAL_CLASSES:
        side = "causal"
    elif args.cls in STRUCTURE_CLASSES:
        side = "structure"
    else:
        raise UsageError(f"unknown class {args.cls!r}")
    schema = SCHEMAS[args.schema]
    if side == "causal" and schema.side == "structure":
        raise UsageError(
            f"schema {args.schema} uses raw conditionals and applies only "
            f"to structure classes")
    cd = ClassDescriptor(side, args.cls, vars=args.vars)

    if side == "causal":
        vocab = {x: cd.resolved_sig().range[x]
                 for x in cd.resolved_sig().endogenous}
    elif args.vars == 2:
        vocab = enumeration.population_vocab(args.cls)
    else:
        vocab = {f"X{i + 1}": (0, 1) for i in range(args.vars)}
    bounds = Bounds(letters=tuple(vocab)[:2], max_prefix=args.max_prefix)

    if args.schema.startswith("V"):
        arg = vocab
    elif args.schema.startswith(("A", "D", "RA")):
        arg = None
    else:
        if side == "structure" and args.cls not in _ASSIGN_CLASSES:
            raise UsageError(
                f"schema {args.schema} substitutes intervention prefixes "
                f"over assignments; use an assignment-style class "
                f"({', '.join(_ASSIGN_CLASSES)}) or a causal class")
        if side == "causal":
            arg = cd.resolved_sig()
        else:
            arg = Signature(("U",), tuple(vocab),
                            {"U": (0,), **dict(vocab)})
    return cd, bounds, instantiate(args.schema, arg, bounds)


def cmd_axcheck(args) -> int:
    t0 = time.time()
    cd, bounds, inst = _axcheck_setup(args)
    witnesses: list = []
    details: dict = {"schema": args.schema, "class": args.cls,
                     "vars": args.vars, "mode": args.mode,
                     "instances": len(inst)}

    if args.mode == "exhaustive":
        try:
            verdicts = check_many(inst, cd)
        except ValueError as err:
            raise UsageError(str(err))
        found = None
        points = 0
        for f, v in zip(inst, verdicts):
            if isinstance(v, Countermodel):
                found = (f, v)
                break
            points = max(points, v.points)
        details["points"] = points
        if found:
            f, outcome = found
            verdict = "countermodel"
            details["failing_instance"] = fmt(f)
            witnesses.extend(_save_witness(args, outcome))
            print(f"countermodel for {fmt(f)}")
        else:
            verdict = "valid"
            print(f"valid at the bound: {len(inst)} instance(s) "
                  f"over {points} points")
    else:
        if args.seed is None:
            raise UsageError("--mode random requires --seed")
        found = None
        trials = 0
        try:
            for k, f in enumerate(inst):
                outcome = find_countermodel(f, cd, budget=args.budget,
                                            seed=args.seed + k)
                if isinstance(outcome, Countermodel):
                    found = (f, outcome)
                    break
                trials += outcome.trials
        except ValueError as err:
            raise UsageError(str(err))
        details["trials"] = trials
        if found:
            f, outcome = found
            verdict = "countermodel"
            details["failing_instance"] = fmt(f)
            witnesses.extend(_save_witness(args, outcome))
            print(f"countermodel for {fmt(f)}")
        else:
            verdict = "no countermodel found"
            print(f"no countermodel in {trials} sampled structure(s) "
                  f"across {len(inst)} instance(s)")

    _report(args, "axcheck", {}, verdict, witnesses, time.time() - t0,
            args.seed, details)
    return 0 if verdict != "countermodel" else 1


def _save_witness(args, witness: Countermodel) -> list:
    """Write the countermodel next to the report, if one was requested."""
    if not args.report:
        return []
    base = Path(args.report)
    path = base.with_name(base.stem + ".countermodel.json")
    if witness.model is not None:
        save_model(witness.model, path)
    else:
        save_structure(witness.structure, path)
    return [str(path)]


def cmd_prove(args) -> int:
    t0 = time.time()
    inputs: dict = {}
    p = Path(args.script)
    try:
        with open(p) as fh:
            data = json.load(fh)
        base, script = script_from_json(data)
    except OSError as err:
        raise UsageError(f"cannot read script {args.script}: {err}")
    except (ValueError, KeyError, TypeError) as err:
        raise UsageError(f"bad proof script {args.script}: {err}")
    inputs[args.script] = _sha256(p)
    result = check_proof(base, script)
    if isinstance(result, FirstFailure):
        print(f"line {result.line}: {result.violation}")
        _report(args, "prove", inputs, "failed", [], time.time() - t0, None,
                {"line": result.line, "violation": str(result.violation)})
        return 1
    print(f"Verified: {fmt(result.conclusion)}")
    _report(args, "prove", inputs, "verified", [], time.time() - t0, None,
            {"lines": len(script.lines), "conclusion": fmt(result.conclusion)})
    return 0


def cmd_paper_suite(args) -> int:
    t0 = time.time()
    results = run_suite(progress=lambda name: print(f"... {name}", flush=True))
    width = max(len(r.claim) for r in results)
    print()
    for r in results:
        mark = "PASS" if r.ok else "FAIL"
        print(f"{mark}  {r.claim:<{width}}  {r.seconds:7.2f}s  {r.detail}")
    ok = all(r.ok for r in results)
    print()
    print(f"{sum(r.ok for r in results)}/{len(results)} claims pass")
    _report(args, "paper-suite", {}, "pass" if ok else "fail", [],
            time.time() - t0, None, {"claims": [r.to_json() for r in results]})
    return 0 if ok else 1


# --- wiring ---


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cfworlds",
        description="Workbench for interventionist and closest-world "
                    "counterfactuals.",
    )
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(fn=fn)
        p.add_argument("--report", metavar="OUT.json",
                       help="write a machine-readable run record")
        return p

    p = add("solve", cmd_solve, "solve a model's equations")
    p.add_argument("--model", required=True)
    p.add_argument("--context", required=True, metavar='"U=0"')
    p.add_argument("--set", action="append", metavar='"X2<-1"',
                   help="intervene before solving; repeatable, ';' separates")

    p = add("eval", cmd_eval, "evaluate a formula")
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--model")
    where.add_argument("--structure")
    p.add_argument("--context", metavar='"U=0"')
    p.add_argument("--world")
    p.add_argument("--formula", required=True)

    p = add("classify", cmd_classify, "classify a formula, model, or structure")
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--formula")
    what.add_argument("--model")
    what.add_argument("--structure")

    p = add("translate", cmd_translate, "convert between the two semantics")
    p.add_argument("--to", required=True, choices=("structure", "model"))
    p.add_argument("--in", dest="infile", required=True, metavar="F.json")
    p.add_argument("--world", help="base world when translating to a model")
    p.add_argument("--out", metavar="G.json")
    p.add_argument("--certify", action="store_true",
                   help="check agreement on the exhaustive depth-1 corpus")

    p = add("axcheck", cmd_axcheck, "sweep an axiom schema over a class")
    p.add_argument("--schema", required=True)
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--vars", type=int, default=2)
    p.add_argument("--mode", choices=("exhaustive", "random"),
                   default="exhaustive")
    p.add_argument("--budget", type=int, default=1000,
                   help="samples per instance in random mode")
    p.add_argument("--seed", type=int,
                   help="required in random mode; no wall-clock default")
    p.add_argument("--max-prefix", type=int, default=None)

    p = add("prove", cmd_prove, "replay a proof script")
    p.add_argument("--script", required=True, metavar="P.json")

    add("paper-suite", cmd_paper_suite, "run every golden reproduction")

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.subcommand == "eval":
        if args.model and not args.context:
            print("cfworlds eval: --model needs --context", file=sys.stderr)
            return 2
        if args.structure and not args.world:
            print("cfworlds eval: --structure needs --world", file=sys.stderr)
            return 2
    try:
        return args.fn(args)
    except UsageError as err:
        print(f"cfworlds {args.subcommand}: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
