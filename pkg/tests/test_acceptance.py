"""Acceptance gate: the eight headline behaviors, one test and one
pass/fail line each, with their time budgets asserted.

Each test reuses the corresponding golden-reproduction claim so the gate
and the command line suite can never drift apart.  Budgets are wall-clock
seconds measured around the claim call.
"""

import random
import time

from cfworlds.formula import fmt, parse, random_formula, strict_equal
from cfworlds.suite import (
    claim_cycle_class,
    claim_cycle_solutions,
    claim_derivation_impossibility,
    claim_derivation_transitivity,
    claim_refutation_models,
    claim_refutation_structures,
    claim_reversibility_example,
    claim_soundness_matrix,
    claim_translation_models,
    claim_translation_structures,
)


def _line(n, label, result):
    status = "PASS" if result.ok else "FAIL"
    print(f"criterion {n} ({label}): {status} in {result.seconds:.2f}s"
          f" -- {result.detail}")
    return result


def test_criterion_1_cycle_solutions():
    r = _line(1, "forced solutions of the three-cycle model",
              claim_cycle_solutions())
    assert r.ok, r.detail
    assert r.seconds < 1.0


def test_criterion_2_cycle_classification():
    r = _line(2, "unique solutions without recursiveness",
              claim_cycle_class())
    assert r.ok, r.detail
    assert r.seconds < 1.0


def test_criterion_3_reversibility_example():
    r = _line(3, "eight-world reversibility failure", claim_reversibility_example())
    assert r.ok, r.detail
    assert r.seconds < 1.0


def test_criterion_4_soundness_matrix():
    r = _line(4, "full schema-by-class soundness matrix",
              claim_soundness_matrix())
    assert r.ok, r.detail
    assert r.seconds < 600.0


def test_criterion_5_translations():
    t0 = time.time()
    models = _line(5, "model-to-structure agreement", claim_translation_models())
    structures = _line(5, "structure-to-model agreement",
                       claim_translation_structures())
    assert models.ok, models.detail
    assert structures.ok, structures.detail
    assert time.time() - t0 < 600.0


def test_criterion_6_refutation_evidence():
    t0 = time.time()
    recursive = _line(6, "no recursive countermodel to the cycle refutation",
                      claim_refutation_models())
    sampled = _line(6, "no sampled structure countermodel",
                    claim_refutation_structures())
    assert recursive.ok, recursive.detail
    assert sampled.ok, sampled.detail
    assert time.time() - t0 < 600.0


def test_criterion_7_derivations():
    t0 = time.time()
    trans = _line(7, "transitivity derivation", claim_derivation_transitivity())
    impossible = _line(7, "cycle impossibility derivation",
                       claim_derivation_impossibility())
    assert trans.ok, trans.detail
    assert impossible.ok, impossible.detail
    assert time.time() - t0 < 5.0


def test_criterion_8_printer_parser_round_trip():
    rng = random.Random(881)
    vocab = [("X1", (0, 1)), ("X2", (0, 1)), ("X3", (0, 1, 2)), ("p", (0, 1))]
    n = 10_000
    for _ in range(n):
        f = random_formula(rng, vocab, depth=rng.randrange(6))
        g = parse(fmt(f))
        assert g == f
        assert strict_equal(g, f)
    print(f"criterion 8 (parse/print round trip): PASS on {n} formulas")
