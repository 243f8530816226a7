"""Formula truth in causal models, and the prefix-pushing rewriter."""

import random

import pytest

from cfworlds.catalog import forest_fire, tstar, tstar_formula
from cfworlds.causal_eval import IllFormed, LanguageTooRich, eval_causal, sat, to_lprop
from cfworlds.formula import LangClass, classify, parse, random_formula
from cfworlds.models import Signature, make_model, table_from_fn


def mirror_model():
    """X1 and X2 copy each other: two solutions per context."""
    sig = Signature(("U",), ("X1", "X2"),
                    {"U": (0, 1), "X1": (0, 1), "X2": (0, 1)})
    return make_model(sig, {
        "X1": table_from_fn(sig, "X1", lambda env: env["X2"]),
        "X2": table_from_fn(sig, "X2", lambda env: env["X1"]),
    })


def clash_model():
    """X1 wants the opposite of X2, X2 copies X1: no solution."""
    sig = Signature(("U",), ("X1", "X2"),
                    {"U": (0, 1), "X1": (0, 1), "X2": (0, 1)})
    return make_model(sig, {
        "X1": table_from_fn(sig, "X1", lambda env: 1 - env["X2"]),
        "X2": table_from_fn(sig, "X2", lambda env: env["X1"]),
    })


def test_sat_connectives():
    a = {"p": 1, "q": 0}
    assert sat(a, parse("p=1 & !q=1"))
    assert sat(a, parse("q=1 -> p=0"))
    assert sat(a, parse("p=1 <-> q=0"))
    assert not sat(a, parse("false | q=1"))
    with pytest.raises(LanguageTooRich):
        sat(a, parse("[p<-1]q=1"))


def test_tstar_signature_formula():
    assert eval_causal(tstar(), {"U": 0}, tstar_formula())


def test_forest_fire_oracle():
    model = forest_fire()
    assert eval_causal(model, {"E": 1}, parse("F=1 & L=1 & ML=0"))
    assert eval_causal(model, {"E": 1}, parse("[L<-0]F=0"))
    assert eval_causal(model, {"E": 3}, parse("[L<-0]F=1"))
    assert eval_causal(model, {"E": 0}, parse("[ML<-1]F=1"))


def test_prefix_is_universal_over_solutions():
    model = mirror_model()
    assert eval_causal(model, {"U": 0}, parse("[](X1=0 | X1=1)"))
    assert not eval_causal(model, {"U": 0}, parse("[]X1=0 | []X1=1"))
    assert eval_causal(model, {"U": 0}, parse("[X2<-1]X1=1"))


def test_no_solutions_vacuous():
    model = clash_model()
    assert eval_causal(model, {"U": 0}, parse("[]false"))
    assert eval_causal(model, {"U": 0}, parse("[]X1=1"))
    assert not eval_causal(model, {"U": 0}, parse("!([]!X1=1)"))
    assert eval_causal(model, {"U": 0}, parse("<X1<-0>true"))


def test_raw_conditional_rejected():
    with pytest.raises(LanguageTooRich):
        eval_causal(tstar(), {"U": 0}, parse("X1=1 & X2=1 ~> X3=0"))


def test_ill_formed_atoms_rejected():
    with pytest.raises(IllFormed):
        eval_causal(tstar(), {"U": 0}, parse("Y=1"))
    with pytest.raises(IllFormed):
        eval_causal(tstar(), {"U": 0}, parse("U=0"))
    with pytest.raises(IllFormed):
        eval_causal(tstar(), {"U": 0}, parse("X1=5"))


def test_to_lprop_shape():
    f = parse("[X1<-1](X2=1 & X3=0)")
    g = to_lprop(f)
    assert classify(g) == LangClass.LPROP
    assert g == parse("[X1<-1]X2=1 & [X1<-1]X3=0")


def test_to_lprop_agrees_on_unique_solution_models():
    model = forest_fire()
    rng = random.Random(4)
    vocab = [("L", [0, 1]), ("ML", [0, 1]), ("F", [0, 1])]
    contexts = [{"E": e} for e in (0, 1, 2, 3)]
    checked = 0
    while checked < 300:
        f = random_formula(rng, vocab, depth=3)
        if classify(f) > LangClass.LEX:
            continue
        g = to_lprop(f)
        assert classify(g) <= LangClass.LPROP
        for ctx in contexts:
            assert eval_causal(model, ctx, f) == eval_causal(model, ctx, g)
        checked += 1


def test_to_lprop_can_disagree_beyond_unique_solutions():
    """The rewrite is only promised on unique-solution models.  A model
    with a mirror pair that survives the intervention separates a
    prefixed disjunction from the disjunction of prefixes."""
    sig = Signature(("U",), ("X1", "X2", "X3"),
                    {"U": (0, 1), "X1": (0, 1), "X2": (0, 1), "X3": (0, 1)})
    model = make_model(sig, {
        "X1": table_from_fn(sig, "X1", lambda env: 0),
        "X2": table_from_fn(sig, "X2", lambda env: env["X3"]),
        "X3": table_from_fn(sig, "X3", lambda env: env["X2"]),
    })
    f = parse("[X1<-1](X2=0 | X2=1)")
    g = to_lprop(f)
    assert eval_causal(model, {"U": 0}, f)
    assert not eval_causal(model, {"U": 0}, g)


def test_to_lprop_rejects_raw_conditionals():
    with pytest.raises(LanguageTooRich):
        to_lprop(parse("p=1 ~> q=1"))
