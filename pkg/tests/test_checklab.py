"""Validity sweeps, randomized falsification, and the matrix plumbing."""

import pytest

from cfworlds.checklab import (
    MATRIX_PLAN,
    ClassDescriptor,
    Countermodel,
    NotFound,
    ValidAtBound,
    check_schema,
    check_validity,
    find_countermodel,
)
from cfworlds.formula import parse
from cfworlds.models import Signature
from cfworlds.schemas import BoundsTooLarge


def wide_sig():
    return Signature(
        exogenous=("U",),
        endogenous=("X1", "X2", "X3"),
        range={"U": (0, 1), "X1": (0, 1), "X2": (0, 1), "X3": (0, 1)},
    )


def test_class_descriptor_validation():
    with pytest.raises(ValueError):
        ClassDescriptor("neither", "M")
    with pytest.raises(ValueError):
        ClassDescriptor("structure", "Tun")
    with pytest.raises(ValueError):
        ClassDescriptor("causal", "M_f")
    cd = ClassDescriptor("causal", "Trec")
    assert cd.resolved_sig().endogenous == ("X1", "X2")
    cd3 = ClassDescriptor("causal", "Trec", vars=3)
    assert cd3.resolved_sig().endogenous == ("X1", "X2", "X3")
    with pytest.raises(ValueError):
        ClassDescriptor("causal", "Trec", vars=4).resolved_sig()


def test_outcome_truthiness():
    assert ValidAtBound("M", 10)
    assert NotFound("M", 10, 0)
    assert not Countermodel("M")


def test_check_validity_structure_side():
    v = check_validity(parse("p=1 ~> p=1"), ClassDescriptor("structure", "M"))
    assert isinstance(v, ValidAtBound)
    assert v.points == 21952 * 3

    c = check_validity(parse("p=1"), ClassDescriptor("structure", "M"))
    assert isinstance(c, Countermodel)
    assert c.index == 0
    assert c.structure is not None
    assert c.world in ("w0", "w1", "w2")


def test_check_validity_causal_side():
    v = check_validity(parse("[X1<-1]X1=1"), ClassDescriptor("causal", "Tun"))
    assert isinstance(v, ValidAtBound)
    assert v.points == 144 * 2

    c = check_validity(parse("X1=0"), ClassDescriptor("causal", "Tun"))
    assert isinstance(c, Countermodel)
    assert c.model is not None
    assert c.context in ({"U": 0}, {"U": 1})


def test_check_schema_cells():
    ok = check_schema("C5", ClassDescriptor("structure", "Mrec"), "valid")
    assert ok.ok and ok.verdict == "valid"
    assert ok.instances == 8
    assert ok.witness is None
    data = ok.to_json()
    assert data["schema"] == "C5" and data["class"] == "Mrec"
    assert data["ok"] is True and "countermodel" not in data

    bad = check_schema("A7", ClassDescriptor("structure", "M"), "countermodel")
    assert bad.ok and bad.verdict == "countermodel"
    assert bad.witness is not None
    assert isinstance(bad.failing_instance, str)
    assert "countermodel" in bad.to_json()


def test_matrix_plan_shape():
    assert len(MATRIX_PLAN) == 30
    assert ("C5", "structure", "Mrec", "valid") in MATRIX_PLAN
    assert ("C5", "structure", "M_f+", "countermodel") in MATRIX_PLAN
    assert ("A7", "structure", "M", "countermodel") in MATRIX_PLAN
    assert ("A7", "structure", "M+", "valid") in MATRIX_PLAN


def test_find_countermodel_structure_deterministic():
    cd = ClassDescriptor("structure", "M_f", vars=3)
    a = find_countermodel(parse("X1=0"), cd, budget=3, seed=9)
    b = find_countermodel(parse("X1=0"), cd, budget=3, seed=9)
    assert isinstance(a, Countermodel) and isinstance(b, Countermodel)
    assert a.world == b.world
    assert a.structure == b.structure

    n = find_countermodel(parse("X1=0 | X1=1"), cd, budget=5, seed=9)
    assert isinstance(n, NotFound)
    assert n.trials == 5 and n.seed == 9


def test_find_countermodel_causal_side():
    hit = find_countermodel(
        parse("X1=0"), ClassDescriptor("causal", "Trec"), budget=10, seed=1
    )
    assert isinstance(hit, Countermodel)
    wide = ClassDescriptor("causal", "Trec", sig=wide_sig())
    miss = find_countermodel(
        parse("[X1<-1]X1=1"), wide, budget=20, seed=2
    )
    assert isinstance(miss, NotFound)


def test_enumeration_bounds_are_enforced():
    with pytest.raises(BoundsTooLarge):
        check_validity(parse("X1=1"), ClassDescriptor("structure", "M_f", vars=3))
    with pytest.raises(BoundsTooLarge):
        check_validity(
            parse("X1=1"), ClassDescriptor("causal", "Tun", sig=wide_sig(), cap=10)
        )
    with pytest.raises(BoundsTooLarge):
        find_countermodel(
            parse("X1=1"),
            ClassDescriptor("causal", "Tun", sig=wide_sig()),
            budget=1,
        )
