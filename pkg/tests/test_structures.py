"""Closest-world structures: validation, truth, classification, JSON."""

import pytest

from cfworlds.catalog import branching, example_c5
from cfworlds.formula import parse
from cfworlds.structures import (
    NotReflexive,
    NotTransitive,
    SelfNotInWw,
    SelfNotMinimal,
    UnknownAtom,
    assignment_at,
    chain_order,
    classify_structure,
    closest,
    eval_cf,
    make_structure,
    ranked,
    structure_from_json,
    structure_to_json,
    value_at,
)


def two_chain():
    """Worlds a and b over p; each world sees both, itself first."""
    assign = {"a": {"p": 0}, "b": {"p": 1}}
    order = {"a": chain_order(["a", "b"]), "b": chain_order(["b", "a"])}
    return make_structure(["a", "b"], assign, order, {"p": (0, 1)})


def test_make_structure_rejects_bad_ids():
    with pytest.raises(ValueError):
        make_structure([], {}, {})
    with pytest.raises(ValueError):
        make_structure(["a", "a"], {"a": {}}, {"a": {("a", "a")}})
    with pytest.raises(ValueError):
        make_structure(["a"], {"b": {}}, {"a": {("a", "a")}})
    with pytest.raises(ValueError):
        make_structure(["a"], {"a": {}}, {"b": {("b", "b")}})


def test_make_structure_order_checks_in_order():
    with pytest.raises(SelfNotInWw):
        make_structure(["a", "b"], {}, {"a": {("b", "b")}, "b": {("b", "b")}})
    with pytest.raises(NotReflexive):
        make_structure(
            ["a", "b"],
            {},
            {"a": {("a", "a"), ("a", "b")}, "b": {("b", "b")}},
        )
    with pytest.raises(NotTransitive):
        make_structure(
            ["a", "b", "c"],
            {},
            {
                "a": {("a", "a"), ("b", "b"), ("c", "c"),
                      ("a", "b"), ("b", "c")},
                "b": {("b", "b")},
                "c": {("c", "c")},
            },
        )
    with pytest.raises(SelfNotMinimal):
        make_structure(
            ["a", "b"],
            {},
            {"a": {("a", "a"), ("b", "b"), ("b", "a"), ("a", "b")},
             "b": {("b", "b")}},
        )


def test_make_structure_range_checks():
    with pytest.raises(ValueError):
        make_structure(["a"], {"a": {"p": 1}}, {"a": {("a", "a")}},
                       {"p": ()})
    with pytest.raises(ValueError):
        make_structure(["a"], {"a": {"p": 1}}, {"a": {("a", "a")}},
                       {"p": (0, 0)})
    with pytest.raises(ValueError):
        make_structure(["a"], {"a": {"p": 2}}, {"a": {("a", "a")}},
                       {"p": (0, 1)})


def test_chain_order_pairs():
    assert chain_order(["a", "b"]) == {
        ("a", "a"), ("a", "b"), ("b", "b"),
    }


def test_world_readers():
    s = two_chain()
    assert ranked(s, "a") == {"a", "b"}
    assert value_at(s, "a", "p") == 0
    assert assignment_at(s, "b") == {"p": 1}
    bare = make_structure(["w"], {"w": []}, {"w": {("w", "w")}},
                          {"p": (0, 1)})
    assert value_at(bare, "w", "p") is None
    assert assignment_at(bare, "w") is None


def test_closest_picks_minimal_antecedent_worlds():
    s = branching()
    assert closest(s, "000", parse("p1=1 | p2=1")) == {"101", "011"}
    assert closest(s, "000", parse("p1=1")) == {"101", "100"}
    assert closest(s, "000", parse("p1=1 & p1=0")) == frozenset()
    with pytest.raises(ValueError):
        closest(s, "zzz", parse("p1=1"))


def test_eval_cf_on_branching():
    s = branching()
    assert eval_cf(s, "000", parse("p1=1 | p2=1 ~> q=1"))
    assert not eval_cf(s, "000", parse("p1=1 ~> q=1"))
    assert not eval_cf(s, "000", parse("p2=1 ~> q=1"))
    assert not eval_cf(s, "000", parse("p1=1 | p2=1 ~> p1=1"))
    assert not eval_cf(s, "000", parse("p1=1 | p2=1 ~> p2=1"))
    assert eval_cf(s, "000", parse("p1=1 & p1=0 ~> false"))
    assert eval_cf(s, "000", parse("p1=1 ~> (p2=1 ~> q=1)"))


def test_eval_cf_prefix_sugar_and_vocabulary():
    s = branching()
    assert not eval_cf(s, "000", parse("[p1<-1]q=1"))
    with pytest.raises(UnknownAtom):
        eval_cf(s, "000", parse("r=1 ~> q=1"))
    with pytest.raises(UnknownAtom):
        eval_cf(s, "000", parse("p1=7 ~> q=1"))
    with pytest.raises(ValueError):
        eval_cf(s, "nope", parse("q=1"))


def test_classify_example_c5():
    cls = classify_structure(example_c5())
    assert cls.acceptable
    assert cls.full
    assert cls.total
    assert not cls.recursive
    assert not cls.recursive_uniform
    assert cls.witness_orders == {}
    assert cls.uniform_order is None


def test_classify_branching():
    cls = classify_structure(branching())
    assert cls.acceptable
    assert not cls.full
    assert not cls.total
    assert not cls.recursive


def test_classify_two_chain():
    cls = classify_structure(two_chain())
    assert cls.acceptable and cls.full and cls.total
    assert cls.recursive and cls.recursive_uniform
    assert cls.witness_orders == {"a": ("p",), "b": ("p",)}
    assert cls.uniform_order == ("p",)


def test_json_round_trip_assignment_form():
    s = example_c5()
    data = structure_to_json(s)
    assert isinstance(data["worlds"], dict)
    assert all([a, b] not in data["order"][w] or a != b
               for w in data["order"] for a, b in data["order"][w])
    back = structure_from_json(data)
    assert back == s


def test_json_round_trip_atom_worlds_form():
    assign = {"a": [("p", 1)], "b": []}
    order = {"a": chain_order(["a", "b"]), "b": {("b", "b")}}
    s = make_structure(["a", "b"], assign, order, {"p": (0, 1)})
    data = structure_to_json(s)
    assert data["worlds"] == ["a", "b"]
    assert data["atom_worlds"] == {"p=1": ["a"]}
    back = structure_from_json(data)
    assert back == s
