"""Proof checker: tautology engine, templates, error taxonomy, mutations."""

import itertools
import random

import pytest

from cfworlds.causal_eval import sat
from cfworlds.derivations import impossibility_script, transitivity_script
from cfworlds.formula import (
    And,
    Atom,
    Cf,
    Iff,
    Implies,
    Not,
    Or,
    fmt,
    parse,
)
from cfworlds.proofs import (
    AX,
    AX_PLUS,
    AxiomBase,
    AxiomInstance,
    BadSubstitution,
    FirstFailure,
    ForwardReference,
    MP,
    ProofLine,
    ProofScript,
    RA1,
    RA2,
    RuleMismatch,
    SchemaDisabled,
    SideConditionViolated,
    TautologyInstance,
    Verified,
    check_proof,
    instantiate_axiom,
    is_tautology,
    opaque_letters,
    script_from_json,
    script_to_json,
)


def test_opaque_letters():
    f = parse("(p=1 ~> q=1) -> (p=1 | (p=1 ~> q=1))")
    letters = opaque_letters(f)
    assert len(letters) == 2
    assert parse("p=1 ~> q=1") in letters
    assert Atom("p", 1) in letters


def test_is_tautology_basics():
    assert is_tautology(parse("p=1 | !p=1"))
    assert is_tautology(parse("(p=1 ~> q=1) -> (p=1 ~> q=1)"))
    assert is_tautology(parse("(p=1 & q=1) -> p=1"))
    assert not is_tautology(parse("p=1 -> q=1"))
    assert not is_tautology(parse("(p=1 ~> q=1) -> (q=1 ~> p=1)"))
    assert is_tautology(parse("true"))
    assert not is_tautology(parse("false"))


def test_is_tautology_letter_cap():
    wide = parse("p1=1 | p2=1 | p3=1 | p4=1 | p5=1 | p6=1 | p7=1 | p8=1 | p9=1")
    with pytest.raises(RuleMismatch):
        is_tautology(wide)
    ok = parse("p1=1 | p2=1 | p3=1 | p4=1 | p5=1 | p6=1 | p7=1 | p8=1")
    assert not is_tautology(ok)


def _random_prop(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        return Atom(rng.choice(("p", "q", "r")), 1)
    op = rng.choice(("not", "and", "or", "imp", "iff"))
    if op == "not":
        return Not(_random_prop(rng, depth - 1))
    left = _random_prop(rng, depth - 1)
    right = _random_prop(rng, depth - 1)
    return {"and": And, "or": Or, "imp": Implies, "iff": Iff}[op](left, right)


def test_is_tautology_against_brute_force():
    rng = random.Random(404)
    for _ in range(300):
        f = _random_prop(rng, 4)
        brute = all(
            sat(dict(zip(("p", "q", "r"), bits)), f)
            for bits in itertools.product((0, 1), repeat=3)
        )
        assert is_tautology(f) == brute


def test_axiom_templates_build_expected_shapes():
    f1, f2, g = parse("p=1"), parse("q=1"), parse("p=1 & q=1")
    built = instantiate_axiom("A4", {"phi1": f1, "phi2": f2, "psi": g})
    assert built == Implies(
        And(Cf(f1, g, sugar=False), Cf(f2, g, sugar=False)),
        Cf(Or(f1, f2), g, sugar=False),
    )
    assert instantiate_axiom("A5", {}) == parse("!(true ~> false)")
    vocab = {"X1": (0, 1), "X2": (0, 1)}
    assert instantiate_axiom("V1", {"var": "X1"}, vocab) == parse("X1=0 | X1=1")
    v3 = instantiate_axiom("V3", {"assign": {"X1": 1}}, vocab)
    assert v3 == parse("!(X1=1 ~> false)")


def test_axiom_template_errors():
    with pytest.raises(BadSubstitution):
        instantiate_axiom("ZZ", {})
    with pytest.raises(BadSubstitution):
        instantiate_axiom("A1", {})
    with pytest.raises(BadSubstitution):
        instantiate_axiom("A1", {"phi": "p=1"})
    vocab = {"X1": (0, 1)}
    with pytest.raises(BadSubstitution):
        instantiate_axiom("V2", {"var": "X1", "val": 0, "other": 5}, vocab)
    with pytest.raises(SideConditionViolated):
        instantiate_axiom("V2", {"var": "X1", "val": 0, "other": 0}, vocab)
    with pytest.raises(SideConditionViolated):
        instantiate_axiom("V3", {"assign": {}}, vocab)
    with pytest.raises(BadSubstitution):
        instantiate_axiom("V3", {"assign": {"X2": 0}}, vocab)
    with pytest.raises(BadSubstitution):
        instantiate_axiom("V1", {"var": "X1"}, None)


def test_axiom_base_invariants():
    assert "A0" in AX.axioms and "MP" in AX.rules
    assert AX_PLUS.axioms - AX.axioms == {"V2", "V3"}
    smaller = AX.without("A4")
    assert "A4" not in smaller.axioms
    assert "A0" in smaller.axioms
    with pytest.raises(ValueError):
        AX.without("A0")
    with pytest.raises(ValueError):
        AX.without("MP")
    with pytest.raises(ValueError):
        AX.extend("ZZ")
    with pytest.raises(ValueError):
        AxiomBase(frozenset({"B9"}), frozenset())


def _tiny_script():
    a5 = parse("!(true ~> false)")
    taut = Implies(a5, Or(a5, Atom("p", 1)))
    return ProofScript((
        ProofLine(a5, AxiomInstance("A5", {})),
        ProofLine(taut, TautologyInstance()),
        ProofLine(Or(a5, Atom("p", 1)), MP(1, 2)),
    ))


def test_check_proof_verifies():
    result = check_proof(AX, _tiny_script())
    assert isinstance(result, Verified)
    assert bool(result)
    assert result.conclusion == parse("!(true ~> false) | p=1")


def test_check_proof_error_kinds():
    script = _tiny_script()

    bad = ProofScript((
        script.lines[0],
        script.lines[1],
        ProofLine(script.lines[2].formula, MP(2, 1)),
    ))
    r = check_proof(AX, bad)
    assert isinstance(r, FirstFailure) and not bool(r)
    assert r.line == 3 and r.violation.kind == RuleMismatch.__name__

    fwd = ProofScript((
        script.lines[0],
        script.lines[1],
        ProofLine(script.lines[2].formula, MP(1, 3)),
    ))
    r = check_proof(AX, fwd)
    assert r.line == 3 and r.violation.kind == ForwardReference.__name__

    wrong = ProofScript((
        ProofLine(parse("!(true ~> true)"), AxiomInstance("A5", {})),
    ))
    r = check_proof(AX, wrong)
    assert r.line == 1 and r.violation.kind == BadSubstitution.__name__

    taut_as_axiom = ProofScript((
        ProofLine(parse("p=1 | !p=1"), AxiomInstance("A0", {})),
    ))
    r = check_proof(AX, taut_as_axiom)
    assert r.line == 1 and r.violation.kind == BadSubstitution.__name__

    not_taut = ProofScript((
        ProofLine(parse("p=1"), TautologyInstance()),
    ))
    r = check_proof(AX, not_taut)
    assert r.line == 1 and r.violation.kind == RuleMismatch.__name__

    disabled = ProofScript((
        ProofLine(
            parse("X1=0 -> !X1=1"),
            AxiomInstance("V2", {"var": "X1", "val": 0, "other": 1}),
        ),
    ), signature={"X1": (0, 1)})
    r = check_proof(AX, disabled)
    assert r.line == 1 and r.violation.kind == SchemaDisabled.__name__
    assert isinstance(check_proof(AX_PLUS, disabled), Verified)

    with pytest.raises(ValueError):
        check_proof(AX, ProofScript(()))


def test_rewrite_rules():
    p, q, c = parse("p=1"), parse("q=1"), parse("q=0")
    both = ProofScript((
        ProofLine(Iff(p, Not(Not(p))), TautologyInstance()),
        ProofLine(
            Implies(Cf(p, c, sugar=False), Cf(Not(Not(p)), c, sugar=False)),
            RA1(1),
        ),
        ProofLine(Implies(And(p, q), p), TautologyInstance()),
        ProofLine(
            Implies(Cf(c, And(p, q), sugar=False), Cf(c, p, sugar=False)),
            RA2(3),
        ),
    ))
    assert isinstance(check_proof(AX, both), Verified)

    shape = ProofScript((
        both.lines[0],
        ProofLine(
            Implies(Cf(p, c, sugar=False), Cf(Not(Not(p)), q, sugar=False)),
            RA1(1),
        ),
    ))
    r = check_proof(AX, shape)
    assert r.line == 2 and r.violation.kind == RuleMismatch.__name__

    stripped = AxiomBase(frozenset({"A1"}), frozenset())
    r = check_proof(stripped, both)
    assert r.line == 2 and r.violation.kind == SchemaDisabled.__name__


def test_stock_scripts_verify():
    base, script = transitivity_script()
    assert len(script.lines) == 35
    assert isinstance(check_proof(base, script), Verified)
    base2, script2 = impossibility_script()
    assert len(script2.lines) == 346
    assert isinstance(check_proof(base2, script2), Verified)


def _mutants(script, rng, count):
    """Seeded single-line corruptions: negate the formula, bump a citation,
    or swap the justification kind."""
    n = len(script.lines)
    for _ in range(count):
        i = rng.randrange(n)
        line = script.lines[i]
        kind = rng.choice(("negate", "bump", "swap"))
        if kind == "negate":
            mutated = ProofLine(Not(line.formula), line.by)
        elif kind == "bump" and isinstance(line.by, MP):
            mutated = ProofLine(line.formula, MP(line.by.i, line.by.j - 1))
        elif kind == "bump" and isinstance(line.by, (RA1, RA2)):
            mutated = ProofLine(line.formula, type(line.by)(line.by.i + 1))
        elif kind == "swap" and not isinstance(line.by, TautologyInstance):
            mutated = ProofLine(line.formula, TautologyInstance())
        else:
            mutated = ProofLine(line.formula, MP(max(1, i), max(1, i)))
        lines = list(script.lines)
        lines[i] = mutated
        yield i, ProofScript(tuple(lines), script.signature)


def test_single_line_mutations_are_rejected():
    base, script = transitivity_script()
    rng = random.Random(99)
    checked = 0
    for i, broken in _mutants(script, rng, 40):
        result = check_proof(base, broken)
        assert isinstance(result, FirstFailure), f"mutation at line {i + 1} slipped through"
        checked += 1
    assert checked == 40


def test_script_json_round_trip():
    for base, script in (transitivity_script(), impossibility_script()):
        data = script_to_json(base, script)
        base2, script2 = script_from_json(data)
        assert base2 == base
        assert len(script2.lines) == len(script.lines)
        for a, b in zip(script.lines, script2.lines):
            assert a.formula == b.formula
            assert type(a.by) is type(b.by)
        assert script_to_json(base2, script2) == data


def test_script_json_errors():
    with pytest.raises(ValueError):
        script_from_json({"lines": [{"formula": "p=1", "by": {"kind": "zz"}}]})
    with pytest.raises(BadSubstitution):
        script_from_json(
            {"lines": [{"formula": "p=1", "by": {"kind": "axiom", "schema": "ZZ", "args": {}}}]}
        )
    with pytest.raises(BadSubstitution):
        script_from_json(
            {"lines": [{"formula": "p=1 ~> p=1",
                        "by": {"kind": "axiom", "schema": "A1", "args": {}}}]}
        )
    with pytest.raises(BadSubstitution):
        script_from_json(
            {"lines": [{"formula": "p=1 ~> p=1",
                        "by": {"kind": "axiom", "schema": "A1",
                               "args": {"phi": "p=1", "zz": "q=1"}}}]}
        )
