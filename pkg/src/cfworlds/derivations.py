"""Programmatic expansion of the two stock derivations into proof scripts.

The checker never searches, so somebody has to spell the arguments out line
by line.  The builder below does the bookkeeping: every macro adds fully
justified lines and returns the 1-based index of the line it proved, and
modus ponens recomputes its conclusion from the cited lines, so a slip in
the expansion surfaces immediately rather than at checking time.

Two scripts are produced.  transitivity_script proves that chained
conditionals combine over a disjoined antecedent: if the closest f1 worlds
satisfy f2 and the closest f2 worlds satisfy f3, then the closest worlds
satisfying either f1 or f2 satisfy f3.  impossibility_script proves that no
world of a definite-value structure can satisfy the three-way cycle formula
(each variable forced to 1 drives the next one to 1 and the previous one to
0): its negation follows once uniqueness of values (V2) and non-emptiness
of assignment antecedents (V3) are granted.
"""

from __future__ import annotations

from .catalog import tstar_formula
from .formula import (
    FALSE,
    And,
    Atom,
    Cf,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
)
from .proofs import (
    AX,
    AX_PLUS,
    AxiomBase,
    AxiomInstance,
    MP,
    ProofLine,
    ProofScript,
    RA1,
    RA2,
    TautologyInstance,
    instantiate_axiom,
)


def _cf(a: Formula, b: Formula) -> Formula:
    return Cf(a, b, sugar=False)


class Builder:
    """Accumulates proof lines; indices are 1-based throughout."""

    def __init__(self, signature: dict | None = None):
        self.signature = signature
        self.lines: list = []

    def formula(self, i: int) -> Formula:
        return self.lines[i - 1].formula

    def add(self, f: Formula, by) -> int:
        self.lines.append(ProofLine(f, by))
        return len(self.lines)

    def taut(self, f: Formula) -> int:
        return self.add(f, TautologyInstance())

    def axiom(self, schema: str, **args) -> int:
        f = instantiate_axiom(schema, args, self.signature)
        return self.add(f, AxiomInstance(schema, args))

    def mp(self, i: int, j: int) -> int:
        imp = self.formula(j)
        assert isinstance(imp, Implies) and imp.left == self.formula(i)
        return self.add(imp.right, MP(i, j))

    def ra1(self, i: int, psi: Formula) -> int:
        eq = self.formula(i)
        assert isinstance(eq, Iff)
        return self.add(
            Implies(_cf(eq.left, psi), _cf(eq.right, psi)), RA1(i)
        )

    def ra2(self, i: int, phi: Formula) -> int:
        imp = self.formula(i)
        assert isinstance(imp, Implies)
        return self.add(
            Implies(_cf(phi, imp.left), _cf(phi, imp.right)), RA2(i)
        )

    def chain(self, i: int, j: int) -> int:
        """From a -> b (line i) and b -> c (line j), prove a -> c."""
        ab, bc = self.formula(i), self.formula(j)
        assert isinstance(ab, Implies) and isinstance(bc, Implies)
        assert ab.right == bc.left
        t = self.taut(Implies(ab, Implies(bc, Implies(ab.left, bc.right))))
        return self.mp(j, self.mp(i, t))

    def pair(self, i: int, j: int) -> int:
        """From x -> a (line i) and x -> b (line j), prove x -> (a & b)."""
        xa, xb = self.formula(i), self.formula(j)
        assert isinstance(xa, Implies) and isinstance(xb, Implies)
        assert xa.left == xb.left
        goal = Implies(xa.left, And(xa.right, xb.right))
        t = self.taut(Implies(xa, Implies(xb, goal)))
        return self.mp(j, self.mp(i, t))


def add_transitivity(b: Builder, f1: Formula, f2: Formula, f3: Formula) -> int:
    """Prove ((f1 ~> f2) & (f2 ~> f3)) -> ((f1 | f2) ~> f3) on b.

    The route: antecedent disjunction over f1 and f2 both of whose closest
    worlds satisfy f2 (one copy is reflexive), the same disjunction spelled
    as (f1 & !f2) | f2 whose closest worlds satisfy f2 -> f3, then combine
    the two consequents and discharge the detour.
    """
    c12, c23 = _cf(f1, f2), _cf(f2, f3)
    both = Or(f1, f2)

    refl = b.axiom("A1", phi=f2)
    join = b.axiom("A4", phi1=f1, phi2=f2, psi=f2)
    t = b.taut(
        Implies(
            b.formula(refl),
            Implies(b.formula(join), Implies(c12, _cf(both, f2))),
        )
    )
    eq1 = b.mp(join, b.mp(refl, t))

    chi = And(f1, Not(f2))
    refl2 = b.axiom("A1", phi=chi)
    weak = b.taut(Implies(chi, Implies(f2, f3)))
    lift = b.ra2(weak, phi=chi)
    part_a = b.mp(refl2, lift)
    weak2 = b.taut(Implies(f3, Implies(f2, f3)))
    part_b = b.ra2(weak2, phi=f2)
    join2 = b.axiom("A4", phi1=chi, phi2=f2, psi=Implies(f2, f3))
    t2 = b.taut(
        Implies(
            b.formula(part_a),
            Implies(
                b.formula(join2),
                Implies(
                    _cf(f2, Implies(f2, f3)), _cf(Or(chi, f2), Implies(f2, f3))
                ),
            ),
        )
    )
    step = b.mp(join2, b.mp(part_a, t2))
    halfway = b.chain(part_b, step)
    same = b.taut(Iff(Or(chi, f2), both))
    rewrite = b.ra1(same, psi=Implies(f2, f3))
    eq2 = b.chain(halfway, rewrite)

    t3 = b.taut(
        Implies(
            b.formula(eq1),
            Implies(
                b.formula(eq2),
                Implies(
                    And(c12, c23),
                    And(_cf(both, f2), _cf(both, Implies(f2, f3))),
                ),
            ),
        )
    )
    merged = b.mp(eq2, b.mp(eq1, t3))
    combine = b.axiom("A2", phi=both, psi1=f2, psi2=Implies(f2, f3))
    lifted = b.chain(merged, combine)
    detach = b.taut(Implies(And(f2, Implies(f2, f3)), f3))
    drop = b.ra2(detach, phi=both)
    return b.chain(lifted, drop)


def transitivity_script():
    """The stock chained-conditional script over two letters.

    Returns (base, script); the conclusion instantiates the combination at
    p=1, q=1 and p=0, so its validity is checkable over generic structures.
    """
    b = Builder()
    add_transitivity(b, Atom("p", 1), Atom("q", 1), Atom("p", 0))
    return AX, ProofScript(tuple(b.lines))


_X1, _X2, _X3 = Atom("X1", 1), Atom("X2", 1), Atom("X3", 1)
_Z1, _Z2, _Z3 = Atom("X1", 0), Atom("X2", 0), Atom("X3", 0)


def _single(b: Builder, hyp: int, ant: Formula, keep: Formula) -> int:
    """From phi -> (ant ~> body) at line hyp, prove phi -> (ant ~> keep),
    where body is a conjunction with keep as one conjunct."""
    imp = b.formula(hyp)
    body = imp.right.con
    t = b.taut(Implies(body, keep))
    lift = b.ra2(t, phi=ant)
    return b.chain(hyp, lift)


def impossibility_script():
    """Refutation of the three-way cycle formula from uniqueness axioms.

    Returns (base, script).  The conclusion is the negation of the cycle
    formula: forcing any one variable to 1 sends the next variable to 1 and
    the one before to 0.  Chaining those conditionals drives every variable
    to 0 under the antecedent "some variable is 1"; uniqueness (V2) turns
    that into an impossible consequent, and non-emptiness (V3) refuses the
    impossible conditional, refuting the conjunction.
    """
    sig = {"X1": (0, 1), "X2": (0, 1), "X3": (0, 1)}
    b = Builder(sig)

    c1 = _cf(_X1, And(_X2, Atom("X3", 0)))
    c2 = _cf(_X2, And(_X3, Atom("X1", 0)))
    c3 = _cf(_X3, And(_X1, Atom("X2", 0)))
    phi = And(And(c1, c2), c3)
    psi = Or(Or(_X1, _X2), _X3)

    h1 = b.taut(Implies(phi, c1))
    h2 = b.taut(Implies(phi, c2))
    h3 = b.taut(Implies(phi, c3))

    pa1 = _single(b, h1, _X1, _X2)
    pa2 = _single(b, h1, _X1, _Z3)
    pb1 = _single(b, h2, _X2, _X3)
    pb2 = _single(b, h2, _X2, _Z1)
    pg1 = _single(b, h3, _X3, _X1)
    pg2 = _single(b, h3, _X3, _Z2)

    def drive(first: int, second: int, f1, f2, third: int, f3, target) -> int:
        """phi -> (psi ~> target) out of two chained singles plus a closer.

        first proves phi -> (f1 ~> f2), second phi -> (f2 ~> f3); combining
        gives phi -> ((f1|f2) ~> f3), and with third (phi -> (f3 ~> target))
        the same move lands phi -> (((f1|f2)|f3) ~> target).  A final
        antecedent rewrite reorders the disjunction into psi when needed."""
        lemma = add_transitivity(b, f1, f2, f3)
        got = b.chain(b.pair(first, second), lemma)
        lemma2 = add_transitivity(b, Or(f1, f2), f3, target)
        out = b.chain(b.pair(got, third), lemma2)
        ante = Or(Or(f1, f2), f3)
        if ante == psi:
            return out
        same = b.taut(Iff(ante, psi))
        return b.chain(out, b.ra1(same, psi=target))

    to_z1 = drive(pg1, pa1, _X3, _X1, pb2, _X2, _Z1)
    to_z2 = drive(pa1, pb1, _X1, _X2, pg2, _X3, _Z2)
    to_z3 = drive(pb1, pg1, _X2, _X3, pa2, _X1, _Z3)

    both12 = b.pair(to_z1, to_z2)
    glue12 = b.axiom("A2", phi=psi, psi1=_Z1, psi2=_Z2)
    s12 = b.chain(both12, glue12)
    both123 = b.pair(s12, to_z3)
    glue123 = b.axiom("A2", phi=psi, psi1=And(_Z1, _Z2), psi2=_Z3)
    all_zero = b.chain(both123, glue123)

    v2a = b.axiom("V2", var="X1", val=1, other=0)
    v2b = b.axiom("V2", var="X2", val=1, other=0)
    v2c = b.axiom("V2", var="X3", val=1, other=0)
    some_nonzero = Or(Or(Not(_Z1), Not(_Z2)), Not(_Z3))
    spread = b.taut(
        Implies(
            b.formula(v2a),
            Implies(
                b.formula(v2b),
                Implies(b.formula(v2c), Implies(psi, some_nonzero)),
            ),
        )
    )
    imp = b.mp(v2c, b.mp(v2b, b.mp(v2a, spread)))
    refl = b.axiom("A1", phi=psi)
    lift = b.ra2(imp, phi=psi)
    nonzero = b.mp(refl, lift)

    conj_zero = And(And(_Z1, _Z2), _Z3)
    t = b.taut(
        Implies(
            b.formula(nonzero),
            Implies(
                b.formula(all_zero),
                Implies(phi, And(_cf(psi, conj_zero), _cf(psi, some_nonzero))),
            ),
        )
    )
    merged = b.mp(all_zero, b.mp(nonzero, t))
    glue = b.axiom("A2", phi=psi, psi1=conj_zero, psi2=some_nonzero)
    clash = b.chain(merged, glue)
    absurd = b.taut(Implies(And(conj_zero, some_nonzero), FALSE))
    collapse = b.ra2(absurd, phi=psi)
    to_false = b.chain(clash, collapse)

    anything = b.taut(Implies(FALSE, _X1))
    widen = b.ra2(anything, phi=psi)
    to_x1 = b.chain(to_false, widen)
    narrow = b.axiom("A3", phi1=psi, phi2=_X1, psi=FALSE)
    paired = b.pair(to_x1, to_false)
    squeezed = b.chain(paired, narrow)
    shrink = b.taut(Iff(And(psi, _X1), _X1))
    down = b.ra1(shrink, psi=FALSE)
    x1_false = b.chain(squeezed, down)

    refuse = b.axiom("V3", assign={"X1": 1})
    flip = b.taut(
        Implies(b.formula(x1_false), Implies(b.formula(refuse), Not(phi)))
    )
    b.mp(refuse, b.mp(x1_false, flip))

    assert b.formula(len(b.lines)) == Not(tstar_formula())
    return AX_PLUS, ProofScript(tuple(b.lines), sig)
