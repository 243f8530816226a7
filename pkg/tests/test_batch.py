"""Array engine: packing, per-point agreement, backend parity."""

import itertools

import numpy as np
import pytest

from cfworlds.batch import (
    HAS_NUMBA,
    backend,
    eval_block,
    pack_population,
    pack_structures,
)
from cfworlds.enumeration import (
    population_member,
    population_size,
    structure_population,
)
from cfworlds.formula import parse
from cfworlds.structures import UnknownAtom, eval_cf

ASSIGN_ATOMS = (("X1", 0), ("X1", 1), ("X2", 0), ("X2", 1))
GENERIC_ATOMS = (("p", 1), ("q", 1))


def test_backend_name():
    assert backend() in ("numba", "numpy")


def test_eval_block_matches_pointwise_eval():
    sample = list(itertools.islice(structure_population("M_f+"), 40))
    pack = pack_structures(sample, ASSIGN_ATOMS)
    formulas = [
        parse("X1=1 ~> X2=1"),
        parse("[X1<-1]X2=1"),
        parse("(X1=1 | X2=0) ~> (X1=1 ~> X2=1)"),
        parse("(X1=1 ~> X2=1) ~> X1=0"),
        parse("X1=1 -> (X2=1 <-> X1=0)"),
        parse("true & !false"),
    ]
    for f in formulas:
        block = eval_block(pack, f)
        for i, st in enumerate(sample):
            for wi, w in enumerate(st.worlds):
                assert block[i, wi] == eval_cf(st, w, f)


def test_eval_block_generic_population():
    sample = list(itertools.islice(structure_population("M"), 60))
    pack = pack_structures(sample, GENERIC_ATOMS)
    f = parse("p=1 ~> q=1")
    block = eval_block(pack, f)
    for i, st in enumerate(sample):
        for wi, w in enumerate(st.worlds):
            assert block[i, wi] == eval_cf(st, w, f)


def test_pack_population_rows_decode():
    pack = pack_population("M_f+", ASSIGN_ATOMS)
    assert pack.size == population_size("M_f+")
    for i in (0, 1, 500, 1295):
        one = pack_structures([population_member("M_f+", i)], ASSIGN_ATOMS)
        assert np.array_equal(pack.val[i], one.val[0])
        assert np.array_equal(pack.inw[i], one.inw[0])
        assert np.array_equal(pack.strict[i], one.strict[0])


def test_pack_population_generic_rows_decode():
    pack = pack_population("M", GENERIC_ATOMS)
    assert pack.size == population_size("M")
    for i in (0, 9999, 21951):
        one = pack_structures([population_member("M", i)], GENERIC_ATOMS)
        assert np.array_equal(pack.val[i], one.val[0])
        assert np.array_equal(pack.inw[i], one.inw[0])
        assert np.array_equal(pack.strict[i], one.strict[0])


@pytest.mark.skipif(not HAS_NUMBA, reason="numba not importable")
def test_backends_agree():
    pack = pack_population("M_f+", ASSIGN_ATOMS)
    for text in ("X1=1 ~> X2=1", "(X1=1 ~> X2=1) ~> (X2=0 ~> X1=0)"):
        f = parse(text)
        a = eval_block(pack, f, force_backend="numpy")
        b = eval_block(pack, f, force_backend="numba")
        assert np.array_equal(a, b)


def test_eval_block_unknown_atom():
    sample = list(itertools.islice(structure_population("M_f+"), 2))
    pack = pack_structures(sample, ASSIGN_ATOMS)
    with pytest.raises(UnknownAtom):
        eval_block(pack, parse("X3=1"))


def test_pack_structures_errors():
    with pytest.raises(ValueError):
        pack_structures([], ASSIGN_ATOMS)
    mixed = [
        next(iter(structure_population("M_f+"))),
        next(iter(structure_population("M"))),
    ]
    with pytest.raises(ValueError):
        pack_structures(mixed, ASSIGN_ATOMS)
