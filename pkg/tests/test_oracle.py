from dataclasses import replace
from fractions import Fraction

import pytest

from padic_cells.cells import ArithRange, Cell1, Center, Decomposition, OrderLaw, Residues, TConst, ZP, sorted_cells
from padic_cells.decompose import prepare
from padic_cells.errors import UnsupportedInputError
from padic_cells.oracle import (
    RootCounts,
    count_roots_mod,
    count_roots_mod_scan,
    root_counts,
    verify_laws,
    verify_partition,
)
from padic_cells.padics import Val
from padic_cells.poly import Poly


def test_count_examples():
    assert count_roots_mod(Poly.of(0, 1), 5, 3) == 1
    assert count_roots_mod(Poly.of(0, 0, 1), 3, 2) == 3
    assert count_roots_mod(Poly.of(-1, 0, 1), 5, 1) == 2


def test_count_matches_full_scan():
    for coeffs in ([0, 1], [0, 0, 1], [-1, 0, 1], [1, -1, -1, 1], [-6, 0, 1], [2, 3]):
        f = Poly.of(*coeffs)
        for p in (2, 3, 5):
            for k in range(1, 5):
                assert count_roots_mod(f, p, k) == count_roots_mod_scan(f, p, k)


def test_count_rejects_p_denominator():
    with pytest.raises(UnsupportedInputError):
        count_roots_mod(Poly.of(Fraction(1, 5), 1), 5, 2)
    # denominators prime to p are fine
    assert count_roots_mod(Poly.of(Fraction(1, 3), 1), 5, 2) == 1


def test_root_counts_monotone():
    rc = root_counts(Poly.of(0, 0, 1), 3, 6)
    for a, b in zip(rc.counts, rc.counts[1:]):
        assert b <= 3 * a
    with pytest.raises(ValueError):
        RootCounts(3, (1, 100))


def test_verify_partition_clean():
    D = prepare(Poly.of(0, 1), 5)
    rep = verify_partition(D, 4)
    assert rep.ok
    assert rep.undecided == (0,)  # only the class of the center needs more digits


def test_verify_partition_formula_set():
    from padic_cells.decompose import FNot, FAtom, RvEq, decompose_set
    from padic_cells.padics import RvData

    phi = FNot(FAtom(RvEq(2, Poly.of(-5, 1), RvData.zero(2))))
    D = decompose_set(phi, 5)
    assert verify_partition(D, 4).ok


def test_verify_partition_detects_overlap():
    p = 5
    zero = Center(Fraction(0), 1, TConst(Fraction(0)))
    cells = sorted_cells([
        Cell1(p, zero, None, None, ()),
        Cell1(p, zero, ArithRange(0, None), Residues(1, None), ()),
        Cell1(p, zero, ArithRange(1, 2), Residues(1, None), ()),  # overlap
    ])
    rep = verify_partition(Decomposition(p, ZP, cells), 4)
    assert not rep.ok and rep.violations


def test_verify_laws_clean():
    f = Poly.of(-1, 0, 1)
    D = prepare(f, 5)
    rep = verify_laws(D, f, samples=200)
    assert rep.ok and rep.seed == 0
    f2 = Poly.of(0, -1, 0, 1)
    D2 = prepare(f2, 7)
    assert verify_laws(D2, f2, samples=200).ok


def test_verify_laws_detects_corruption():
    f = Poly.of(-1, 0, 1)
    D = prepare(f, 5)
    bad_cells = []
    tampered = None
    for i, c in enumerate(D.cells):
        law = c.law_for(f)
        if not c.is_point and tampered is None and not law.e0.is_infinite:
            laws = tuple((g, OrderLaw(v.e0 + 1, v.i0) if g == f else v)
                         for g, v in c.laws)
            bad_cells.append(replace(c, laws=laws))
            tampered = i
        else:
            bad_cells.append(c)
    bad = Decomposition(5, ZP, tuple(bad_cells))
    rep = verify_laws(bad, f, samples=60)
    assert not rep.ok
    assert {fail.cell_index for fail in rep.failures} == {tampered}


def test_verify_laws_deterministic():
    f = Poly.of(-6, 0, 1)
    D = prepare(f, 5)
    a = verify_laws(D, f, samples=80, seed=3)
    b = verify_laws(D, f, samples=80, seed=3)
    assert a == b
