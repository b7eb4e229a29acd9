import os
from fractions import Fraction

import pytest

from padic_cells.cells import Ball, contains
from padic_cells.decompose import (
    AcEq,
    FAnd,
    FAtom,
    FNot,
    FOr,
    OrdCmp,
    OrdEqInf,
    OrdModEq,
    RvEq,
    decompose_set,
    prepare,
    preserves_balls_report,
)
from padic_cells.errors import UnsupportedInputError
from padic_cells.measure import (
    decomposition_measure,
    exact_partition_check,
    measure_of_order,
)
from padic_cells.oracle import verify_laws, verify_partition
from padic_cells.padics import RvData, Val, ord_p
from padic_cells.poly import Poly

Y = Poly.of(0, 1)


def test_prepare_monomial():
    D = prepare(Y, 5)
    points = [c for c in D.cells if c.is_point]
    fams = [c for c in D.cells if not c.is_point]
    assert len(points) == 1 and points[0].center.value == 0
    assert len(fams) == 1
    fam = fams[0]
    assert fam.m_range.lo == 0 and fam.m_range.hi is None
    assert fam.residues.is_all
    law = fam.law_for(Y)
    assert law.e0 == Val(0) and law.i0 == 1


def test_prepare_rejects_zero():
    with pytest.raises(UnsupportedInputError):
        prepare(Poly.of(), 5)


def test_prepare_squares_minus_one():
    f = Poly.of(-1, 0, 1)
    D = prepare(f, 5)
    # roots 1 and -1 carry linear laws with unit b1
    for root in (1, -1):
        cells = [c for c in D.cells
                 if c.center.is_rational and c.center.value == root]
        fam = next(c for c in cells if not c.is_point)
        law = fam.law_for(f)
        assert law.i0 == 1 and law.e0 == Val(0)
        point = next(c for c in cells if c.is_point)
        assert point.law_for(f).e0.is_infinite
    # all laws hold exactly on sampled members
    assert verify_laws(D, f, samples=200).ok
    assert exact_partition_check(D).ok


def test_prepare_squares_minus_five():
    f = Poly.of(-5, 0, 1)
    D = prepare(f, 5)
    assert measure_of_order(D, f, 0) == Fraction(4, 5)
    assert measure_of_order(D, f, 1) == Fraction(1, 5)
    assert measure_of_order(D, f, 2) == 0
    # oracle root counting mod 5^4 confirms
    roots4 = sum(1 for yv in range(5**4) if (yv * yv - 5) % 5**4 == 0)
    assert roots4 == 0


def test_prepare_multiplicity_law():
    f = Poly.of(1, -1, -1, 1)  # (y-1)^2 (y+1)
    D = prepare(f, 5)
    fam = next(c for c in D.cells
               if not c.is_point and c.center.is_rational and c.center.value == 1)
    law = fam.law_for(f)
    assert law.i0 == 2  # the double root doubles the law slope
    assert verify_laws(D, f, samples=120).ok


def test_prepare_derivative_tower_laws():
    f = Poly.of(0, -1, 0, 1)  # y^3 - y
    D = prepare(f, 7)
    df, ddf = f.derivative(), f.derivative().derivative()
    for cell in D.cells:
        assert cell.law_for(f) is not None
        assert cell.law_for(df) is not None
        assert cell.law_for(ddf) is not None
    assert verify_laws(D, df, samples=80).ok


def test_prepare_on_sub_ball():
    domain = Ball(Fraction(2), 1)  # 2 + 5 Z_5
    f = Poly.of(-4, 0, 1)          # roots 2 and -2; only 2 is in the ball
    D = prepare(f, 5, domain)
    assert decomposition_measure(D) == Fraction(1, 5)
    member = Fraction(2 + 5 * 3)
    assert any(contains(c, member, 5) for c in D.cells)
    law_cells = [c for c in D.cells if not c.is_point]
    for cell in law_cells:
        law = cell.law_for(f)
        for m in cell.m_range.values(limit=3):
            u = cell.residues.members(5)[0]
            y = cell.center.value + Fraction(u) * Fraction(5) ** m \
                if cell.center.is_rational else None
            if y is None:
                continue
            assert ord_p(f.eval(y), 5) == law.apply(m)


def test_budget_env_override():
    os.environ["PADIC_CELLS_MAX_DEPTH"] = "40"
    try:
        D = prepare(Poly.of(-6, 0, 1), 5)
        assert exact_partition_check(D).ok
    finally:
        del os.environ["PADIC_CELLS_MAX_DEPTH"]


# ---------------------------------------------------------------------------
# decompose_set
# ---------------------------------------------------------------------------


def test_set_ord_at_least_one():
    D = decompose_set(FAtom(OrdCmp(Y, None, 1, ">=")), 5)
    assert decomposition_measure(D, kept_only=True) == Fraction(1, 5)
    # {0} is kept: ord(0) = infinity >= 1
    assert any(c.is_point and c.keep and c.center.value == 0 for c in D.cells)
    assert exact_partition_check(D).ok


def test_set_punctured_at_five():
    phi = FNot(FAtom(RvEq(2, Poly.of(-5, 1), RvData.zero(2))))
    D = decompose_set(phi, 5)
    kept = D.kept_cells
    assert all(c.kind == 1 for c in kept)
    assert len(kept) == 1
    fam = kept[0]
    assert fam.center.value == 5 and fam.m_range.lo == 0 and fam.m_range.hi is None
    assert verify_partition(D, 4).ok
    dropped = [c for c in D.cells if not c.keep]
    assert len(dropped) == 1 and dropped[0].is_point


def test_set_cubes_p7():
    phi = FAnd(FAtom(OrdModEq(Y, 3, 0)),
               FOr(FAtom(AcEq(1, Y, 1)), FAtom(AcEq(1, Y, 6))))
    D = decompose_set(phi, 7)
    mu = decomposition_measure(D, kept_only=True)
    assert mu == Fraction(49, 171)
    # membership agrees with actual cubes
    for x in (1, 2, 3, 6, 10, 14):
        cube = Fraction(x) ** 3
        assert any(contains(c, cube, 7) for c in D.kept_cells)
    for bad in (2, 3, 7, 14, 5):
        assert not any(contains(c, Fraction(bad), 7) for c in D.kept_cells)


def test_set_ord_comparison_two_polys():
    # ord(y^2 - 1) >= ord(y) + 1 over Z_5
    phi = FAtom(OrdCmp(Poly.of(-1, 0, 1), Y, 1, ">="))
    D = decompose_set(phi, 5)
    assert exact_partition_check(D).ok
    for r in range(1, 5**4):
        y = Fraction(r)
        want = ord_p(y * y - 1, 5) >= ord_p(y, 5) + 1
        got = any(contains(c, y, 5) for c in D.kept_cells)
        assert want == got, r


def test_set_poly_eq_zero():
    D = decompose_set(FAtom(OrdEqInf(Poly.of(-1, 0, 1))), 5)
    kept = D.kept_cells
    assert all(c.is_point for c in kept)
    assert sorted(c.center.value for c in kept) == [-1, 1]


def test_set_rejects_zero_poly_atom():
    with pytest.raises(UnsupportedInputError):
        decompose_set(FAtom(OrdCmp(Poly.of(), None, 0, "=")), 5)


def test_set_stacked_congruences():
    # ord = 0 mod 2 and ord = 1 mod 3 combine to the progression 4 mod 6
    phi = FAnd(FAtom(OrdModEq(Y, 2, 0)), FAtom(OrdModEq(Y, 3, 1)))
    D = decompose_set(phi, 3)
    kept = D.kept_cells
    assert [str(c.m_range) for c in kept] == ["[4..inf]%6"]
    mu = decomposition_measure(D, kept_only=True)
    assert mu == Fraction(2, 3**5) / (1 - Fraction(1, 3**6))


def test_set_ac_depth_two():
    phi = FAtom(AcEq(2, Y, 7))
    D = decompose_set(phi, 5)
    assert exact_partition_check(D).ok
    for r in range(1, 5**4):
        y = Fraction(r)
        u = (y / 5 ** ord_p(y, 5).value)
        want = (u.numerator * pow(u.denominator, -1, 25)) % 25 == 7
        got = any(contains(c, y, 5) for c in D.kept_cells)
        assert want == got, r


# ---------------------------------------------------------------------------
# preservation of balls
# ---------------------------------------------------------------------------


def test_preserves_identity():
    D = prepare(Y, 5)
    rep = preserves_balls_report(D, Y, 5)
    assert rep.all_ball_or_point
    fam = next(e for e in rep.entries if not e.cell.is_point)
    # the image of the (m, u) fiber is that same ball: radius ord m + 1
    assert fam.radius_law.apply(3) == Val(4)


def test_preserves_squaring():
    f = Poly.of(0, 0, 1)
    D = prepare(f, 5)
    rep = preserves_balls_report(D, f, 5)
    assert rep.all_ball_or_point
    fam = next(e for e in rep.entries if not e.cell.is_point)
    # fiber {ord y = 0, ac = u}: image is a ball around u^2 of radius ord 2m+d+...
    # brute force one fiber
    entry = fam
    m = entry.cell.m_range.lo
    u = entry.cell.residues.members(5)[0]
    d = entry.cell.residues.depth
    members = [Fraction(u + t * 5**d) * 5**m for t in range(40)]
    images = [v * v for v in members]
    base = images[0]
    radius = entry.radius_law.apply(m).value
    for img in images:
        assert img == base or ord_p(img - base, 5) >= radius


def test_preserves_constant():
    f = Poly.of(3)
    D = prepare(f, 5)
    rep = preserves_balls_report(D, f, 5)
    assert all(e.verdict == "point" for e in rep.entries)


def test_preserves_squaring_p2_depth_raise():
    f = Poly.of(0, 0, 1)
    D = prepare(f, 2)
    rep = preserves_balls_report(D, f, 2)
    assert rep.all_ball_or_point
    fam = next(e for e in rep.entries if not e.cell.is_point)
    assert fam.cell.residues.depth >= 2  # p=2 needs a deeper split
    m = fam.cell.m_range.lo
    u = fam.cell.residues.members(2)[0]
    d = fam.cell.residues.depth
    members = [Fraction(u + t * 2**d) * 2**m for t in range(64)]
    images = sorted(set(v * v for v in members))
    base = images[0]
    radius = fam.radius_law.apply(m).value
    for img in images:
        assert img == base or ord_p(img - base, 2) >= radius
