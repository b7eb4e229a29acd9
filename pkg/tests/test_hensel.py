import random
from fractions import Fraction

import pytest

from padic_cells.hensel import (
    NonSimpleRootError,
    check_conditions,
    digits_at_root,
    h,
    is_root_of,
    ord_at_root,
    order_law_at_root,
    rational_reconstruct,
    reduce_mod,
    refine_root,
)
from padic_cells.padics import Val, ord_p, rv
from padic_cells.poly import Poly


def lift_mod(x: Fraction, q: int) -> int:
    return x.numerator * pow(x.denominator, -1, q) % q


def test_check_conditions_exact_root():
    # f(1) = 0 makes (h1) vacuous; a_1 = 0 rules out i0 = 1 via (h0b)
    assert check_conditions([-1, 0, 1], 1, rv(1, 5, 1), 1, 5) == 2


def test_check_conditions_failure():
    assert check_conditions([-2, 0, 1], 1, rv(1, 5, 1), 1, 5) is None


def test_check_conditions_deep_candidate():
    # y^2 - 6 near the class of 1: certified at depth 1 (the root is simple
    # with unit derivative) and at the deeper candidate 16
    assert check_conditions([-6, 0, 1], 1, rv(1, 5, 1), 1, 5) == 2
    assert check_conditions([-6, 0, 1], 16, rv(16, 5, 1).project(1, 5), 1, 5) == 2
    # two roots share the only depth-1 class at p=2, so nothing may certify
    assert check_conditions([-1, 0, 1], 1, rv(1, 2, 1), 1, 2) is None


def test_check_conditions_rejects_bad_input():
    with pytest.raises(ValueError):
        check_conditions([-1, 0, 1], 0, rv(1, 5, 1), 1, 5)
    with pytest.raises(ValueError):
        check_conditions([-1, 0, 1], 2, rv(1, 5, 1), 1, 5)


def test_h_exact_root():
    r = h([-1, 0, 1], rv(1, 5, 1), 5)
    assert r is not None and r.is_exact and r.approx == 1


def test_h_sqrt6():
    r = h([-6, 0, 1], rv(1, 5, 1), 5)
    assert r is not None and not r.is_exact
    assert lift_mod(r.approx, 25) == 16
    # oracle: the depth-2 lifts of the class with y^2 = 6
    want = [y for y in range(1, 25, 5) if (y * y - 6) % 25 == 0]
    assert want == [16]


def test_h_no_root_returns_zero():
    assert h([-2, 0, 1], rv(1, 5, 1), 5) is None


def test_h_total_on_junk():
    assert h([0], rv(1, 5, 1), 5) is None
    assert h([5], rv(1, 5, 1), 5) is None
    assert h([-1, 0, 1], rv(0, 5, 1) if False else rv(0, 5, 1), 5) is None  # zero tag


def test_h_uniqueness_oracle():
    # counting lifts mod 5^k confirms one liftable class per depth
    r = h([-6, 0, 1], rv(1, 5, 1), 5)
    rr = refine_root(r, 6)
    f = Poly.of(-6, 0, 1)
    for k in range(1, 7):
        q = 5**k
        roots = [y for y in range(q) if (y * y - 6) % q == 0 and y % 5 == 1]
        assert len(roots) == 1
        assert lift_mod(rr.approx, q) == roots[0]


def test_refine_root_matches_enumeration():
    r = h([-6, 0, 1], rv(1, 5, 1), 5)
    rr = refine_root(r, 5)
    assert rr.precision >= 5
    want = [y for y in range(5**5) if (y * y - 6) % 5**5 == 0 and y % 5 == 1]
    assert lift_mod(rr.approx, 5**5) == want[0]
    # no-op and exact-root behavior
    assert refine_root(rr, rr.precision) is rr
    exact = h([-1, 0, 1], rv(1, 5, 1), 5)
    assert refine_root(exact, 50).approx == 1


def test_newton_certificate_invariant():
    r = refine_root(h([-6, 0, 1], rv(1, 5, 1), 5), 9)
    f, df = r.witness, r.witness.derivative()
    vf = ord_p(f.eval(r.approx), 5)
    vd = ord_p(df.eval(r.approx), 5)
    assert vf >= vd + r.precision


def test_order_law_at_root():
    assert order_law_at_root(Poly.of(-1, 0, 1), h([-1, 0, 1], rv(1, 5, 1), 5), 5) == Val(0)
    assert order_law_at_root(Poly.of(-6, 0, 1), h([-6, 0, 1], rv(1, 5, 1), 5), 5) == Val(0)
    assert order_law_at_root(Poly.of(-25, 0, 1), h([-25, 0, 1], rv(5, 5, 1), 5), 5) == Val(1)


def test_order_law_rejects_non_simple():
    # (y-1)^2: h reduces the witness to y-1, but the law is asked for the
    # original polynomial whose derivative vanishes at the root
    r = h([1, -2, 1], rv(1, 5, 1), 5)
    assert r is not None and r.approx == 1
    with pytest.raises(NonSimpleRootError):
        order_law_at_root(Poly.of(1, -2, 1), r, 5)


def test_h5_identity_sampled():
    # ord f(w) = ord b1 + ord(w - y0) for 50 samples with rv(w) = x0
    p = 5
    f = Poly.of(-6, 0, 1)
    r = refine_root(h([-6, 0, 1], rv(1, p, 1), p), 40)
    b1 = order_law_at_root(f, r, p)
    rng = random.Random(0)
    for _ in range(50):
        w = 1 + 5 * Fraction(rng.randrange(1, 5**12))
        got = ord_p(f.eval(w), p)
        dist = ord_p(w - r.approx, p)
        assert dist < Val(r.precision)  # sample well inside certified digits
        assert got == b1 + dist.value


def test_ord_at_root_splits_factors():
    # witness y^2-1 pins the root 1; queries must tell the factors apart
    r = h([-1, 0, 1], rv(1, 5, 1), 5)
    assert is_root_of(Poly.of(-1, 1), r)           # y - 1
    assert not is_root_of(Poly.of(1, 1), r)        # y + 1
    assert ord_at_root(Poly.of(1, 1), r) == Val(0)
    assert ord_at_root(Poly.of(-1, 1), r).is_infinite


def test_ord_at_root_algebraic():
    r = h([-6, 0, 1], rv(1, 5, 1), 5)
    assert ord_at_root(Poly.of(0, 2), r) == Val(0)          # 2*y0
    assert ord_at_root(Poly.of(-6, 0, 1), r).is_infinite    # its own witness
    v = ord_at_root(Poly.of(-1, 1), r)                      # y0 - 1: ord 1
    assert v == Val(1)
    assert digits_at_root(Poly.of(0, 1), r, 2) == 16


def test_rational_reconstruction():
    # 1/3 mod 5^6 reconstructs exactly
    q = 5**6
    a = pow(3, -1, q)
    assert rational_reconstruct(a, q) == Fraction(1, 3)
    got = reduce_mod(Fraction(1, 3), 5, 3)
    assert got.denominator == 1 and ord_p(got - Fraction(1, 3), 5) >= Val(3)


def test_h_negative_valuation_classes():
    # roots outside Z_p: the search normalizes away non-integral content, so
    # the basin criterion stays sound (25y^2-2 must NOT certify)
    xi = rv(Fraction(1, 5), 5, 1)
    assert h([-1, 0, 25], xi, 5).approx == Fraction(1, 5)
    assert h([-2, 0, 25], xi, 5) is None
    r = h([-6, 0, 25], xi, 5)
    assert r is not None and ord_p(r.approx, 5) == Val(-1)


def test_h_linear_inverse_trick():
    # h_{1,1}(-1, x, xi) with rv(x) xi = 1 realizes the field inverse
    p = 5
    x = Fraction(7)
    xi = rv(1 / x, p, 1)
    r = h([-1, 7], xi, p)
    assert r is not None and r.is_exact and r.approx == Fraction(1, 7)
