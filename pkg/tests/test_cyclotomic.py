"""Exact arithmetic in Q(zeta_e): scalars and vectorised arrays."""

from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st

from soqc.cyclotomic import CycArray, CycField, CycNum, cyc_arith, cyc_make, euler_phi

CONDUCTORS = [1, 3, 4, 8, 12, 120]


@st.composite
def cyc(draw, e=None):
    e = e or draw(st.sampled_from(CONDUCTORS))
    d = euler_phi(e)
    coeffs = draw(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=d, max_size=d))
    return CycNum(e, coeffs)


@settings(max_examples=80, deadline=None)
@given(cyc(e=12), cyc(e=12), cyc(e=12))
def test_field_axioms(a, b, c):
    """[TRIVIAL] commutative ring axioms in Q(zeta_12)."""
    assert a + b == b + a and a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert a * (b * c) == (a * b) * c
    assert a - a == CycNum(12, [0, 0, 0, 0])


@settings(max_examples=60, deadline=None)
@given(cyc())
def test_inverse_and_conjugation(a):
    """[DERIVED] a * a^-1 = 1 and conj is an involutive automorphism."""
    if not a.is_zero():
        assert a * a.inverse() == CycNum.rational(1, a.e)
    assert a.conj().conj() == a
    assert (a * a).conj() == a.conj() * a.conj()


def test_roots_of_unity():
    """[TRIVIAL] zeta_e^e = 1 and the sum of all e-th roots is 0 (e > 1)."""
    for e in CONDUCTORS:
        z = cyc_make(e)
        assert z**e == CycNum.rational(1, e)
        if e > 1:
            assert sum((cyc_make(e, k) for k in range(1, e)), cyc_make(e, 0)).is_zero()


def test_lift_between_conductors():
    """[DERIVED] zeta_3 = zeta_12^4 after lifting."""
    assert cyc_make(3).lift(12) == cyc_make(12, 4)
    assert cyc_arith(cyc_make(3).lift(12), cyc_make(12, 4), "eq")


def test_rational_and_complex():
    z = cyc_make(8)
    sqrt2 = z + z.conj()
    assert (sqrt2 * sqrt2).to_fraction() == 2
    assert abs(sqrt2.to_complex() - 2**0.5) < 1e-12
    assert CycNum.rational(Fraction(3, 4), 5).to_fraction() == Fraction(3, 4)


def test_json_roundtrip():
    a = CycNum(120, [Fraction(k, 3) for k in range(euler_phi(120))])
    assert CycNum.from_json(a.to_json()) == a


def test_array_contract_matches_scalar():
    """[DERIVED] batched dot products equal scalar sums, on both integer paths."""
    field = CycField(120)
    rng = np.random.default_rng(0)
    ks = rng.integers(0, 120, size=(5, 40))
    W = field.roots(ks) * 3
    v = field.roots(rng.integers(0, 120, size=40))
    got = W.contract(v).to_cyc()
    for i in range(5):
        want = CycNum.rational(0, 120)
        for j in range(40):
            want = want + cyc_make(120, int(ks[i, j])) * 3 * v[j].to_cyc()
        assert got[i] == want
    big = CycArray(field, W.num * 2**40, 1)
    assert big.contract(v).equals(CycArray(field, W.contract(v).num * 2**40, 1)).all()


def test_value_labels():
    """[TRIVIAL] labels agree exactly where values agree, across denominators."""
    field = CycField(12)
    a = field.roots(np.array([0, 1, 2, 1]))
    b = CycArray(field, a.num * 3, 3)
    c = field.roots(np.array([1, 5]))
    la, lb, lc = CycArray.value_labels(a, b, c)
    assert np.array_equal(la, lb)
    assert la[1] == la[3] == lc[0] and la[0] != la[1] and lc[1] not in la


def test_rotate_matches_multiplication():
    """[DERIVED] the matrix form of multiplication by zeta^k equals the generic product."""
    field = CycField(120)
    rng = np.random.default_rng(2)
    a = CycArray(field, rng.integers(-9, 10, size=(4, 6, field.d)), 5)
    k = rng.integers(0, 240, size=(4, 1))
    assert a.rotate(k).equals(a * field.roots(np.broadcast_to(k, (4, 6)))).all()
    huge = CycArray(field, a.num.astype(object) * 2**70, 1)
    assert huge.rotate(7).equals(huge * field.roots(np.full((4, 6), 7))).all()
