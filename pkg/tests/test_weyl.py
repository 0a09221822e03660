"""Relative Weyl group combinatorics and the Bruhat decomposition."""

import math

import numpy as np
import pytest

from soqc.atlas import standard_subgroups
from soqc.weyl import BruhatData, WeylAtlas, w_long


@pytest.mark.parametrize("l", range(2, 7))
def test_weyl_order_and_support(l):
    """[DERIVED] |W(B_{l-1})| = 2^{l-1}(l-1)!; support has one element per subset of simple roots."""
    W = WeylAtlas(l)
    r = l - 1
    assert len(W.elements) == 2**r * math.factorial(r)
    assert len(W.bessel_support) == 2**r
    assert W.identity in W.bessel_support and W.w_long in W.bessel_support


@pytest.mark.parametrize("l", range(2, 7))
def test_theta_statements(l):
    """[PAPER] theta is a bijection; families characterised; partition of the support by n."""
    W = WeylAtlas(l)
    assert W.check_theta_bijection()
    assert W.check_theta_partition()
    assert W.check_gl_not_in_support()
    parts = W.bessel_partition
    assert sum(len(v) for v in parts.values()) == len(W.bessel_support)
    assert {w for v in parts.values() for w in v} == set(W.bessel_support)


def test_longest_element():
    """[TRIVIAL] w_long = -1 is an involution of maximal length."""
    for r in range(1, 5):
        w = w_long(r)
        assert w.inverse() == w and w.act(tuple(range(1, r + 1))) == tuple(-i for i in range(1, r + 1))
        assert w.length() == r * r


def test_bruhat_cover(G):
    """[DERIVED] cells partition G, the identity cell is B, factorisations multiply back."""
    A = standard_subgroups(G)
    bd = BruhatData(G, A.U, A.T)
    sizes = bd.cell_sizes()
    assert sum(sizes.values()) == G.order
    assert sizes[bd.weyl.identity] == len(A.B)
    rng = np.random.default_rng(1)
    for g in rng.integers(0, G.order, 40):
        u1, t, w, u2 = bd.decompose(int(g))
        prod = G.mul(G.mul(G.mul(u1, t), bd.rep(w)), u2)
        assert prod == g
