"""Group enumeration, membership and named subgroups."""

import numpy as np
import pytest

from soqc.atlas import is_subgroup, standard_subgroups
from soqc.errors import InvalidParameter, ResourceLimit
from soqc.field import FieldTable
from soqc.matrices import MatSpace
from soqc.groups import (brute_force_members, build_group, closure, generators, p_part,
                         predicate_search, projected_order)

# [PAPER] classical order formulas
ORDERS = [("so-even", 3, 2, 720), ("so-odd", 3, 1, 24), ("gl", 3, 1, 2), ("gl", 3, 2, 48),
          ("so-odd", 3, 2, 51840), ("so-even", 5, 2, 15600), ("gl", 5, 2, 480)]


@pytest.mark.parametrize("kind,p,size,order", ORDERS)
def test_orders(kind, p, size, order):
    """[PAPER] enumerated order equals the order formula."""
    assert projected_order(kind, p, size) == order
    G = build_group(kind, FieldTable(p), size)
    assert G.order == order


@pytest.mark.parametrize("kind,size", [("so-even", 2), ("so-odd", 1)])
def test_closure_equals_predicate(F3, kind, size):
    """[DERIVED] generated group = all det-1 isometries of the form."""
    G = build_group(kind, F3, size)
    assert np.array_equal(predicate_search(G.space, G.gram), G.codes)
    assert np.array_equal(closure(G.space, generators(kind, F3, size)), G.codes)


def test_gl_brute_force(F3):
    """[TRIVIAL] GL_2(3) closure equals the invertible matrices."""
    G = build_group("gl", F3, 2)
    assert np.array_equal(np.sort(brute_force_members(G.space, None)), G.codes)


def test_so3_brute_force(F3):
    """[TRIVIAL] SO_3(3) by filtering all 3x3 matrices."""
    G = build_group("so-odd", F3, 1)
    assert np.array_equal(np.sort(brute_force_members(G.space, G.gram)), G.codes)


def test_unipotent_is_sylow(G):
    """[DERIVED] |U| is the p-part of |G| (9 for SO_4^-(3))."""
    A = standard_subgroups(G)
    assert len(A.U) == 9 == p_part(G.order, 3)
    A.verify()


def test_membership_rejects_nonisometry(G):
    m = G.space.identity()
    m[0, 1] = 1
    m[1, 0] = 1
    assert not G.member(m[None])[0]
    assert G.member(G.mats[:50]).all()


def test_classes(G):
    """[TRIVIAL] class equation and conjugation-invariance of the labels."""
    C = G.classes
    assert C.sizes.sum() == G.order
    assert np.all(G.order % C.sizes == 0)
    g = G.mats[123]
    conj = G.index(G.space.matmul(G.space.matmul(g, G.mats), G.inv_mats(g)))
    assert np.array_equal(C.class_of[conj], C.class_of)


def test_center_and_outer(G):
    """[DERIVED] center {+-I}; c normalises G and is not in it; t~ has order 2."""
    assert len(G.center) == 2
    assert G.member(G.outer_c[None]).sum() == 0
    perm = G.outer_perm
    assert np.array_equal(np.sort(perm), np.arange(G.order))
    assert np.array_equal(perm[perm], np.arange(G.order))
    assert G.power(np.array([G.t_tilde]), 2)[0] == G.identity


def test_torus_and_borel(G):
    """[DERIVED] |T| = (q-1)(q+1) for l = 2 and B = T U."""
    A = standard_subgroups(G)
    assert len(A.T) == 8 and len(A.S) == 2
    assert len(A.B) == len(A.T) * len(A.U)
    assert is_subgroup(G, A.B)


def test_refusals(F3):
    with pytest.raises(InvalidParameter):
        build_group("sp", F3, 2)
    with pytest.raises(InvalidParameter):
        build_group("so-even", F3, 1)
    with pytest.raises(ResourceLimit):
        build_group("so-even", F3, 3)
    with pytest.raises(ResourceLimit):
        predicate_search(MatSpace(F3, 8), np.eye(8, dtype=np.int64))


def test_order_bound_env(F3, monkeypatch):
    monkeypatch.setenv("SOQC_MAX_GROUP_ORDER", "100")
    build_group.cache_clear()
    try:
        with pytest.raises(ResourceLimit):
            build_group("so-even", F3, 2)
    finally:
        monkeypatch.undo()
        build_group.cache_clear()
