"""Embeddings SO_{2n+1} -> SO_{2l} -> SO_{2l+1}."""

import numpy as np
import pytest

from soqc.atlas import standard_subgroups
from soqc.embeddings import EmbeddingMaps, embedding_index
from soqc.groups import build_group


@pytest.fixture(scope="module")
def maps(F3):
    return EmbeddingMaps(F3, 2)


@pytest.mark.parametrize("source,target", [(("so-odd", 1), ("so-even", 2)), (("so-even", 2), ("so-odd", 2))])
def test_homomorphism(F3, maps, source, target):
    """[DERIVED] the embedding is an injective homomorphism into the target group."""
    S, T = build_group(source[0], F3, source[1]), build_group(target[0], F3, target[1])
    idx = embedding_index(maps, S, T)
    assert len(np.unique(idx)) == S.order
    assert idx[S.identity] == T.identity
    rng = np.random.default_rng(3)
    for a, b in rng.integers(0, S.order, (100, 2)):
        assert idx[S.mul(a, b)] == T.mul(idx[a], idx[b])


def test_block_formula(F3, maps):
    """[DERIVED] the blockwise formula equals the conjugation definition on all of SO_4^-(3)."""
    G = build_group("so-even", F3, 2)
    assert np.array_equal(maps.even_in_odd_blocks(G.mats), maps.even_in_odd(G.mats))


def test_torus_formula(F3, maps):
    """[DERIVED] closed form of the torus image."""
    G = build_group("so-even", F3, 2)
    A = standard_subgroups(G)
    for i, coords in A.torus_coords.items():
        ts, (a, b) = coords[:-2], coords[-2:]
        assert np.array_equal(maps.torus_image(ts, a, b), maps.even_in_odd(G.mats[i]))


def test_minus_identity(F3, maps):
    """[TRIVIAL] -I of SO_4 lands in SO_5 as a determinant-one involution."""
    T = build_group("so-odd", F3, 2)
    img = maps.even_in_odd(np.full((4,), 2)[None] * np.eye(4, dtype=np.int64)[None])
    i = T.index(img)[0]
    assert i != T.identity and T.mul(i, i) == T.identity


def test_trivial_odd_group(F3, maps):
    """[TRIVIAL] SO_1 = {1} maps to the identity."""
    out = maps.odd_in_even(0, np.ones((1, 1, 1), dtype=np.int64))
    assert np.array_equal(out[0], np.eye(4, dtype=np.int64))
