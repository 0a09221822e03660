"""Exact character tables."""

import pytest

from soqc.chartable import character_table
from soqc.groups import build_group

# [PAPER] S_4 ~ SO_3(3) and GL_2(3) degree lists
DEGREES = {("so-odd", 1): [1, 1, 2, 3, 3], ("gl", 2): [1, 1, 2, 2, 2, 3, 3, 4], ("gl", 1): [1, 1]}


@pytest.mark.parametrize("kind,size", [("so-even", 2), ("so-odd", 1), ("gl", 1), ("gl", 2)])
def test_orthogonality(F3, kind, size):
    """[DERIVED] both orthogonality relations hold exactly and sum dim^2 = |G|."""
    G = build_group(kind, F3, size)
    X = character_table(G)
    assert X.orthogonality() == (True, True)
    assert sum(d * d for d in X.degrees) == G.order
    assert len(X) == len(G.classes)
    assert sorted(X.degrees) == DEGREES.get((kind, size), sorted(X.degrees))


def test_so4_minus_3(G):
    """[DERIVED] SO_4^-(3) = A_6 x {+-1}: 14 irreducibles, twice the degrees of A_6."""
    X = character_table(G)
    assert sorted(X.degrees) == sorted([1, 5, 5, 8, 8, 9, 10] * 2)


def test_trivial_row_and_integrality(G):
    X = character_table(G)
    first = X.row(0).to_cyc()
    assert all(v.to_fraction() == 1 for v in first)
    for i in range(len(X)):
        assert X.value(i, G.identity).to_fraction() == X.degrees[i]


def test_find_row(G):
    X = character_table(G)
    for i in range(len(X)):
        assert X.find_row(X.row(i)) == i
