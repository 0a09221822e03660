"""Finite field tables and the additive character."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from soqc.errors import InvalidParameter
from soqc.field import FieldTable, FqElem, additive_char, fq_field, least_irreducible

FIELDS = [(3, 1), (5, 1), (3, 2), (7, 1), (5, 2)]


@pytest.fixture(scope="module", params=FIELDS, ids=lambda f: f"F{f[0]}^{f[1]}")
def F(request):
    return fq_field(*request.param)


def elements(F):
    return st.integers(0, F.q - 1).map(lambda c: FqElem(F, c))


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_field_axioms(F, data):
    """[TRIVIAL] ring axioms and inverses, elementwise."""
    a, b, c = (data.draw(elements(F)) for _ in range(3))
    assert (a + b) * c == a * c + b * c
    assert a * (b * c) == (a * b) * c
    assert a - a == F(0)
    if a:
        assert a * a.inverse() == F(1)
        assert (a / a) == F(1)


def test_multiplicative_group_cyclic(F):
    """[DERIVED] a primitive element has order q - 1."""
    g = FqElem(F, F.primitive_element)
    powers = {(g**k).code for k in range(F.q - 1)}
    assert len(powers) == F.q - 1 and 0 not in powers


def test_trace_and_norm(F):
    """[DERIVED] Tr and N agree with their Galois-orbit definitions."""
    for x in F.elements:
        conj = [x ** (F.p**i) for i in range(F.r)]
        tr, nm = conj[0], conj[0]
        for y in conj[1:]:
            tr, nm = tr + y, nm * y
        assert x.trace() == tr
        assert x.norm() == nm
        assert x.trace().code < F.p  # lands in the prime field


def test_rho_nonsquare_and_gamma(F):
    """[TRIVIAL] rho is a nonsquare and gamma = rho / 2."""
    assert not F.is_square(F.rho_code)
    assert F.gamma * 2 == F.rho


def test_square_rho_rejected():
    """[TRIVIAL] a square rho is refused."""
    with pytest.raises(InvalidParameter):
        FieldTable(3, 1, rho=1)
    with pytest.raises(InvalidParameter):
        FieldTable(4)


def test_f9_modulus_irreducible():
    """[TRIVIAL] F_9 = F_3[x]/(x^2 + 1)."""
    assert least_irreducible(3, 2) == [1, 0, 1]


def test_additive_character(F):
    """[DERIVED] psi is a nontrivial homomorphism F_q -> mu_p."""
    psi = additive_char(F)
    xs = F.elements
    assert any(psi.exponent(x) for x in xs)
    for x in xs[:6]:
        for y in xs[:6]:
            assert psi(x + y) == psi(x) * psi(y)
    total = sum((psi(x) for x in xs[1:]), psi(xs[0]))
    assert total.is_zero()


def test_vectorised_matches_scalar(F):
    a = np.arange(F.q)
    prod = F.vmul(a[:, None], a[None])
    for x in range(F.q):
        for y in range(F.q):
            assert prod[x, y] == (FqElem(F, x) * FqElem(F, y)).code
