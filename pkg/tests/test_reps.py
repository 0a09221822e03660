"""Generic representations, Bessel functions and the Whittaker-model oracle."""

from fractions import Fraction

import numpy as np
import pytest

from soqc.atlas import standard_subgroups
from soqc.field import FieldTable
from soqc.groups import build_group
from soqc.reps import RepTheory, gl_theory, gl_whittaker, whittaker_span_check


@pytest.fixture(scope="module", params=[("so-even", 2), ("so-odd", 1), ("gl", 2)], ids=str)
def any_theory(request):
    kind, size = request.param
    return RepTheory(build_group(kind, FieldTable(3), size))


def test_multiplicity_one(any_theory):
    """[PAPER] every irreducible has generic multiplicity 0 or 1; some are generic."""
    mult = [any_theory.generic_multiplicity(i) for i in range(len(any_theory.table))]
    assert set(mult) <= {Fraction(0), Fraction(1)}
    assert sum(mult) >= 1


def test_bessel_equals_oracle(any_theory):
    """[DERIVED] character-sum Bessel function equals the one read off the Whittaker model."""
    for i in any_theory.generic():
        B = any_theory.bessel(i)
        oracle, diag = any_theory.whittaker_oracle(i)
        assert diag["equivariant"]
        assert B.same_as(oracle)


def test_bessel_normalised_and_equivariant(theory, G):
    """[DERIVED] B(1) = 1 and B(u g v) = psi(u) psi(v) B(g)."""
    A = standard_subgroups(G)
    U = A.U
    exps = A.psi_exponent(U, "so")
    rng = np.random.default_rng(7)
    for i in theory.generic():
        B = theory.bessel(i)
        assert B.at(G.identity).to_fraction() == 1
        for g in rng.integers(0, G.order, 10):
            for a in range(len(U)):
                b = int(rng.integers(len(U)))
                moved = G.mul(G.mul(U[a], int(g)), U[b])
                z = B.at(moved)
                want = B.at(int(g)) * A.unipotent_char(int(U[a])) * A.unipotent_char(int(U[b]))
                assert z == want, (i, g, a, b, exps[a])


def test_conjugate_bessel(theory):
    """[DERIVED] the transported Bessel function of pi is the Bessel function of pi^c."""
    for i in theory.generic_cuspidal():
        j, Bc = theory.conjugate_bessel(i)
        assert Bc.same_as(theory.bessel(j))


def test_cuspidal_generic_exist(theory):
    assert len(theory.generic_cuspidal()) >= 2
    for i in theory.generic_cuspidal():
        assert theory.is_cuspidal(i)


@pytest.mark.parametrize("n", [1, 2])
def test_gl_whittaker_span(F3, n):
    """[DERIVED] W_x for x in GL_n span the functions on U\\GL_n coset reps."""
    taus = gl_whittaker(gl_theory(n, F3))
    G = taus[0].group
    assert whittaker_span_check(taus, np.arange(G.order))
    for t in taus:
        assert t.W(G.identity).equals(t.bessel.values).all()
