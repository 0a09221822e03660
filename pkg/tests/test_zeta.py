"""Zeta sums, the intertwining operator, gamma factors and the Hom pairing at q = 3, l = 2."""

from fractions import Fraction

import numpy as np
import pytest

from soqc.cyclotomic import CycNum
from soqc.errors import InvalidParameter
from soqc.zeta import CERT_MIN, HomPairing, InducedSpec, hom_dimension


def test_direct_sum_n1(ctx, theory, cuspidal):
    """[DERIVED] n = 1 zeta sum recomputed from matrices: sum over h, r of B(r w iota(h) w^-1) f(h)."""
    G, A = ctx.G, ctx.atlas
    S = ctx.siegel(1)
    H = S.H
    w = G.mats[A.w_ln(1)]
    w_inv = G.mats[G.inverse[A.w_ln(1)]]
    R = G.mats[A.R_set(1)]
    emb = ctx.maps.odd_in_even(1, H.mats)
    for tau in ctx.taus(1):
        for x in range(tau.group.order):
            Wx = tau.W(x).to_cyc()
            for i in cuspidal:
                B = theory.bessel(i)
                total = CycNum.rational(0, ctx.E)
                for h in range(H.order):
                    m = H.mats[h]
                    if np.any(m[1:, 0] != 0):  # f_v is supported on Q_1, the stabiliser of the line e_1
                        continue
                    fval = Wx[int(tau.group.index(m[:1, :1]))]
                    core = G.space.prod(w, emb[h], w_inv)
                    for r in R:
                        total = total + B.at(int(G.index(G.space.matmul(r, core)))) * fval
                total = total * CycNum.rational(Fraction(1, len(S.atlas.U)), ctx.E)
                assert ctx.zeta(1, B.values, ctx.make_fv(1, tau, x)).to_cyc() == total


@pytest.mark.parametrize("n", [1, 2])
def test_zeta_predicted_value(ctx, theory, cuspidal, n):
    """[PAPER] Psi(B, f_v) = W_v(I) for n < l and W_v(gamma I) for n = l."""
    GL = ctx.gl[n].G
    target = ctx.gamma_scalar(1) if n == ctx.l else GL.identity
    for tau in ctx.taus(n):
        for x in range(GL.order):
            f = ctx.make_fv(n, tau, x)
            for i in cuspidal:
                z = ctx.zeta(n, theory.bessel(i).values, f)
                assert z.equals(tau.W(x)[target]).item()
        assert not ctx.zeta(n, theory.bessel(cuspidal[0]).values,
                            ctx.make_fv(n, tau, ctx.canonical_vector(n))).is_zero().item()


@pytest.mark.parametrize("n", [1, 2])
def test_coset_mode(ctx, theory, cuspidal, n):
    """[DERIVED] summing over U-coset representatives gives the same zeta sum."""
    tau = ctx.taus(n)[0]
    ys, Ws = ctx.translates(theory.bessel(cuspidal[0]), 6)
    for x in range(0, ctx.gl[n].G.order, 7):
        f = ctx.make_fv(n, tau, x)
        assert ctx.zeta(n, Ws, f).equals(ctx.zeta_coset_mode(n, Ws, f)).all()


@pytest.mark.parametrize("n", [1, 2])
def test_intertwining_naive(ctx, n):
    """[DERIVED] M f(h, a) = sum_{u in V} f(w u h, d_n a*) by explicit loop."""
    S = ctx.siegel(n)
    H, GL = S.H, S.gl.G
    tau = ctx.taus(n)[-1]
    f = ctx.make_fv(n, tau, GL.order // 3)
    Mf = ctx.intertwining(f)
    rng = np.random.default_rng(11)
    hs = rng.integers(0, H.order, 12)
    for a in rng.integers(0, GL.order, 4):
        b = int(GL.index(GL.space.matmul(GL.mats[S.d_n], GL.mats[S.star_of[a]])))
        naive = None
        for u in S.V:
            pts = H.index(H.space.prod(H.mats[S.w], H.mats[u], H.mats[hs]))
            term = f.value(pts, b)
            naive = term if naive is None else naive + term
        assert Mf.value(hs, int(a)).equals(naive).all()


def test_collapsed_identity_n1(ctx, theory, cuspidal):
    """[PAPER] Psi(B, M f_v) collapses to a single sum over U \\ GL_1."""
    for tau in ctx.taus(1):
        for x in range(tau.group.order):
            f = ctx.make_fv(1, tau, x)
            for i in cuspidal:
                B = theory.bessel(i)
                lhs = ctx.zeta(1, B.values, ctx.intertwining(f)).to_cyc()
                assert lhs == ctx.collapsed_intertwined_zeta(1, B, tau, x)


def test_big_cell_factorisation(ctx):
    """[DERIVED] h lies in Q w V iff its lower-left block is invertible, with a valid factorisation."""
    S = ctx.siegel(2)
    H = S.H
    rng = np.random.default_rng(5)
    for h in rng.integers(0, H.order, 60):
        fac = ctx.membership_QwV(int(h))
        assert (fac is not None) == S.big_cell[h]
        if fac is not None:
            q, w, v = fac
            assert S.levi_of[q] >= 0 and H.mul(H.mul(q, w), v) == h


@pytest.mark.parametrize("n", [1, 2])
def test_gamma_certificate(ctx, theory, cuspidal, n):
    """[DERIVED] gamma is nonzero, certified on enough pairs, and equal for pi and pi^c."""
    for tau in ctx.taus(n):
        rec = ctx.gamma_factor(theory.bessel(cuspidal[0]), tau)
        assert rec.consistent and len(rec.certificate) >= CERT_MIN
        assert all(c["ratio_ok"] for c in rec.certificate)
        assert not rec.value.is_zero()
        j = theory.conjugate_id(cuspidal[0])
        assert ctx.gamma_factor(theory.bessel(j), tau).value == rec.value


def test_hom_dimension(ctx, cuspidal):
    """[PAPER] dim Hom <= 1 for every parabolic and Levi irreducible, n = 1."""
    pairing = HomPairing(ctx, 1)
    for blocks in pairing.parabolics():
        for i in cuspidal:
            dims = pairing.dimensions(i, blocks)
            assert set(dims) <= {0, 1}
            assert hom_dimension(pairing, i, InducedSpec(1, blocks, 0)) == dims[0]


def test_hom_requires_cuspidal(ctx, theory):
    pairing = HomPairing(ctx, 1)
    with pytest.raises(InvalidParameter):
        pairing.dimensions(0, pairing.parabolics()[0])
