"""Induced functions f_v, the intertwining operator, zeta sums, gamma factors and Hom pairings."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .atlas import SubgroupAtlas, star
from .chartable import character_table
from .cyclotomic import CycArray, CycNum, lcm
from .embeddings import EmbeddingMaps, embedding_index
from .errors import InternalError, InvalidParameter
from .field import FieldTable
from .groups import GroupContext, build_group, subgroup_context
from .matrices import MatSpace
from .reps import BesselTable, GLWhittakerData, RepTheory, gl_whittaker
from .weyl import BruhatData

CERT_MIN = 16
CERT_CAP = 64
TRANSLATE_SEED = 20240602


class SiegelData:
    """SO_{2n+1} with its Siegel parabolic Q_n = L_n V_n and the matching GL_n."""

    def __init__(self, F: FieldTable, n: int, gl: RepTheory):
        self.n = n
        self.H = build_group("so-odd", F, n)
        self.atlas = SubgroupAtlas(self.H)
        self.gl = gl
        H, GL = self.H, gl.G
        self.Q = self.atlas.Q
        self.V = self.atlas.V
        self.w = self.atlas.w_siegel
        levi = np.full(H.order, -1, dtype=np.int64)
        levi[self.Q] = GL.index(H.mats[self.Q][:, :n, :n])
        self.levi_of = levi
        self.l_embed = H.index(self.atlas.levi_embed(GL.mats))  # a -> index of l_n(a)
        d = np.diag([F.neg[1] if i % 2 == 0 else 1 for i in range(n)])
        self.d_n = int(GL.index(d))
        self.star_of = GL.index(star(GL.space, GL.mats))

    def __repr__(self):
        return f"SiegelData(n={self.n}, |Q|={len(self.Q)}, |V|={len(self.V)})"

    @cached_property
    def big_cell(self) -> np.ndarray:
        """Q_n w_n V_n as a boolean mask, by enumeration."""
        H = self.H
        qw = H.space.matmul(H.mats[self.Q], H.mats[self.w])
        prods = H.space.matmul(qw[:, None], H.mats[self.V][None])
        mask = np.zeros(H.order, dtype=bool)
        mask[H.index(prods.reshape(-1, H.d, H.d))] = True
        return mask

    def intertwine_points(self, a: int) -> np.ndarray:
        """(|V|, |H|) indices of l(d_n a*) w_n u h: the points where M f(h, a) samples f(., I)."""
        cache = self.__dict__.setdefault("_intertwine_points", {})
        if a not in cache:
            H, GL = self.H, self.gl.G
            b = int(GL.index(GL.space.matmul(GL.mats[self.d_n], GL.mats[self.star_of[a]])))
            left = H.space.prod(H.mats[self.l_embed[b]], H.mats[self.w])
            lwu = H.space.matmul(left[None], H.mats[self.V])
            cache[a] = np.stack([H.index(H.space.matmul(m[None], H.mats)) for m in lwu])
        return cache[a]

    def intertwine_counts(self, a: int) -> np.ndarray:
        """C[h, b] = #{u in V_n : l(d_n a*) w_n u h lies in Q_n with Levi part b}."""
        cache = self.__dict__.setdefault("_intertwine_counts", {})
        if a not in cache:
            levi = self.levi_of[self.intertwine_points(a)]
            H, k = self.H.order, self.gl.G.order
            hs = np.broadcast_to(np.arange(H), levi.shape)
            hit = levi >= 0
            counts = np.bincount(hs[hit] * k + levi[hit], minlength=H * k).reshape(H, k)
            cache[a] = counts.astype(np.float64)
        return cache[a]

    def factor_big_cell(self, h: int) -> tuple[int, int, int] | None:
        """(q, w_n, x) with h = q w_n x, q in Q_n, x in V_n; None when the lower-left block is singular."""
        H, n = self.H, self.n
        if MatSpace(H.field, n).det(H.mats[h][n + 1:, :n]) == 0:
            return None
        w_inv = H.mats[H.inverse[self.w]]
        for x in self.V:
            k = H.index(H.space.prod(H.mats[h], H.mats[H.inverse[x]], w_inv))
            if self.levi_of[k] >= 0:
                return int(k), self.w, int(x)
        raise InternalError("invertible lower-left block but no factorization through Q_n w_n V_n")


@dataclass
class InducedFun:
    """f in I(tau, psi^-1) as (g, a) -> value, with g in SO_{2n+1} and a in GL_n."""

    siegel: SiegelData
    tau: GLWhittakerData
    x: int
    provenance: str
    base: InducedFun | None = None
    _cache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.siegel.n

    def at(self, h) -> CycArray:
        """f(h, I_n) for an array of SO_{2n+1} indices."""
        h = np.asarray(h)
        if self.provenance == "f_v":
            levi = self.siegel.levi_of[h]
            vals = self.tau.W(self.x)[np.maximum(levi, 0)]
            vals.num = np.where((levi >= 0)[..., None], vals.num, 0)
            return vals
        return self.value(h, self.siegel.gl.G.identity)

    def table(self) -> CycArray:
        """f(h, I_n) for every h in SO_{2n+1}."""
        return self.at(np.arange(self.siegel.H.order))

    def sampled(self, key, points: np.ndarray) -> CycArray:
        """f(h, I_n) at a fixed point set, memoized under `key`."""
        if key not in self._cache:
            self._cache[key] = self.at(points)
        return self._cache[key]

    def value(self, h, a: int) -> CycArray:
        """f(h, a) for SO_{2n+1} indices h and one GL_n index a."""
        S = self.siegel
        H, GL = S.H, S.gl.G
        h = np.asarray(h)
        if self.provenance == "f_v":
            return self.at(H.index(H.space.matmul(H.mats[S.l_embed[a]], H.mats[h])))
        if self.base.provenance == "f_v":
            Wx = self.tau.W(self.x)
            counts = S.intertwine_counts(int(a))
            if len(S.V) * counts.shape[1] * int(np.abs(Wx.num).max(initial=0)) >= 2**52:
                raise InternalError("intertwining sum exceeds exact float range")
            num = np.rint(counts[h] @ Wx.num.astype(np.float64)).astype(np.int64)
            return CycArray(Wx.field, num, Wx.den).compact()
        # M f(h, a) = sum_{u in V_n} f(w_n u h, d_n a*)
        b = int(GL.index(GL.space.matmul(GL.mats[S.d_n], GL.mats[S.star_of[a]])))
        total = None
        for u in S.V:
            wu = H.space.matmul(H.mats[S.w], H.mats[u])
            term = self.base.value(H.index(H.space.matmul(wu, H.mats[h])), b)
            total = term if total is None else total + term
        return total


@dataclass
class GammaRecord:
    pi: int
    tau: int
    n: int
    value: CycNum
    numerator: CycNum
    denominator: CycNum
    certificate: list[dict]
    consistent: bool
    zero_pairs: int

    def to_json(self) -> dict:
        return {"pi": self.pi, "tau": self.tau, "n": self.n, "gamma": self.value.to_json(),
                "numerator": self.numerator.to_json(), "denominator": self.denominator.to_json(),
                "certificate_pairs": len(self.certificate), "zero_denominator_pairs": self.zero_pairs,
                "consistent": self.consistent, "certificate": self.certificate}


class ZetaContext:
    """Everything needed for the zeta sums of SO_{2l} against GL_n, n <= l, over one field."""

    def __init__(self, F: FieldTable, l: int):
        self.F = F
        self.l = l
        self.G = build_group("so-even", F, l)
        gls = {n: build_group("gl", F, n) for n in range(1, l + 1)}
        self.E = lcm(self.G.exponent, F.p, *(g.exponent for g in gls.values()))
        self.theory = RepTheory(self.G, self.E)
        self.atlas = self.theory.atlas
        self.gl = {n: RepTheory(g, self.E) for n, g in gls.items()}
        self.maps = EmbeddingMaps(F, l)

    def __repr__(self):
        return f"ZetaContext(l={self.l}, q={self.F.q}, E={self.E})"

    @property
    def field(self):
        return self.theory.field

    @cached_property
    def bruhat(self) -> BruhatData:
        return BruhatData(self.G, self.atlas.U, self.atlas.T)

    def taus(self, n: int) -> list[GLWhittakerData]:
        cache = self.__dict__.setdefault("_taus", {})
        if n not in cache:
            cache[n] = gl_whittaker(self.gl[n])
        return cache[n]

    def siegel(self, n: int) -> SiegelData:
        cache = self.__dict__.setdefault("_siegel", {})
        if n not in cache:
            if not 1 <= n <= self.l:
                raise InvalidParameter(f"need 1 <= n <= l, got {n}")
            cache[n] = SiegelData(self.F, n, self.gl[n])
        return cache[n]

    # -- embedding bookkeeping ---------------------------------------------------------

    def odd_index(self, n: int) -> np.ndarray:
        """Index in SO_{2l} of iota_{l,n}(h) for every h in SO_{2n+1}."""
        return embedding_index(self.maps, self.siegel(n).H, self.G)

    @cached_property
    def even_index(self) -> np.ndarray:
        """Index in SO_{2l+1} of iota_l(g) for every g in SO_{2l}."""
        return embedding_index(self.maps, self.G, self.siegel(self.l).H)

    @cached_property
    def w_ll(self) -> int:
        """diag(gamma I_l, 1, gamma^-1 I_l) in SO_{2l+1}."""
        S = self.siegel(self.l)
        return int(S.l_embed[self.gamma_scalar(1)])

    def gamma_scalar(self, sign: int) -> int:
        """Index of gamma^sign I_l in GL_l."""
        F, GL = self.F, self.gl[self.l].G
        g = F.gamma_code if sign > 0 else F.inv[F.gamma_code]
        return int(GL.index(np.eye(self.l, dtype=np.int64) * g))

    def zeta_points(self, n: int) -> np.ndarray:
        """n < l: (|R|, |SO_{2n+1}|) SO_{2l}-indices of r w^{l,n} iota(h) (w^{l,n})^-1.
        n = l: SO_{2l+1}-indices of w_{l,l} iota_l(g) for every g."""
        cache = self.__dict__.setdefault("_zeta_points", {})
        if n in cache:
            return cache[n]
        G = self.G
        if n == self.l:
            H = self.siegel(n).H
            pts = H.index(H.space.matmul(H.mats[self.w_ll], H.mats[self.even_index]))
        else:
            wl = G.mats[self.atlas.w_ln(n)]
            wl_inv = G.mats[G.inverse[self.atlas.w_ln(n)]]
            conj = G.space.prod(wl, G.mats[self.odd_index(n)], wl_inv)
            R = self.atlas.R_set(n)
            pts = G.index(G.space.matmul(G.mats[R][:, None], conj[None]))
        cache[n] = pts
        return pts

    # -- functions ------------------------------------------------------------------------

    def make_fv(self, n: int, tau: GLWhittakerData, x: int) -> InducedFun:
        """f_v with v = tau(x) v_0, i.e. W_v(a) = B_tau(a x)."""
        if tau.n != n:
            raise InvalidParameter("tau lives on the wrong GL_n")
        key = (n, tau.index, int(x))
        cache = self.__dict__.setdefault("_fv", {})
        if key not in cache:
            cache[key] = InducedFun(self.siegel(n), tau, int(x), "f_v")
        return cache[key]

    def intertwining(self, f: InducedFun) -> InducedFun:
        if "intertwined" not in f._cache:
            f._cache["intertwined"] = InducedFun(f.siegel, f.tau, f.x, "intertwined", base=f)
        return f._cache["intertwined"]

    def canonical_vector(self, n: int) -> int:
        """The GL_n element x with v = tau(x) v_0 used as the non-vanishing witness."""
        if n == self.l:
            return self.gamma_scalar(-1)
        return self.gl[n].G.identity

    def zeta(self, n: int, W: CycArray, f: InducedFun) -> CycArray:
        """Psi(W, f) for a batch of functions W on SO_{2l} (shape (..., |G|))."""
        if f.n != n:
            raise InvalidParameter("f does not live on SO_{2n+1}")
        pts = self.zeta_points(n)
        S = self.siegel(n)
        if n == self.l:
            fvals = f.sampled("zeta", pts)
            return W.contract(fvals).scale(Fraction(1, len(self.atlas.U)))
        fvals = f.sampled("zeta", np.arange(S.H.order))
        wsum = CycArray(W.field, W.num[..., pts, :].sum(axis=-3), W.den)
        return wsum.contract(fvals).scale(Fraction(1, len(S.atlas.U)))

    def zeta_coset_mode(self, n: int, W: CycArray, f: InducedFun) -> CycArray:
        """Psi(W, f) summed over U-coset representatives only (must agree with zeta)."""
        pts = self.zeta_points(n)
        if n == self.l:
            th = self.theory
            reps = th._cosets[0]
            return CycArray(W.field, W.num[..., reps, :], W.den).contract(f.at(pts[reps]))
        S = self.siegel(n)
        H, U = S.H, S.atlas.U
        seen = np.zeros(H.order, dtype=bool)
        reps = []
        for h in range(H.order):
            if not seen[h]:
                reps.append(h)
                seen[H.index(H.space.matmul(H.mats[U], H.mats[h]))] = True
        reps = np.array(reps)
        wsum = CycArray(W.field, W.num[..., pts[:, reps], :].sum(axis=-3), W.den)
        return wsum.contract(f.at(reps))

    # -- gamma factors --------------------------------------------------------------------

    def translates(self, B: BesselTable, count: int) -> tuple[np.ndarray, CycArray]:
        """Right translates g -> B(g y) for the identity and count-1 seeded elements y."""
        G = self.G
        rng = np.random.default_rng(TRANSLATE_SEED)
        others = rng.permutation(np.setdiff1d(np.arange(G.order), [G.identity]))[:count - 1]
        ys = np.concatenate([[G.identity], others])
        rows = np.stack([G.right_translate(int(y)) for y in ys])
        return ys, B.values[rows]

    def gamma_factor(self, B: BesselTable, tau: GLWhittakerData, translates: int = 24,
                     cap: int = CERT_CAP, minimum: int = CERT_MIN) -> GammaRecord:
        """gamma(pi x tau) from the canonical witness, certified on further (W, f) pairs."""
        n = tau.n
        x0 = self.canonical_vector(n)
        f0 = self.make_fv(n, tau, x0)
        num0 = self.zeta(n, B.values, self.intertwining(f0)).to_cyc()
        den0 = self.zeta(n, B.values, f0).to_cyc()
        if den0.is_zero():
            raise InternalError(f"zeta sum vanishes on the canonical witness (pi={B.rep}, tau={tau.index})")
        gamma = num0 / den0
        ys, Ws = self.translates(B, translates)
        GL = tau.group
        xs = tau.theory._cosets[0]
        cert, zero_pairs, consistent = [], 0, True
        gam_arr = self.field.from_cyc([gamma])[0]
        for x in xs:
            f = self.make_fv(n, tau, int(x))
            den = self.zeta(n, Ws, f)
            num = self.zeta(n, Ws, self.intertwining(f))
            ok = (den * gam_arr).equals(num)
            consistent &= bool(ok.all())
            for k in range(len(ys)):
                if den[k].is_zero().item():
                    zero_pairs += 1
                elif len(cert) < cap:
                    cert.append({"translate": int(ys[k]), "vector": GL.mats[int(x)].tolist(),
                                 "ratio_ok": bool(ok[k]), "denominator": den[k].to_cyc().to_json()})
        if not consistent:
            raise InternalError(f"gamma certificate inconsistent (pi={B.rep}, tau={tau.index}, n={n})")
        if len(cert) < minimum:
            raise InternalError(f"only {len(cert)} certificate pairs with nonzero denominator")
        return GammaRecord(B.rep, tau.index, n, gamma, num0, den0, cert, consistent, zero_pairs)

    # -- the collapsed forms used in the proofs -------------------------------------------

    def collapsed_intertwined_zeta(self, n: int, B: BesselTable, tau: GLWhittakerData, x: int) -> CycNum:
        """|V_n| |R^{l,n}| sum_{a in U\\GL_n} B(t_n(a) w~_n) W*_v(a), for n < l."""
        G, GL = self.G, tau.group
        S = self.siegel(n)
        wt = self.bruhat.rep(self.bruhat.weyl.w_tilde(n))
        ta = G.index(G.space.matmul(self.atlas.t_embed(n, GL.mats), G.mats[wt]))
        total = B.values[ta].dot(tau.W_star(x)).to_cyc()
        scale = Fraction(len(S.V) * len(self.atlas.R_set(n)), len(tau.theory.atlas.U))
        return total * scale

    def membership_QwV(self, h: int) -> tuple[int, int, int] | None:
        """Decide h in Q_l w_l V_l by the lower-left block; return a factorization if so."""
        return self.siegel(self.l).factor_big_cell(h)


# -- multiplicity one ------------------------------------------------------------------------


@dataclass
class InducedSpec:
    """Ind_P^K sigma for the block parabolic P of K = SO_{2n+1} and an irreducible sigma of its Levi."""

    n: int
    blocks: tuple[int, ...]
    sigma: int

    def to_json(self) -> dict:
        return {"n": self.n, "blocks": list(self.blocks), "sigma": self.sigma}


class HomPairing:
    """dim Hom_H(pi, Ind_P^K sigma (x) psi_gamma) by character pairing."""

    def __init__(self, ctx: ZetaContext, n: int):
        self.ctx = ctx
        self.n = n
        S = ctx.siegel(n)
        self.K = S.H
        self.katlas = S.atlas
        self.E = lcm(ctx.E, self.K.exponent)

    @cached_property
    def field(self):
        from .cyclotomic import CycField
        return CycField(self.E)

    def parabolics(self) -> list[tuple[int, ...]]:
        return self.katlas.standard_parabolic_blocks()

    def levi(self, blocks) -> tuple[GroupContext, np.ndarray, np.ndarray]:
        """(Levi group, P indices, Levi index of the block-diagonal part of each element of P)."""
        cache = self.__dict__.setdefault("_levi", {})
        blocks = tuple(blocks)
        if blocks in cache:
            return cache[blocks]
        K = self.K
        if blocks not in self.parabolics():
            raise InvalidParameter(f"{blocks} is not a standard parabolic of {K.name}")
        P, _ = self.katlas.block_parabolic(blocks)
        if len(blocks) == 1:
            L, proj = K, P.copy()
        else:
            bounds = np.cumsum([0, *blocks])
            mask = np.zeros((K.d, K.d), dtype=bool)
            for i in range(len(blocks)):
                mask[bounds[i]:bounds[i + 1], bounds[i]:bounds[i + 1]] = True
            diag_part = np.where(mask, K.mats[P], 0)
            levi_idx = np.unique(K.index(diag_part))
            L = subgroup_context(K, levi_idx, f"Levi{blocks} of {K.name}")
            proj = L.index(diag_part)
        cache[blocks] = (L, P, proj)
        return cache[blocks]

    def levi_table(self, blocks):
        cache = self.__dict__.setdefault("_tables", {})
        blocks = tuple(blocks)
        if blocks not in cache:
            L, _, _ = self.levi(blocks)
            cache[blocks] = character_table(L, self.E)
        return cache[blocks]

    def induced_characters(self, blocks, points: np.ndarray) -> CycArray:
        """Theta_{Ind sigma}(k) for every sigma of the Levi (rows) at K-indices `points`."""
        K = self.K
        L, P, proj = self.levi(blocks)
        table = self.levi_table(blocks)
        in_p = np.full(K.order, -1, dtype=np.int64)
        in_p[P] = proj
        covered = np.zeros(K.order, dtype=bool)
        total = np.zeros((len(table), len(points), table.field.d), dtype=np.int64)
        chars = table.values[:, L.classes.class_of]  # (sigma, |L|)
        for x in range(K.order):
            if covered[x]:
                continue
            covered[K.index(K.space.matmul(K.mats[x], K.mats[P]))] = True
            xi = K.mats[K.inverse[x]]
            c = K.index(K.space.prod(xi, K.mats[points], K.mats[x]))
            lev = in_p[c]
            hit = lev >= 0
            total[:, hit] += chars.num[:, lev[hit]]
        return CycArray(table.field, total, chars.den).lift(self.field)

    def subgroup_points(self):
        """(G-indices of h, K-index of its SO_{2n+1} part, psi_gamma exponent) over H."""
        ctx, n, l = self.ctx, self.n, self.ctx.l
        G = ctx.G
        if n == l:
            return np.arange(G.order), ctx.even_index, np.zeros(G.order, dtype=np.int64)
        emb = ctx.odd_index(n)
        N = ctx.atlas.N_upper(n)
        prods = G.space.matmul(G.mats[emb][:, None], G.mats[N][None])
        g_idx = G.index(prods.reshape(-1, G.d, G.d))
        k_idx = np.repeat(np.arange(self.K.order), len(N))
        psi = np.tile(ctx.atlas.psi_exponent(N, "gamma", n), self.K.order)
        return g_idx, k_idx, psi

    def _weights(self, blocks: tuple[int, ...]) -> CycArray:
        """conj(Theta_sigma(h) psi_gamma(h)) on H for every sigma; independent of pi."""
        cache = self.__dict__.setdefault("_weight_cache", {})
        if blocks not in cache:
            _, k_idx, psi = self.subgroup_points()
            uniq, inv = np.unique(k_idx, return_inverse=True)
            theta = self.induced_characters(blocks, uniq)[:, inv]
            psi_vals = self.field.roots(psi * (self.E // self.F.p))
            cache[blocks] = (theta * psi_vals).conj()
        return cache[blocks]

    def dimensions(self, pi: int, blocks) -> list[int]:
        """dim Hom for every sigma of the Levi of `blocks`."""
        ctx = self.ctx
        prof = ctx.theory.profiles[pi]
        if not prof.is_cuspidal:
            raise InvalidParameter(f"representation {pi} is not cuspidal")
        g_idx, _, _ = self.subgroup_points()
        chi = ctx.theory.table.on_elements(pi)[g_idx].lift(self.field)
        weights = self._weights(tuple(blocks))
        out = []
        for row in weights:
            s = row.dot(chi).to_cyc()
            if not s.is_rational():
                raise InternalError("Hom pairing is not rational")
            val = s.to_fraction() / len(g_idx)
            if val.denominator != 1 or val < 0:
                raise InternalError(f"Hom pairing {val} is not a non-negative integer")
            out.append(int(val))
        return out

    @property
    def F(self) -> FieldTable:
        return self.ctx.F


def hom_dimension(pairing: HomPairing, pi: int, spec: InducedSpec) -> int:
    return pairing.dimensions(pi, spec.blocks)[spec.sigma]
