"""The statement-by-statement check suite and its report."""

from __future__ import annotations

import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Callable

import numpy as np

from .cyclotomic import CycArray
from .errors import InternalError, InvalidParameter, ResourceLimit
from .field import FieldTable
from .matrices import MatSpace
from .reps import whittaker_span_check
from .weyl import WeylAtlas
from .zeta import HomPairing, ZetaContext

MAX_WEYL_RANK = 6

CATALOG: dict[str, str] = {
    "besselprop-4.1": "Bessel functions take the value 1 at the identity and are bi-(U, psi)-equivariant",
    "support-vanish-4.2": "Bessel functions vanish on Bruhat cells outside the Bessel support",
    "center-4.3": "on the torus, Bessel functions are supported on the center",
    "conj-bessel-4.4": "the transported Bessel function is the normalized Bessel function of pi^c",
    "theta-partition-4.6": "theta_w is a bijection onto subsets of simple roots and cuts out each B_n",
    "partition-4.7": "B_0, ..., B_{l-1} partition the Bessel support",
    "uppertriangular-4.8": "nontrivial GL_{l-1} Weyl elements miss the support; B(t_{l-1}(a)) = 0 off upper triangular a",
    "support-bn-4.9": "nonzero B(tw) with w in B_n, n < l-1, forces a = t_{n+1} = ... = t_{l-1} = +-1 and b = 0",
    "niennon-5.1": "Whittaker functions of all generic tau separate the U-cosets of GL_n",
    "nonvanish-5.2": "Psi(B, f_v) = W_v(I_n) for n <= l-2",
    "intertwine-5.3": "the intertwined section lives on Q_n w_n V_n with values W*_v",
    "nonvanish-6.1": "Psi(B, f_v) = W_v(I_{l-1})",
    "conj-gamma-6.3": "gamma(pi x tau) = gamma(pi^c x tau) for n < l",
    "nonvanish-7.1": "Psi(B, f_v) = W_v(w_{l,l}), nonzero for v = tau(w_{l,l}^-1) v_0",
    "qwv-membership-7.2": "iota_l(tw) lies in Q_l w_l V_l exactly when w is in B_{l-1} and a != 1",
    "conj-gamma-7.4": "gamma(pi x tau) = gamma(pi^c x tau) for n = l",
    "bessel-sum-8.1": "equal gammas and central characters give equal sums B_pi + B_{pi^c}",
    "converse-8.2": "equal gammas and central characters give pi' = pi or pi' = pi^c",
    "multone-3.1": "dim Hom_{SO_2l}(pi, Ind sigma) <= 1",
    "multone-3.3": "dim Hom_H(pi, Ind sigma (x) psi_gamma) <= 1",
    "gamma-welldef-3.4": "the zeta ratio is the same on every certificate pair",
}
WEYL_ONLY = ("theta-partition-4.6", "partition-4.7")


def max_jobs() -> int:
    return max(1, int(os.environ.get("SOQC_MAX_JOBS", os.cpu_count() or 1)))


@dataclass(frozen=True)
class VerifyConfig:
    p: int = 3
    r: int = 1
    l: int = 2
    rho: int | None = None
    checks: tuple[str, ...] = tuple(CATALOG)
    fmt: str = "json"
    jobs: int = 1

    @classmethod
    def parse_checks(cls, spec: str | None) -> tuple[str, ...]:
        if spec in (None, "", "all"):
            return tuple(CATALOG)
        if spec == "weyl-only":
            return WEYL_ONLY
        names = tuple(s.strip() for s in spec.split(",") if s.strip())
        unknown = [s for s in names if s not in CATALOG]
        if unknown:
            raise InvalidParameter(f"unknown checks: {', '.join(unknown)}")
        return names

    def validate(self) -> FieldTable:
        """Raise InvalidParameter on a bad configuration; return the field."""
        if self.l < 2:
            raise InvalidParameter(f"l must be >= 2, got {self.l}")
        if self.l > MAX_WEYL_RANK:
            raise InvalidParameter(f"l must be <= {MAX_WEYL_RANK}, got {self.l}")
        if self.fmt not in ("json", "md"):
            raise InvalidParameter(f"unknown format {self.fmt!r}")
        if self.jobs < 1:
            raise InvalidParameter("jobs must be positive")
        unknown = [c for c in self.checks if c not in CATALOG]
        if unknown:
            raise InvalidParameter(f"unknown checks: {', '.join(unknown)}")
        return FieldTable(self.p, self.r, self.rho)

    def to_json(self) -> dict:
        return {"p": self.p, "r": self.r, "q": self.p**self.r, "l": self.l, "rho": self.rho,
                "checks": list(self.checks)}


@dataclass
class CheckRecord:
    name: str
    status: str
    detail: str = ""
    witness: dict = dc_field(default_factory=dict)
    seconds: float = 0.0

    @property
    def statement(self) -> str:
        return CATALOG[self.name]

    def to_json(self) -> dict:
        return {"name": self.name, "statement": self.statement, "status": self.status,
                "detail": self.detail, "witness": self.witness}


@dataclass
class Report:
    config: VerifyConfig
    orders: dict
    inventory: list
    gammas: dict
    checks: list[CheckRecord]
    seconds: float = 0.0
    extras: dict = dc_field(default_factory=dict, repr=False)

    @property
    def passed(self) -> bool:
        return not any(c.status == "fail" for c in self.checks)

    def counts(self) -> dict[str, int]:
        out = {"pass": 0, "fail": 0, "skipped": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def to_json(self, timing: bool = False) -> dict:
        out = {"config": self.config.to_json(), "orders": self.orders, "inventory": self.inventory,
               "gamma": self.gammas, "checks": [c.to_json() for c in self.checks],
               "summary": self.counts()}
        if timing:
            out["timing"] = {"total": round(self.seconds, 3),
                             "checks": {c.name: round(c.seconds, 3) for c in self.checks}}
        return out

    def record(self, name: str) -> CheckRecord:
        return next(c for c in self.checks if c.name == name)


class Outcome(Exception):
    """Raised by a check to stop with a failing witness."""

    def __init__(self, detail: str, **witness):
        super().__init__(detail)
        self.detail = detail
        self.witness = witness


def _cyc(x) -> dict:
    return x.to_json()


class Workspace:
    """Shared, lazily built contexts; each item is built once even under concurrent access."""

    def __init__(self, F: FieldTable, l: int):
        self.F = F
        self.l = l
        self.weyl = WeylAtlas(l)
        self._items: dict = {}
        self._locks: dict = {}
        self._guard = threading.Lock()

    def memo(self, key, build: Callable):
        with self._guard:
            lock = self._locks.setdefault(key, threading.Lock())
        with lock:
            if key not in self._items:
                try:
                    self._items[key] = ("ok", build())
                except ResourceLimit as exc:
                    self._items[key] = ("limit", exc)
        kind, value = self._items[key]
        if kind == "limit":
            raise value
        return value

    @property
    def ctx(self) -> ZetaContext:
        return self.memo("ctx", lambda: ZetaContext(self.F, self.l))

    @property
    def theory(self):
        return self.ctx.theory

    @property
    def G(self):
        return self.ctx.G

    def cuspidal(self) -> list[int]:
        return self.memo("cuspidal", lambda: list(self.theory.generic_cuspidal()))

    def generic(self) -> list[int]:
        return self.memo("generic", lambda: list(self.theory.generic()))

    def bessel(self, i: int):
        return self.memo(("bessel", i), lambda: self.theory.bessel(i))

    def bruhat(self):
        return self.memo("bruhat", lambda: self.ctx.bruhat)

    def siegel(self, n: int):
        return self.memo(("siegel", n), lambda: self.ctx.siegel(n))

    def taus(self, n: int):
        return self.memo(("taus", n), lambda: self.ctx.taus(n))

    def gamma(self, n: int, pi: int, tau_index: int):
        def build():
            self.siegel(n)
            tau = next(t for t in self.taus(n) if t.index == tau_index)
            return self.ctx.gamma_factor(self.bessel(pi), tau)
        return self.memo(("gamma", n, pi, tau_index), build)

    def gamma_row(self, n: int, pi: int) -> dict[int, object]:
        return {t.index: self.gamma(n, pi, t.index) for t in self.taus(n)}

    def pairing(self, n: int) -> HomPairing:
        def build():
            self.siegel(n)
            return HomPairing(self.ctx, n)
        return self.memo(("pairing", n), build)

    def torus_coords(self) -> dict:
        return self.memo("torus", lambda: self.ctx.atlas.torus_coords)


# -- individual checks: each returns a detail string or raises Outcome -----------------------


def _psi_exponents(ws: Workspace, idx) -> np.ndarray:
    return ws.ctx.atlas.psi_exponent(idx, "so")


def check_besselprop(ws: Workspace) -> str:
    G, U = ws.G, ws.ctx.atlas.U
    th = ws.theory
    e = _psi_exponents(ws, U)
    sides = {"left": [G.left_translate(int(u)) for u in U], "right": [G.right_translate(int(u)) for u in U]}
    field, p = th.field, th.p
    for i in ws.generic():
        B = ws.bessel(i).values
        if not B[G.identity].equals(field.scalar(1)).item():
            raise Outcome("B(I) != 1", rep=i, value=_cyc(B[G.identity].to_cyc()))
        # psi(u) takes p values, so B psi(u) has p candidates; one-sided equivariance on both sides
        # is equivalent to B(u g v) = psi(u) psi(v) B(g)
        twisted = [B.rotate(k * (field.E // p)) for k in range(p)]
        base, *twist_labels = CycArray.value_labels(B, *twisted)
        for side, moves in sides.items():
            for a, perm in enumerate(moves):
                ok = base[perm] == twist_labels[e[a]]
                if not ok.all():
                    g = int(np.nonzero(~ok)[0][0])
                    raise Outcome(f"{side} equivariance fails", rep=i, u=int(U[a]), g=g,
                                  lhs=_cyc(B[perm[g]].to_cyc()), rhs=_cyc(twisted[e[a]][g].to_cyc()))
    return f"{len(ws.generic())} generic representations, {len(U)} translates on each side"


def check_support_vanish(ws: Workspace) -> str:
    mask = ws.bruhat().support_mask()
    for i in ws.generic():
        B = ws.bessel(i).values
        bad = np.nonzero(~mask & ~B.is_zero())[0]
        if len(bad):
            g = int(bad[0])
            raise Outcome("nonzero outside the support", rep=i, g=g, value=_cyc(B[g].to_cyc()),
                          cell=str(ws.bruhat().decompose(g)[2]))
    return f"{int((~mask).sum())} elements off the support"


def check_center(ws: Workspace) -> str:
    T = ws.ctx.atlas.T
    Z = set(int(z) for z in ws.G.center)
    for i in ws.generic():
        B = ws.bessel(i).values
        for t in T:
            if int(t) not in Z and not B[int(t)].is_zero().item():
                raise Outcome("nonzero at a non-central torus element", rep=i, t=int(t),
                              coords=list(ws.torus_coords()[int(t)]))
    return f"|T| = {len(T)}, |Z| = {len(Z)}"


def check_conj_bessel(ws: Workspace) -> str:
    th, G, U = ws.theory, ws.G, ws.ctx.atlas.U
    e = _psi_exponents(ws, U)
    E, p = th.field.E, th.p
    for i in ws.generic():
        j, moved = th.conjugate_bessel(i)
        if j < 0:
            raise Outcome("no conjugate character row", rep=i)
        B = moved.values
        if not B[G.identity].equals(th.field.scalar(1)).item():
            raise Outcome("transported function is not normalized", rep=i)
        base, *twist_labels = CycArray.value_labels(B, *(B.rotate(k * (E // p)) for k in range(p)))
        for a, u in enumerate(U):
            ok = base[G.left_translate(int(u))] == twist_labels[e[a]]
            if not ok.all():
                raise Outcome("transported function is not left (U, psi)-equivariant", rep=i, u=int(u),
                              g=int(np.nonzero(~ok)[0][0]))
        diff = moved.first_difference(ws.bessel(j))
        if diff is not None:
            raise Outcome("transported function differs from the Bessel function of pi^c", rep=i, conj=j,
                          g=diff)
    pairs = sorted({tuple(sorted((i, th.conjugate_id(i)))) for i in ws.generic()})
    return f"conjugate pairs {pairs}"


def check_theta_partition(ws: Workspace) -> str:
    W = ws.weyl
    if not W.check_theta_bijection():
        raise Outcome("theta is not a bijection onto subsets", l=ws.l)
    for n, ws_n in W.bessel_partition.items():
        got = {W.theta(w) for w in ws_n}
        want = W.theta_family(n)
        if got != want:
            raise Outcome("theta(B_n) differs from the prescribed family", n=n,
                          extra=sorted(map(sorted, got - want)), missing=sorted(map(sorted, want - got)))
    return f"|B(SO_{2 * ws.l})| = {len(W.bessel_support)} = 2^{ws.l - 1}"


def check_partition(ws: Workspace) -> str:
    W, l = ws.weyl, ws.l
    part = W.bessel_partition
    if not W.check_theta_partition():
        raise Outcome("B_n do not partition the Bessel support", l=l)
    sizes = {n: len(v) for n, v in part.items()}
    want = {0: 1, **{n: 2 ** (n - 1) for n in range(1, l)}}
    if sizes != want:
        raise Outcome("unexpected sizes of B_n", sizes=sizes, expected=want)
    if sum(sizes.values()) != 2 ** (l - 1):
        raise Outcome("sizes do not add up to 2^(l-1)", sizes=sizes)
    return f"|B_n| = {[sizes[n] for n in sorted(sizes)]}"


def check_uppertriangular(ws: Workspace) -> str:
    W, l = ws.weyl, ws.l
    if not W.check_gl_not_in_support():
        raise Outcome("a nontrivial GL_{l-1} Weyl element supports Bessel functions", l=l)
    G, ctx = ws.G, ws.ctx
    GL = ctx.gl[l - 1].G
    mats = GL.mats
    lower = np.tril(np.ones((l - 1, l - 1), dtype=bool), -1)
    non_upper = np.nonzero((mats[:, lower] != 0).any(axis=1))[0]
    if len(non_upper):
        pts = G.index(ctx.atlas.t_embed(l - 1, mats[non_upper]))
        for i in ws.generic():
            B = ws.bessel(i).values
            nz = np.nonzero(~B[pts].is_zero())[0]
            if len(nz):
                raise Outcome("nonzero at t_{l-1}(a) with a not upper triangular", rep=i,
                              a=mats[non_upper[nz[0]]].tolist())
    return f"{len(non_upper)} non-upper-triangular elements of GL_{l - 1}"


def check_support_bn(ws: Workspace) -> str:
    l, F = ws.l, ws.F
    br, coords = ws.bruhat(), ws.torus_coords()
    G = ws.G
    part = ws.weyl.bessel_partition
    one, minus = 1, int(F.neg[1])
    tested = 0
    for n in range(0, l - 1):
        for w in part[n]:
            rep = G.mats[br.rep(w)]
            ts = np.array(sorted(coords))
            pts = G.index(G.space.matmul(G.mats[ts], rep))
            for i in ws.generic():
                B = ws.bessel(i).values
                for t, g in zip(ts, pts):
                    c = coords[int(t)]
                    a, b = c[-2], c[-1]
                    allowed = b == 0 and a in (one, minus) and all(x == a for x in c[n:l - 1])
                    if not allowed and not B[int(g)].is_zero().item():
                        raise Outcome("nonzero value outside the allowed torus part", rep=i, n=n, w=str(w),
                                      coords=list(c), value=_cyc(B[int(g)].to_cyc()))
                    tested += 1
    return f"{tested} (pi, t, w) triples with n < l-1"


def check_niennon(ws: Workspace) -> str:
    ranks = []
    for n in range(1, ws.l + 1):
        taus = ws.taus(n)
        GL = ws.ctx.gl[n].G
        if not whittaker_span_check(taus, np.arange(GL.order)):
            raise Outcome("Whittaker functions do not separate the U-cosets", n=n,
                          taus=[t.index for t in taus])
        ranks.append(f"n={n}: {len(taus)} generic tau")
    return "; ".join(ranks)


def _nonvanish(ws: Workspace, n: int, at_scalar: bool) -> str:
    ctx = ws.ctx
    ws.siegel(n)
    GL = ctx.gl[n].G
    target = ctx.gamma_scalar(1) if at_scalar else GL.identity
    for i in ws.cuspidal():
        B = ws.bessel(i).values
        for tau in ws.taus(n):
            for x in range(GL.order):
                z = ctx.zeta(n, B, ctx.make_fv(n, tau, x))
                want = tau.W(x)[target]
                if not z.equals(want).item():
                    raise Outcome("zeta sum differs from the predicted Whittaker value", n=n, pi=i,
                                  tau=tau.index, x=GL.mats[x].tolist(), zeta=_cyc(z.to_cyc()),
                                  expected=_cyc(want.to_cyc()))
            x0 = ctx.canonical_vector(n)
            z0 = ctx.zeta(n, B, ctx.make_fv(n, tau, x0))
            if z0.is_zero().item():
                raise Outcome("zeta sum vanishes on the witness vector", n=n, pi=i, tau=tau.index)
    return f"n={n}: all x in GL_{n}, {len(ws.cuspidal())} pi x {len(ws.taus(n))} tau"


def check_nonvanish_small(ws: Workspace) -> str:
    ns = range(1, ws.l - 1)
    if not ns:
        return "vacuous: no n with 1 <= n <= l-2"
    return "; ".join(_nonvanish(ws, n, False) for n in ns)


def check_nonvanish_mid(ws: Workspace) -> str:
    return _nonvanish(ws, ws.l - 1, False)


def check_nonvanish_top(ws: Workspace) -> str:
    return _nonvanish(ws, ws.l, True)


def check_intertwine(ws: Workspace) -> str:
    ctx = ws.ctx
    out = []
    for n in range(1, ws.l + 1):
        S = ws.siegel(n)
        H, GL = S.H, S.gl.G
        lw = H.space.matmul(H.mats[S.l_embed], H.mats[S.w])  # l_n(a) w_n
        cell = H.index(H.space.matmul(lw[:, None], H.mats[S.V][None]))  # (a, x)
        for tau in ws.taus(n):
            for x in range(GL.order):
                ft = ctx.intertwining(ctx.make_fv(n, tau, x)).table()
                stray = np.nonzero(~ft.is_zero() & ~S.big_cell)[0]
                if len(stray):
                    raise Outcome("intertwined section is nonzero off Q_n w_n V_n", n=n, tau=tau.index,
                                  x=GL.mats[x].tolist(), h=H.mats[int(stray[0])].tolist())
                star = tau.W_star(x)
                ok = ft[cell].equals(CycArray(star.field, star.num[:, None, :], star.den))
                if not ok.all():
                    a, v = map(int, np.argwhere(~ok)[0])
                    raise Outcome("f~_v(l_n(a) w_n x, I) != W*_v(a)", n=n, tau=tau.index,
                                  x=GL.mats[x].tolist(), a=GL.mats[a].tolist(), u=H.mats[S.V[v]].tolist())
        out.append(f"n={n}: |V_n| = {len(S.V)}")
    return "; ".join(out)


def _conj_gamma(ws: Workspace, ns) -> str:
    th = ws.theory
    count = 0
    for n in ns:
        for i in ws.cuspidal():
            j = th.conjugate_id(i)
            for t in ws.taus(n):
                a, b = ws.gamma(n, i, t.index), ws.gamma(n, j, t.index)
                if a.value != b.value:
                    raise Outcome("gamma(pi x tau) != gamma(pi^c x tau)", n=n, pi=i, conj=j, tau=t.index,
                                  gamma=_cyc(a.value), gamma_conj=_cyc(b.value))
                count += 1
    return f"{count} (pi, tau) pairs"


def check_conj_gamma_low(ws: Workspace) -> str:
    return _conj_gamma(ws, range(1, ws.l))


def check_conj_gamma_top(ws: Workspace) -> str:
    return _conj_gamma(ws, [ws.l])


def check_qwv(ws: Workspace) -> str:
    ctx = ws.ctx
    S = ws.siegel(ws.l)
    H, l = S.H, ws.l
    block = MatSpace(H.field, l).det(H.mats[:, l + 1:, :l]) != 0
    if not np.array_equal(block, S.big_cell):
        h = int(np.nonzero(block != S.big_cell)[0][0])
        raise Outcome("block criterion disagrees with the enumerated Q_l w_l V_l", h=H.mats[h].tolist())
    br, coords, G = ws.bruhat(), ws.torus_coords(), ws.G
    top = set(ws.weyl.bessel_partition[l - 1])
    tested = 0
    for w in ws.weyl.bessel_support:
        for t, c in sorted(coords.items()):
            g = int(G.index(G.space.matmul(G.mats[t], G.mats[br.rep(w)])))
            h = int(ctx.even_index[g])
            fac = ctx.membership_QwV(h)
            predicted = w in top and c[-2] != 1
            if (fac is not None) != predicted or bool(S.big_cell[h]) != predicted:
                raise Outcome("membership differs from the predicted criterion", w=str(w), coords=list(c),
                              member=fac is not None, predicted=predicted)
            if fac is not None:
                q, wn, x = fac
                prod = H.space.prod(H.mats[q], H.mats[wn], H.mats[x])
                if not np.array_equal(prod, H.mats[h]) or S.levi_of[q] < 0:
                    raise Outcome("returned factorization is wrong", w=str(w), coords=list(c))
            tested += 1
    return f"{tested} elements tw; block criterion agrees on all {H.order} elements of SO_{2 * l + 1}"


def _converse_pairs(ws: Workspace):
    """(pi, pi', hypothesis holds, first differing gamma)."""
    th = ws.theory
    cusp = ws.cuspidal()
    rows = {(n, i): ws.gamma_row(n, i) for n in range(1, ws.l + 1) for i in cusp}
    out = []
    for i, k in combinations(cusp, 2):
        same_center = th.central_character(i) == th.central_character(k)
        same_gamma = all(rows[n, i][t].value == rows[n, k][t].value
                         for n in range(1, ws.l + 1) for t in rows[n, i])
        out.append((i, k, same_center and same_gamma))
    return out


def check_bessel_sum(ws: Workspace) -> str:
    th = ws.theory
    hits = 0
    for i, k, hyp in _converse_pairs(ws):
        if not hyp:
            continue
        hits += 1
        lhs = ws.bessel(i).values + ws.bessel(th.conjugate_id(i)).values
        rhs = ws.bessel(k).values + ws.bessel(th.conjugate_id(k)).values
        ok = lhs.equals(rhs)
        if not ok.all():
            g = int(np.nonzero(~ok)[0][0])
            raise Outcome("Bessel sums differ", pi=i, pi_prime=k, g=g, lhs=_cyc(lhs[g].to_cyc()),
                          rhs=_cyc(rhs[g].to_cyc()))
    return f"{hits} pairs satisfy the hypothesis"


def check_converse(ws: Workspace) -> tuple[str, dict]:
    th = ws.theory
    hyp_pairs, converse_ok = [], True
    for i, k, hyp in _converse_pairs(ws):
        related = k in (i, th.conjugate_id(i))
        if hyp:
            hyp_pairs.append([i, k])
            if not related:
                raise Outcome("equal gammas and central characters but pi' is neither pi nor pi^c",
                              pi=i, pi_prime=k)
        elif related:
            converse_ok = False
    info = {"hypothesis_pairs": hyp_pairs, "converse_direction_holds": converse_ok}
    return f"{len(hyp_pairs)} pairs satisfy the hypothesis; converse direction holds: {converse_ok}", info


def _multone(ws: Workspace, ns) -> tuple[str, dict]:
    total, worst, by_n = 0, 0, {}
    for n in ns:
        pairing = ws.pairing(n)
        dims = {}
        for blocks in pairing.parabolics():
            for pi in ws.cuspidal():
                ds = pairing.dimensions(pi, blocks)
                for s, d in enumerate(ds):
                    if d > 1:
                        raise Outcome("Hom space of dimension > 1", n=n, pi=pi, blocks=list(blocks),
                                      sigma=s, dimension=d)
                total += len(ds)
                worst = max(worst, max(ds, default=0))
                dims[f"{pi}:{'-'.join(map(str, blocks))}"] = ds
        by_n[str(n)] = dims
    return f"{total} pairings, max dimension {worst}", {"dimensions": by_n}


def check_multone_top(ws: Workspace):
    return _multone(ws, [ws.l])


def check_multone_low(ws: Workspace):
    return _multone(ws, range(1, ws.l))


def check_gamma_welldef(ws: Workspace) -> str:
    pairs, sizes = 0, set()
    for n in range(1, ws.l + 1):
        for i in ws.cuspidal():
            for t, rec in ws.gamma_row(n, i).items():
                if not rec.consistent or any(not c["ratio_ok"] for c in rec.certificate):
                    raise Outcome("certificate ratio differs", n=n, pi=i, tau=t)
                pairs += 1
                sizes.add(len(rec.certificate))
    return f"{pairs} (pi, tau) pairs, certificate sizes {sorted(sizes)}"


CHECKS: dict[str, Callable] = {
    "besselprop-4.1": check_besselprop,
    "support-vanish-4.2": check_support_vanish,
    "center-4.3": check_center,
    "conj-bessel-4.4": check_conj_bessel,
    "theta-partition-4.6": check_theta_partition,
    "partition-4.7": check_partition,
    "uppertriangular-4.8": check_uppertriangular,
    "support-bn-4.9": check_support_bn,
    "niennon-5.1": check_niennon,
    "nonvanish-5.2": check_nonvanish_small,
    "intertwine-5.3": check_intertwine,
    "nonvanish-6.1": check_nonvanish_mid,
    "conj-gamma-6.3": check_conj_gamma_low,
    "nonvanish-7.1": check_nonvanish_top,
    "qwv-membership-7.2": check_qwv,
    "conj-gamma-7.4": check_conj_gamma_top,
    "bessel-sum-8.1": check_bessel_sum,
    "converse-8.2": check_converse,
    "multone-3.1": check_multone_top,
    "multone-3.3": check_multone_low,
    "gamma-welldef-3.4": check_gamma_welldef,
}


def run_check(ws: Workspace, name: str) -> CheckRecord:
    start = time.perf_counter()
    try:
        result = CHECKS[name](ws)
        detail, witness = result if isinstance(result, tuple) else (result, {})
        rec = CheckRecord(name, "pass", detail, witness)
    except Outcome as out:
        rec = CheckRecord(name, "fail", out.detail, out.witness)
    except ResourceLimit as exc:
        rec = CheckRecord(name, "skipped", f"resource-limit: {exc}")
    except InternalError as exc:
        rec = CheckRecord(name, "fail", f"internal error: {exc}")
    rec.seconds = time.perf_counter() - start
    return rec


# -- report assembly --------------------------------------------------------------------------


def _orders(ws: Workspace) -> dict:
    out = {"q": ws.F.q, "weyl_group": len(ws.weyl.elements), "bessel_support": len(ws.weyl.bessel_support)}
    try:
        ctx = ws.ctx
    except ResourceLimit as exc:
        out["group"] = f"resource-limit: {exc}"
        return out
    atlas = ctx.atlas
    out.update({"SO_2l": ctx.G.order, "U": len(atlas.U), "T": len(atlas.T), "Z": len(ctx.G.center),
                "classes": len(ctx.G.classes), "conductor": ctx.E})
    for n, th in ctx.gl.items():
        out[f"GL_{n}"] = th.G.order
    for n in range(1, ws.l + 1):
        try:
            out[f"SO_{2 * n + 1}"] = ws.siegel(n).H.order
        except ResourceLimit:
            out[f"SO_{2 * n + 1}"] = "resource-limit"
    return out


def _inventory(ws: Workspace) -> list:
    try:
        return [p.to_json() for p in ws.theory.profiles]
    except ResourceLimit:
        return []


def _gamma_matrix(ws: Workspace) -> dict:
    out = {}
    try:
        cusp = ws.cuspidal()
    except ResourceLimit:
        return out
    for n in range(1, ws.l + 1):
        try:
            out[str(n)] = {str(i): {str(t): rec.value.to_json() for t, rec in ws.gamma_row(n, i).items()}
                           for i in cusp}
        except ResourceLimit as exc:
            out[str(n)] = f"resource-limit: {exc}"
    return out


def run_suite(config: VerifyConfig) -> Report:
    """Run the selected checks; unselected catalog entries are reported as skipped."""
    start = time.perf_counter()
    F = config.validate()
    ws = Workspace(F, config.l)
    selected = [c for c in CATALOG if c in config.checks]
    jobs = min(config.jobs, max_jobs())
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            done = dict(zip(selected, pool.map(lambda c: run_check(ws, c), selected)))
    else:
        done = {c: run_check(ws, c) for c in selected}
    records = [done.get(c) or CheckRecord(c, "skipped", "not selected") for c in CATALOG]
    group_level = any(c not in WEYL_ONLY for c in selected)
    report = Report(config, _orders(ws) if group_level else {"q": F.q, "weyl_group": len(ws.weyl.elements)},
                    _inventory(ws) if group_level else [], _gamma_matrix(ws) if group_level else {},
                    records)
    report.extras["workspace"] = ws
    report.seconds = time.perf_counter() - start
    return report
