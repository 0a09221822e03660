"""Standard subgroups, parabolic data and the generic unipotent characters."""

from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

from .cyclotomic import CycNum, cyc_make
from .errors import InternalError, InvalidParameter
from .groups import GroupContext, circle_points, so_even_root_elem, so_even_torus
from .matrices import MatSpace

PSI_VARIANTS = ("so", "c", "gamma", "gl", "gl-inverse", "so-odd")


def star(space, a) -> np.ndarray:
    """a* = J a^t^-1 J for square matrices a (batched)."""
    n = a.shape[-1]
    J = np.fliplr(np.eye(n, dtype=np.int64))
    return space.matmul(space.matmul(J, space.transpose(space.inv(a))), J)


def is_subgroup(G: GroupContext, idx) -> bool:
    idx = np.asarray(idx)
    if len(idx) == 0 or G.identity not in idx:
        return False
    members = np.zeros(G.order, dtype=bool)
    members[idx] = True
    for chunk in np.array_split(idx, max(1, len(idx) // 256)):
        prods = G.space.matmul(G.mats[chunk][:, None], G.mats[idx][None])
        if not members[G.index(prods.reshape(-1, G.d, G.d))].all():
            return False
    return True


class SubgroupAtlas:
    """Named subgroups of an enumerated group, as sorted index arrays."""

    def __init__(self, G: GroupContext):
        self.G = G
        self.F = G.field
        self.space = G.space

    def __repr__(self):
        return f"SubgroupAtlas({self.G.name})"

    def _filter(self, pred) -> np.ndarray:
        return np.nonzero(pred(self.G.mats))[0]

    # -- shared subgroups ---------------------------------------------------------

    @cached_property
    def U(self) -> np.ndarray:
        """Upper unitriangular members."""
        d = self.G.d
        low = np.tril(np.ones((d, d), dtype=bool), -1)

        def pred(m):
            return (m[:, low] == 0).all(axis=1) & (np.diagonal(m, axis1=1, axis2=2) == 1).all(axis=1)

        return self._filter(pred)

    @cached_property
    def Z(self) -> np.ndarray:
        return self.G.center

    @cached_property
    def T(self) -> np.ndarray:
        return np.array(sorted(self.torus_coords), dtype=np.int64)

    @cached_property
    def torus_coords(self) -> dict[int, tuple]:
        """index -> coordinates: (t_1..t_{l-1}, a, b) for SO_even, diagonal entries otherwise."""
        G, F = self.G, self.F
        units = range(1, F.q)
        out = {}
        if G.kind == "so-even":
            l = G.size
            for ts in itertools.product(units, repeat=l - 1):
                for a, b in circle_points(F):
                    out[int(G.index(so_even_torus(F, l, ts, a, b)))] = (*ts, a, b)
        elif G.kind == "so-odd":
            n, N = G.size, G.d
            for ts in itertools.product(units, repeat=n):
                m = G.space.identity()
                for i, t in enumerate(ts):
                    m[i, i], m[N - 1 - i, N - 1 - i] = t, F.inv[t]
                out[int(G.index(m))] = ts
        else:
            for ts in itertools.product(units, repeat=G.size):
                out[int(G.index(np.diag(ts)))] = ts
        return out

    @cached_property
    def S(self) -> np.ndarray:
        """Split part of the torus (a = 1, b = 0)."""
        if self.G.kind != "so-even":
            return self.T
        return np.array(sorted(i for i, c in self.torus_coords.items() if c[-2:] == (1, 0)))

    @cached_property
    def B(self) -> np.ndarray:
        G = self.G
        prods = G.space.matmul(G.mats[self.T][:, None], G.mats[self.U][None])
        return np.unique(G.index(prods.reshape(-1, G.d, G.d)))

    # -- block parabolics -----------------------------------------------------------

    def block_parabolic(self, blocks) -> tuple[np.ndarray, np.ndarray]:
        """(P, N) for the block upper-triangular parabolic with the given block sizes."""
        bounds = np.cumsum([0, *blocks])
        d = self.G.d
        if bounds[-1] != d:
            raise InvalidParameter(f"blocks {blocks} do not sum to {d}")
        below = np.zeros((d, d), dtype=bool)
        diag_ = np.zeros((d, d), dtype=bool)
        for k in range(len(blocks)):
            r = slice(bounds[k], bounds[k + 1])
            below[bounds[k + 1]:, r] = True
            diag_[r, r] = True
        eye = np.eye(d, dtype=np.int64)
        mats = self.G.mats
        in_p = (mats[:, below] == 0).all(axis=1)
        in_n = in_p & (mats[:, diag_] == eye[diag_]).all(axis=1)
        return np.nonzero(in_p)[0], np.nonzero(in_n)[0]

    def maximal_parabolic_blocks(self) -> list[tuple[int, ...]]:
        """Block shapes of the standard maximal parabolics."""
        G = self.G
        if G.kind == "gl":
            return [(k, G.size - k) for k in range(1, G.size)]
        if G.kind == "so-odd":
            return [(k, G.d - 2 * k, k) for k in range(1, G.size + 1)]
        return [(k, G.d - 2 * k, k) for k in range(1, G.size)]

    def standard_parabolic_blocks(self) -> list[tuple[int, ...]]:
        """Block shapes of all standard parabolics, the whole group first."""
        G = self.G
        out = []
        if G.kind == "gl":
            for comp in _compositions(G.size):
                out.append(tuple(comp))
            return sorted(out, key=len)
        rank = G.size if G.kind == "so-odd" else G.size - 1
        for m in range(rank + 1):
            for comp in _compositions(m):
                mid = G.d - 2 * m
                out.append((*comp, mid, *reversed(comp)) if mid else (*comp, *reversed(comp)))
        return sorted(out, key=len)

    @cached_property
    def radicals(self) -> list[np.ndarray]:
        """Unipotent radicals of the standard maximal parabolics."""
        return [self.block_parabolic(b)[1] for b in self.maximal_parabolic_blocks()]

    # -- SO_odd Siegel data -------------------------------------------------------

    def _require(self, kind):
        if self.G.kind != kind:
            raise InvalidParameter(f"{self.G.name} is not of kind {kind}")

    @cached_property
    def Q(self) -> np.ndarray:
        """Siegel parabolic Q_n of SO_{2n+1}."""
        self._require("so-odd")
        n = self.G.size
        return self.block_parabolic((n, 1, n))[0]

    @cached_property
    def V(self) -> np.ndarray:
        self._require("so-odd")
        n = self.G.size
        return self.block_parabolic((n, 1, n))[1]

    def levi_embed(self, a) -> np.ndarray:
        """l_n(a) = diag(a, 1, a*) as matrices (batched)."""
        self._require("so-odd")
        a = np.asarray(a, dtype=np.int64)
        n = self.G.size
        out = np.broadcast_to(self.space.identity(), a.shape[:-2] + (self.G.d, self.G.d)).copy()
        out[..., :n, :n] = a
        out[..., n + 1:, n + 1:] = star(MatSpace(self.F, n), a)
        return out

    @cached_property
    def w_siegel(self) -> int:
        """w_n = [[0,0,I_n],[0,(-1)^n,0],[I_n,0,0]]."""
        self._require("so-odd")
        n, N = self.G.size, self.G.d
        m = np.zeros((N, N), dtype=np.int64)
        m[:n, n + 1:] = np.eye(n, dtype=np.int64)
        m[n + 1:, :n] = np.eye(n, dtype=np.int64)
        m[n, n] = 1 if n % 2 == 0 else self.F.neg[1]
        return int(self.G.index(m))

    # -- SO_even parabolic data ---------------------------------------------------

    def t_embed(self, n: int, a) -> np.ndarray:
        """t_n(a) = diag(a, I_{2l-2n}, a*)."""
        self._require("so-even")
        a = np.asarray(a, dtype=np.int64)
        d = self.G.d
        out = np.broadcast_to(self.space.identity(), a.shape[:-2] + (d, d)).copy()
        out[..., :n, :n] = a
        out[..., d - n:, d - n:] = star(MatSpace(self.F, n), a)
        return out

    def q_embed(self, n: int, a) -> np.ndarray:
        """q_n(a) = diag(I_{l-n-1}, a, I_2, a*, I_{l-n-1})."""
        self._require("so-even")
        a = np.asarray(a, dtype=np.int64)
        l, d = self.G.size, self.G.d
        m = l - n - 1
        out = np.broadcast_to(self.space.identity(), a.shape[:-2] + (d, d)).copy()
        out[..., m:m + n, m:m + n] = a
        out[..., d - m - n:d - m, d - m - n:d - m] = star(MatSpace(self.F, n), a)
        return out

    def w_ln(self, n: int) -> int:
        """The permutation w^{l,n} moving the first l-n-1 coordinates past the next n."""
        self._require("so-even")
        l, d = self.G.size, self.G.d
        m = l - n - 1
        w = np.zeros((d, d), dtype=np.int64)
        w[:n, m:m + n] = np.eye(n, dtype=np.int64)
        w[n:n + m, :m] = np.eye(m, dtype=np.int64)
        w[n + m:n + m + 2, n + m:n + m + 2] = np.eye(2, dtype=np.int64)
        w[d - n - m:d - n, d - m:] = np.eye(m, dtype=np.int64)
        w[d - n:, d - n - m:d - m] = np.eye(n, dtype=np.int64)
        return int(self.G.index(w))

    def N_upper(self, n: int) -> np.ndarray:
        """N^{l-n} = U_{GL_{l-n-1}} N_{l-n-1}."""
        self._require("so-even")
        l = self.G.size
        m = l - n - 1
        if m == 0:
            return np.array([self.G.identity])
        d = self.G.d
        mats = self.G.mats[self.U]
        mid = slice(m, d - m)
        ok = (mats[:, mid, mid] == np.eye(d - 2 * m, dtype=np.int64)).all(axis=(1, 2))
        return self.U[ok]

    def R_set(self, n: int) -> np.ndarray:
        """R^{l,n}: lower unipotent x-block in rows n..l-2, columns 0..n-1, with its dual block."""
        self._require("so-even")
        l, d = self.G.size, self.G.d
        m = l - n - 1
        if m == 0 or n == 0:
            return np.array([self.G.identity])
        mats = self.G.mats
        allowed = np.eye(d, dtype=bool)
        allowed[n:n + m, :n] = True
        allowed[d - n:, d - n - m:d - n] = True
        ok = (mats[:, ~allowed] == 0).all(axis=1) & (np.diagonal(mats, axis1=1, axis2=2) == 1).all(axis=1)
        return np.nonzero(ok)[0]

    def root_elem(self, i: int, x) -> int:
        self._require("so-even")
        return int(self.G.index(so_even_root_elem(self.F, self.G.size, i, self.F.code_of(x))))

    # -- generic characters -----------------------------------------------------

    def psi_exponent(self, idx, variant: str = "so", n: int | None = None) -> np.ndarray:
        """Tr of the argument of psi, so that the character value is zeta_p^result."""
        G, F = self.G, self.F
        if variant not in PSI_VARIANTS:
            raise InvalidParameter(f"unknown character variant {variant!r}")
        m = G.mats[np.asarray(idx)]
        half = F.inv[2 % F.p]
        zero = np.zeros(m.shape[:-2], dtype=np.int64)
        if variant in ("so", "c"):
            self._require("so-even")
            l = G.size
            arg = zero
            for i in range(l - 2):
                arg = F.vadd(arg, m[..., i, i + 1])
            term = F.vmul(half, m[..., l - 2, l])
            arg = F.vadd(arg, term if variant == "so" else F.vneg(term))
        elif variant == "gamma":
            self._require("so-even")
            if n is None:
                raise InvalidParameter("psi_gamma needs n")
            k = G.size - n - 1
            arg = zero
            for i in range(k):
                arg = F.vadd(arg, m[..., i, i + 1])
            if k >= 1:
                arg = F.vadd(arg, F.vmul(half, m[..., k - 1, G.size]))
        elif variant in ("gl", "gl-inverse"):
            self._require("gl")
            arg = zero
            for i in range(G.size - 1):
                arg = F.vadd(arg, m[..., i, i + 1])
            if variant == "gl-inverse":
                arg = F.vneg(arg)
        else:
            self._require("so-odd")
            arg = zero
            for i in range(G.size):
                arg = F.vadd(arg, m[..., i, i + 1])
        return F.trace_table[arg]

    def unipotent_char(self, u: int, variant: str = "so", n: int | None = None) -> CycNum:
        domain = self.N_upper(n) if variant == "gamma" else self.U
        if u not in domain:
            raise InvalidParameter("element outside the character's domain")
        return cyc_make(self.F.p, int(self.psi_exponent(u, variant, n)))

    def check_multiplicative(self, variant: str = "so", n: int | None = None) -> bool:
        G = self.G
        dom = self.N_upper(n) if variant == "gamma" else self.U
        e = self.psi_exponent(dom, variant, n)
        prod = G.space.matmul(G.mats[dom][:, None], G.mats[dom][None])
        e12 = self.psi_exponent(G.index(prod.reshape(-1, G.d, G.d)), variant, n)
        return bool(np.array_equal(e12.reshape(len(dom), len(dom)), (e[:, None] + e[None]) % self.F.p))

    def manifest(self) -> dict:
        out = {"group": self.G.name, "order": self.G.order, "U": len(self.U), "T": len(self.T),
               "B": len(self.B), "Z": len(self.Z)}
        if self.G.kind == "so-even":
            out["S"] = len(self.S)
            for n in range(self.G.size):
                out[f"N^{self.G.size - n}"] = len(self.N_upper(n))
                out[f"R^{self.G.size},{n}"] = len(self.R_set(n))
        if self.G.kind == "so-odd":
            out["Q"] = len(self.Q)
            out["V"] = len(self.V)
        return out

    def verify(self) -> None:
        """Closure of every named subgroup, and B = TU = UT."""
        G = self.G
        named = {"U": self.U, "T": self.T, "B": self.B, "Z": self.Z}
        if G.kind == "so-odd":
            named |= {"Q": self.Q, "V": self.V}
        for name, idx in named.items():
            if not is_subgroup(G, idx):
                raise InternalError(f"{name} is not a subgroup of {G.name}")
        ut = G.space.matmul(G.mats[self.U][:, None], G.mats[self.T][None])
        if not np.array_equal(np.unique(G.index(ut.reshape(-1, G.d, G.d))), self.B):
            raise InternalError("TU != UT")


def _compositions(m: int):
    if m == 0:
        yield ()
        return
    for first in range(1, m + 1):
        for rest in _compositions(m - first):
            yield (first, *rest)


def standard_subgroups(G: GroupContext) -> SubgroupAtlas:
    return SubgroupAtlas(G)
