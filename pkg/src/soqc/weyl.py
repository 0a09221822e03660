"""Relative Weyl group (type B_{l-1}) of the quasi-split SO_{2l}, Bessel support, Bruhat cells.

A Weyl element is a signed permutation (perm, signs) of the l-1 split coordinates, meaning
that the j-th coordinate of w^-1 t w is t_{perm[j]}^{signs[j]}.  Roots and characters of the
split torus are integer vectors of length l-1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InternalError, InvalidParameter
from .groups import GroupContext


@dataclass(frozen=True, order=True)
class SignedPerm:
    perm: tuple[int, ...]
    signs: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, rank: int) -> SignedPerm:
        return cls(tuple(range(rank)), (1,) * rank)

    def __mul__(self, other: SignedPerm) -> SignedPerm:
        perm = tuple(self.perm[other.perm[j]] for j in range(self.rank))
        signs = tuple(self.signs[other.perm[j]] * other.signs[j] for j in range(self.rank))
        return SignedPerm(perm, signs)

    def inverse(self) -> SignedPerm:
        perm = [0] * self.rank
        signs = [0] * self.rank
        for j, (p, s) in enumerate(zip(self.perm, self.signs)):
            perm[p] = j
            signs[p] = s
        return SignedPerm(tuple(perm), tuple(signs))

    def act(self, vec) -> tuple[int, ...]:
        """(w chi)(t) = chi(w^-1 t w) on exponent vectors."""
        out = [0] * self.rank
        for j, c in enumerate(vec):
            out[self.perm[j]] += self.signs[j] * c
        return tuple(out)

    @property
    def flips(self) -> int:
        return sum(s < 0 for s in self.signs)

    def length(self) -> int:
        return sum(not is_positive(self.act(r)) for r in positive_roots(self.rank))

    def matrix(self, l: int) -> np.ndarray:
        """Representative in SO_{2l}: signed permutation of the outer coordinates, middle block
        diag(-1, 1)^flips so that the determinant is 1."""
        if self.rank != l - 1:
            raise InvalidParameter(f"rank {self.rank} does not match l={l}")
        d = 2 * l
        m = np.zeros((d, d), dtype=np.int64)
        for j, (p, s) in enumerate(zip(self.perm, self.signs)):
            dj, dp = d - 1 - j, d - 1 - p
            if s > 0:
                m[p, j] = m[dp, dj] = 1
            else:
                m[dp, j] = m[p, dj] = 1
        m[l, l] = 1
        m[l - 1, l - 1] = 1 if self.flips % 2 == 0 else -1
        return m

    def __repr__(self):
        body = " ".join(f"{'-' if s < 0 else ''}{p + 1}" for p, s in zip(self.perm, self.signs))
        return f"W[{body}]"


def simple_roots(rank: int) -> list[tuple[int, ...]]:
    """alpha_i = e_i - e_{i+1} for i < rank, alpha_rank = e_rank."""
    out = []
    for i in range(rank):
        v = [0] * rank
        v[i] = 1
        if i + 1 < rank:
            v[i + 1] = -1
        out.append(tuple(v))
    return out


def positive_roots(rank: int) -> list[tuple[int, ...]]:
    out = []
    for i in range(rank):
        e = [0] * rank
        e[i] = 1
        out.append(tuple(e))
        for j in range(i + 1, rank):
            for s in (1, -1):
                v = [0] * rank
                v[i], v[j] = 1, s
                out.append(tuple(v))
    return out


def is_positive(root) -> bool:
    for c in root:
        if c:
            return c > 0
    raise InvalidParameter("zero vector is not a root")


def all_weyl(rank: int) -> list[SignedPerm]:
    return [SignedPerm(p, s) for p in itertools.permutations(range(rank))
            for s in itertools.product((1, -1), repeat=rank)]


def w_long(rank: int) -> SignedPerm:
    return SignedPerm(tuple(range(rank)), (-1,) * rank)


def w_levi_long(rank: int, n: int) -> SignedPerm:
    """Long element of the Levi GL_n x SO_{2(l-n)}."""
    perm = tuple(n - 1 - j for j in range(n)) + tuple(range(n, rank))
    return SignedPerm(perm, (1,) * n + (-1,) * (rank - n))


def w_tilde(rank: int, n: int) -> SignedPerm:
    """w_long^-1 w_{M_n}: reverse and invert the first n coordinates."""
    return w_long(rank).inverse() * w_levi_long(rank, n)


def gl_embed(rank: int, sigma) -> SignedPerm:
    """t_n(w') for a permutation sigma of the first n coordinates (e_j -> e_sigma(j))."""
    n = len(sigma)
    return SignedPerm(tuple(sigma) + tuple(range(n, rank)), (1,) * rank)


class WeylAtlas:
    """Combinatorics of the relative Weyl group for a given l (no group needed)."""

    def __init__(self, l: int):
        if l < 2:
            raise InvalidParameter(f"l must be >= 2, got {l}")
        self.l = l
        self.rank = l - 1
        self.delta = simple_roots(self.rank)
        self.elements = sorted(all_weyl(self.rank), key=lambda w: (w.length(), w))

    def __repr__(self):
        return f"WeylAtlas(l={self.l}, |W|={len(self.elements)})"

    @property
    def identity(self) -> SignedPerm:
        return SignedPerm.identity(self.rank)

    @property
    def w_long(self) -> SignedPerm:
        return w_long(self.rank)

    def w_levi_long(self, n: int) -> SignedPerm:
        return w_levi_long(self.rank, n)

    def w_tilde(self, n: int) -> SignedPerm:
        return w_tilde(self.rank, n)

    def theta(self, w: SignedPerm) -> frozenset[int]:
        """Indices i (1-based) of simple roots alpha_i with w alpha_i positive."""
        return frozenset(i + 1 for i, a in enumerate(self.delta) if is_positive(w.act(a)))

    def supports_bessel(self, w: SignedPerm) -> bool:
        return all(not is_positive(r) or r in self.delta for r in map(w.act, self.delta))

    @cached_property
    def bessel_support(self) -> list[SignedPerm]:
        return [w for w in self.elements if self.supports_bessel(w)]

    @cached_property
    def bessel_partition(self) -> dict[int, list[SignedPerm]]:
        """n -> B_n; B_0 is the identity, B_n = {t_n(w') w~_n in the support}."""
        support = set(self.bessel_support)
        out = {0: [self.identity]}
        for n in range(1, self.l):
            wt = self.w_tilde(n)
            cands = {gl_embed(self.rank, s) * wt for s in itertools.permutations(range(n))}
            out[n] = sorted(cands & support)
        return out

    def theta_family(self, n: int) -> set[frozenset[int]]:
        """Subsets with {alpha_{n+1}..alpha_{l-1}} inside and alpha_n outside; all of Delta for n=0."""
        full = frozenset(range(1, self.l))
        if n == 0:
            return {full}
        must = frozenset(range(n + 1, self.l))
        free = sorted(full - must - {n})
        return {must | frozenset(c) for k in range(len(free) + 1) for c in itertools.combinations(free, k)}

    def check_theta_bijection(self) -> bool:
        thetas = [self.theta(w) for w in self.bessel_support]
        return len(set(thetas)) == len(thetas) == 2**self.rank

    def check_theta_partition(self) -> bool:
        """theta(B_n) equals the family of subsets for every n, and B_n partition the support."""
        part = self.bessel_partition
        for n, ws in part.items():
            if {self.theta(w) for w in ws} != self.theta_family(n):
                return False
        union = [w for ws in part.values() for w in ws]
        return len(union) == len(set(union)) and set(union) == set(self.bessel_support)

    def check_gl_not_in_support(self) -> bool:
        """t_{l-1}(w) lies outside the support for every permutation w != 1."""
        support = set(self.bessel_support)
        ident = tuple(range(self.rank))
        return all(gl_embed(self.rank, s) not in support
                   for s in itertools.permutations(range(self.rank)) if s != ident)

    def w_tilde_action(self, n: int) -> list[tuple[int, int]]:
        """(source coordinate, exponent) of w~_n^-1 t w~_n, coordinate by coordinate."""
        w = self.w_tilde(n)
        return list(zip(w.perm, w.signs))


def weyl_atlas(l: int) -> WeylAtlas:
    return WeylAtlas(l)


class BruhatData:
    """Bruhat cells U T w U of an enumerated SO_{2l} with fixed representatives."""

    def __init__(self, G: GroupContext, U: np.ndarray, T: np.ndarray):
        if G.kind != "so-even":
            raise InvalidParameter("Bruhat data is built for the quasi-split even orthogonal group")
        self.G = G
        self.U = U
        self.T = T
        self.weyl = WeylAtlas(G.size)
        self.reps = [int(G.index(w.matrix(G.size) % G.field.p)) for w in self.weyl.elements]
        self._build()

    def _build(self):
        G = self.G
        cell = np.full(G.order, -1, dtype=np.int64)
        factor = np.full((G.order, 3), -1, dtype=np.int64)
        U, T = self.U, self.T
        mU, mT = G.mats[U], G.mats[T]
        for k, w in enumerate(self.reps):
            tw = G.space.matmul(mT, G.mats[w])
            left = G.space.matmul(mU[:, None], tw[None])
            prods = G.space.matmul(left[:, :, None], mU[None, None])
            idx = G.index(prods.reshape(-1, G.d, G.d))
            u1, t, u2 = np.unravel_index(np.arange(len(idx)), (len(U), len(T), len(U)))
            if np.any((cell[idx] >= 0) & (cell[idx] != k)):
                raise InternalError("Bruhat cells overlap")
            fresh = cell[idx] < 0
            first = np.unique(idx[fresh], return_index=True)[1]
            sel = np.nonzero(fresh)[0][first]
            cell[idx[sel]] = k
            factor[idx[sel]] = np.stack([U[u1[sel]], T[t[sel]], U[u2[sel]]], axis=1)
        if np.any(cell < 0):
            raise InternalError("Bruhat cells do not cover the group")
        self.cell = cell
        self.factor = factor

    def cell_sizes(self) -> dict[SignedPerm, int]:
        counts = np.bincount(self.cell, minlength=len(self.reps))
        return {w: int(c) for w, c in zip(self.weyl.elements, counts)}

    def decompose(self, g: int) -> tuple[int, int, SignedPerm, int]:
        """(u1, t, w, u2) with g = u1 t rep(w) u2."""
        u1, t, u2 = self.factor[g]
        return int(u1), int(t), self.weyl.elements[self.cell[g]], int(u2)

    def rep(self, w: SignedPerm) -> int:
        return self.reps[self.weyl.elements.index(w)]

    def support_mask(self) -> np.ndarray:
        """Elements whose cell lies in the Bessel support."""
        ok = np.array([self.weyl.supports_bessel(w) for w in self.weyl.elements])
        return ok[self.cell]


def bruhat_decompose(data: BruhatData, g: int):
    return data.decompose(g)
