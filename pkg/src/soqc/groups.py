"""Enumerated matrix groups GL_n, SO_{2n+1} and quasi-split SO_{2l}(J_{2l,rho}) over F_q."""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import InternalError, InvalidParameter, ResourceLimit
from .field import FieldTable
from .matrices import MatSpace

KINDS = ("gl", "so-odd", "so-even")
DEFAULT_MAX_ORDER = 2 * 10**5
_SEARCH_VECTORS = 4096
SUBGROUP_GENERATOR_BOUND = 5000


def max_group_order() -> int:
    return int(os.environ.get("SOQC_MAX_GROUP_ORDER", DEFAULT_MAX_ORDER))


def dimension(kind: str, size: int) -> int:
    return {"gl": size, "so-odd": 2 * size + 1, "so-even": 2 * size}[kind]


def projected_order(kind: str, q: int, size: int) -> int:
    """Order formula, used to refuse oversized enumerations up front."""
    if kind == "gl":
        out = 1
        for i in range(size):
            out *= q**size - q**i
        return out
    if kind == "so-odd":
        out = q ** (size * size)
        for i in range(1, size + 1):
            out *= q ** (2 * i) - 1
        return out
    if kind == "so-even":
        l = size
        out = q ** (l * (l - 1)) * (q**l + 1)
        for i in range(1, l):
            out *= q ** (2 * i) - 1
        return out
    raise InvalidParameter(f"unknown group kind {kind!r}")


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


# -- forms --------------------------------------------------------------------

def antidiag(n: int) -> np.ndarray:
    return np.fliplr(np.eye(n, dtype=np.int64))


def twisted_gram(F: FieldTable, l: int) -> np.ndarray:
    """J_{2l,rho} = diag(I_{l-1}, [[0,1],[-rho,0]], I_{l-1}) . J_{2l}."""
    if l < 1:
        raise InvalidParameter(f"l must be >= 1, got {l}")
    space = MatSpace(F, 2 * l)
    left = space.identity()
    left[l - 1:l + 1, l - 1:l + 1] = [[0, 1], [F.neg[F.rho_code], 0]]
    return space.matmul(left, antidiag(2 * l))


def gram_matrices(F: FieldTable, l: int) -> tuple[np.ndarray, np.ndarray]:
    """(J_{2l}, J_{2l,rho}); rho is the field's nonsquare."""
    if l < 2:
        raise InvalidParameter(f"l must be >= 2, got {l}")
    if F.is_square(F.rho_code):
        raise InvalidParameter("rho is a square: the group would be split")
    return antidiag(2 * l), twisted_gram(F, l)


def gram_for(kind: str, F: FieldTable, size: int) -> np.ndarray | None:
    if kind == "gl":
        return None
    if kind == "so-odd":
        return antidiag(2 * size + 1)
    return twisted_gram(F, size)


def circle_points(F: FieldTable) -> list[tuple[int, int]]:
    """Codes (a, b) with a^2 - b^2 rho = 1, in code order."""
    x = np.arange(F.q)
    sq = F.vmul(x, x)
    lhs = F.vsub(sq[:, None], F.vmul(sq[None, :], F.rho_code))
    a, b = np.nonzero(lhs == 1)
    return list(zip(a.tolist(), b.tolist()))


def torus_block(F: FieldTable, a: int, b: int) -> np.ndarray:
    return np.array([[a, int(F.vmul(b, F.rho_code))], [b, a]], dtype=np.int64)


# -- generators -----------------------------------------------------------------

def _prime_basis(F: FieldTable) -> list[int]:
    return [F.p**k for k in range(F.r)]


def _place(space: MatSpace, entries: dict) -> np.ndarray:
    g = space.identity()
    for (i, j), v in entries.items():
        g[i, j] = v
    return g


def _perm_matrix(d: int, images: dict, signs: dict | None = None) -> np.ndarray:
    """Matrix sending e_j to sign_j e_{images[j]}; unlisted j fixed."""
    g = np.zeros((d, d), dtype=np.int64)
    for j in range(d):
        g[images.get(j, j), j] = (signs or {}).get(j, 1)
    return g


def _gl_generators(F, n):
    space = MatSpace(F, n)
    gens = [space.diag([1] * n)]
    gens[0][0, 0] = F.primitive_element
    for i in range(n - 1):
        for x in _prime_basis(F):
            gens.append(_place(space, {(i, i + 1): x}))
            gens.append(_place(space, {(i + 1, i): x}))
    return gens


def _so_odd_generators(F, n):
    N = 2 * n + 1
    space = MatSpace(F, N)
    gens = []
    g0 = F.primitive_element
    for i in range(n):
        t = space.identity()
        t[i, i], t[N - 1 - i, N - 1 - i] = g0, F.inv[g0]
        gens.append(t)
    for i in range(n):
        for x in _prime_basis(F):
            gens.append(so_odd_root_elem(F, n, i, x))
            gens.append(space.transpose(so_odd_root_elem(F, n, i, x)))
    for i in range(n - 1):
        gens.append(_perm_matrix(N, {i: i + 1, i + 1: i, N - 1 - i: N - 2 - i, N - 2 - i: N - 1 - i}))
    d = {n - 1: n + 1, n + 1: n - 1}
    gens.append(_perm_matrix(N, d, {n: F.neg[1]}))
    return gens


def so_odd_root_elem(F: FieldTable, n: int, i: int, x: int) -> np.ndarray:
    """exp(x X) for the i-th simple root (0-based) of SO_{2n+1}."""
    N = 2 * n + 1
    space = MatSpace(F, N)
    X = np.zeros((N, N), dtype=np.int64)
    if i < n - 1:
        X[i, i + 1], X[N - 2 - i, N - 1 - i] = 1, F.neg[1]
    else:
        X[n - 1, n], X[n, n + 1] = 1, F.neg[1]
    xX = space.scalar_mul(x, X)
    half = F.inv[2 % F.p]
    sq = space.scalar_mul(half, space.matmul(xX, xX))
    return space.add(space.add(space.identity(), xX), sq)


def so_even_root_elem(F: FieldTable, l: int, i: int, x: int) -> np.ndarray:
    """x_{alpha_i}(x), i = 1..l-1 as in the usual 1-based labelling."""
    if not 1 <= i <= l - 1:
        raise InvalidParameter(f"simple root index must be in 1..{l - 1}, got {i}")
    space = MatSpace(F, 2 * l)
    if i <= l - 2:
        return _place(space, {(i - 1, i): x, (2 * l - i - 1, 2 * l - i): F.neg[x]})
    rinv = F.inv[F.rho_code]
    half = F.inv[2 % F.p]
    o = l - 2
    return _place(space, {
        (o, o + 2): x,
        (o, o + 3): int(F.vmul(F.vmul(rinv, half), F.vmul(x, x))),
        (o + 2, o + 3): int(F.vmul(rinv, x)),
    })


def so_even_torus(F: FieldTable, l: int, ts, a: int, b: int) -> np.ndarray:
    """diag(t_1..t_{l-1}, [[a, b rho],[b, a]], t_{l-1}^-1..t_1^-1) from codes."""
    g = np.zeros((2 * l, 2 * l), dtype=np.int64)
    for i, t in enumerate(ts):
        g[i, i], g[2 * l - 1 - i, 2 * l - 1 - i] = t, F.inv[t]
    g[l - 1:l + 1, l - 1:l + 1] = torus_block(F, a, b)
    return g


def circle_generator(F: FieldTable) -> tuple[int, int]:
    space = MatSpace(F, 2)
    for a, b in circle_points(F):
        m, order = torus_block(F, a, b), 1
        x = m
        while not np.array_equal(x, space.identity()):
            x = space.matmul(x, m)
            order += 1
        if order == F.q + 1:
            return a, b
    raise InternalError("norm-one circle is not cyclic")


def _so_even_generators(F, l):
    d = 2 * l
    g0 = F.primitive_element
    gens = []
    for i in range(l - 1):
        ts = [1] * (l - 1)
        ts[i] = g0
        gens.append(so_even_torus(F, l, ts, 1, 0))
    gens.append(so_even_torus(F, l, [1] * (l - 1), *circle_generator(F)))
    for i in range(1, l):
        for x in _prime_basis(F):
            gens.append(so_even_root_elem(F, l, i, x))
    for i in range(l - 2):
        gens.append(_perm_matrix(d, {i: i + 1, i + 1: i, d - 1 - i: d - 2 - i, d - 2 - i: d - 1 - i}))
    gens.append(_perm_matrix(d, {l - 2: l + 1, l + 1: l - 2}, {l - 1: F.neg[1]}))
    return gens


def generators(kind: str, F: FieldTable, size: int) -> list[np.ndarray]:
    return {"gl": _gl_generators, "so-odd": _so_odd_generators,
            "so-even": _so_even_generators}[kind](F, size)


# -- enumeration ----------------------------------------------------------------

def closure(space: MatSpace, gens) -> np.ndarray:
    """All products of the generators, as a sorted code array."""
    gens = np.asarray(gens, dtype=np.int64)
    known = space.encode(space.identity())[None]
    frontier = space.identity()[None]
    while len(frontier):
        prods = space.matmul(frontier[:, None], gens[None]).reshape(-1, space.d, space.d)
        codes, first = np.unique(space.encode(prods), return_index=True)
        fresh = ~np.isin(codes, known, assume_unique=True)
        frontier = prods[first[fresh]]
        known = np.union1d(known, codes[fresh])
    return known


def predicate_search(space: MatSpace, gram: np.ndarray) -> np.ndarray:
    """Exhaustive column-by-column search for det-1 isometries of the form; sorted codes.

    Column j must pair with column i to gram[i, j]; partial solutions are extended in bulk.
    """
    F, d = space.field, space.d
    nvec = F.q**d
    if nvec > _SEARCH_VECTORS:
        raise ResourceLimit(f"predicate search over {nvec} vectors exceeds bound", nvec)
    vecs = np.array(np.unravel_index(np.arange(nvec), (F.q,) * d)).T
    # pair[u, v] = u^t gram v, accumulated entrywise
    gv = np.zeros((nvec, d), dtype=np.int64)
    for k in range(d):
        for m in range(d):
            gv[:, k] = F.vadd(gv[:, k], F.vmul(gram[k, m], vecs[:, m]))
    pair = np.zeros((nvec, nvec), dtype=np.int64)
    for k in range(d):
        pair = F.vadd(pair, F.vmul(vecs[:, None, k], gv[None, :, k]))
    states = np.zeros((1, 0), dtype=np.int64)
    for j in range(d):
        ok = np.broadcast_to(np.diagonal(pair) == gram[j, j], (len(states), nvec))
        for i in range(j):
            ok = ok & (pair[states[:, i]] == gram[i, j])
        s, v = np.nonzero(ok)
        states = np.concatenate([states[s], v[:, None]], axis=1)
    mats = np.swapaxes(vecs[states], 1, 2)
    mats = mats[space.det(mats) == 1]
    return np.sort(space.encode(mats))


def brute_force_members(space: MatSpace, gram: np.ndarray | None) -> np.ndarray:
    """Literal filter of every d x d matrix; only for tiny ambient spaces."""
    F, d = space.field, space.d
    total = F.q ** (d * d)
    if total > 10**6:
        raise ResourceLimit(f"{total} ambient matrices exceed the brute-force bound", total)
    mats = space.decode(np.arange(total, dtype=np.int64))
    det = space.det(mats)
    if gram is None:
        return space.encode(mats[det != 0])
    form = space.matmul(space.matmul(space.transpose(mats), gram), mats)
    keep = (det == 1) & (form == gram).all(axis=(1, 2))
    return space.encode(mats[keep])


# -- group context ----------------------------------------------------------------

@dataclass
class ClassData:
    """Conjugacy classes: representatives are least element indices; classes sorted by them."""

    reps: np.ndarray
    class_of: np.ndarray
    sizes: np.ndarray
    _group: GroupContext = dc_field(repr=False)
    _powers: dict = dc_field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.reps)

    def members(self, k: int) -> np.ndarray:
        return np.nonzero(self.class_of == k)[0]

    def power_map(self, k: int) -> np.ndarray:
        """Class of rep^k for each class."""
        if k not in self._powers:
            G = self._group
            self._powers[k] = self.class_of[G.power(self.reps, k)]
        return self._powers[k]

    @property
    def centralizer_orders(self) -> np.ndarray:
        return len(self.class_of) // self.sizes


class GroupContext:
    """An enumerated matrix group: elements are sorted by code and addressed by index."""

    def __init__(self, kind: str, F: FieldTable, size: int, codes: np.ndarray, gens, label: str | None = None):
        self.kind = kind
        self.label = label
        self.field = F
        self.size = size
        self.d = dimension(kind, size)
        self.space = MatSpace(F, self.d)
        self.gram = gram_for(kind, F, size)
        self.codes = codes
        self.mats = self.space.decode(codes)
        self.order = len(codes)
        self.generators = np.asarray(gens, dtype=np.int64)
        self.identity = int(self.index(self.space.identity()))
        if self.gram is not None:
            self._gram_inv = self.space.inv(self.gram)

    def __repr__(self):
        return f"GroupContext({self.name}, order={self.order})"

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        q = self.field.q
        return {"gl": f"GL_{self.size}(F_{q})", "so-odd": f"SO_{self.d}(F_{q})",
                "so-even": f"SO_{self.d}^-(F_{q})"}[self.kind]

    def __len__(self):
        return self.order

    # -- membership and lookup -------------------------------------------------

    def member(self, mats) -> np.ndarray:
        mats = np.asarray(mats, dtype=np.int64)
        det = self.space.det(mats)
        if self.gram is None:
            return det != 0
        form = self.space.matmul(self.space.matmul(self.space.transpose(mats), self.gram), mats)
        return (det == 1) & (form == self.gram).all(axis=(-1, -2))

    def index(self, mats, strict: bool = True) -> np.ndarray:
        """Element indices of matrices; -1 (or an error when strict) for non-members."""
        codes = self.space.encode(mats)
        pos = np.searchsorted(self.codes, codes)
        pos = np.minimum(pos, self.order - 1)
        hit = self.codes[pos] == codes
        if strict and not np.all(hit):
            raise InvalidParameter(f"matrix not in {self.name}")
        return np.where(hit, pos, -1)

    def contains(self, mats) -> np.ndarray:
        return self.index(mats, strict=False) >= 0

    # -- arithmetic on indices ----------------------------------------------------

    def mul(self, i, j) -> np.ndarray:
        return self.index(self.space.matmul(self.mats[i], self.mats[j]))

    def inv_mats(self, mats) -> np.ndarray:
        if self.gram is None:
            return self.space.inv(mats)
        return self.space.matmul(self._gram_inv, self.space.matmul(self.space.transpose(mats), self.gram))

    @cached_property
    def inverse(self) -> np.ndarray:
        """inverse[i] is the index of the inverse of element i."""
        return self.index(self.inv_mats(self.mats))

    def conj(self, x, g) -> np.ndarray:
        """Index of x g x^{-1}."""
        m = self.space.matmul(self.space.matmul(self.mats[x], self.mats[g]), self.mats[self.inverse[x]])
        return self.index(m)

    def power(self, i, k: int) -> np.ndarray:
        base = self.mats[i]
        out = np.broadcast_to(self.space.identity(), base.shape).copy()
        while k:
            if k & 1:
                out = self.space.matmul(out, base)
            base = self.space.matmul(base, base)
            k >>= 1
        return self.index(out)

    def left_translate(self, x) -> np.ndarray:
        """Permutation g -> index(x g) over all elements, for a single x (matrix or index)."""
        m = self.mats[x] if np.ndim(x) == 0 else np.asarray(x)
        return self.index(self.space.matmul(m, self.mats))

    def right_translate(self, x) -> np.ndarray:
        m = self.mats[x] if np.ndim(x) == 0 else np.asarray(x)
        return self.index(self.space.matmul(self.mats, m))

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=np.int64)
        cur = self.mats.copy()
        k = 1
        todo = np.arange(self.order)
        eye = self.space.identity()
        while len(todo):
            done = (cur[todo] == eye).all(axis=(1, 2))
            orders[todo[done]] = k
            todo = todo[~done]
            cur[todo] = self.space.matmul(cur[todo], self.mats[todo])
            k += 1
        return orders

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(np.unique(self.element_orders)))

    # -- classes -------------------------------------------------------------------

    @cached_property
    def classes(self) -> ClassData:
        edges = []
        for s in self.generators:
            sinv = self.inv_mats(s)
            edges.append(self.index(self.space.matmul(self.space.matmul(s, self.mats), sinv)))
        src = np.tile(np.arange(self.order), len(edges))
        graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, np.concatenate(edges))),
                           shape=(self.order, self.order))
        _, labels = connected_components(graph, directed=True, connection="weak")
        first = np.full(labels.max() + 1, self.order)
        np.minimum.at(first, labels, np.arange(self.order))
        order = np.argsort(first)
        rank = np.empty_like(order)
        rank[order] = np.arange(len(order))
        class_of = rank[labels]
        return ClassData(first[order], class_of, np.bincount(class_of), self)

    @cached_property
    def center(self) -> np.ndarray:
        ok = np.ones(self.order, dtype=bool)
        for s in self.generators:
            ok &= (self.space.matmul(self.mats, s) == self.space.matmul(s, self.mats)).all(axis=(1, 2))
        return np.nonzero(ok)[0]

    # -- named constants (quasi-split even orthogonal case) ---------------------------

    def _require_even(self):
        if self.kind != "so-even":
            raise InvalidParameter(f"{self.name} is not a quasi-split even orthogonal group")

    @cached_property
    def outer_c(self) -> np.ndarray:
        """c = diag(I_{l-1}, 1, -1, I_{l-1}); a matrix, not a group element."""
        self._require_even()
        c = self.space.identity()
        c[self.size, self.size] = self.field.neg[1]
        return c

    @cached_property
    def t_tilde(self) -> int:
        self._require_even()
        t = self.space.identity()
        l = self.size
        t[l - 1, l - 1] = t[l, l] = self.field.neg[1]
        return int(self.index(t))

    def outer_conj(self, g) -> np.ndarray:
        """Index of c g c for indices g."""
        c = self.outer_c
        return self.index(self.space.matmul(self.space.matmul(c, self.mats[g]), c))

    @cached_property
    def outer_perm(self) -> np.ndarray:
        return self.outer_conj(np.arange(self.order))

    def elem(self, i: int) -> GroupElem:
        return GroupElem(self, int(i))

    def dump(self) -> list[list[list[int]]]:
        return self.mats.tolist()


def subgroup_context(G: GroupContext, idx, label: str) -> GroupContext:
    """A subgroup of G (given by sorted element indices) as a group in its own right."""
    idx = np.asarray(idx)
    if len(idx) > SUBGROUP_GENERATOR_BOUND:
        raise ResourceLimit(f"subgroup of order {len(idx)} is too large to use all elements as generators")
    return GroupContext(G.kind, G.field, G.size, G.codes[idx], G.mats[idx], label)


class GroupElem:
    """A group element addressed by its index in a GroupContext."""

    __slots__ = ("group", "index")

    def __init__(self, group: GroupContext, index: int):
        self.group = group
        self.index = index

    @property
    def matrix(self) -> np.ndarray:
        return self.group.mats[self.index]

    def __mul__(self, other: GroupElem) -> GroupElem:
        return GroupElem(self.group, int(self.group.mul(self.index, other.index)))

    def inverse(self) -> GroupElem:
        return GroupElem(self.group, int(self.group.inverse[self.index]))

    def __eq__(self, other):
        return isinstance(other, GroupElem) and self.group is other.group and self.index == other.index

    def __hash__(self):
        return hash((id(self.group), self.index))

    def __repr__(self):
        return f"GroupElem({self.group.name}, #{self.index})"


@lru_cache(maxsize=None)
def build_group(kind: str, F: FieldTable, size: int) -> GroupContext:
    """Enumerate the group by closure and check the count against the order formula."""
    if kind not in KINDS:
        raise InvalidParameter(f"unknown group kind {kind!r}")
    if size < 1 or (kind == "so-even" and size < 2):
        raise InvalidParameter(f"invalid size {size} for {kind}")
    if kind == "so-even" and F.is_square(F.rho_code):
        raise InvalidParameter("rho is a square: the group would be split")
    expected = projected_order(kind, F.q, size)
    bound = max_group_order()
    if expected > bound:
        raise ResourceLimit(f"projected order {expected} exceeds bound {bound}", expected)
    space = MatSpace(F, dimension(kind, size))
    gens = generators(kind, F, size)
    codes = closure(space, gens)
    if len(codes) != expected:
        raise InternalError(f"closure gave {len(codes)} elements, expected {expected}")
    G = GroupContext(kind, F, size, codes, gens)
    if not np.all(G.member(G.mats)):
        raise InternalError("closure left the group")
    return G
