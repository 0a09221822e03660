"""Exact character tables by the class-algebra method.

Class-sum structure constants are reduced modulo a prime l = 1 (mod exponent); a generic
combination of the class matrices is diagonalised over F_l, giving the central characters,
and the values are lifted to Q(zeta_e) through eigenvalue multiplicities on power maps.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .cyclotomic import CycArray, CycField
from .errors import InternalError, ResourceLimit
from .field import is_prime
from .groups import GroupContext

_PRIME_SEARCH = 10**6


def lifting_prime(exponent: int, order: int) -> int:
    """Least prime l = 1 (mod exponent) with l > 2 sqrt(order)."""
    floor = 2 * int(order**0.5) + 1
    ell = exponent + 1
    while ell < _PRIME_SEARCH:
        if ell > floor and is_prime(ell):
            return ell
        ell += exponent
    raise ResourceLimit(f"no lifting prime below {_PRIME_SEARCH}")


def _primitive_root(ell: int) -> int:
    factors = [f for f in range(2, ell) if (ell - 1) % f == 0 and is_prime(f)]
    for g in range(2, ell):
        if all(pow(g, (ell - 1) // f, ell) != 1 for f in factors):
            return g
    raise InternalError("no primitive root")  # unreachable


def _nullspace_mod(A: np.ndarray, ell: int) -> np.ndarray:
    """Basis of the right null space of A over F_ell, as columns."""
    A = A.copy() % ell
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        nz = np.nonzero(A[r:, c])[0]
        if r >= rows or not len(nz):
            continue
        p = r + nz[0]
        A[[r, p]] = A[[p, r]]
        A[r] = A[r] * pow(int(A[r, c]), ell - 2, ell) % ell
        others = np.arange(rows) != r
        A[others] = (A[others] - A[others, c:c + 1] * A[r]) % ell
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-A[i, f]) % ell
    return basis


def _dets_mod(A: np.ndarray, ell: int) -> np.ndarray:
    """Determinants of a stack of square matrices over F_ell."""
    A = A.copy() % ell
    n = A.shape[-1]
    det = np.ones(len(A), dtype=np.int64)
    rows = np.arange(len(A))
    for c in range(n):
        col = A[:, c:, c]
        has = (col != 0).any(axis=1)
        piv = c + np.argmax(col != 0, axis=1)
        det = np.where(has, det, 0)
        det = np.where(piv != c, (-det) % ell, det)
        top = A[rows, c].copy()
        A[rows, c] = A[rows, piv]
        A[rows, piv] = top
        pv = np.where(has, A[:, c, c], 1)
        det = det * pv % ell
        inv = np.array([pow(int(x), ell - 2, ell) for x in pv], dtype=np.int64)
        factors = A[:, c + 1:, c] * inv[:, None] % ell
        A[:, c + 1:, c:] = (A[:, c + 1:, c:] - factors[:, :, None] * A[:, c:c + 1, c:]) % ell
    return det


def structure_constants(G: GroupContext) -> np.ndarray:
    """a[r, s, t] = #{(x, y) in C_r x C_s : x y = g_t}."""
    C = G.classes
    k = len(C)
    inv_mats = G.mats[G.inverse]
    a = np.zeros((k, k, k), dtype=np.int64)
    for t, g in enumerate(C.reps):
        y = G.index(G.space.matmul(inv_mats, G.mats[g]))
        a[:, :, t] = np.bincount(C.class_of * k + C.class_of[y], minlength=k * k).reshape(k, k)
    return a


class CharacterTable:
    """Irreducible characters as exact class functions valued in Q(zeta_e)."""

    def __init__(self, G: GroupContext, values: CycArray, degrees: list[int]):
        self.group = G
        self.classes = G.classes
        self.field = values.field
        self.values = values
        self.degrees = degrees

    def __len__(self):
        return len(self.degrees)

    def __repr__(self):
        return f"CharacterTable({self.group.name}, {len(self)} irreducibles)"

    def row(self, i: int) -> CycArray:
        return self.values[i]

    def on_elements(self, i: int) -> CycArray:
        """Character i evaluated at every group element."""
        return self.values[i][self.classes.class_of]

    def value(self, i: int, g: int):
        return self.values[i, self.classes.class_of[g]].to_cyc()

    def inner(self, a: CycArray, b: CycArray) -> Fraction:
        """<a, b>_G for class functions given on classes."""
        sizes = self.classes.sizes
        total = (a * b.conj()).num.T @ sizes
        s = CycArray(self.field, total, a.den * b.den).to_cyc()
        return s.to_fraction() / self.group.order

    def find_row(self, vals: CycArray) -> int:
        hits = np.nonzero(self.values.equals(vals[None]).all(axis=1))[0]
        return int(hits[0]) if len(hits) else -1

    def orthogonality(self) -> tuple[bool, bool]:
        """(row, column) orthogonality, checked exactly."""
        X, Xc = self.values, self.values.conj()
        k = len(self)
        diag = np.arange(k)
        weighted = X[:, None, :] * Xc[None, :, :]
        rows = CycArray(self.field, (weighted.num * self.classes.sizes[None, None, :, None]).sum(axis=2),
                        weighted.den)
        expect = np.zeros((k, k, self.field.d), dtype=np.int64)
        expect[diag, diag, 0] = self.group.order
        row_ok = bool(rows.equals(CycArray(self.field, expect)).all())
        cols = (Xc[:, :, None] * X[:, None, :]).sum(axis=0)
        expect = np.zeros((k, k, self.field.d), dtype=np.int64)
        expect[diag, diag, 0] = self.classes.centralizer_orders
        col_ok = bool(cols.equals(CycArray(self.field, expect)).all())
        return row_ok, col_ok

    def to_json(self) -> dict:
        cyc = self.values.to_cyc()
        return {
            "group": self.group.name,
            "order": self.group.order,
            "conductor": self.field.E,
            "classes": [{"rep": self.group.mats[r].tolist(), "size": int(s),
                         "element_order": int(self.group.element_orders[r])}
                        for r, s in zip(self.classes.reps, self.classes.sizes)],
            "degrees": self.degrees,
            "characters": [[v.to_json() for v in row] for row in cyc],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def character_table(G: GroupContext, conductor: int | None = None) -> CharacterTable:
    """Exact table of G; values live in Q(zeta_E) with E = conductor (default: exponent)."""
    return _character_table(G, conductor or G.exponent)


def _character_table(G: GroupContext, E: int) -> CharacterTable:
    C = G.classes
    k = len(C)
    e = G.exponent
    if E % e:
        raise InternalError(f"conductor {E} is not a multiple of the exponent {e}")
    ell = lifting_prime(e, G.order)
    a = structure_constants(G) % ell
    id_class = int(C.class_of[G.identity])
    inv_class = C.class_of[G.inverse[C.reps]]
    rng = np.random.default_rng(20240601)
    lams = np.arange(ell)
    for _attempt in range(20):
        coef = rng.integers(1, ell, size=k)
        A = np.einsum("r,rst->st", coef, a) % ell
        dets = _dets_mod(A[None] - lams[:, None, None] * np.eye(k, dtype=np.int64), ell)
        roots = lams[dets == 0]
        if len(roots) == k:
            break
    else:
        raise InternalError("could not separate the central characters")
    omegas = []
    for lam in roots:
        ns = _nullspace_mod((A - lam * np.eye(k, dtype=np.int64)) % ell, ell)
        if ns.shape[1] != 1:
            raise InternalError("eigenspace is not one-dimensional")
        v = ns[:, 0]
        v = v * pow(int(v[id_class]), ell - 2, ell) % ell
        omegas.append(v)
    sizes = C.sizes
    size_inv = np.array([pow(int(s), ell - 2, ell) for s in sizes], dtype=np.int64)
    g = _primitive_root(ell)
    z = pow(g, (ell - 1) // e, ell)
    orders = G.element_orders[C.reps]
    field = CycField(E)
    chars = []
    for omega in omegas:
        norm = int(np.sum(omega * omega[inv_class] % ell * size_inv % ell) % ell)
        sq = G.order * pow(norm, ell - 2, ell) % ell
        deg = next((x for x in range(1, int(G.order**0.5) + 1) if x * x % ell == sq), None)
        if deg is None:
            raise InternalError("degree has no square root in range")
        modvals = omega * deg % ell * size_inv % ell
        num = np.zeros((k, field.d), dtype=np.int64)
        for t in range(k):
            o = int(orders[t])
            zo = pow(z, e // o, ell)
            pw = np.array([modvals[C.power_map(j)[t]] for j in range(o)], dtype=np.int64)
            inv_o = pow(o, ell - 2, ell)
            mult = []
            for m in range(o):
                s = sum(int(pw[j]) * pow(zo, (-j * m) % o, ell) for j in range(o)) % ell
                s = s * inv_o % ell
                if s > deg:
                    raise InternalError("eigenvalue multiplicity out of range")
                mult.append(s)
            num[t] = np.asarray(mult, dtype=np.int64) @ field.R[(np.arange(o) * (E // o)) % E]
        chars.append((deg, num))
    trivial = np.zeros((k, field.d), dtype=np.int64)
    trivial[:, 0] = 1

    def key(item):
        deg, num = item
        return (deg, not np.array_equal(num, trivial), tuple(num.ravel().tolist()))

    chars.sort(key=key)
    values = CycArray(field, np.stack([c[1] for c in chars]), 1)
    table = CharacterTable(G, values, [c[0] for c in chars])
    if sum(d * d for d in table.degrees) != G.order or table.orthogonality() != (True, True):
        raise InternalError("character table fails orthogonality")
    return table
