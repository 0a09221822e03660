"""Exact arithmetic in cyclotomic fields Q(zeta_e).

A ``CycNum`` is stored in the power basis 1, zeta, ..., zeta^{phi(e)-1} with rational
coefficients, reduced modulo the e-th cyclotomic polynomial, so equality is coefficient
equality once both sides live in the same conductor.

``CycField`` / ``CycArray`` are the bulk counterpart: many values of one field Q(zeta_E)
held as an integer numerator array with one shared denominator.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache, reduce

import numpy as np

_FLOAT_EXACT = 2**52
_INT64_SAFE = 2**62


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _mobius(n: int) -> int:
    out, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    return -out if n > 1 else out


def _ramanujan(e: int, k: int) -> int:
    """Tr_{Q(zeta_e)/Q}(zeta_e^k)."""
    m = e // math.gcd(e, k)
    return _mobius(m) * euler_phi(e) // euler_phi(m)


def lcm(*args: int) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), args, 1)


def _poly_divexact(a, b):
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        out[i] = c
        for j, bj in enumerate(b):
            a[i + j] -= c * bj
    assert not any(a), "inexact polynomial division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, cyclotomic_poly(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def reduction_matrix(e: int) -> np.ndarray:
    """Row k holds zeta_e^k in the power basis; shape (e, phi(e))."""
    phi_poly = cyclotomic_poly(e)
    d = len(phi_poly) - 1
    rows = np.zeros((e, d), dtype=np.int64)
    cur = [0] * d
    cur[0] = 1
    for k in range(e):
        rows[k] = cur
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(d):
                cur[i] -= top * phi_poly[i]
    rows.setflags(write=False)
    return rows


def _reduce_dense(e: int, dense) -> tuple:
    """Reduce a length-e coefficient list over zeta_e^k to the power basis."""
    R = reduction_matrix(e)
    d = R.shape[1]
    out = [Fraction(0)] * d
    for k, c in enumerate(dense):
        if c:
            row = R[k % e]
            for i in range(d):
                if row[i]:
                    out[i] += c * int(row[i])
    return tuple(out)


class CycNum:
    """An exact element of Q(zeta_e)."""

    __slots__ = ("e", "coeffs")

    def __init__(self, e: int, coeffs):
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != euler_phi(e):
            raise ValueError(f"expected {euler_phi(e)} coefficients for conductor {e}")
        self.e = e
        self.coeffs = coeffs

    @classmethod
    def from_dense(cls, e: int, dense) -> CycNum:
        return cls(e, _reduce_dense(e, dense))

    @classmethod
    def rational(cls, x, e: int = 1) -> CycNum:
        c = [Fraction(0)] * euler_phi(e)
        c[0] = Fraction(x)
        return cls(e, c)

    def lift(self, m: int) -> CycNum:
        """The same number written with conductor m (a multiple of e)."""
        if m == self.e:
            return self
        if m % self.e:
            raise ValueError(f"conductor {m} is not a multiple of {self.e}")
        step = m // self.e
        dense = [Fraction(0)] * m
        for i, c in enumerate(self.coeffs):
            dense[i * step] = c
        return CycNum.from_dense(m, dense)

    def _coerce(self, other):
        if isinstance(other, CycNum):
            return other
        if isinstance(other, (int, Fraction, np.integer)):
            return CycNum.rational(Fraction(int(other)) if isinstance(other, np.integer) else other)
        return NotImplemented

    def _unify(self, other):
        m = lcm(self.e, other.e)
        return self.lift(m), other.lift(m), m

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, m = self._unify(other)
        return CycNum(m, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.e, [-x for x in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNum(self.e, [x * other for x in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, m = self._unify(other)
        d = len(a.coeffs)
        dense = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        dense[i + j] += x * y
        return CycNum.from_dense(m, dense)

    __rmul__ = __mul__

    def _mul_matrix(self):
        d = len(self.coeffs)
        cols = []
        for j in range(d):
            dense = [Fraction(0)] * (d + j)
            for i, x in enumerate(self.coeffs):
                dense[i + j] = x
            cols.append(_reduce_dense(self.e, dense))
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def inverse(self) -> CycNum:
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero in Q(zeta)")
        A = self._mul_matrix()
        d = len(A)
        rhs = [Fraction(int(i == 0)) for i in range(d)]
        M = [row[:] + [rhs[i]] for i, row in enumerate(A)]
        for col in range(d):
            piv = next(r for r in range(col, d) if M[r][col] != 0)
            M[col], M[piv] = M[piv], M[col]
            inv = 1 / M[col][col]
            M[col] = [x * inv for x in M[col]]
            for r in range(d):
                if r != col and M[r][col] != 0:
                    f = M[r][col]
                    M[r] = [x - f * y for x, y in zip(M[r], M[col])]
        return CycNum(self.e, [M[i][d] for i in range(d)])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNum(self.e, [x / other for x in self.coeffs])
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        acc, base = CycNum.rational(1, self.e), self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def conj(self) -> CycNum:
        """Complex conjugate: zeta_e -> zeta_e^{-1}."""
        dense = [Fraction(0)] * self.e
        for i, c in enumerate(self.coeffs):
            dense[(-i) % self.e] += c
        return CycNum.from_dense(self.e, dense)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, _ = self._unify(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        # the normalised trace Tr_{K/Q}(x)/[K:Q] does not depend on the conductor
        e, phi = self.e, euler_phi(self.e)
        tr = sum((c * _ramanujan(e, i) for i, c in enumerate(self.coeffs) if c), Fraction(0))
        return hash(tr / phi)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        z = complex(math.cos(2 * math.pi / self.e), math.sin(2 * math.pi / self.e))
        return sum((float(c) * z**i for i, c in enumerate(self.coeffs) if c), 0j)

    def to_json(self) -> dict:
        return {"e": self.e, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> CycNum:
        return cls(int(data["e"]), [Fraction(c) for c in data["coeffs"]])

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z{self.e}^{i}")
        return " + ".join(terms) if terms else "0"


def cyc_make(e: int, k: int = 1) -> CycNum:
    """zeta_e^k in reduced form."""
    if e < 1:
        raise ValueError("conductor must be positive")
    dense = [0] * e
    dense[k % e] = 1
    return CycNum.from_dense(e, dense)


def cyc_arith(a, b, op: str):
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "conj":
        return a.conj()
    if op == "eq":
        return a == b
    raise ValueError(f"unknown operation {op!r}")


# -- bulk arithmetic ----------------------------------------------------------


class CycField:
    """The field Q(zeta_E) for vectorised work; holds the reduction data."""

    def __init__(self, E: int):
        self.E = E
        self.R = reduction_matrix(E)
        self.d = self.R.shape[1]
        # rows for products of two basis elements: zeta^{i+j}, i+j <= 2d-2
        self.Rprod = self.R[np.arange(2 * self.d - 1) % E]

    def __repr__(self):
        return f"CycField({self.E})"

    def __eq__(self, other):
        return isinstance(other, CycField) and other.E == self.E

    def __hash__(self):
        return hash(self.E)

    def roots(self, k) -> CycArray:
        """zeta_E^k for an integer array k."""
        k = np.asarray(k, dtype=np.int64) % self.E
        return CycArray(self, self.R[k].copy(), 1)

    def zeros(self, shape) -> CycArray:
        shape = (shape,) if isinstance(shape, int) else tuple(shape)
        return CycArray(self, np.zeros(shape + (self.d,), dtype=np.int64), 1)

    def from_cyc(self, values) -> CycArray:
        """Embed a (nested) list of CycNum / rationals into one array."""
        arr = np.asarray(values, dtype=object)
        flat = []
        for v in arr.ravel():
            if not isinstance(v, CycNum):
                v = CycNum.rational(v)
            flat.append(v.lift(self.E).coeffs)
        den = lcm(*(c.denominator for row in flat for c in row)) if flat else 1
        num = np.array([[int(c * den) for c in row] for row in flat], dtype=object)
        num = num.reshape(arr.shape + (self.d,))
        return CycArray(self, num, den).compact()

    def scalar(self, x) -> CycArray:
        return self.from_cyc([x])[0]


def _exact_matmul(a, b, bound: int):
    """a @ b for integer arrays, through float64 when every partial sum stays below 2^52."""
    if bound < _FLOAT_EXACT and a.dtype != object and b.dtype != object:
        return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
    return CycArray._fit(a, bound) @ CycArray._fit(b, bound)


def _max_abs(num) -> int:
    if num.size == 0:
        return 0
    if num.dtype == object:
        return max(abs(int(x)) for x in num.ravel())
    return int(np.abs(num).max())


class CycArray:
    """An array of elements of Q(zeta_E): ``num[..., :] / den`` in the power basis."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: CycField, num, den: int = 1):
        self.field = field
        self.num = num
        self.den = int(den)

    # -- housekeeping ---------------------------------------------------

    def compact(self) -> CycArray:
        """Divide out common factors and fall back to int64 when values are small."""
        num = self.num
        g = self.den
        if num.size:
            if num.dtype == object:
                g = math.gcd(g, reduce(math.gcd, (int(x) for x in num.ravel()), 0))
            else:
                g = math.gcd(g, int(np.gcd.reduce(num.ravel())))
        g = g or 1
        den = self.den // g
        if g > 1:
            num = num // g
        if num.dtype == object and _max_abs(num) < _INT64_SAFE:
            num = num.astype(np.int64)
        return CycArray(self.field, num, den)

    @staticmethod
    def _fit(num, bound: int):
        if bound >= _INT64_SAFE and num.dtype != object:
            return num.astype(object)
        return num

    @property
    def shape(self):
        return self.num.shape[:-1]

    def __len__(self):
        return self.num.shape[0]

    def __getitem__(self, idx) -> CycArray:
        return CycArray(self.field, self.num[idx], self.den)

    def copy(self) -> CycArray:
        return CycArray(self.field, self.num.copy(), self.den)

    def reshape(self, *shape) -> CycArray:
        if len(shape) == 1 and isinstance(shape[0], tuple):
            shape = shape[0]
        return CycArray(self.field, self.num.reshape(tuple(shape) + (self.field.d,)), self.den)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> CycArray:
        if isinstance(other, CycArray):
            if other.field != self.field:
                raise ValueError("field mismatch")
            return other
        if isinstance(other, (CycNum, int, Fraction)):
            return self.field.scalar(other)
        raise TypeError(f"cannot combine CycArray with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        den = lcm(self.den, o.den)
        fa, fb = den // self.den, den // o.den
        bound = (_max_abs(self.num) * fa + _max_abs(o.num) * fb)
        a = self._fit(self.num, bound * 2)
        b = self._fit(o.num, bound * 2)
        return CycArray(self.field, a * fa + b * fb, den).compact()

    __radd__ = __add__

    def __neg__(self):
        return CycArray(self.field, -self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, x) -> CycArray:
        x = Fraction(x)
        bound = _max_abs(self.num) * abs(x.numerator)
        num = self._fit(self.num, bound) * x.numerator
        return CycArray(self.field, num, self.den * x.denominator).compact()

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        o = self._coerce(other)
        d = self.field.d
        a, b = np.broadcast_arrays(self.num, o.num)
        bound = _max_abs(self.num) * _max_abs(o.num) * d * _max_abs(self.field.R)
        a = self._fit(a, bound)
        b = self._fit(b, bound)
        conv = np.zeros(a.shape[:-1] + (2 * d - 1,), dtype=a.dtype)
        for i in range(d):
            conv[..., i:i + d] += a[..., i:i + 1] * b
        num = conv @ self._fit(self.field.Rprod, bound)
        return CycArray(self.field, num, self.den * o.den).compact()

    __rmul__ = __mul__

    def conj(self) -> CycArray:
        E, d = self.field.E, self.field.d
        idx = (-np.arange(d)) % E
        return CycArray(self.field, self.num @ self.field.R[idx].astype(self.num.dtype), self.den)

    def lift(self, field: CycField) -> CycArray:
        """The same numbers inside a larger cyclotomic field."""
        if field.E % self.field.E:
            raise ValueError(f"Q(zeta_{self.field.E}) is not inside Q(zeta_{field.E})")
        m = field.E // self.field.E
        rows = field.R[(np.arange(self.field.d) * m) % field.E]
        bound = _max_abs(self.num) * self.field.d * _max_abs(rows)
        num = self._fit(self.num, bound) @ self._fit(rows, bound)
        return CycArray(field, num, self.den)

    def rotate(self, k) -> CycArray:
        """Multiply entrywise by zeta_E^k (k broadcast against the array shape).

        zeta^k acts on the power basis by a fixed integer matrix, applied once per distinct k.
        """
        E, d = self.field.E, self.field.d
        k = np.asarray(k, dtype=np.int64) % E
        shape = np.broadcast_shapes(self.shape, k.shape)
        num = np.broadcast_to(self.num, shape + (d,))
        k = np.broadcast_to(k, shape)
        bound = _max_abs(self.num) * d * _max_abs(self.field.R)
        out = np.zeros(shape + (d,), dtype=object if bound >= _INT64_SAFE or num.dtype == object else np.int64)
        cols = np.arange(d)
        for u in np.unique(k):
            mask = k == u
            out[mask] = _exact_matmul(num[mask], self.field.R[(cols + u) % E], bound)
        return CycArray(self.field, out, self.den)

    def sum(self, axis=0) -> CycArray:
        if axis < 0:
            axis += self.num.ndim - 1
        bound = _max_abs(self.num) * max(1, self.num.shape[axis])
        num = self._fit(self.num, bound).sum(axis=axis)
        return CycArray(self.field, num, self.den).compact()

    def dot(self, other: CycArray) -> CycArray:
        """sum_i self[i] * other[i] over the leading axis (1-d arrays)."""
        return self.contract(other)

    def contract(self, other: CycArray) -> CycArray:
        """sum_i self[..., i] * other[i]: a batch of dot products against one vector."""
        o = self._coerce(other)
        d = self.field.d
        n = o.num.shape[0]
        bound = _max_abs(self.num) * _max_abs(o.num) * n * d * _max_abs(self.field.R)
        a = self._fit(self.num, bound)
        b = self._fit(o.num, bound)
        if bound < _FLOAT_EXACT and a.dtype != object and b.dtype != object:
            S = np.rint(np.tensordot(a.astype(np.float64), b.astype(np.float64), axes=([-2], [0])))
            S = S.astype(np.int64)
        else:
            S = np.tensordot(a, b, axes=([-2], [0]))  # S[..., i, j] = sum_n a[..., n, i] b[n, j]
        conv = np.zeros(S.shape[:-2] + (2 * d - 1,), dtype=S.dtype)
        for i in range(d):
            conv[..., i:i + d] += S[..., i, :]
        num = conv @ self._fit(self.field.Rprod, bound)
        return CycArray(self.field, num, self.den * o.den).compact()

    # -- comparison / export ----------------------------------------------

    def equals(self, other) -> np.ndarray:
        """Entrywise exact equality as a boolean array."""
        o = self._coerce(other)
        bound = max(_max_abs(self.num) * o.den, _max_abs(o.num) * self.den)
        a = self._fit(self.num, bound) * o.den
        b = self._fit(o.num, bound) * self.den
        return np.all(a == b, axis=-1)

    @staticmethod
    def value_labels(*arrays: CycArray) -> list[np.ndarray]:
        """Integer labels, equal exactly when the values are equal, shared across the arrays.

        Equality tests on permuted copies then reduce to integer comparisons.
        """
        den = lcm(*(a.den for a in arrays))
        bound = max(_max_abs(a.num) * (den // a.den) for a in arrays)
        rows = [CycArray._fit(a.num, bound).reshape(-1, a.num.shape[-1]) * (den // a.den) for a in arrays]
        rows_all = np.concatenate(rows)
        inv = None
        if rows_all.dtype != object:
            # label by a wrapping integer hash, then confirm every row equals its class representative
            weights = np.random.default_rng(len(rows_all)).integers(1, 2**61, size=rows_all.shape[1])
            with np.errstate(over="ignore"):
                keys = rows_all @ weights
            _, first, inv = np.unique(keys, return_index=True, return_inverse=True)
            inv = inv.reshape(-1)
            if not np.array_equal(rows_all[first[inv]], rows_all):
                inv = None
        if inv is None:
            _, inv = np.unique(rows_all, axis=0, return_inverse=True)
            inv = inv.reshape(-1)
        cuts = np.cumsum([0, *(len(r) for r in rows)])
        return [inv[cuts[k]:cuts[k + 1]].reshape(a.shape) for k, a in enumerate(arrays)]

    def is_zero(self) -> np.ndarray:
        return np.all(self.num == 0, axis=-1)

    def to_cyc(self):
        """Nested lists of CycNum (or a single CycNum for a 0-d array)."""
        E = self.field.E

        def conv(vec):
            return CycNum(E, [Fraction(int(c), self.den) for c in vec])

        if self.num.ndim == 1:
            return conv(self.num)
        flat = self.num.reshape(-1, self.field.d)
        out = np.empty(len(flat), dtype=object)
        for i, v in enumerate(flat):
            out[i] = conv(v)
        return out.reshape(self.shape).tolist()

    def to_complex(self) -> np.ndarray:
        z = np.exp(2j * np.pi * np.arange(self.field.d) / self.field.E)
        return (self.num.astype(float) @ z) / self.den

    def __repr__(self):
        return f"CycArray(E={self.field.E}, shape={self.shape}, den={self.den})"
