"""Finite fields F_q, q = p^r odd, and the additive character psi.

Elements are coded as integers 0..q-1: the code of c_0 + c_1 x + ... + c_{r-1} x^{r-1}
is sum c_i p^i.  The code order is the deterministic enumeration order of the field.
"""

from __future__ import annotations

import itertools
import os
from functools import cached_property

import numpy as np

from .errors import InvalidParameter, ResourceLimit

DEFAULT_FIELD_BOUND = 10**4


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# -- polynomials over F_p as coefficient lists, lowest degree first ----------

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    a = _poly_trim([x % p for x in a])
    m = _poly_trim(m)
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _poly_trim(a)
    return a


def _monic_polys(p, deg):
    # ordered by the tuple (c_0, ..., c_{deg-1}) lexicographically
    for coeffs in itertools.product(range(p), repeat=deg):
        yield list(coeffs) + [1]


def is_irreducible(poly, p) -> bool:
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for m in _monic_polys(p, d):
            if not _poly_mod(poly, m, p):
                return False
    return True


def least_irreducible(p: int, r: int) -> list[int]:
    """Lexicographically least monic irreducible of degree r, comparing (c_0, ..., c_{r-1})."""
    if r == 1:
        return [0, 1]
    for poly in _monic_polys(p, r):
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("no irreducible polynomial found")  # unreachable


class FieldTable:
    """The field F_{p^r}; arithmetic is vectorised over arrays of element codes."""

    def __init__(self, p: int, r: int = 1, rho: int | None = None):
        if p % 2 == 0 or not is_prime(p):
            raise InvalidParameter(f"p must be an odd prime, got {p}")
        if r < 1:
            raise InvalidParameter(f"extension degree must be >= 1, got {r}")
        bound = int(os.environ.get("SOQC_MAX_FIELD_ORDER", DEFAULT_FIELD_BOUND))
        if p**r > bound:
            raise ResourceLimit(f"field order {p**r} exceeds bound {bound}", p**r)
        self.p = p
        self.r = r
        self.q = p**r
        self.modulus = least_irreducible(p, r)
        self._build_tables()
        squares = {int(s) for s in self.vmul(np.arange(self.q), np.arange(self.q))}
        if rho is None:
            rho = next(x for x in range(self.q) if x not in squares)
        elif rho in squares:
            raise InvalidParameter(f"rho={rho} is a square in F_{self.q}")
        self.rho_code = rho
        self.gamma_code = int(self.vmul(rho, self.inv[2 % p]))
        self._squares = frozenset(squares)

    # -- tables ----------------------------------------------------------

    def _digits(self, code):
        out = []
        for _ in range(self.r):
            out.append(code % self.p)
            code //= self.p
        return out

    def _code(self, digits):
        return sum(int(c) * self.p**i for i, c in enumerate(digits))

    def _build_tables(self):
        q, p, r = self.q, self.p, self.r
        self.digits = np.array([self._digits(c) for c in range(q)], dtype=np.int64)
        self._powers = p ** np.arange(r, dtype=np.int64)
        if r == 1:
            self._exp = self._log = None
        else:
            # discrete log tables against the least generator of F_q^x
            def times(a, b):
                prod = [0] * (2 * r - 1)
                for i, x in enumerate(self._digits(a)):
                    if x:
                        for j, y in enumerate(self._digits(b)):
                            prod[i + j] += x * y
                return self._code(_poly_mod(prod, self.modulus, p))

            for g in range(2, q):
                seq, x = [1], g
                while x != 1:
                    seq.append(x)
                    x = times(x, g)
                if len(seq) == q - 1:
                    break
            self._exp = np.array(seq + seq, dtype=np.int64)
            log = np.zeros(q, dtype=np.int64)
            log[np.array(seq)] = np.arange(q - 1)
            self._log = log
        self.neg = self.vneg(np.arange(q))
        inv = np.zeros(q, dtype=np.int64)
        nz = np.arange(1, q)
        inv[1:] = self.vpow(nz, q - 2)
        self.inv = inv

    # -- vectorised arithmetic on code arrays ----------------------------

    def vadd(self, a, b):
        if self.r == 1:
            return (np.asarray(a, dtype=np.int64) + b) % self.p
        d = (self.digits[a] + self.digits[b]) % self.p
        return d @ self._powers

    def vneg(self, a):
        if self.r == 1:
            return (-np.asarray(a, dtype=np.int64)) % self.p
        return ((-self.digits[a]) % self.p) @ self._powers

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        if self.r == 1:
            return (np.asarray(a, dtype=np.int64) * b) % self.p
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vpow(self, a, n: int):
        a = np.asarray(a, dtype=np.int64)
        if self.r == 1:
            return np.array([pow(int(x), n, self.p) for x in a.ravel()],
                            dtype=np.int64).reshape(a.shape)
        out = self._exp[(self._log[a] * n) % (self.q - 1)]
        return np.where(a == 0, 0 if n else 1, out)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inversion of zero in F_q")
        return self.inv[a]

    @cached_property
    def trace_table(self) -> np.ndarray:
        """Absolute trace F_q -> F_p as an array of integers in 0..p-1."""
        out = np.zeros(self.q, dtype=np.int64)
        for x in range(self.q):
            acc, y = 0, x
            for _ in range(self.r):
                acc = int(self.vadd(acc, y))
                y = self.pow_code(y, self.p)
            out[x] = acc  # lands in the prime field, whose codes are 0..p-1
        return out

    @cached_property
    def norm_table(self) -> np.ndarray:
        e = (self.q - 1) // (self.p - 1)
        return np.array([self.pow_code(x, e) for x in range(self.q)], dtype=np.int64)

    def pow_code(self, x: int, n: int) -> int:
        if n < 0:
            if x == 0:
                raise ZeroDivisionError("0 has no inverse")
            x, n = int(self.inv[x]), -n
        return int(self.vpow(np.array([x]), n)[0])

    # -- element level -------------------------------------------------

    def __call__(self, value) -> FqElem:
        if isinstance(value, FqElem):
            if value.field != self:
                raise InvalidParameter("element belongs to a different field")
            return value
        if isinstance(value, (int, np.integer)):
            return FqElem(self, self.from_int(int(value)))
        return FqElem(self, self._code([int(c) % self.p for c in value]))

    def from_int(self, n: int) -> int:
        """Code of the image of the integer n in the prime subfield."""
        return n % self.p

    def code_of(self, value) -> int:
        """Code of an int (prime-field image), FqElem, or code passthrough."""
        if isinstance(value, FqElem):
            return value.code
        return self.from_int(int(value))

    @property
    def elements(self) -> list[FqElem]:
        return [FqElem(self, c) for c in range(self.q)]

    @property
    def rho(self) -> FqElem:
        return FqElem(self, self.rho_code)

    @property
    def gamma(self) -> FqElem:
        return FqElem(self, self.gamma_code)

    def is_square(self, code: int) -> bool:
        return code in self._squares

    @cached_property
    def primitive_element(self) -> int:
        for g in range(1, self.q):
            x, order = g, 1
            while x != 1:
                x = int(self.vmul(x, g))
                order += 1
            if order == self.q - 1:
                return g
        raise AssertionError("no primitive element")  # unreachable

    def __repr__(self):
        return f"FieldTable(p={self.p}, r={self.r}, rho={self.rho_code})"

    def __eq__(self, other):
        return (isinstance(other, FieldTable) and (self.p, self.r, self.rho_code)
                == (other.p, other.r, other.rho_code))

    def __hash__(self):
        return hash((self.p, self.r, self.rho_code))


class FqElem:
    """An element of a FieldTable, stored by its code."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldTable, code: int):
        self.field = field
        self.code = int(code)

    def _other(self, other) -> int:
        if isinstance(other, FqElem):
            if other.field != self.field:
                raise InvalidParameter("field mismatch")
            return other.code
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return NotImplemented

    def _wrap(self, code):
        return FqElem(self.field, int(code))

    def __add__(self, other):
        o = self._other(other)
        return self._wrap(self.field.vadd(self.code, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return self._wrap(self.field.vsub(self.code, o))

    def __rsub__(self, other):
        o = self._other(other)
        return self._wrap(self.field.vsub(o, self.code))

    def __mul__(self, other):
        o = self._other(other)
        return self._wrap(self.field.vmul(self.code, o))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(self.field.neg[self.code])

    def inverse(self) -> FqElem:
        if self.code == 0:
            raise ZeroDivisionError("inversion of zero in F_q")
        return self._wrap(self.field.inv[self.code])

    def __truediv__(self, other):
        o = self._other(other)
        return self * FqElem(self.field, o).inverse()

    def __rtruediv__(self, other):
        return FqElem(self.field, self._other(other)) * self.inverse()

    def __pow__(self, n: int):
        return self._wrap(self.field.pow_code(self.code, n))

    def trace(self) -> FqElem:
        return self._wrap(self.field.trace_table[self.code])

    def norm(self) -> FqElem:
        return self._wrap(self.field.norm_table[self.code])

    def __eq__(self, other):
        if isinstance(other, FqElem):
            return self.field == other.field and self.code == other.code
        if isinstance(other, (int, np.integer)):
            return self.code == self.field.from_int(int(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.code))

    def __bool__(self):
        return self.code != 0

    @property
    def coeffs(self) -> list[int]:
        return [int(c) for c in self.field.digits[self.code]]

    def to_json(self) -> list[int]:
        return self.coeffs

    @classmethod
    def from_json(cls, field: FieldTable, data: list[int]) -> FqElem:
        return field(data)

    def __repr__(self):
        if self.field.r == 1:
            return f"{self.code}"
        return f"F{self.field.q}{self.coeffs}"


def fq_field(p: int, r: int = 1, rho: int | None = None) -> FieldTable:
    return FieldTable(p, r, rho)


class AdditiveChar:
    """psi(x) = zeta_p^{Tr(x)}, valued in Q(zeta_p)."""

    def __init__(self, field: FieldTable):
        self.field = field
        self.p = field.p

    def exponent(self, x) -> int:
        """k with psi(x) = zeta_p^k."""
        return int(self.field.trace_table[self.field.code_of(x)])

    def __call__(self, x):
        from .cyclotomic import cyc_make

        return cyc_make(self.p, self.exponent(x))


def additive_char(field: FieldTable) -> AdditiveChar:
    return AdditiveChar(field)
