"""Batched square-matrix arithmetic over F_q.

Matrices are integer arrays of element codes with shape (..., d, d).  Every operation
broadcasts over the leading axes, which is how whole groups are multiplied at once.
"""

from __future__ import annotations

import numpy as np

from .errors import ResourceLimit
from .field import FieldTable

_CODE_LIMIT = 2**63


class MatSpace:
    """d x d matrices over a FieldTable."""

    def __init__(self, field: FieldTable, d: int):
        self.field = field
        self.d = d
        q = field.q
        if q ** (d * d) >= _CODE_LIMIT:
            raise ResourceLimit(f"{d}x{d} matrices over F_{q} do not fit 64-bit codes")
        self._place = (q ** np.arange(d * d - 1, -1, -1, dtype=np.int64)).astype(np.int64)

    def __repr__(self):
        return f"MatSpace(F_{self.field.q}, d={self.d})"

    # -- construction -----------------------------------------------------

    def identity(self) -> np.ndarray:
        return np.eye(self.d, dtype=np.int64)

    def array(self, rows) -> np.ndarray:
        """Matrix from nested rows of ints / FqElem (ints map to the prime field)."""
        F = self.field
        return np.array([[F.code_of(x) for x in row] for row in rows], dtype=np.int64)

    def diag(self, entries) -> np.ndarray:
        out = np.zeros((self.d, self.d), dtype=np.int64)
        for i, x in enumerate(entries):
            out[i, i] = self.field.code_of(x)
        return out

    # -- arithmetic -------------------------------------------------------

    def matmul(self, A, B) -> np.ndarray:
        F = self.field
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if F.r == 1:
            return (A @ B) % F.p
        shape = np.broadcast_shapes(A.shape[:-2], B.shape[:-2]) + (self.d, self.d)
        out = np.zeros(shape, dtype=np.int64)
        for k in range(self.d):
            out = F.vadd(out, F.vmul(A[..., :, k:k + 1], B[..., k:k + 1, :]))
        return out

    def prod(self, *mats) -> np.ndarray:
        acc = mats[0]
        for m in mats[1:]:
            acc = self.matmul(acc, m)
        return acc

    def scalar_mul(self, c, A) -> np.ndarray:
        return self.field.vmul(np.asarray(A, dtype=np.int64), self.field.code_of(c))

    def add(self, A, B) -> np.ndarray:
        return self.field.vadd(np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64))

    def neg(self, A) -> np.ndarray:
        return self.field.vneg(np.asarray(A, dtype=np.int64))

    def transpose(self, A) -> np.ndarray:
        return np.swapaxes(np.asarray(A), -1, -2)

    def _eliminate(self, A, rhs=None):
        """Batched Gauss-Jordan.  Returns (det, solution-or-None)."""
        F = self.field
        A = np.array(A, dtype=np.int64, copy=True)
        batch = A.shape[:-2]
        A = A.reshape((-1, self.d, self.d))
        n = A.shape[0]
        X = None
        if rhs is not None:
            X = np.broadcast_to(rhs, A.shape).reshape((-1, self.d, self.d)).copy()
        det = np.ones(n, dtype=np.int64)
        alive = np.ones(n, dtype=bool)
        rows = np.arange(n)
        for c in range(self.d):
            col = A[:, c:, c]
            has = (col != 0).any(axis=1)
            alive &= has
            piv = c + np.argmax(col != 0, axis=1)
            swap = piv != c
            det = np.where(swap, F.vneg(det), det)
            top = A[rows, c].copy()
            A[rows, c] = A[rows, piv]
            A[rows, piv] = top
            if X is not None:
                top = X[rows, c].copy()
                X[rows, c] = X[rows, piv]
                X[rows, piv] = top
            pv = np.where(alive, A[:, c, c], 1)
            det = F.vmul(det, np.where(alive, pv, 0))
            pinv = F.inv[pv]
            A[:, c] = F.vmul(A[:, c], pinv[:, None])
            if X is not None:
                X[:, c] = F.vmul(X[:, c], pinv[:, None])
            for r in range(self.d):
                if r == c:
                    continue
                f = A[:, r, c][:, None].copy()
                A[:, r] = F.vsub(A[:, r], F.vmul(f, A[:, c]))
                if X is not None:
                    X[:, r] = F.vsub(X[:, r], F.vmul(f, X[:, c]))
        det = det.reshape(batch)
        if X is not None:
            X = X.reshape(batch + (self.d, self.d))
        return det, X

    def det(self, A) -> np.ndarray:
        return self._eliminate(A)[0]

    def inv(self, A) -> np.ndarray:
        det, X = self._eliminate(A, self.identity())
        if np.any(det == 0):
            raise ZeroDivisionError("singular matrix")
        return X

    # -- hashing / lookup -------------------------------------------------

    def encode(self, A) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        return A.reshape(A.shape[:-2] + (self.d * self.d,)) @ self._place

    def decode(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        digits = (codes[..., None] // self._place) % self.field.q
        return digits.reshape(codes.shape + (self.d, self.d))

    def key(self, A) -> int:
        return int(self.encode(A))
