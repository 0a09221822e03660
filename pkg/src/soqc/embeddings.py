"""The odd-into-even and even-into-odd orthogonal embeddings used by the zeta sums."""

from __future__ import annotations

import numpy as np

from .errors import InternalError, InvalidParameter
from .field import FieldTable
from .groups import GroupContext
from .matrices import MatSpace


def _insert_unit(F: FieldTable, g: np.ndarray, pos: int) -> np.ndarray:
    """Grow a (batched) square matrix by one coordinate at `pos` carrying a 1 on the diagonal."""
    d = g.shape[-1]
    keep = [i for i in range(d + 1) if i != pos]
    out = np.zeros(g.shape[:-2] + (d + 1, d + 1), dtype=np.int64)
    keep = np.array(keep)
    out[..., keep[:, None], keep[None, :]] = g
    out[..., pos, pos] = 1
    return out


def odd_conjugator(F: FieldTable, n: int) -> np.ndarray:
    """M = diag(I_n, [[0, 2], [1, 0]], I_n)."""
    M = np.eye(2 * n + 2, dtype=np.int64)
    M[n:n + 2, n:n + 2] = [[0, 2 % F.p], [1, 0]]
    return M


def even_conjugator(F: FieldTable, l: int) -> np.ndarray:
    """M = diag(I_{l-1}, M~, I_{l-1}) with gamma = rho/2."""
    half = F.inv[2 % F.p]
    g2 = F.inv[F.vmul(2 % F.p, F.gamma_code)]  # 1/(2 gamma)
    Mt = np.array([[0, 1, 0], [half, 0, g2], [half, 0, F.neg[g2]]], dtype=np.int64)
    M = np.eye(2 * l + 1, dtype=np.int64)
    M[l - 1:l + 2, l - 1:l + 2] = Mt
    return M


class EmbeddingMaps:
    """iota_{l,n}: SO_{2n+1} -> SO_{2l} (n < l) and iota_l: SO_{2l} -> SO_{2l+1}."""

    def __init__(self, F: FieldTable, l: int):
        if l < 2:
            raise InvalidParameter(f"l must be >= 2, got {l}")
        self.F = F
        self.l = l

    def odd_in_even(self, n: int, g) -> np.ndarray:
        """Image of SO_{2n+1} matrices inside the Levi GL_{l-n-1} x SO_{2n+2} of SO_{2l}."""
        F, l = self.F, self.l
        if not 0 <= n < l:
            raise InvalidParameter(f"need 0 <= n < l, got n={n}, l={l}")
        g = np.asarray(g, dtype=np.int64)
        if g.shape[-1] != 2 * n + 1:
            raise InvalidParameter("matrix size does not match SO_{2n+1}")
        space = MatSpace(F, 2 * n + 2)
        M = odd_conjugator(F, n)
        core = space.prod(space.inv(M), _insert_unit(F, g, n), M)
        m = l - n - 1
        out = np.broadcast_to(np.eye(2 * l, dtype=np.int64), g.shape[:-2] + (2 * l, 2 * l)).copy()
        out[..., m:m + 2 * n + 2, m:m + 2 * n + 2] = core
        return out

    def even_in_odd(self, g) -> np.ndarray:
        """Image of SO_{2l} matrices in SO_{2l+1}: M^-1 (g with a unit inserted at l) M."""
        F, l = self.F, self.l
        g = np.asarray(g, dtype=np.int64)
        if g.shape[-1] != 2 * l:
            raise InvalidParameter("matrix size does not match SO_{2l}")
        space = MatSpace(F, 2 * l + 1)
        M = even_conjugator(F, l)
        return space.prod(space.inv(M), _insert_unit(F, g, l), M)

    def even_in_odd_blocks(self, g) -> np.ndarray:
        """The same map written out block by block (independent of matrix conjugation)."""
        F, l = self.F, self.l
        g = np.asarray(g, dtype=np.int64)
        half, gam = F.inv[2 % F.p], F.gamma_code
        ig2 = F.inv[F.vmul(2 % F.p, gam)]
        mul, add, neg = F.vmul, F.vadd, F.vneg
        L = l - 1
        A11, A12 = g[..., :L, :L], g[..., :L, L]
        A21, A22 = g[..., L, :L], g[..., L, L]
        B11, B12 = g[..., :L, l], g[..., :L, l + 1:]
        B21, B22 = g[..., L, l], g[..., L, l + 1:]
        C11, C12 = g[..., l, :L], g[..., l, L]
        C21, C22 = g[..., l + 1:, :L], g[..., l + 1:, L]
        D11, D12 = g[..., l, l], g[..., l, l + 1:]
        D21, D22 = g[..., l + 1:, l], g[..., l + 1:, l + 1:]
        out = np.zeros(g.shape[:-2] + (2 * l + 1, 2 * l + 1), dtype=np.int64)
        out[..., :L, :L] = A11
        out[..., :L, L] = mul(half, B11)
        out[..., :L, L + 1] = A12
        out[..., :L, L + 2] = neg(mul(ig2, B11))
        out[..., :L, L + 3:] = B12
        out[..., L, :L] = C11
        out[..., L + 1, :L] = A21
        out[..., L + 2, :L] = neg(mul(gam, C11))
        one = np.ones_like(D11)
        out[..., L, L] = mul(half, add(D11, one))
        out[..., L, L + 1] = C12
        out[..., L, L + 2] = mul(ig2, add(neg(D11), one))
        out[..., L + 1, L] = mul(half, B21)
        out[..., L + 1, L + 1] = A22
        out[..., L + 1, L + 2] = neg(mul(ig2, B21))
        out[..., L + 2, L] = mul(mul(gam, half), add(one, neg(D11)))
        out[..., L + 2, L + 1] = neg(mul(gam, C12))
        out[..., L + 2, L + 2] = mul(half, add(D11, one))
        out[..., L, L + 3:] = D12
        out[..., L + 1, L + 3:] = B22
        out[..., L + 2, L + 3:] = neg(mul(gam, D12))
        out[..., L + 3:, :L] = C21
        out[..., L + 3:, L] = mul(half, D21)
        out[..., L + 3:, L + 1] = C22
        out[..., L + 3:, L + 2] = neg(mul(ig2, D21))
        out[..., L + 3:, L + 3:] = D22
        return out

    def torus_image(self, ts, a: int, b: int) -> np.ndarray:
        """Closed form for the image of diag(s, [[a, b rho], [b, a]], s*) (field codes)."""
        F, l = self.F, self.l
        half, gam = F.inv[2 % F.p], F.gamma_code
        ig2 = F.inv[F.vmul(2 % F.p, gam)]
        mul, add, neg = F.vmul, F.vadd, F.vneg
        one = 1
        out = np.zeros((2 * l + 1, 2 * l + 1), dtype=np.int64)
        for i, t in enumerate(ts):
            out[i, i] = t
            out[2 * l - i, 2 * l - i] = F.inv[t]
        L = l - 1
        block = [
            [mul(half, add(one, a)), b, mul(ig2, add(one, neg(a)))],
            [mul(gam, b), a, neg(b)],
            [mul(mul(gam, half), add(one, neg(a))), neg(mul(gam, b)), mul(half, add(one, a))],
        ]
        out[L:L + 3, L:L + 3] = np.array(block, dtype=np.int64)
        return out


def embedding_index(maps: EmbeddingMaps, source: GroupContext, target: GroupContext) -> np.ndarray:
    """Index in `target` of the image of every element of `source`; membership is enforced."""
    if source.kind == "so-odd" and target.kind == "so-even":
        img = maps.odd_in_even(source.size, source.mats)
    elif source.kind == "so-even" and target.kind == "so-odd":
        img = maps.even_in_odd(source.mats)
    else:
        raise InvalidParameter(f"no embedding {source.name} -> {target.name}")
    idx = target.index(img, strict=False)
    if np.any(idx < 0):
        raise InternalError(f"embedding of {source.name} leaves {target.name}")
    return idx
