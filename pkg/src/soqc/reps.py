"""Generic representations, Bessel functions and Whittaker models, addressed by character."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .atlas import SubgroupAtlas, star
from .chartable import CharacterTable, character_table, lifting_prime, _primitive_root
from .cyclotomic import CycArray, CycNum, lcm
from .errors import InternalError, InvalidParameter, ResourceLimit
from .groups import GroupContext, build_group
from .field import FieldTable

ORACLE_BOUND = 10**4


def twist(arr: CycArray, p: int, exps) -> CycArray:
    """arr * zeta_p^exps, entrywise with broadcasting."""
    return arr.rotate(np.asarray(exps) * (arr.field.E // p))


def reduce_mod(arr: CycArray, ell: int, z: int) -> np.ndarray:
    """Image under zeta_E -> z in F_ell (ell = 1 mod E, z of order E)."""
    d = arr.field.d
    powers = np.array([pow(z, k, ell) for k in range(d)], dtype=object)
    num = arr.num.astype(object) % ell
    vals = (num @ powers) % ell
    return (vals * pow(arr.den, ell - 2, ell) % ell).astype(np.int64)


def rank_mod(M: np.ndarray, ell: int) -> int:
    M = M.copy() % ell
    rank = 0
    rows, cols = M.shape
    for c in range(cols):
        nz = np.nonzero(M[rank:, c])[0]
        if not len(nz):
            continue
        p = rank + nz[0]
        M[[rank, p]] = M[[p, rank]]
        M[rank] = M[rank] * pow(int(M[rank, c]), ell - 2, ell) % ell
        below = np.arange(rows) > rank
        M[below] = (M[below] - M[below, c:c + 1] * M[rank]) % ell
        rank += 1
        if rank == rows:
            break
    return rank


@dataclass
class RepProfile:
    index: int
    dim: int
    generic_multiplicity: int
    is_cuspidal: bool
    central_character: dict[int, CycNum]
    conjugate_id: int | None = None

    @property
    def is_generic(self) -> bool:
        return self.generic_multiplicity > 0

    def to_json(self) -> dict:
        return {"index": self.index, "dim": self.dim, "generic_multiplicity": self.generic_multiplicity,
                "generic": self.is_generic, "cuspidal": self.is_cuspidal,
                "central_character": {str(k): v.to_json() for k, v in sorted(self.central_character.items())},
                "conjugate": self.conjugate_id}


@dataclass
class BesselTable:
    """A Bessel function on every element of the group."""

    group: GroupContext
    rep: int
    variant: str
    values: CycArray
    meta: dict = dc_field(default_factory=dict)

    def at(self, g: int) -> CycNum:
        return self.values[int(g)].to_cyc()

    def same_as(self, other: BesselTable) -> bool:
        return bool(self.values.equals(other.values).all())

    def first_difference(self, other: BesselTable) -> int | None:
        bad = np.nonzero(~self.values.equals(other.values))[0]
        return int(bad[0]) if len(bad) else None

    def support(self) -> np.ndarray:
        return np.nonzero(~self.values.is_zero())[0]

    def to_json(self, keys=None) -> dict:
        """Values keyed by element index, or by the given labels (e.g. cell and torus data)."""
        nz = self.support()
        cyc = self.values[nz].to_cyc() if len(nz) else []
        labels = [str(int(g)) if keys is None else keys(int(g)) for g in nz]
        return {"rep": self.rep, "variant": self.variant,
                "values": dict(sorted(zip(labels, [c.to_json() for c in cyc])))}


class RepTheory:
    """Characters, profiles and Bessel functions of one enumerated group, values in Q(zeta_E)."""

    def __init__(self, G: GroupContext, conductor: int = 1):
        self.G = G
        self.atlas = SubgroupAtlas(G)
        self.p = G.field.p
        E = lcm(G.exponent, self.p, conductor)
        self.table = character_table(G, E)
        self.field = self.table.field

    def __repr__(self):
        return f"RepTheory({self.G.name}, E={self.field.E})"

    @property
    def default_variant(self) -> str:
        return {"so-even": "so", "gl": "gl", "so-odd": "so-odd"}[self.G.kind]

    @cached_property
    def _u_translates(self) -> np.ndarray:
        """Row k: index of g u_k for every g."""
        G = self.G
        U = self.atlas.U
        return G.index(G.space.matmul(G.mats[None], G.mats[U][:, None]))

    def psi_on_U(self, variant: str) -> np.ndarray:
        return self.atlas.psi_exponent(self.atlas.U, variant)

    # -- classification ---------------------------------------------------------

    def generic_multiplicity(self, i: int, variant: str | None = None) -> Fraction:
        """<Res_U chi, psi_variant>_U."""
        U = self.atlas.U
        vals = self.table.on_elements(i)[U]
        total = twist(vals, self.p, -self.psi_on_U(variant or self.default_variant)).sum(axis=0).to_cyc()
        if not total.is_rational():
            raise InternalError("generic multiplicity is not rational")
        return total.to_fraction() / len(U)

    def is_cuspidal(self, i: int) -> bool:
        chi = self.table.on_elements(i)
        return all(bool(chi[N].sum(axis=0).is_zero()) for N in self.atlas.radicals)

    def central_character(self, i: int) -> dict[int, CycNum]:
        chi = self.table.on_elements(i)
        deg = self.table.degrees[i]
        return {int(z): (chi[int(z)].to_cyc() / deg) for z in self.atlas.Z}

    def conjugate_id(self, i: int) -> int:
        G, C = self.G, self.G.classes
        cls = C.class_of[G.outer_perm[C.reps]]
        j = self.table.find_row(self.table.values[i][cls])
        if j < 0:
            raise InternalError("conjugated character matches no row")
        return j

    def classify(self, i: int, variant: str | None = None) -> RepProfile:
        m = self.generic_multiplicity(i, variant)
        if m.denominator != 1 or m < 0:
            raise InternalError(f"generic multiplicity {m} is not a non-negative integer")
        conj = self.conjugate_id(i) if self.G.kind == "so-even" else None
        return RepProfile(i, self.table.degrees[i], int(m), self.is_cuspidal(i),
                          self.central_character(i), conj)

    @cached_property
    def profiles(self) -> list[RepProfile]:
        return [self.classify(i) for i in range(len(self.table))]

    def generic_cuspidal(self) -> list[int]:
        return [p.index for p in self.profiles if p.is_generic and p.is_cuspidal]

    def generic(self, variant: str | None = None) -> list[int]:
        if variant is None or variant == self.default_variant:
            return [p.index for p in self.profiles if p.is_generic]
        return [i for i in range(len(self.table)) if self.generic_multiplicity(i, variant) > 0]

    # -- Bessel functions ---------------------------------------------------------

    def bessel(self, i: int, variant: str | None = None) -> BesselTable:
        """B(g) = |U|^-1 sum_u psi^-1(u) chi(g u); normalised and bi-(U, psi)-equivariant."""
        variant = variant or self.default_variant
        key = (i, variant)
        cache = self.__dict__.setdefault("_bessel_cache", {})
        if key in cache:
            return cache[key]
        if self.generic_multiplicity(i, variant) != 1:
            raise InvalidParameter(f"character {i} is not generic for psi variant {variant!r}")
        chi = self.table.on_elements(i)
        exps = self.psi_on_U(variant)
        p = self.p
        partial = np.zeros((p, self.G.order, self.field.d), dtype=np.int64)
        for row, k in zip(self._u_translates, exps):
            partial[k] += chi.num[row]
        acc = twist(CycArray(self.field, partial, chi.den), p, -np.arange(p)[:, None])
        values = acc.sum(axis=0).scale(Fraction(1, len(exps)))
        out = BesselTable(self.G, i, variant, values)
        cache[key] = out
        return out

    def conjugate_bessel(self, i: int) -> tuple[int, BesselTable]:
        """(index of chi^c, g -> B_chi(c t~^-1 g t~ c))."""
        G = self.G
        j = self.conjugate_id(i)
        tt = G.mats[G.t_tilde]
        tt_inv = G.mats[G.inverse[G.t_tilde]]
        c = G.outer_c
        moved = G.index(G.space.prod(c, tt_inv, G.mats, tt, c))
        B = self.bessel(i)
        return j, BesselTable(G, j, "so", B.values[moved], {"transported_from": i})

    # -- Whittaker-model oracle -----------------------------------------------------

    @cached_property
    def _cosets(self):
        """Right U-cosets U x: representatives, coset of each element, psi-exponent of g x^-1."""
        G, U = self.G, self.atlas.U
        coset = np.full(G.order, -1, dtype=np.int64)
        left = G.index(G.space.matmul(G.mats[U][:, None], G.mats[None]))  # left[u, g] = u g
        reps = []
        for g in range(G.order):
            if coset[g] < 0:
                coset[left[:, g]] = len(reps)
                reps.append(g)
        reps = np.array(reps)
        u_part = G.index(G.space.matmul(G.mats, G.mats[G.inverse[reps[coset]]]))
        return reps, coset, u_part

    def whittaker_oracle(self, i: int, variant: str | None = None) -> tuple[BesselTable, dict]:
        """Bessel function built inside Ind_U^G psi from the central idempotent of chi."""
        variant = variant or self.default_variant
        G, field, p = self.G, self.field, self.p
        reps, coset, u_part = self._cosets
        ncos = len(reps)
        if ncos > ORACLE_BOUND:
            raise ResourceLimit(f"induced space of dimension {ncos} exceeds {ORACLE_BOUND}", ncos)
        phase = self.atlas.psi_exponent(u_part, variant)  # f(g) = psi(g x^-1) f(x)
        chi_bar = self.table.on_elements(i).conj()
        # (R(h) f)[j] = psi^{ph[j, h]} f[tgt[j, h]]
        xh = np.stack([G.index(G.space.matmul(G.mats[x], G.mats)) for x in reps])
        tgt, ph = coset[xh], phase[xh]
        diagnostics = {"dimension": ncos}
        for start in range(ncos):
            acc = np.zeros((p, ncos, field.d), dtype=np.int64)
            for j in range(ncos):
                hs = np.nonzero(tgt[j] == start)[0]
                np.add.at(acc[:, j], ph[j, hs], chi_bar.num[hs])
            vec = twist(CycArray(field, acc, chi_bar.den), p, np.arange(p)[:, None]).sum(axis=0)
            v0 = self._average_over_U(vec, tgt, ph, variant)
            if not bool(v0.is_zero().all()):
                diagnostics["start_vector"] = int(start)
                break
        else:
            raise InternalError("Whittaker vector vanished for every start vector")
        full = twist(v0[coset], p, phase)
        ident = full[G.identity].to_cyc()
        if ident.is_zero():
            raise InternalError("Whittaker functional vanishes on the Whittaker vector")
        values = full * ident.inverse()
        diagnostics["equivariant"] = self._is_whittaker_vector(v0, tgt, ph, variant)
        return BesselTable(G, i, variant, values, {"oracle": True}), diagnostics

    def _average_over_U(self, vec: CycArray, tgt, ph, variant) -> CycArray:
        """|U|^-1 sum_u psi^-1(u) R(u) vec."""
        U = self.atlas.U
        exps = self.atlas.psi_exponent(U, variant)
        out = None
        for u, k in zip(U, exps):
            term = twist(vec[tgt[:, u]], self.p, (ph[:, u] - k) % self.p)
            out = term if out is None else out + term
        return out.scale(Fraction(1, len(U)))

    def _is_whittaker_vector(self, v0, tgt, ph, variant) -> bool:
        """R(u) v0 = psi(u) v0 for every u in U."""
        for u, k in zip(self.atlas.U, self.atlas.psi_exponent(self.atlas.U, variant)):
            moved = twist(v0[tgt[:, u]], self.p, ph[:, u])
            if not bool(moved.equals(twist(v0, self.p, k)).all()):
                return False
        return True


# -- GL_n Whittaker data ----------------------------------------------------------------

@dataclass
class GLWhittakerData:
    """A psi^-1-generic irreducible tau of GL_n, with W_x(a) = B_tau(a x) spanning its model."""

    theory: RepTheory
    index: int
    bessel: BesselTable

    @property
    def n(self) -> int:
        return self.theory.G.size

    @property
    def group(self) -> GroupContext:
        return self.theory.G

    def W(self, x: int) -> CycArray:
        """a -> Lambda(tau(a) tau(x) v0) = B_tau(a x), over all a."""
        return self.bessel.values[self.group.right_translate(x)]

    @cached_property
    def d_star(self) -> np.ndarray:
        """index of d_n a* for every a."""
        G = self.group
        n = G.size
        d = np.diag([G.field.neg[1] if i % 2 == 0 else 1 for i in range(n)])
        return G.index(G.space.matmul(d, star(G.space, G.mats)))

    def W_star(self, x: int) -> CycArray:
        """a -> W_x(d_n a*)."""
        return self.W(x)[self.d_star]

    def to_json(self) -> dict:
        return {"n": self.n, "index": self.index, "dim": self.theory.table.degrees[self.index]}


def gl_theory(n: int, F: FieldTable, conductor: int = 1) -> RepTheory:
    return RepTheory(build_group("gl", F, n), conductor)


def gl_whittaker(theory: RepTheory) -> list[GLWhittakerData]:
    """Every psi^-1-generic irreducible of GL_n with its Bessel function."""
    if theory.G.kind != "gl":
        raise InvalidParameter("GL Whittaker data needs a GL_n group")
    return [GLWhittakerData(theory, i, theory.bessel(i, "gl-inverse"))
            for i in theory.generic("gl-inverse")]


def whittaker_span_check(taus: list[GLWhittakerData], X) -> bool:
    """The vectors (W_v(y))_y over y in coset representatives of U.X, all v and tau, span."""
    if not taus:
        return False
    theory = taus[0].theory
    G = theory.G
    X = np.asarray(X)
    coset = theory._cosets[1]
    reps = theory._cosets[0]
    ys = reps[np.unique(coset[X])]
    E = theory.field.E
    ell = lifting_prime(E, 1)
    z = pow(_primitive_root(ell), (ell - 1) // E, ell)
    rows = []
    for tau in taus:
        for x in range(G.order):
            rows.append(reduce_mod(tau.W(x)[ys], ell, z))
    return rank_mod(np.array(rows), ell) == len(ys)
