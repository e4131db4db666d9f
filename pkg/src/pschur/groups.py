"""Explicit enumeration of a pc group: multiplication tables and subgroup closure.

Elements are integers 0..p^n - 1; the exponent vector (a_1, ..., a_n) maps to
sum a_k p^(n-k), so g_1 is the most significant digit and the elements of
<g_i, ..., g_n> are exactly the indices below p^(n-i+1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GroupSizeError, InputError, PreconditionError
from .linalg import AbelianInvariants, abelian_quotient_invariants
from .pcgroup import Collector, PcPresentation

DEFAULT_CAP_EXPONENT = 8


@dataclass(frozen=True)
class Subgroup:
    """A subgroup given by generators and its full sorted element list."""

    gens: tuple
    elements: np.ndarray

    @property
    def order(self) -> int:
        return int(len(self.elements))

    def contains(self, x) -> bool:
        i = np.searchsorted(self.elements, x)
        return bool(i < len(self.elements) and self.elements[i] == x)

    def contains_all(self, xs) -> bool:
        xs = np.asarray(xs)
        i = np.searchsorted(self.elements, xs)
        i = np.minimum(i, len(self.elements) - 1)
        return bool(np.all(self.elements[i] == xs))

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return other.contains_all(self.elements)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and np.array_equal(self.elements, other.elements)

    def __hash__(self):
        return hash(self.elements.tobytes())


class PcGroup:
    """Enumerated finite p-group built from a consistent pc presentation."""

    def __init__(self, pres: PcPresentation, cap: int | None = None):
        self.pres = pres
        self.p = pres.p
        self.n = pres.n
        self.order = pres.p ** pres.n
        self.cap = cap if cap is not None else pres.p ** DEFAULT_CAP_EXPONENT
        if self.order > self.cap:
            raise GroupSizeError(f"|G| = {self.p}^{self.n} exceeds the enumeration cap {self.cap}")
        self._weights = np.array([self.p ** (self.n - 1 - k) for k in range(self.n)], dtype=np.int64)

    # basic conversions -------------------------------------------------------

    @cached_property
    def collector(self) -> Collector:
        return Collector.for_presentation(self.pres)

    @cached_property
    def digits(self) -> np.ndarray:
        idx = np.arange(self.order, dtype=np.int64)
        d = np.empty((self.order, self.n), dtype=np.int8)
        for k in range(self.n):
            d[:, k] = (idx // self._weights[k]) % self.p
        return d

    def index(self, exps) -> int:
        exps = tuple(exps)
        if len(exps) != self.n:
            raise InputError("exponent vector has the wrong length")
        return int(sum(int(e) % self.p * int(w) for e, w in zip(exps, self._weights)))

    def exps(self, x: int) -> tuple:
        return tuple(int(v) for v in self.digits[int(x)])

    def gen(self, i: int) -> int:
        return int(self._weights[i])

    @property
    def gens(self) -> list[int]:
        return [self.gen(i) for i in range(self.n)]

    # tables --------------------------------------------------------------

    @cached_property
    def table(self) -> np.ndarray:
        """T[x, k] = x * g_k, built level by level from the bottom of the series."""
        p, n = self.p, self.n
        T = np.zeros((max(self.order, 1), n), dtype=np.int64)
        D = self.digits
        coll = self.collector
        for i in range(n - 1, -1, -1):
            s = p ** (n - 1 - i)
            sub = D[:s]
            # conjugation by g_i on <g_{i+1}, ...>
            sigma = np.zeros(s, dtype=np.int64)
            for j in range(i + 1, n):
                cvec = coll._conj_gen_pow(j, i, 1)[0]
                for rep in range(1, p):
                    m = sub[:, j] >= rep
                    if not m.any():
                        break
                    sigma[m] = self._walk_const(T, sigma[m], cvec)
            # left multiplication by w_i = g_i^p
            wvec = self.pres.powers[i]
            left = np.full(s, self.index(wvec), dtype=np.int64)
            for k in range(i + 1, n):
                for rep in range(1, p):
                    m = sub[:, k] >= rep
                    if not m.any():
                        break
                    left[m] = T[left[m], k]
            rows = np.arange(s, dtype=np.int64)
            for a in range(1, p):
                T[a * s + rows, i + 1 :] = a * s + T[rows, i + 1 :]
            for a in range(p - 1):
                T[a * s + rows, i] = (a + 1) * s + sigma
            T[(p - 1) * s + rows, i] = left[sigma]
        return T

    @staticmethod
    def _walk_const(T, X, vec):
        for k, d in enumerate(vec):
            for _ in range(d):
                X = T[X, k]
        return X

    @cached_property
    def table_inv(self) -> np.ndarray:
        T = self.table
        Ti = np.empty_like(T)
        ar = np.arange(self.order, dtype=np.int64)
        for k in range(self.n):
            Ti[T[:, k], k] = ar
        return Ti

    def verify_tables(self) -> bool:
        """Each column of the table is a permutation."""
        T = self.table
        return all(len(np.unique(T[:, k])) == self.order for k in range(self.n))

    # element arithmetic (vectorised) ----------------------------------------

    def mul(self, X, Y):
        """Elementwise products X * Y of index arrays (broadcasting scalars)."""
        X, Y = np.broadcast_arrays(np.asarray(X, dtype=np.int64), np.asarray(Y, dtype=np.int64))
        shape = X.shape
        X = X.ravel().copy()
        Dy = self.digits[Y.ravel()]
        T = self.table
        for k in range(self.n):
            col = Dy[:, k]
            for rep in range(1, self.p):
                m = col >= rep
                if not m.any():
                    break
                X[m] = T[X[m], k]
        return X.reshape(shape)

    @cached_property
    def inverses(self) -> np.ndarray:
        cur = np.zeros(self.order, dtype=np.int64)
        D = self.digits
        Ti = self.table_inv
        for k in range(self.n - 1, -1, -1):
            for rep in range(1, self.p):
                m = D[:, k] >= rep
                if not m.any():
                    break
                cur[m] = Ti[cur[m], k]
        return cur

    def inv(self, X):
        return self.inverses[np.asarray(X, dtype=np.int64)]

    def comm(self, X, Y):
        """[x, y] = x^-1 y^-1 x y."""
        return self.mul(self.mul(self.inv(X), self.inv(Y)), self.mul(X, Y))

    def conj(self, X, Y):
        """x^y = y^-1 x y."""
        return self.mul(self.mul(self.inv(Y), X), Y)

    def power(self, X, k: int):
        X = np.asarray(X, dtype=np.int64)
        if k < 0:
            return self.power(self.inv(X), -k)
        out = np.zeros_like(X)
        base = X
        while k:
            if k & 1:
                out = self.mul(out, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return out

    def order_exponents(self, X) -> np.ndarray:
        """log_p of the order of each element."""
        Y = np.asarray(X, dtype=np.int64).copy()
        out = np.zeros(Y.shape, dtype=np.int64)
        while True:
            live = Y != 0
            if not live.any():
                return out
            out[live] += 1
            Y = self.power(Y, self.p)

    # subgroups ---------------------------------------------------------------

    def subgroup(self, elements, gens=()) -> Subgroup:
        return Subgroup(tuple(int(g) for g in gens), np.unique(np.asarray(elements, dtype=np.int64)))

    def closure(self, gens) -> Subgroup:
        gens = [int(g) for g in gens]
        gens_arr = np.array(sorted(set(g for g in gens if g != 0)), dtype=np.int64)
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        frontier = np.array([0], dtype=np.int64)
        while len(frontier) and len(gens_arr):
            prods = self.mul(frontier[:, None], gens_arr[None, :]).ravel()
            prods = np.unique(prods)
            new = prods[~mask[prods]]
            mask[new] = True
            frontier = new
        return Subgroup(tuple(gens), np.flatnonzero(mask).astype(np.int64))

    def normal_closure(self, gens) -> Subgroup:
        gens = [int(g) for g in gens]
        H = self.closure(gens)
        gg = np.array(self.gens, dtype=np.int64)
        while True:
            conj = np.unique(self.conj(H.elements[:, None], gg[None, :]).ravel())
            if H.contains_all(conj):
                return Subgroup(tuple(gens), H.elements)
            H = self.closure(np.concatenate([H.elements, conj]))

    def commutator_subgroup(self, A: Subgroup, B: Subgroup) -> Subgroup:
        """[A, B] for normal subgroups A, B."""
        c = np.unique(self.comm(A.elements[:, None], B.elements[None, :]).ravel())
        return self.normal_closure(c)

    @cached_property
    def whole(self) -> Subgroup:
        return Subgroup(tuple(self.gens), np.arange(self.order, dtype=np.int64))

    @cached_property
    def trivial(self) -> Subgroup:
        return Subgroup((), np.zeros(1, dtype=np.int64))

    @cached_property
    def derived_subgroup(self) -> Subgroup:
        g = np.array(self.gens, dtype=np.int64)
        c = np.unique(self.comm(g[:, None], g[None, :]).ravel())
        return self.normal_closure(c)

    @cached_property
    def lower_central_series(self) -> list[Subgroup]:
        """[G, gamma_2, ..., 1], ending with the trivial subgroup."""
        series = [self.whole]
        g = np.array(self.gens, dtype=np.int64)
        while series[-1].order > 1:
            cur = series[-1]
            c = np.unique(self.comm(cur.elements[:, None], g[None, :]).ravel())
            nxt = self.normal_closure(c)
            if nxt.order == cur.order:
                raise PreconditionError("lower central series does not terminate")
            series.append(nxt)
        return series

    @property
    def nilpotency_class(self) -> int:
        return len(self.lower_central_series) - 1

    @cached_property
    def center(self) -> Subgroup:
        ar = np.arange(self.order, dtype=np.int64)
        mask = np.ones(self.order, dtype=bool)
        for g in self.gens:
            mask &= self.mul(ar, g) == self.mul(g, ar)
        z = np.flatnonzero(mask).astype(np.int64)
        return Subgroup(tuple(int(x) for x in z), z)

    @cached_property
    def exponent(self) -> int:
        return self.p ** int(self.order_exponents(np.arange(self.order)).max(initial=0))

    def is_abelian(self) -> bool:
        return self.derived_subgroup.order == 1

    def is_central(self, K: Subgroup) -> bool:
        return self.center.contains_all(K.elements)

    def is_normal(self, K: Subgroup) -> bool:
        g = np.array(self.gens, dtype=np.int64)
        return K.contains_all(self.conj(K.elements[:, None], g[None, :]).ravel())

    @cached_property
    def abelianization(self) -> AbelianInvariants:
        return abelianization(self.pres)

    def abelian_invariants_of(self, H: Subgroup) -> AbelianInvariants:
        """Invariants of an abelian subgroup from its element-order statistics."""
        c = self.comm(H.elements[:, None], H.elements[None, :])
        if np.any(c):
            raise PreconditionError("subgroup is not abelian")
        return invariants_from_order_counts(self.p, self.order_exponents(H.elements))

    def is_elementary_abelian(self, H: Subgroup) -> bool:
        c = self.comm(H.elements[:, None], H.elements[None, :])
        return not np.any(c) and not np.any(self.power(H.elements, self.p))

    def central_subgroups_of_order_p(self) -> list[Subgroup]:
        """Every subgroup of order p inside Z(G), in increasing order of its smallest generator."""
        z = self.center.elements[1:]
        seen = set()
        out = []
        zp = z[self.power(z, self.p) == 0]
        for x in zp:
            if int(x) in seen:
                continue
            cyc = np.array([int(self.power(x, k)) for k in range(self.p)], dtype=np.int64)
            seen.update(int(v) for v in cyc)
            out.append(Subgroup((int(x),), np.unique(cyc)))
        return out

    # induced pc sequences ----------------------------------------------------

    def depth(self, X) -> np.ndarray:
        D = self.digits[np.asarray(X, dtype=np.int64)]
        nz = D != 0
        return np.where(nz.any(axis=-1), nz.argmax(axis=-1), self.n)

    def induced_sequence(self, H: Subgroup) -> dict[int, int]:
        """depth -> element with leading exponent 1, one per depth present in H."""
        els = H.elements[1:]
        dep = self.depth(els)
        seq = {}
        for d in sorted(set(int(x) for x in dep)):
            x = int(els[dep == d].min())
            a = self.exps(x)[d]
            seq[d] = int(self.power(x, pow(a, -1, self.p)))
        if len(seq) != round(np.log(H.order) / np.log(self.p)):
            raise PreconditionError("element set is not a subgroup")
        return seq

    def sift(self, x: int, seq: dict[int, int]) -> int:
        """Canonical representative of the coset x K (K given by its induced sequence)."""
        x = int(x)
        for d in sorted(seq):
            a = self.exps(x)[d]
            if a:
                x = int(self.mul(x, self.power(seq[d], (self.p - a) % self.p)))
        return x

    def sift_all(self, seq: dict[int, int], X=None) -> np.ndarray:
        """Vectorised ``sift`` over an index array (default: every element)."""
        X = np.arange(self.order, dtype=np.int64) if X is None else np.asarray(X, dtype=np.int64).copy()
        for d in sorted(seq):
            pw = np.array([int(self.power(seq[d], k)) for k in range(self.p)], dtype=np.int64)
            a = self.digits[X, d].astype(np.int64)
            X = self.mul(X, pw[(self.p - a) % self.p])
        return X


def invariants_from_order_counts(p: int, order_exps) -> AbelianInvariants:
    """Invariants of an abelian p-group from the orders of all its elements.

    For A = sum Z/p^{e_i}, the number of elements of order dividing p^k is
    p^{sum min(e_i, k)}.
    """
    order_exps = np.asarray(order_exps)
    total = len(order_exps)
    top = int(order_exps.max(initial=0))
    logs = []
    for k in range(top + 1):
        cnt = int(np.sum(order_exps <= k))
        lg = round(np.log(cnt) / np.log(p))
        if p**lg != cnt:
            raise PreconditionError("element counts are not p-powers")
        logs.append(lg)
    # ranks r_k = #{i : e_i >= k} = logs[k] - logs[k-1]
    ranks = [logs[k] - logs[k - 1] for k in range(1, top + 1)]
    exps = []
    for k in range(1, top + 1):
        nxt = ranks[k] if k < top else 0
        exps.extend([k] * (ranks[k - 1] - nxt))
    inv = AbelianInvariants(p, tuple(exps))
    if inv.order != total:
        raise PreconditionError("inconsistent element count")
    return inv


def abelianization(pres: PcPresentation) -> AbelianInvariants:
    """G/G' from the relations read additively: p e_i = w_i and [g_j, g_i] = 1."""
    n, p = pres.n, pres.p
    rels = []
    for i in range(n):
        r = [-int(x) for x in pres.powers[i]]
        r[i] += p
        rels.append(r)
    for j in range(n):
        for i in range(j):
            v = pres.comms[j][i]
            if any(v):
                rels.append([int(x) for x in v])
    inv, free = abelian_quotient_invariants(rels, n, p)
    if free:
        raise PreconditionError("abelianization is infinite; presentation is not of a finite p-group")
    return inv
