"""Exact linear algebra over GF(p), Z/p^e and Z.

GF(p) work is dense numpy with int64 entries.  Integer Smith normal form uses
Python ints so entries may grow without overflow.  The Z/p^e routines exploit
that Z/p^e is a local ring: an entry of minimal p-adic valuation divides every
other entry, so elimination never needs gcd steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .errors import ForeignTorsionError, InputError


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


# ---------------------------------------------------------------------------
# GF(p)


@dataclass(frozen=True, eq=False)
class FpMatrix:
    p: int
    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=np.int64)
        if a.ndim == 1:
            a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
        object.__setattr__(self, "entries", np.mod(a, self.p))
        self.entries.setflags(write=False)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.p, self.entries.T)

    def __eq__(self, other):
        return (
            isinstance(other, FpMatrix)
            and self.p == other.p
            and self.entries.shape == other.entries.shape
            and bool(np.all(self.entries == other.entries))
        )


def _echelon(a: np.ndarray, p: int):
    """Reduced row echelon form in place; returns (matrix, pivot columns)."""
    a = np.mod(np.array(a, dtype=np.int64, copy=True), p)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def row_reduce(m: FpMatrix) -> tuple[FpMatrix, int]:
    """Reduced row echelon form and rank.

    Pivot is the first nonzero column, taking the smallest row index within it,
    so the output is a deterministic function of the input.
    """
    if m.entries.size == 0:
        return m, 0
    a, pivots = _echelon(m.entries, m.p)
    return FpMatrix(m.p, a), len(pivots)


def rank_mod_p(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(_echelon(a, p)[1])


@dataclass(frozen=True, eq=False)
class Subspace:
    """Row space of an echelon basis inside GF(p)^ambient."""

    p: int
    ambient: int
    basis: np.ndarray
    pivots: tuple[int, ...] = field(default=())

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def contains(self, v) -> bool:
        v = np.mod(np.asarray(v, dtype=np.int64), self.p)
        if v.shape != (self.ambient,):
            raise InputError("vector dimension mismatch")
        for row, c in zip(self.basis, self.pivots):
            if v[c]:
                v = (v - v[c] * row) % self.p
        return not v.any()

    def __add__(self, other: "Subspace") -> "Subspace":
        if other.ambient != self.ambient or other.p != self.p:
            raise InputError("subspaces live in different spaces")
        return span(np.vstack([self.basis, other.basis]), self.p, self.ambient)


def span(vectors, p: int, ambient: int | None = None) -> Subspace:
    """Echelonized span of a collection of GF(p) vectors."""
    rows = [np.asarray(v, dtype=np.int64).ravel() for v in vectors] if not isinstance(vectors, np.ndarray) else list(vectors)
    if ambient is None:
        if not rows:
            raise InputError("ambient dimension required for an empty spanning set")
        ambient = rows[0].shape[0]
    if any(r.shape[0] != ambient for r in rows):
        raise InputError("all vectors must have the same ambient dimension")
    if not rows:
        return Subspace(p, ambient, np.zeros((0, ambient), dtype=np.int64), ())
    a, pivots = _echelon(np.vstack(rows), p)
    return Subspace(p, ambient, a[: len(pivots)], tuple(pivots))


span_dim = span


# ---------------------------------------------------------------------------
# Abelian p-groups


@dataclass(frozen=True)
class AbelianInvariants:
    """The abelian group Z/p^e1 + Z/p^e2 + ..., exponents sorted descending."""

    p: int
    exponents: tuple[int, ...] = ()

    def __post_init__(self):
        if any(e < 1 for e in self.exponents):
            raise InputError(f"exponents must be positive: {self.exponents}")
        object.__setattr__(self, "exponents", tuple(sorted(self.exponents, reverse=True)))

    @classmethod
    def elementary(cls, p: int, rank: int) -> "AbelianInvariants":
        return cls(p, (1,) * rank)

    @property
    def order_exponent(self) -> int:
        return sum(self.exponents)

    @property
    def order(self) -> int:
        return self.p ** self.order_exponent

    @property
    def rank(self) -> int:
        return len(self.exponents)

    @property
    def is_trivial(self) -> bool:
        return not self.exponents

    @property
    def is_elementary(self) -> bool:
        return all(e == 1 for e in self.exponents)

    def __add__(self, other: "AbelianInvariants") -> "AbelianInvariants":
        if other.p != self.p:
            raise InputError("direct sum of groups for different primes")
        return AbelianInvariants(self.p, self.exponents + other.exponents)

    def __str__(self):
        if not self.exponents:
            return "1"
        return " x ".join(f"Z_{self.p ** e}" for e in self.exponents)

    def to_json(self):
        return [self.p ** e for e in self.exponents]


def invariants_from_divisors(divisors: Iterable[int], p: int) -> AbelianInvariants:
    exps = []
    for d in divisors:
        d = abs(int(d))
        if d in (0, 1):
            continue
        e = 0
        while d % p == 0:
            d //= p
            e += 1
        if d != 1:
            raise ForeignTorsionError(f"elementary divisor with a factor prime to {p}")
        exps.append(e)
    return AbelianInvariants(p, tuple(exps))


# ---------------------------------------------------------------------------
# Integer Smith normal form


def smith_normal_form(a: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form: d1 | d2 | ... with zeros last.

    Returns min(rows, cols) entries, all nonnegative.
    """
    m = [[int(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if any(len(r) != cols for r in m):
        raise InputError("ragged integer matrix")
    diag = []
    t = 0
    # drop all-zero rows early; they never contribute
    m = [r for r in m if any(r)]
    rows = len(m)
    while t < min(rows, cols):
        # smallest nonzero absolute value in the trailing block
        best = None
        for i in range(t, rows):
            ri = m[i]
            for j in range(t, cols):
                v = ri[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        m[t], m[i] = m[i], m[t]
        if j != t:
            for r in m:
                r[t], r[j] = r[j], r[t]
        while True:
            piv = m[t][t]
            done = True
            # clear column t
            for i in range(t + 1, rows):
                v = m[i][t]
                if v:
                    q = v // piv
                    if q:
                        rt, ri = m[t], m[i]
                        for j in range(t, cols):
                            if rt[j]:
                                ri[j] -= q * rt[j]
                    if m[i][t]:
                        done = False
            # clear row t
            rt = m[t]
            for j in range(t + 1, cols):
                v = rt[j]
                if v:
                    q = v // piv
                    if q:
                        for r in m[t:]:
                            if r[t]:
                                r[j] -= q * r[t]
                    if rt[j]:
                        done = False
            if done:
                # divisibility of the trailing block
                bad = None
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if m[i][j] % piv:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                rb, rt = m[bad], m[t]
                for j in range(t, cols):
                    rt[j] += rb[j]
                continue
            # move the smallest remaining entry of row/column t to the pivot
            cand = [(abs(m[i][t]), i, t) for i in range(t, rows) if m[i][t]]
            cand += [(abs(m[t][j]), t, j) for j in range(t, cols) if m[t][j]]
            _, i, j = min(cand)
            m[t], m[i] = m[i], m[t]
            if j != t:
                for r in m:
                    r[t], r[j] = r[j], r[t]
        diag.append(abs(m[t][t]))
        t += 1
    diag.sort(key=lambda d: (d == 0, d))
    return diag + [0] * (min(len(a), cols) - len(diag))


def abelian_quotient_invariants(
    relations: Sequence[Sequence[int]], ngens: int, p: int
) -> tuple[AbelianInvariants, int]:
    """p-torsion and free rank of Z^ngens / rowspace(relations)."""
    rels = [list(r) for r in relations]
    if any(len(r) != ngens for r in rels):
        raise InputError(f"relation rows must have {ngens} columns")
    if not rels or ngens == 0:
        return AbelianInvariants(p), ngens
    divs = smith_normal_form(rels)
    rank = sum(1 for d in divs if d)
    return invariants_from_divisors(divs, p), ngens - rank


# ---------------------------------------------------------------------------
# Z/p^e (local ring) elimination


def valuation_array(a: np.ndarray, p: int, e: int) -> np.ndarray:
    """Entrywise p-adic valuation of residues mod p^e; zero maps to e."""
    v = np.zeros(a.shape, dtype=np.int64)
    q = 1
    for _ in range(e):
        q *= p
        v += (a % q == 0)
    return v


@dataclass
class LocalSmith:
    """Result of Smith reduction over Z/p^e.

    ``valuations[i]`` is the valuation of the i-th diagonal entry for i < len(valuations);
    all later columns are zero columns.  ``v`` and ``v_inv`` are the column transform and
    its inverse (``None`` unless requested), so that R @ a @ v is diagonal for some
    invertible row transform R.
    """

    p: int
    e: int
    cols: int
    valuations: list[int]
    v: np.ndarray | None = None
    v_inv: np.ndarray | None = None

    def cokernel(self) -> AbelianInvariants:
        """Invariants of (Z/p^e)^cols modulo the row module."""
        exps = [v for v in self.valuations if v > 0]
        exps += [self.e] * (self.cols - len(self.valuations))
        return AbelianInvariants(self.p, tuple(exps))


def local_smith(a, p: int, e: int, transforms: bool = False) -> LocalSmith:
    q = p ** e
    a = np.mod(np.array(a, dtype=np.int64, copy=True), q)
    if a.ndim != 2:
        raise InputError("matrix expected")
    rows, cols = a.shape
    v = np.eye(cols, dtype=np.int64) if transforms else None
    vi = np.eye(cols, dtype=np.int64) if transforms else None
    vals = []
    # zero rows carry no information
    a = a[np.any(a, axis=1)]
    rows = a.shape[0]
    t = 0
    while t < min(rows, cols):
        block = a[t:, t:]
        # unit pivots first; valuations are only needed once none are left
        units = (block % p) != 0
        if units.any():
            k = int(np.argmax(units))
            vmin = 0
        else:
            val = valuation_array(block, p, e)
            k = int(np.argmin(val))
            vmin = int(val.flat[k])
            if vmin >= e:
                break
        i, j = divmod(k, block.shape[1])
        i += t
        j += t
        if i != t:
            a[[t, i]] = a[[i, t]]
        if j != t:
            a[:, [t, j]] = a[:, [j, t]]
            if transforms:
                v[:, [t, j]] = v[:, [j, t]]
                vi[[t, j]] = vi[[j, t]]
        pv = p ** vmin
        unit = int(a[t, t]) // pv
        a[t] = (a[t] * pow(unit, -1, q)) % q
        # clear column t below
        col = a[t + 1 :, t] // pv
        nz = np.nonzero(col)[0]
        if nz.size:
            rr = nz + t + 1
            a[rr] = (a[rr] - np.outer(col[nz], a[t])) % q
        # clear row t to the right via column operations
        k_row = a[t, t + 1 :] // pv
        if transforms and k_row.any():
            v[:, t + 1 :] = (v[:, t + 1 :] - np.outer(v[:, t], k_row)) % q
            vi[t] = (vi[t] + k_row @ vi[t + 1 :]) % q
        a[t, t + 1 :] = 0
        vals.append(vmin)
        t += 1
    return LocalSmith(p, e, cols, vals, v, vi)


def kernel_mod_prime_power(a, p: int, e: int) -> tuple[np.ndarray, list[int], LocalSmith]:
    """Generators of {x : a x = 0 mod p^e} as columns, their orders (as p-exponents),
    and the Smith data they were read from."""
    a = np.asarray(a, dtype=np.int64)
    cols = a.shape[1]
    ls = local_smith(a, p, e, transforms=True)
    q = p ** e
    gens, orders = [], []
    for i in range(cols):
        vi = ls.valuations[i] if i < len(ls.valuations) else e
        if vi == 0:
            continue
        gens.append((ls.v[:, i] * p ** (e - vi)) % q)
        orders.append(vi)
    mat = np.array(gens, dtype=np.int64).T if gens else np.zeros((cols, 0), dtype=np.int64)
    return mat, orders, ls


def subquotient_invariants(a, b, p: int, e: int, ls: LocalSmith | None = None) -> AbelianInvariants:
    """Invariants of ker(a) / span(columns of b) over Z/p^e.

    Columns of b must lie in ker(a); this is checked.  ``ls`` may carry a Smith
    reduction of a (with transforms) computed earlier.
    """
    q = p ** e
    a = np.asarray(a, dtype=np.int64)
    b = np.mod(np.asarray(b, dtype=np.int64), q)
    cols = a.shape[1]
    if ls is None:
        ls = local_smith(a, p, e, transforms=True)
    if b.size and np.any((a @ b) % q):
        raise InputError("image is not contained in the kernel")
    y = (ls.v_inv @ b) % q if b.size else np.zeros((cols, 0), dtype=np.int64)
    orders = []
    coeff_rows = []
    for i in range(cols):
        vi = ls.valuations[i] if i < len(ls.valuations) else e
        if vi == 0:
            continue
        shift = p ** (e - vi)
        yi = y[i]
        if np.any(yi % shift):
            raise InputError("image vector outside the computed kernel")
        coeff_rows.append((yi // shift) % (p ** vi))
        orders.append(vi)
    k = len(orders)
    if k == 0:
        return AbelianInvariants(p)
    rel = np.array(coeff_rows, dtype=np.int64).T  # one row per image vector
    rel = np.vstack([rel, np.diag([p ** o for o in orders])]) if rel.size else np.diag([p ** o for o in orders])
    return local_smith(rel, p, e).cokernel()


def gcd_list(xs: Iterable[int]) -> int:
    g = 0
    for x in xs:
        g = gcd(g, int(x))
    return g
