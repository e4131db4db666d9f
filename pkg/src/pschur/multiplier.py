"""Schur multiplier engines.

* ``blackburn_evens``: order of M(G) for odd-p class-2 groups with elementary abelian
  G/G' and G', from subspaces of (G/G') (x) G'.
* ``schur_tails``: full invariants via a tailed presentation (Hopf's formula).
* closed formulas for abelian groups and direct products.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import InconsistentPresentation, InternalError, PreconditionError
from .groups import PcGroup
from .linalg import AbelianInvariants, Subspace, abelian_quotient_invariants, span
from .pcgroup import Collector, PcPresentation, format_word, overlaps


@dataclass
class MultiplierResult:
    p: int
    order_exponent: int
    invariants: AbelianInvariants | None
    method: str
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.invariants is not None and self.invariants.order_exponent != self.order_exponent:
            raise InternalError("multiplier order disagrees with its invariants")

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "order_exponent": self.order_exponent,
            "invariants": None if self.invariants is None else self.invariants.to_json(),
            "diagnostics": self.diagnostics,
        }

    def describe(self) -> str:
        if self.invariants is not None:
            return str(self.invariants)
        return f"order {self.p}^{self.order_exponent}"


# ---------------------------------------------------------------------------
# closed formulas


def multiplier_of_abelian(inv: AbelianInvariants) -> AbelianInvariants:
    """M(sum Z/p^{e_i}) = sum_{i<j} Z/p^{min(e_i, e_j)}."""
    e = inv.exponents  # sorted descending
    return AbelianInvariants(inv.p, tuple(e[j] for i in range(len(e)) for j in range(i + 1, len(e))))


def tensor_of_abelian(a: AbelianInvariants, b: AbelianInvariants) -> AbelianInvariants:
    if a.p != b.p:
        raise PreconditionError("tensor of groups for different primes")
    return AbelianInvariants(a.p, tuple(min(x, y) for x in a.exponents for y in b.exponents))


def multiplier_of_direct_product(MA, MB, Aab, Bab) -> AbelianInvariants:
    return MA + MB + tensor_of_abelian(Aab, Bab)


def green_exponent(n: int) -> int:
    return n * (n - 1) // 2


def corank_report(n: int, order_exponent: int, abelian: bool) -> tuple[int, int | None]:
    """(t, s) with |M| = p^{n(n-1)/2 - t} and, for non-abelian G, p^{(n-1)(n-2)/2 + 1 - s}."""
    t = green_exponent(n) - order_exponent
    s = None if abelian else (n - 1) * (n - 2) // 2 + 1 - order_exponent
    return t, s


# ---------------------------------------------------------------------------
# tails engine


def tails_relation_matrix(pres: PcPresentation) -> list[list[int]]:
    """One integer relation among the relation tails per overlap test."""
    coll = Collector.tailed(pres)
    rows = []
    for name, lhs, rhs in overlaps(coll):
        if lhs[0] != rhs[0]:
            raise InconsistentPresentation(name, format_word(lhs[0]), format_word(rhs[0]))
        row = [a - b for a, b in zip(lhs[1], rhs[1])]
        if any(row):
            rows.append(row)
    return rows


def schur_tails(pres: PcPresentation) -> MultiplierResult:
    """M(G) as the torsion of R/[F,R] for the pc presentation F/R.

    Each of the m = n(n+1)/2 relations gets a free central tail; the overlap tests
    then force the linear relations that hold in F/[F,R].  R/[F,R] is Z^n + M(G),
    so the free rank must equal n, which is checked.
    """
    n = pres.n
    m = pres.relation_count
    rows = tails_relation_matrix(pres)
    inv, free = abelian_quotient_invariants(rows, m, pres.p) if m else (AbelianInvariants(pres.p), 0)
    if free != n:
        raise InternalError(f"tails free rank {free}, expected {n}")
    return MultiplierResult(
        pres.p,
        inv.order_exponent,
        inv,
        "tails",
        {"relations": m, "overlap_rows": len(rows), "free_rank": free},
    )


# ---------------------------------------------------------------------------
# Blackburn-Evens


@dataclass
class BEData:
    p: int
    V_dim: int
    W_dim: int
    bilinear: np.ndarray  # (r, r, s): (v_i, v_j) in W coordinates
    f: np.ndarray  # (r, s): f(v_i) = g_i^p
    X1: Subspace
    X2: Subspace
    X: Subspace

    @property
    def wedge_dim(self) -> int:
        return self.V_dim * (self.V_dim - 1) // 2

    @property
    def tensor_dim(self) -> int:
        return self.V_dim * self.W_dim

    @property
    def N_dim(self) -> int:
        return self.tensor_dim - self.X.dim


def subgroup_coordinates(G: PcGroup, seq: dict, x: int) -> list[int]:
    """Exponents of x along an induced sequence (x must lie in the subgroup)."""
    out = []
    x = int(x)
    for d in sorted(seq):
        a = G.exps(x)[d]
        out.append(a)
        if a:
            x = int(G.mul(x, G.power(seq[d], -a)))
    if x != 0:
        raise InternalError("element is not in the subgroup")
    return out


def _be_setup(G: PcGroup):
    p = G.p
    if p == 2:
        raise PreconditionError("Blackburn-Evens engine requires odd p")
    cls = G.nilpotency_class
    if cls != 2:
        raise PreconditionError(f"Blackburn-Evens engine requires class 2 (got class {cls})")
    if not G.abelianization.is_elementary:
        raise PreconditionError("G/G' is not elementary abelian")
    D = G.derived_subgroup
    if not G.is_elementary_abelian(D):
        raise PreconditionError("G' is not elementary abelian")
    seq = G.induced_sequence(D)
    vgens = [d for d in range(G.n) if d not in seq]
    return D, seq, vgens


def be_data(pres: PcPresentation, G: PcGroup | None = None, order=None) -> BEData:
    """Assemble V, W, the commutator form, f and the subspaces X1, X2, X.

    ``order`` permutes the basis of V (used to check basis independence).
    """
    G = G or PcGroup(pres)
    p = G.p
    D, seq, vgens = _be_setup(G)
    if order is not None:
        vgens = [vgens[k] for k in order]
    r, s = len(vgens), len(seq)
    lifts = [G.gen(d) for d in vgens]
    B = np.zeros((r, r, s), dtype=np.int64)
    for i in range(r):
        for j in range(i + 1, r):
            c = subgroup_coordinates(G, seq, int(G.comm(lifts[i], lifts[j])))
            B[i, j] = c
            B[j, i] = [(-x) % p for x in c]
    F = np.zeros((r, s), dtype=np.int64)
    for i in range(r):
        F[i] = subgroup_coordinates(G, seq, int(G.power(lifts[i], p)))
    _check_f_linear(G, lifts, seq, F)

    def tensor(v, w):
        return np.outer(v, w).ravel() % p

    e = np.eye(r, dtype=np.int64)
    x1 = []
    for i, j, k in itertools.combinations(range(r), 3):
        x1.append((tensor(e[i], B[j, k]) + tensor(e[j], B[k, i]) + tensor(e[k], B[i, j])) % p)
    x2 = [tensor(e[i], F[i]) for i in range(r)]
    for i, j in itertools.combinations(range(r), 2):
        v = e[i] + e[j]
        x2.append(tensor(v, (v @ F) % p))
    amb = r * s
    X1 = span(x1, p, amb)
    X2 = span(x2, p, amb)
    X = X1 + X2
    _check_x2_spans(p, F, X2, r)
    return BEData(p, r, s, B, F, X1, X2, X)


def _check_f_linear(G, lifts, seq, F, samples=20, seed=1):
    """g -> g^p is additive on G/G' in this regime; sample a few products."""
    rng = random.Random(seed)
    p = G.p
    r = len(lifts)
    for _ in range(samples):
        c = [rng.randrange(p) for _ in range(r)]
        g = 0
        for x, k in zip(lifts, c):
            g = int(G.mul(g, G.power(x, k)))
        # multiply by a random element of G' to test independence of the lift
        h = int(G.mul(g, G.derived_subgroup.elements[rng.randrange(G.derived_subgroup.order)]))
        got = subgroup_coordinates(G, seq, int(G.power(h, p)))
        want = (np.array(c) @ F) % p if r else np.zeros(len(seq), dtype=np.int64)
        if list(want) != got:
            raise InternalError("p-power map is not linear on G/G'")


def _check_x2_spans(p, F, X2, r, samples=20, seed=2):
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        v = rng.integers(0, p, size=r)
        if not X2.contains(np.outer(v, (v @ F) % p).ravel() % p):
            raise InternalError("X2 spanning set misses a value v (x) f(v)")


def blackburn_evens(pres: PcPresentation, G: PcGroup | None = None) -> MultiplierResult:
    data = be_data(pres, G)
    k = data.wedge_dim - data.W_dim + data.tensor_dim - data.X.dim
    if k < 0:
        raise InternalError("negative multiplier order")
    return MultiplierResult(
        pres.p,
        k,
        None,
        "be",
        {
            "dimV": data.V_dim,
            "dimW": data.W_dim,
            "dimX": data.X.dim,
            "dimX1": data.X1.dim,
            "dimX2": data.X2.dim,
            "dimN": data.N_dim,
        },
    )


def be_applicable(G: PcGroup) -> tuple[bool, str | None]:
    try:
        _be_setup(G)
    except PreconditionError as exc:
        return False, str(exc)
    return True, None
