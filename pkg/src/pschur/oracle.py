"""Brute-force Schur multipliers from 2-cocycles with coefficients in Z/p^e.

H^2(G, Z/p^e) = Ext(G^ab, Z/p^e) + Hom(M(G), Z/p^e), so once p^e reaches the
exponent of M(G) the multiplier can be read off from H^2.

Normalized cocycles are pinned down by their values c(u, x) on the edges of the
Cayley graph (x a pc generator): the cocycle identity with third argument x,

    c(g, h x) = c(g, h) + c(g h, x) - c(h, x),

expresses every c(g, w) through edge values along a BFS spanning tree.  The
remaining identities (non-tree edges) are the linear constraints, and the identity
for generators implies it for all third arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import GroupSizeError, InternalError
from .groups import PcGroup
from .linalg import AbelianInvariants, kernel_mod_prime_power, subquotient_invariants
from .multiplier import MultiplierResult

DEFAULT_CAP = 128
MAX_CAP = 256


def _check_cap(G: PcGroup, cap: int | None):
    cap = DEFAULT_CAP if cap is None else cap
    if G.order > cap:
        raise GroupSizeError(f"|G| = {G.order} exceeds the oracle cap {cap}")


class EdgeSystem:
    """Cocycle constraints in edge coordinates for one enumerated group."""

    def __init__(self, G: PcGroup, perm: np.ndarray | None = None):
        self.G = G
        N, n = G.order, G.n
        self.N, self.n = N, n
        self.S = np.array(G.gens, dtype=np.int64)
        # optional relabelling of the group elements (order of BFS / variables)
        self.perm = np.arange(N) if perm is None else np.asarray(perm)
        # variables: (u, k) for u != 1, indexed by position of u in the relabelled order
        pos = np.empty(N, dtype=np.int64)
        pos[self.perm] = np.arange(N)
        self.pos = pos
        self.q = (N - 1) * n
        self.R = G.mul(np.arange(N)[:, None], self.S[None, :])  # R[u, k] = u x_k
        self.MT = G.mul(np.arange(N)[:, None], np.arange(N)[None, :])
        # VAR[u, k]: variable of edge (u, x_k); identity edges map to the dummy index q
        p0 = pos[0]
        slot = np.where(pos > p0, pos - 1, pos)
        self.VAR = slot[:, None] * n + np.arange(n)[None, :]
        self.VAR[0, :] = self.q
        self._bfs()

    def var(self, u, k):
        """Variable index of edge (u, x_k); identity edges map to the dummy slot q."""
        return self.VAR[np.asarray(u), k]

    def _bfs(self):
        N = self.N
        parent = np.full(N, -1, dtype=np.int64)
        via = np.full(N, -1, dtype=np.int64)
        seen = np.zeros(N, dtype=bool)
        seen[0] = True
        order = [0]
        frontier = [0]
        while frontier:
            nxt = []
            for h in sorted(frontier, key=lambda z: self.pos[z]):
                for k in range(self.n):
                    w = int(self.R[h, k])
                    if not seen[w]:
                        seen[w] = True
                        parent[w], via[w] = h, k
                        order.append(w)
                        nxt.append(w)
            frontier = nxt
        if len(order) != N:
            raise InternalError("Cayley graph is not connected")
        self.parent, self.via, self.order = parent, via, order

    def expr(self, gs) -> np.ndarray:
        """E[a, w] = coefficient vector of c(gs[a], w) in edge variables."""
        gs = np.atleast_1d(np.asarray(gs, dtype=np.int64))
        E = np.zeros((len(gs), self.N, self.q + 1), dtype=np.int32)  # last column absorbs identity edges
        ar = np.arange(len(gs))
        for w in self.order[1:]:
            h, k = int(self.parent[w]), int(self.via[w])
            E[:, w] = E[:, h]
            E[ar, w, self.VAR[self.MT[gs, h], k]] += 1
            E[:, w, self.VAR[h, k]] -= 1
        return E[:, :, : self.q]

    def constraint_block(self, gs) -> np.ndarray:
        """Rows e(h,x) - e(gh,x) + E[g, hx] - E[g, h] over g in gs, all h and generators x."""
        gs = np.atleast_1d(np.asarray(gs, dtype=np.int64))
        E = self.expr(gs)
        N, n, q = self.N, self.n, self.q
        h = np.repeat(np.arange(N), n)
        k = np.tile(np.arange(n), N)
        hx = self.R[h, k]
        M = np.zeros((len(gs), len(h), q + 1), dtype=np.int64)
        M[:, :, :q] = E[:, hx] - E[:, h]
        rows = np.arange(len(h))
        for a, g in enumerate(gs):
            np.add.at(M[a], (rows, self.VAR[h, k]), 1)
            np.add.at(M[a], (rows, self.VAR[self.MT[g, h], k]), -1)
        return M[:, :, :q].reshape(-1, q)

    def coboundaries(self) -> np.ndarray:
        """Columns: delta(phi_v) for phi the indicator of v != 1, in edge coordinates."""
        N, n = self.N, self.n
        B = np.zeros((self.q, N - 1), dtype=np.int64)
        col = lambda v: np.where(self.pos[v] > self.pos[0], self.pos[v] - 1, self.pos[v])
        for u in range(1, N):
            for k in range(n):
                r = int(self.VAR[u, k])
                x, ux = int(self.S[k]), int(self.R[u, k])
                B[r, col(x)] += 1
                if ux != 0:
                    B[r, col(ux)] -= 1
                B[r, col(u)] += 1
        return B


def _chunks(sys: EdgeSystem, budget: int = 4_000_000):
    size = max(1, budget // max(1, sys.N * sys.n * (sys.q + 1)))
    g = np.arange(1, sys.N)
    return [g[i : i + size] for i in range(0, len(g), size)]


def _compressed(sys: EdgeSystem, modulus: int, nrows: int, rng) -> np.ndarray:
    """Random integer combinations of all constraint rows, reduced mod p^e.

    Float64 products are exact here: every term is below modulus^2 and the sums
    stay far below 2^53 for the group sizes allowed by the cap.
    """
    acc = np.zeros((nrows, sys.q), dtype=np.float64)
    for gs in _chunks(sys):
        block = np.mod(sys.constraint_block(gs), modulus).astype(np.float64)
        w = rng.integers(0, modulus, size=(nrows, block.shape[0])).astype(np.float64)
        acc = np.mod(acc + w @ block, modulus)
    return acc.astype(np.int64)


def _verify_kernel(sys: EdgeSystem, K: np.ndarray, modulus: int) -> bool:
    if K.shape[1] == 0:
        return True
    Kf = K.astype(np.float64)
    for gs in _chunks(sys):
        block = np.mod(sys.constraint_block(gs), modulus).astype(np.float64)
        if np.any(np.mod(block @ Kf, modulus)):
            return False
    return True


@dataclass
class H2Result:
    e: int
    invariants: AbelianInvariants
    rows_used: int
    variables: int


def cohomology_h2(G: PcGroup, e: int, cap: int | None = None, seed: int = 12345, perm=None) -> H2Result:
    """Invariants of H^2(G, Z/p^e)."""
    _check_cap(G, cap)
    p = G.p
    modulus = p**e
    if G.order == 1:
        return H2Result(e, AbelianInvariants(p), 0, 0)
    sys = EdgeSystem(G, perm)
    rng = np.random.default_rng(seed)
    extra = 16
    while True:
        nrows = sys.q + extra
        C = _compressed(sys, modulus, nrows, rng)
        K, _, ls = kernel_mod_prime_power(C, p, e)
        if _verify_kernel(sys, K, modulus):
            break
        extra *= 2
        if extra > 8 * sys.q + 64:
            raise InternalError("random compression failed to cut out the cocycle space")
    B = sys.coboundaries()
    if np.any(np.mod(C @ B, modulus)):
        raise InternalError("coboundaries violate the cocycle constraints")
    inv = subquotient_invariants(C, B, p, e, ls=ls)
    return H2Result(e, inv, nrows, sys.q)


def _remove_submultiset(big: AbelianInvariants, small: AbelianInvariants) -> AbelianInvariants:
    rest = list(big.exponents)
    for x in small.exponents:
        if x not in rest:
            raise InternalError(f"Ext part {small} is not contained in H^2 = {big}")
        rest.remove(x)
    return AbelianInvariants(big.p, tuple(rest))


def schur_from_h2(G: PcGroup, cap: int | None = None, max_e: int | None = None, perm=None) -> MultiplierResult:
    """M(G) from H^2(G, Z/p^e) for e = 1, 2, ... until the extracted part stabilizes."""
    _check_cap(G, cap)
    p = G.p
    ab = G.abelianization
    limit = max_e if max_e is not None else 2 * G.n + 2
    prev = None
    history = []
    for e in range(1, limit + 1):
        h2 = cohomology_h2(G, e, cap=cap, perm=perm)
        ext = AbelianInvariants(p, tuple(min(a, e) for a in ab.exponents))
        hom = _remove_submultiset(h2.invariants, ext)
        history.append(str(h2.invariants))
        # Hom(M, Z/p^e) has invariants min(m_i, e); it stops changing once e >= exp M
        if prev is not None and hom == prev:
            return MultiplierResult(
                p,
                hom.order_exponent,
                hom,
                "oracle",
                {"stabilized_at_e": e - 1, "h2": history},
            )
        prev = hom
    raise InternalError(f"H^2 extraction did not stabilize by e = {limit}")


# ---------------------------------------------------------------------------
# full normalized cochain complex (small groups; used for self-checks)


@dataclass
class CocycleSystem:
    N: int
    modulus: int
    d1: sparse.csr_matrix  # C^1 -> C^2, normalized cochains
    d2: sparse.csr_matrix  # C^2 -> C^3


def full_cocycle_system(G: PcGroup, e: int = 1, cap: int = 32) -> CocycleSystem:
    """d1 and d2 on normalized cochains (values on non-identity arguments only).

    (d phi)(g, h) = phi(h) - phi(gh) + phi(g)
    (d c)(g, h, k) = c(h, k) - c(gh, k) + c(g, hk) - c(g, h)
    """
    N = G.order
    if N > cap:
        raise GroupSizeError(f"full cochain complex limited to order {cap}")
    m = N - 1
    idx2 = lambda g, h: (g - 1) * m + (h - 1)
    r1, c1, v1 = [], [], []
    for g in range(1, N):
        for h in range(1, N):
            row = idx2(g, h)
            gh = int(G.mul(g, h))
            for col, val in ((h, 1), (gh, -1), (g, 1)):
                if col:
                    r1.append(row)
                    c1.append(col - 1)
                    v1.append(val)
    d1 = sparse.coo_matrix((v1, (r1, c1)), shape=(m * m, m)).tocsr()
    r2, c2, v2 = [], [], []
    row = 0
    for g in range(1, N):
        for h in range(1, N):
            gh = int(G.mul(g, h))
            for k in range(1, N):
                hk = int(G.mul(h, k))
                for (a, b), val in (((h, k), 1), ((gh, k), -1), ((g, hk), 1), ((g, h), -1)):
                    if a and b:
                        r2.append(row)
                        c2.append(idx2(a, b))
                        v2.append(val)
                row += 1
    d2 = sparse.coo_matrix((v2, (r2, c2)), shape=(row, m * m)).tocsr()
    d2.sum_duplicates()
    return CocycleSystem(N, G.p**e, d1, d2)


def cohomology_h2_full(G: PcGroup, e: int = 1, cap: int = 16) -> AbelianInvariants:
    """H^2 straight from the full complex; only for very small groups."""
    cs = full_cocycle_system(G, e, cap)
    return subquotient_invariants(cs.d2.toarray(), cs.d1.toarray(), G.p, e)
