"""Building new presentations: products, quotients, split extensions, black boxes."""

from __future__ import annotations

import itertools
from typing import Callable, Hashable, Sequence

import numpy as np

from .errors import InputError, ParameterError, PreconditionError
from .groups import PcGroup, Subgroup
from .linalg import AbelianInvariants, FpMatrix, row_reduce, span
from .pcgroup import PcPresentation, check_consistent


def abelian_presentation(inv: AbelianInvariants | Sequence[int], p: int | None = None, label: str = "") -> PcPresentation:
    """sum Z/p^{e_i} as a chain of generators per cyclic factor."""
    if not isinstance(inv, AbelianInvariants):
        if p is None:
            raise InputError("prime required")
        inv = AbelianInvariants(p, tuple(inv))
    p = inv.p
    n = sum(inv.exponents)
    powers = {}
    k = 0
    for e in inv.exponents:
        for s in range(e - 1):
            powers[k + s] = [(k + s + 1, 1)]
        k += e
    return PcPresentation.from_words(p, n, powers, {}, label=label or str(inv))


def cyclic(p: int, e: int = 1) -> PcPresentation:
    return abelian_presentation(AbelianInvariants(p, (e,)), label=f"Z_{p**e}")


def _shift(v, offset, n):
    out = [0] * n
    out[offset : offset + len(v)] = v
    return tuple(out)


def direct_product(A: PcPresentation, B: PcPresentation, label: str = "") -> PcPresentation:
    if A.p != B.p:
        raise InputError("factors must be groups for the same prime")
    n = A.n + B.n
    powers = [_shift(v, 0, n) for v in A.powers] + [_shift(v, A.n, n) for v in B.powers]
    comms = []
    for j in range(n):
        row = []
        for i in range(j):
            if j < A.n:
                row.append(_shift(A.comms[j][i], 0, n))
            elif i >= A.n:
                row.append(_shift(B.comms[j - A.n][i - A.n], A.n, n))
            else:
                row.append((0,) * n)
        comms.append(tuple(row))
    names = tuple(A.names) + tuple(B.names)
    if len(set(names)) != len(names):
        names = ()
    pres = PcPresentation(A.p, n, tuple(powers), tuple(comms), label or f"{A.label or 'A'} x {B.label or 'B'}", names)
    return check_consistent(pres)


def quotient(G: PcGroup, K: Subgroup, label: str = "") -> PcPresentation:
    """Presentation of G/K for a normal subgroup K.

    The quotient is generated by the images of the g_d whose depth is not a leading
    depth of K; every element is sifted to its canonical coset representative.
    """
    if not G.is_normal(K):
        raise PreconditionError("subgroup is not normal")
    seq = G.induced_sequence(K)
    keep = [d for d in range(G.n) if d not in seq]
    m = len(keep)

    def image(vec) -> tuple:
        x = G.sift(G.index(vec), seq)
        e = G.exps(x)
        return tuple(e[d] for d in keep)

    powers = tuple(image(G.pres.powers[d]) for d in keep)
    comms = tuple(tuple(image(G.pres.comms[keep[b]][keep[a]]) for a in range(b)) for b in range(m))
    names = tuple(G.pres.names[d] for d in keep)
    pres = PcPresentation(G.p, m, powers, comms, label or f"{G.pres.label}/K", names)
    return check_consistent(pres)


def quotient_by_central(G: PcGroup, K: Subgroup, label: str = "") -> PcPresentation:
    if not G.is_central(K):
        raise PreconditionError("subgroup is not central")
    return quotient(G, K, label)


def central_product(A: PcPresentation, B: PcPresentation, identification, label: str = "", cap=None) -> PcPresentation:
    """(A x B) / <a b^-1 : (a, b) in identification>.

    ``identification`` lists pairs of exponent vectors (a in A, b in B); the a's must
    be central in A, the b's central in B, and a -> b must extend to an isomorphism
    of the generated subgroups (checked through the quotient order).
    """
    D = PcGroup(direct_product(A, B), cap=cap)
    GA, GB = PcGroup(A, cap=cap), PcGroup(B, cap=cap)
    gens = []
    for a, b in identification:
        ia, ib = GA.index(a), GB.index(b)
        if not (GA.center.contains(ia) and GB.center.contains(ib)):
            raise PreconditionError("identified elements must be central")
        x = D.index(tuple(a) + (0,) * B.n)
        y = D.index((0,) * A.n + tuple(b))
        gens.append(int(D.mul(x, D.inv(y))))
    K = D.closure(gens)
    ka = GA.closure([GA.index(a) for a, _ in identification]).order
    if K.order != ka:
        raise PreconditionError("identification does not define an isomorphism of central subgroups")
    return quotient_by_central(D, K, label or f"{A.label} o {B.label}")


def _solve_coords(B: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    """Coordinates c with c B = v mod p for an invertible basis matrix B (rows)."""
    r = B.shape[0]
    aug = np.concatenate([B.T % p, (v % p).reshape(r, 1)], axis=1)
    ech, rank = row_reduce(FpMatrix(p, aug))
    e = np.asarray(ech.entries)
    return e[:r, r].copy()


def semidirect_elem_abelian(rank: int, action, p: int, label: str = "", names: Sequence[str] = ()) -> tuple[PcPresentation, np.ndarray]:
    """Z_p^rank split by a cyclic group <t> of order p acting through ``action``.

    Conjugation is t^-1 v t = M v on column vectors.  Returns the presentation on
    the generators (t, b_1, ..., b_r) and the basis matrix whose rows are the b_k in
    the original coordinates.
    """
    M = np.asarray(action, dtype=np.int64) % p
    if M.shape != (rank, rank):
        raise InputError("action matrix has the wrong shape")
    P = np.eye(rank, dtype=np.int64)
    for _ in range(p):
        P = (P @ M) % p
    if not np.array_equal(P, np.eye(rank, dtype=np.int64)):
        raise ParameterError("action matrix does not have order dividing p")
    N = (M - np.eye(rank, dtype=np.int64)) % p
    B = _adapted_basis(N, p)
    n = rank + 1
    comms = {}
    for k in range(rank):
        image = (N @ B[k]) % p
        c = _solve_coords(B, image, p)
        if any(c[: k + 1]):
            raise PreconditionError("basis is not adapted to the action")
        word = [(1 + j, int(c[j])) for j in range(rank) if c[j]]
        if word:
            comms[(1 + k, 0)] = word
    pres = PcPresentation.from_words(p, n, {}, comms, label=label or f"Z_{p}^{rank} x| Z_{p}", names=names)
    return pres, B


def _adapted_basis(N: np.ndarray, p: int) -> np.ndarray:
    """Rows b_1..b_r with N b_k in span(b_{k+1}, ...), taken from layers of the image filtration."""
    r = N.shape[0]
    layers = [np.eye(r, dtype=np.int64)]
    while np.any(layers[-1]):
        layers.append((layers[-1] @ N.T) % p)
    chosen: list[np.ndarray] = []
    per_layer = []
    for L in reversed(layers[:-1]):
        new = []
        for v in L:
            if np.any(v) and span([*chosen, v], p, r).dim > len(chosen):
                chosen.append(v)
                new.append(v)
        per_layer.append(new)
    rows = [v for new in reversed(per_layer) for v in new]
    basis = np.array(rows, dtype=np.int64).reshape(len(rows), r)
    if basis.shape[0] != r:
        raise PreconditionError("failed to build an adapted basis")
    return basis


def pc_from_blackbox(
    p: int,
    gens: Sequence[Hashable],
    mul: Callable,
    identity: Hashable,
    label: str = "",
    max_order: int = 1 << 16,
) -> tuple[PcPresentation, dict]:
    """pc presentation of a finite p-group given by generators and a product.

    The pc sequence refines the lower exponent-p central series, so every relation
    is automatically supported on later generators.  Returns the presentation and
    the map element -> exponent vector.
    """
    elements = _enumerate(gens, mul, identity, max_order)
    N = len(elements)
    n = round(np.log(N) / np.log(p))
    if p**n != N:
        raise PreconditionError("group order is not a power of p")
    inv = _inverse_map(elements, mul, identity)
    pos = {x: k for k, x in enumerate(elements)}

    def closure(gs):
        return _enumerate(gs, mul, identity, max_order)

    def comm(x, y):
        return mul(mul(inv[x], inv[y]), mul(x, y))

    def pw(x, k):
        out = identity
        for _ in range(k):
            out = mul(out, x)
        return out

    # lower exponent-p central series
    series = [elements]
    while len(series[-1]) > 1:
        cur = series[-1]
        gs = {comm(x, g) for x in cur for g in gens} | {pw(x, p) for x in cur}
        nxt = closure(sorted(gs, key=pos.__getitem__))
        if len(nxt) == len(cur):
            raise PreconditionError("not a p-group")
        series.append(nxt)
    seq = []
    for k in range(len(series) - 1):
        H = set(series[k + 1])
        cands = list(gens) + series[k] if k == 0 else series[k]
        layer = []
        for x in cands:
            if x in H:
                continue
            layer.append(x)
            H = set(closure(list(H) + [x]))
            if len(H) == len(series[k]):
                break
        seq.extend(layer)
    if len(seq) != n:
        raise PreconditionError("pc sequence length mismatch")
    nf = {}
    for exps in itertools.product(range(p), repeat=n):
        x = identity
        for g, e in zip(seq, exps):
            for _ in range(e):
                x = mul(x, g)
        nf[x] = exps
    if len(nf) != N:
        raise PreconditionError("pc sequence does not give unique normal forms")
    powers = tuple(nf[pw(g, p)] for g in seq)
    comms = tuple(tuple(nf[comm(seq[j], seq[i])] for i in range(j)) for j in range(n))
    pres = check_consistent(PcPresentation(p, n, powers, comms, label))
    return pres, nf


def _enumerate(gens, mul, identity, max_order):
    seen = {identity: None}
    order = [identity]
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen[y] = None
                    order.append(y)
                    nxt.append(y)
                    if len(order) > max_order:
                        raise PreconditionError("black-box group exceeds the size limit")
        frontier = nxt
    return order


def _inverse_map(elements, mul, identity):
    inv = {}
    for x in elements:
        if x in inv:
            continue
        y = x
        prev = identity
        while y != identity:
            prev = y
            y = mul(y, x)
        inv[x] = prev
    return inv
