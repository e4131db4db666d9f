"""Upper bounds on |M(G)| and their audit against computed multipliers.

All quantities are p-exponents: a bound b means |M(G)| <= p^b (or divides it).

* Green: n(n-1)/2 for |G| = p^n.
* Niroomand: (n-1)(n-2)/2 + 1 for non-abelian G.
* Central quotient divisibility: for central K and A = G/K,
  |M(G)| |G' n K| divides |M(A)| |M(K)| |A^ab (x) K|.
* Class-3 bound through the maps psi_2 and psi_3 (see ``psi_images``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constructions import quotient, quotient_by_central
from .errors import PreconditionError
from .groups import PcGroup, Subgroup, abelianization
from .linalg import AbelianInvariants, Subspace, span
from .multiplier import (
    MultiplierResult,
    multiplier_of_abelian,
    schur_tails,
    subgroup_coordinates,
    tensor_of_abelian,
)
from .pcgroup import PcPresentation


def green_bound(n: int) -> int:
    if n < 1:
        raise PreconditionError("n must be positive")
    return n * (n - 1) // 2


def niroomand_bound(n: int) -> int:
    if n < 3:
        raise PreconditionError("non-abelian p-groups have n >= 3")
    return (n - 1) * (n - 2) // 2 + 1


def _log(p: int, order: int) -> int:
    k = round(math.log(order, p))
    if p**k != order:
        raise PreconditionError(f"{order} is not a power of {p}")
    return k


@dataclass
class BoundCheck:
    name: str
    bound: int | None  # p-exponent of the bound; None when not applicable
    computed: int | None
    passed: bool | None  # None: hypotheses of the bound do not hold
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "bound": self.bound,
            "computed": self.computed,
            "passed": self.passed,
            "witnesses": self.witnesses,
        }


@dataclass
class BoundReport:
    group: str
    p: int
    n: int
    multiplier_exponent: int
    checks: list[BoundCheck]

    @property
    def failures(self) -> list[BoundCheck]:
        return [c for c in self.checks if c.passed is False]

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> dict:
        counts = {"pass": 0, "fail": 0, "not_applicable": 0}
        for c in self.checks:
            counts["pass" if c.passed else "fail" if c.passed is False else "not_applicable"] += 1
        return counts

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "p": self.p,
            "n": self.n,
            "multiplier_exponent": self.multiplier_exponent,
            "passed": self.passed,
            "summary": self.summary(),
            "checks": [c.to_json() for c in self.checks],
        }


# ---------------------------------------------------------------------------
# central quotient divisibility


def central_quotient_check(
    G: PcGroup,
    K: Subgroup,
    MG: MultiplierResult,
    MA: MultiplierResult | None = None,
    MK: AbelianInvariants | None = None,
) -> BoundCheck:
    """|M(G)| |G' n K| divides |M(A)| |M(K)| |A^ab (x) K| with A = G/K, K central."""
    if not G.is_central(K):
        raise PreconditionError("K is not central")
    p = G.p
    A = quotient_by_central(G, K, label=f"{G.pres.label}/K")
    if MA is None:
        MA = schur_tails(A)
    Kinv = G.abelian_invariants_of(K)
    if MK is None:
        MK = multiplier_of_abelian(Kinv)
    tens = tensor_of_abelian(abelianization(A), Kinv)
    inter = int(np.count_nonzero(np.isin(K.elements, G.derived_subgroup.elements)))
    lhs = MG.order_exponent + _log(p, inter)
    rhs = MA.order_exponent + MK.order_exponent + tens.order_exponent
    gen = [int(g) for g in K.gens if g] or [0]
    return BoundCheck(
        "central-quotient",
        rhs,
        lhs,
        lhs <= rhs,
        {
            "K": [list(G.exps(g)) for g in gen],
            "K_order_exponent": _log(p, K.order),
            "derived_meet_K": _log(p, inter),
            "M_A": MA.order_exponent,
            "M_K": MK.order_exponent,
            "tensor": tens.order_exponent,
        },
    )


# ---------------------------------------------------------------------------
# class-3 bound


class _Section:
    """Coordinates on an elementary abelian section H/K of G (K normal, K <= H)."""

    def __init__(self, G: PcGroup, H: Subgroup, K: Subgroup, name: str):
        self.G = G
        if K.order == 1:
            self.Q = G
            self.img = np.arange(G.order, dtype=np.int64)
        else:
            self.Q = PcGroup(quotient(G, K), cap=G.cap)
            seq = G.induced_sequence(K)
            keep = [d for d in range(G.n) if d not in seq]
            sifted = G.sift_all(seq)
            w = np.array([self.Q.p ** (self.Q.n - 1 - k) for k in range(self.Q.n)], dtype=np.int64)
            self.img = G.digits[sifted][:, keep].astype(np.int64) @ w
        Hq = self.Q.closure(np.unique(self.img[H.elements]))
        if not self.Q.is_elementary_abelian(Hq):
            raise PreconditionError(f"{name} is not elementary abelian")
        self.seq = self.Q.induced_sequence(Hq)
        self.dim = len(self.seq)

    def coords(self, x) -> np.ndarray:
        return np.array(subgroup_coordinates(self.Q, self.seq, int(self.img[int(x)])), dtype=np.int64)

    def lifts(self) -> list[int]:
        """The smallest preimage in G of each basis element of the section."""
        return [int(np.flatnonzero(self.img == self.seq[d])[0]) for d in sorted(self.seq)]


@dataclass
class PsiData:
    delta: int  # dim of G/(Z(G) G')
    gamma2_mod_3: int  # dim gamma_2 / gamma_3
    gamma3: int  # dim gamma_3
    psi2: Subspace
    psi3: Subspace
    lifts: list[int]


def _psi_setup(G: PcGroup):
    if G.nilpotency_class != 3:
        raise PreconditionError(f"class-3 bound requires class 3 (got class {G.nilpotency_class})")
    _, g2, g3, g4 = G.lower_central_series
    if g4.order != 1:
        raise PreconditionError("gamma_4 is not trivial")
    zg = G.closure(list(G.induced_sequence(G.center).values()) + list(G.induced_sequence(g2).values()))
    bar = _Section(G, G.whole, zg, "G/(Z(G)G')")
    s2 = _Section(G, g2, g3, "gamma_2/gamma_3")
    s3 = _Section(G, g3, G.trivial, "gamma_3")
    return bar, s2, s3


def psi_images(G: PcGroup, order=None, lifts=None) -> PsiData:
    """Images of psi_2 and psi_3 spanned over all basis triples and quadruples.

    psi_2(x1, x2, x3) = [x1,x2] (x) x3 + [x2,x3] (x) x1 + [x3,x1] (x) x2 in
    (gamma_2/gamma_3) (x) Gbar^ab, and
    psi_3(x1, .., x4) = [[x1,x2],x3] (x) x4 + [x4,[x1,x2]] (x) x3
                      + [[x3,x4],x1] (x) x2 + [x2,[x3,x4]] (x) x1 in gamma_3 (x) Gbar^ab,
    where Gbar^ab = G/(Z(G) G').  Commutators are taken on fixed lifts of a basis of
    Gbar^ab; ``order`` permutes that basis and ``lifts`` overrides the representatives.
    """
    bar, s2, s3 = _psi_setup(G)
    p = G.p
    base = bar.lifts()
    if order is not None:
        base = [base[k] for k in order]
    x = base if lifts is None else [int(v) for v in lifts]
    d = len(x)
    E = np.eye(d, dtype=np.int64)
    X = np.array(x, dtype=np.int64)
    C = G.comm(X[:, None], X[None, :])  # C[i, j] = [x_i, x_j]
    c2 = np.array([[s2.coords(C[i, j]) for j in range(d)] for i in range(d)]).reshape(d, d, s2.dim)
    # coordinates of the basis vectors themselves, in case the lifts were perturbed
    ebar = np.array([bar.coords(v) for v in x]).reshape(d, bar.dim)
    want = E if order is None else E[list(order)]
    if lifts is None and not np.array_equal(ebar % p, want):
        raise PreconditionError("lifts do not map to the chosen basis")

    def t(a, b):
        return np.outer(a, b).ravel() % p

    v2 = []
    for i in range(d):
        for j in range(d):
            for k in range(d):
                v2.append((t(c2[i, j], ebar[k]) + t(c2[j, k], ebar[i]) + t(c2[k, i], ebar[j])) % p)
    # triple commutators [[x_i, x_j], x_k] and [x_k, [x_i, x_j]]
    R = G.comm(C[:, :, None], X[None, None, :])
    L = G.comm(X[None, None, :], C[:, :, None])
    r3 = np.array([s3.coords(v) for v in R.ravel()]).reshape(d, d, d, s3.dim)
    l3 = np.array([s3.coords(v) for v in L.ravel()]).reshape(d, d, d, s3.dim)
    v3 = []
    for i in range(d):
        for j in range(d):
            for k in range(d):
                for m in range(d):
                    v3.append(
                        (
                            t(r3[i, j, k], ebar[m])
                            + t(l3[i, j, m], ebar[k])
                            + t(r3[k, m, i], ebar[j])
                            + t(l3[k, m, j], ebar[i])
                        )
                        % p
                    )
    P2 = span(v2, p, s2.dim * d)
    P3 = span(v3, p, s3.dim * d)
    return PsiData(d, s2.dim, s3.dim, P2, P3, x)


def psi2_image(G: PcGroup) -> Subspace:
    return psi_images(G).psi2


def psi3_image(G: PcGroup) -> Subspace:
    return psi_images(G).psi3


def _same_subspace(a: Subspace, b: Subspace) -> bool:
    return a.dim == b.dim and (a + b).dim == a.dim


def representative_independence(G: PcGroup, trials: int = 4, seed: int = 7) -> bool:
    """Do the psi images survive replacing each lift by another element of its coset?"""
    ref = psi_images(G)
    zg = G.closure(list(G.induced_sequence(G.center).values()) + list(G.induced_sequence(G.derived_subgroup).values()))
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        shift = zg.elements[rng.integers(0, zg.order, size=len(ref.lifts))]
        moved = G.mul(np.array(ref.lifts, dtype=np.int64), shift)
        alt = psi_images(G, lifts=moved)
        if not (_same_subspace(ref.psi2, alt.psi2) and _same_subspace(ref.psi3, alt.psi3)):
            return False
    return True


def class3_bound(G: PcGroup, psi2dim: int, psi3dim: int, Mab: AbelianInvariants, data: PsiData | None = None) -> int:
    """Exponent of |M(G^ab)| |g2/g3 (x) Gbar^ab| |g3 (x) Gbar^ab| / (|g2| |Im psi_2| |Im psi_3|)."""
    if G.nilpotency_class != 3:
        raise PreconditionError(f"class-3 bound requires class 3 (got class {G.nilpotency_class})")
    if data is None:
        bar, s2, s3 = _psi_setup(G)
        delta, a, b = bar.dim, s2.dim, s3.dim
    else:
        delta, a, b = data.delta, data.gamma2_mod_3, data.gamma3
    rhs = multiplier_of_abelian(Mab).order_exponent + a * delta + b * delta
    return rhs - (_log(G.p, G.derived_subgroup.order) + psi2dim + psi3dim)


def psi_bound_check(G: PcGroup, MG: MultiplierResult, check_representatives: bool = True) -> BoundCheck:
    try:
        data = psi_images(G)
    except PreconditionError as exc:
        return BoundCheck("class-3", None, MG.order_exponent, None, {"reason": str(exc)})
    bound = class3_bound(G, data.psi2.dim, data.psi3.dim, G.abelianization, data)
    wit = {
        "dim_psi2": data.psi2.dim,
        "dim_psi3": data.psi3.dim,
        "dim_Gbar_ab": data.delta,
        "dim_gamma2_mod_gamma3": data.gamma2_mod_3,
        "dim_gamma3": data.gamma3,
    }
    if check_representatives:
        wit["representative_independent"] = representative_independence(G)
    return BoundCheck("class-3", bound, MG.order_exponent, MG.order_exponent <= bound, wit)


# ---------------------------------------------------------------------------
# audit


def audit(pres: PcPresentation, MG: MultiplierResult, G: PcGroup | None = None, label: str = "") -> BoundReport:
    """Every applicable bound, with the central-quotient check over all central K of order p."""
    G = G or PcGroup(pres)
    n, k = pres.n, MG.order_exponent
    checks = [BoundCheck("green", green_bound(n), k, k <= green_bound(n))]
    if G.is_abelian():
        checks.append(BoundCheck("niroomand", None, k, None, {"reason": "G is abelian"}))
    else:
        checks.append(BoundCheck("niroomand", niroomand_bound(n), k, k <= niroomand_bound(n)))
    for K in G.central_subgroups_of_order_p():
        checks.append(central_quotient_check(G, K, MG))
    checks.append(psi_bound_check(G, MG))
    return BoundReport(label or pres.label, pres.p, n, k, checks)
