"""Named groups: every family of the classification plus the auxiliary groups used in checks.

Presentations are written with generators in pc order; relation words are given
as (generator index, exponent) pairs and collected by ``PcPresentation.from_words``,
which also runs the consistency check.

James's notation alpha^{(p)} is read as
    alpha_i^{(p)} = alpha_i^p * prod_k alpha_{i+k}^{binom(p, k+1)}
along the chain [alpha_j, alpha] = alpha_{j+1}.  For p >= 5 in the groups below this
is just alpha_i^p; for p = 3 and a chain of length two it is alpha_1^3 alpha_3.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .constructions import (
    abelian_presentation,
    central_product,
    cyclic,
    direct_product,
    pc_from_blackbox,
    semidirect_elem_abelian,
)
from .errors import InputError, ParameterError
from .linalg import AbelianInvariants, is_prime
from .pcgroup import PcPresentation


def smallest_nonresidue(p: int) -> int:
    for g in range(2, p):
        if pow(g, (p - 1) // 2, p) == p - 1:
            return g
    raise ParameterError(f"no quadratic nonresidue modulo {p}")


def is_nonresidue(g: int, p: int) -> bool:
    return g % p != 0 and pow(g % p, (p - 1) // 2, p) == p - 1


def _odd(p):
    if not is_prime(p):
        raise ParameterError(f"{p} is not prime")
    if p == 2:
        raise ParameterError("this family is defined for odd primes only")


def _two(p):
    if p != 2:
        raise ParameterError("this group is a 2-group; use p = 2")


def _any(p):
    if not is_prime(p):
        raise ParameterError(f"{p} is not prime")


# ---------------------------------------------------------------------------
# builders


def _phi2_22(p):
    # alpha, alpha1, alpha1^p, alpha2
    return PcPresentation.from_words(
        p, 4, {0: [(3, 1)], 1: [(2, 1)]}, {(1, 0): [(3, 1)]}, names=("a", "a1", "a1^p", "a2")
    )


def _chain4(p, alpha_pow, a1_pow_p3, a1_pow):
    """alpha, alpha1, alpha2, alpha3 with [alpha_i, alpha] = alpha_{i+1}.

    ``alpha_pow``: exponent of alpha3 in alpha^p; alpha1^p is alpha3^a1_pow (p >= 5)
    or alpha3^a1_pow_p3 (p = 3).
    """
    e1 = (a1_pow_p3 if p == 3 else a1_pow) % p
    powers = {}
    if alpha_pow % p:
        powers[0] = [(3, alpha_pow % p)]
    if e1:
        powers[1] = [(3, e1)]
    return PcPresentation.from_words(
        p, 4, powers, {(1, 0): [(2, 1)], (2, 0): [(3, 1)]}, names=("a", "a1", "a2", "a3")
    )


def _phi3_211a(p):
    # alpha^p = alpha3, alpha1^(p) = 1
    return _chain4(p, 1, -1, 0)


def _phi3_211b(p, r=1):
    if r % p == 0:
        raise ParameterError("r must be nonzero modulo p")
    # alpha^p = 1, alpha1^(p) = alpha3^r
    return _chain4(p, 0, r - 1, r)


def _phi3_14(p):
    # alpha^p = 1, alpha1^(p) = 1
    return _chain4(p, 0, -1, 0)


def _phi2_211c(p):
    # alpha, alpha1, alpha^p, alpha2
    return PcPresentation.from_words(
        p, 4, {0: [(2, 1)]}, {(1, 0): [(3, 1)]}, names=("a", "a1", "a^p", "a2")
    )


def _phi2_21(p):
    # alpha, alpha1, alpha2 = alpha^p = [alpha1, alpha]
    return PcPresentation.from_words(p, 3, {0: [(2, 1)]}, {(1, 0): [(2, 1)]}, names=("a", "a1", "a2"))


def _es(p, m=1):
    """Extraspecial group of order p^{2m+1} and exponent p: x_i, y_i, z with [y_i, x_i] = z."""
    if m < 1:
        raise ParameterError("m must be at least 1")
    n = 2 * m + 1
    comms = {(2 * i + 1, 2 * i): [(n - 1, 1)] for i in range(m)}
    names = tuple(s for i in range(m) for s in (f"x{i + 1}", f"y{i + 1}")) + ("z",)
    return PcPresentation.from_words(p, n, {}, comms, names=names)


def _phi2_2111c(p):
    return direct_product(_phi2_211c(p), cyclic(p), label="Phi2(211)c x Z_p")


def _phi2_2111d(p):
    return direct_product(_es(p), cyclic(p, 2), label="ES(p^3) x Z_p^2")


def _phi3_15(p):
    return direct_product(_phi3_14(p), cyclic(p), label="Phi3(1^4) x Z_p")


def _phi7_15(p):
    # alpha, alpha1, beta, alpha2, alpha3; [alpha1, beta] = alpha3
    e1 = 2 if p == 3 else 0
    powers = {1: [(4, e1)]} if e1 else {}
    comms = {(1, 0): [(3, 1)], (3, 0): [(4, 1)], (2, 1): [(4, p - 1)]}
    return PcPresentation.from_words(p, 5, powers, comms, names=("a", "a1", "b", "a2", "a3"))


def _phi11(p):
    # alpha1, alpha2, alpha3, beta1, beta2, beta3
    comms = {(1, 0): [(5, p - 1)], (2, 0): [(4, 1)], (2, 1): [(3, p - 1)]}
    return PcPresentation.from_words(p, 6, {}, comms, names=("a1", "a2", "a3", "b1", "b2", "b3"))


def _phi12(p):
    return direct_product(_es(p), _es(p), label="ES(p^3) x ES(p^3)")


def _alpha_beta_6(p, rels):
    """alpha1..alpha4, beta1, beta2 with [alpha_i, alpha_j] = beta_k^e for (i, j, k, e) in rels (1-based)."""
    comms = {}
    for i, j, k, e in rels:
        # [a_i, a_j] = b_k^e with i < j becomes [a_j, a_i] = b_k^-e
        comms[(j - 1, i - 1)] = [(3 + k, (-e) % p)]
    return PcPresentation.from_words(p, 6, {}, comms, names=("a1", "a2", "a3", "a4", "b1", "b2"))


_PHI13_FORMS = {
    # [a1,a2] = b1, [a1,a3] = b2, [a2,a4] = b2
    "james": [(1, 2, 1, 1), (1, 3, 2, 1), (2, 4, 2, 1)],
    # [a1,a2] = b1, [a2,a3] = b2, [a2,a4] = b2; here a3 a4^-1 is central and splits off
    "as-printed": [(1, 2, 1, 1), (2, 3, 2, 1), (2, 4, 2, 1)],
}


def _phi13(p, form="james"):
    if form not in _PHI13_FORMS:
        raise ParameterError(f"unknown form {form!r}; choose from {sorted(_PHI13_FORMS)}")
    return _alpha_beta_6(p, _PHI13_FORMS[form])


def _phi15(p, g=None):
    g = smallest_nonresidue(p) if g is None else g
    if not is_nonresidue(g, p):
        raise ParameterError(f"g = {g} is a quadratic residue modulo {p}")
    return _alpha_beta_6(p, [(1, 2, 1, 1), (2, 3, 2, 1), (3, 4, 1, 1), (2, 4, 2, g % p)])


def _phi4_15(p):
    """Z_p^4 x| Z_p: t fixes beta1, beta2 and sends alpha_i to alpha_i beta_i."""
    M = np.eye(4, dtype=np.int64)  # coordinates (alpha1, alpha2, beta1, beta2)
    M[2, 0] = 1
    M[3, 1] = 1
    pres, _ = semidirect_elem_abelian(4, M, p, label="Z_p^4 x| Z_p", names=("t", "a1", "a2", "b1", "b2"))
    return pres


def _item12(p):
    return direct_product(_phi4_15(p), abelian_presentation([1, 1], p), label="(Z_p^4 x| Z_p) x Z_p^2")


def _propk(p):
    # x1..x5, c1, c2
    comms = {(1, 0): [(5, 1)], (4, 2): [(5, 1)], (2, 0): [(6, 1)], (4, 3): [(6, 1)]}
    return PcPresentation.from_words(p, 7, {}, comms, names=("x1", "x2", "x3", "x4", "x5", "c1", "c2"))


def _e2(p, m=2):
    es = _es(p, m)
    z = tuple([0] * (es.n - 1) + [1])
    return central_product(es, cyclic(p, 2), [(z, (0, 1))], label=f"ES(p^{2 * m + 1}) o Z_p^2")


def _d8(p=2):
    return PcPresentation.from_words(2, 3, {}, {(1, 0): [(2, 1)]}, names=("s", "r", "r^2"))


def _q8(p=2):
    return PcPresentation.from_words(2, 3, {0: [(2, 1)], 1: [(2, 1)]}, {(1, 0): [(2, 1)]}, names=("i", "j", "-1"))


def _d16(p=2):
    # s, r, r^2, r^4
    return PcPresentation.from_words(
        2, 4, {1: [(2, 1)], 2: [(3, 1)]}, {(1, 0): [(2, 1), (3, 1)], (2, 0): [(3, 1)]}, names=("s", "r", "r^2", "r^4")
    )


def _z4z4(p=2):
    # b, a, b^2, a^2 with a^b = a^-1
    return PcPresentation.from_words(
        2, 4, {0: [(2, 1)], 1: [(3, 1)]}, {(1, 0): [(3, 1)]}, names=("b", "a", "b^2", "a^2")
    )


# p = 2 candidates ------------------------------------------------------------

# involution classes of GL(4, 2) are determined by rank(M - I) in {0, 1, 2}
_ELEM_ACTIONS = {"trivial": 0, "one-block": 1, "two-block": 2}


def _z2_4_z2(p=2, action="two-block"):
    if action not in _ELEM_ACTIONS:
        raise ParameterError(f"unknown action {action!r}; choose from {sorted(_ELEM_ACTIONS)}")
    M = np.eye(4, dtype=np.int64)
    for k in range(_ELEM_ACTIONS[action]):
        M[2 * k + 1, 2 * k] = 1
    pres, _ = semidirect_elem_abelian(4, M, 2, label=f"Z_2^4 x| Z_2 [{action}]")
    return pres


def _z42_points():
    return [(x, y) for x in range(4) for y in range(2)]


def _z42_apply(aut, z):
    (u, v) = aut
    return ((z[0] * u[0] + z[1] * v[0]) % 4, (z[0] * u[1] + z[1] * v[1]) % 2)


@lru_cache(maxsize=None)
def z4xz2_automorphisms() -> tuple:
    """Automorphisms of Z_4 x Z_2 as images (u, v) of the generators (1,0), (0,1)."""
    pts = _z42_points()
    out = []
    for u in pts:
        for v in pts:
            if (2 * v[0]) % 4:
                continue  # (0,1) has order 2
            if len({_z42_apply((u, v), z) for z in pts}) == 8:
                out.append((u, v))
    return tuple(out)


def _compose(a, b):
    """a after b."""
    return (_z42_apply(a, _z42_apply(b, (1, 0))), _z42_apply(a, _z42_apply(b, (0, 1))))


@lru_cache(maxsize=None)
def z4xz2_involution_classes() -> tuple:
    """Conjugacy-class representatives of automorphisms of order dividing 2."""
    auts = z4xz2_automorphisms()
    ident = ((1, 0), (0, 1))
    inv = {a: next(b for b in auts if _compose(a, b) == ident) for a in auts}
    invols = [a for a in auts if _compose(a, a) == ident]
    reps, seen = [], set()
    for a in invols:
        if a in seen:
            continue
        cls = {_compose(_compose(inv[h], a), h) for h in auts}
        seen |= cls
        reps.append(min(cls))
    return tuple(reps)


def _aut_name(aut) -> str:
    (u, v) = aut

    def el(z):
        parts = []
        if z[0]:
            parts.append("a" if z[0] == 1 else f"a^{z[0]}")
        if z[1]:
            parts.append("b")
        return "".join(parts) or "1"

    return f"a->{el(u)},b->{el(v)}"


def _z4z2_semidirect(aut):
    def mul(x, y):
        (a1, s1), (a2, s2) = x, y
        if s1:
            a2 = _z42_apply(aut, a2)
        return (((a1[0] + a2[0]) % 4, (a1[1] + a2[1]) % 2), (s1 + s2) % 2)

    pres, _ = pc_from_blackbox(2, [((1, 0), 0), ((0, 1), 0), ((0, 0), 1)], mul, ((0, 0), 0))
    return pres


def _z2_z4z2_z2(p=2, action="a->ab,b->b"):
    reps = {_aut_name(a): a for a in z4xz2_involution_classes()}
    if action not in reps:
        raise ParameterError(f"unknown action {action!r}; choose from {sorted(reps)}")
    inner = _z4z2_semidirect(reps[action])
    return direct_product(cyclic(2), inner, label=f"Z_2 x ((Z_4 x Z_2) x| Z_2) [{action}]")


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class Expectation:
    n: int | Callable
    nclass: int
    derived: int  # log_p |G'|
    exponent: int | Callable  # log_p exp(G)
    multiplier: tuple | None = None  # invariants, if the classification states them
    multiplier_exponent: int | None = None
    be_dimX: int | None = None
    be_dimX1: int | None = None


@dataclass(frozen=True)
class Family:
    id: str
    builder: Callable
    primes: str  # "odd", "two", "any"
    expect: Callable  # p, params -> Expectation
    defaults: tuple = ()
    description: str = ""
    candidates: Callable | None = None  # p -> list of params dicts


def _z24_expect(q):
    blocks = _ELEM_ACTIONS[q.get("action", "two-block")]
    # t a_k t = a_k b_k for each 2-block, so |G'| = 2^blocks and t a_1 has order 4
    return Expectation(5, 2 if blocks else 1, blocks, 2 if blocks else 1)


def _exp_odd3(p):
    return 2 if p == 3 else 1


FAMILIES: dict[str, Family] = {}


def _reg(fam: Family):
    FAMILIES[fam.id] = fam


_reg(Family("Phi2(22)", _phi2_22, "odd", lambda p, q: Expectation(4, 2, 1, 2, (1,)),
            description="[a1,a] = a^p = a2, a1^(p^2) = a2^p = 1"))
_reg(Family("Phi3(211)a", _phi3_211a, "odd", lambda p, q: Expectation(4, 3, 2, 2, (1,)),
            description="[a1,a] = a2, [a2,a] = a^p = a3, a1^(p) = a2^p = a3^p = 1"))
_reg(Family("Phi3(211)b_r", _phi3_211b, "odd", lambda p, q: Expectation(4, 3, 2, 2, (1,)), (("r", 1),),
            description="[a_i,a] = a_(i+1), a1^(p) = a3^r, a^p = a2^p = a3^p = 1"))
_reg(Family("Phi2(2111)c", _phi2_2111c, "odd", lambda p, q: Expectation(5, 2, 1, 2),
            description="Phi2(211)c x Z_p"))
_reg(Family("Phi2(2111)d", _phi2_2111d, "odd", lambda p, q: Expectation(5, 2, 1, 2),
            description="ES_p(p^3) x Z_(p^2)"))
_reg(Family("Phi3(1^5)", _phi3_15, "odd", lambda p, q: Expectation(5, 3, 2, _exp_odd3(p)),
            description="Phi3(1^4) x Z_p"))
_reg(Family("Phi7(1^5)", _phi7_15, "odd", lambda p, q: Expectation(5, 3, 2, _exp_odd3(p)),
            description="[a_i,a] = a_(i+1), [a1,b] = a3, a^p = a1^(p) = a2^p = a3^p = b^p = 1"))
_reg(Family("Phi11(1^6)", _phi11, "odd", lambda p, q: Expectation(6, 2, 3, 1, be_dimX=1, be_dimX1=1),
            description="[a1,a2] = b3, [a2,a3] = b1, [a3,a1] = b2, exponent p"))
_reg(Family("Phi12(1^6)", _phi12, "odd", lambda p, q: Expectation(6, 2, 2, 1, be_dimX=4, be_dimX1=4),
            description="ES_p(p^3) x ES_p(p^3)"))
_reg(Family("Phi13(1^6)", _phi13, "odd", lambda p, q: Expectation(6, 2, 2, 1, be_dimX=4, be_dimX1=4),
            (("form", "james"),),
            description="[a1,a2] = b1, [a1,a3] = b2, [a2,a4] = b2, exponent p"))
_reg(Family("Phi15(1^6)", _phi15, "odd", lambda p, q: Expectation(6, 2, 2, 1, be_dimX=4, be_dimX1=4), (("g", None),),
            description="[a1,a2] = b1, [a2,a3] = b2, [a3,a4] = b1, [a2,a4] = b2^g, g a nonresidue"))
_reg(Family("(Z_p^4:Z_p)xZ_p^2", _item12, "odd", lambda p, q: Expectation(7, 2, 2, 1),
            description="(Z_p^4 x| Z_p) x Z_p x Z_p, t: a_i -> a_i b_i, b_i fixed"))
_reg(Family("Z_2^4:Z_2", _z2_4_z2, "two", lambda p, q: _z24_expect(q), (("action", "two-block"),),
            description="Z_2^4 x| Z_2; the action is not named, all involution classes are candidates",
            candidates=lambda p: [{"action": a} for a in _ELEM_ACTIONS]))
_reg(Family("Z_4:Z_4", _z4z4, "two", lambda p, q: Expectation(4, 2, 1, 2), description="<a, b | a^4 = b^4 = 1, a^b = a^-1>"))
_reg(Family("D16", _d16, "two", lambda p, q: Expectation(4, 3, 2, 3), description="dihedral group of order 16"))

# auxiliary groups
_reg(Family("Phi2(211)a", lambda p: direct_product(_phi2_21(p), cyclic(p), label="Phi2(21) x Z_p"), "odd",
            lambda p, q: Expectation(4, 2, 1, 2, (1, 1)), description="Phi2(21) x Z_p"))
_reg(Family("Phi2(1^4)", lambda p: direct_product(_es(p), cyclic(p), label="ES_p(p^3) x Z_p"), "odd",
            lambda p, q: Expectation(4, 2, 1, 1, (1, 1, 1, 1)), description="ES_p(p^3) x Z_p"))
_reg(Family("Phi2(31)", lambda p: PcPresentation.from_words(
    p, 4, {0: [(2, 1)], 2: [(3, 1)]}, {(1, 0): [(3, 1)]}, names=("a", "a1", "a^p", "a^(p^2)")), "odd",
            lambda p, q: Expectation(4, 2, 1, 3, ()), description="[a1,a] = a^(p^2), a1^p = 1"))
_reg(Family("Phi2(211)b", lambda p: PcPresentation.from_words(
    p, 4, {2: [(3, 1)]}, {(1, 0): [(3, 1)]}, names=("a", "a1", "c", "c^p")), "odd",
            lambda p, q: Expectation(4, 2, 1, 2, (1, 1)), description="[a1,a] = c^p, a^p = a1^p = c^(p^2) = 1"))
_reg(Family("Phi2(211)c", _phi2_211c, "odd", lambda p, q: Expectation(4, 2, 1, 2, (1, 1)),
            description="[a1,a] = a2, a^(p^2) = a1^p = a2^p = 1"))
_reg(Family("Phi3(1^4)", _phi3_14, "odd", lambda p, q: Expectation(4, 3, 2, _exp_odd3(p), (1, 1)),
            description="[a_i,a] = a_(i+1), a^p = a1^(p) = a2^p = a3^p = 1"))
_reg(Family("Phi2(21)", _phi2_21, "odd", lambda p, q: Expectation(3, 2, 1, 2, ()),
            description="[a1,a] = a^p = a2, a1^p = 1"))
_reg(Family("PropK-capable", _propk, "odd", lambda p, q: Expectation(7, 2, 2, 1, None, 9, 9, 9),
            description="[x2,x1] = [x5,x3] = c1, [x3,x1] = [x5,x4] = c2, exponent p"))
_reg(Family("ES", _es, "odd", lambda p, q: Expectation(2 * q.get("m", 2) + 1, 2, 1, 1), (("m", 2),),
            description="extraspecial group of order p^(2m+1), exponent p"))
_reg(Family("E(2)", _e2, "odd", lambda p, q: Expectation(2 * q.get("m", 2) + 2, 2, 1, 2), (("m", 2),),
            description="central product of ES(p^(2m+1)) and Z_(p^2)"))
_reg(Family("Phi4(1^5)", _phi4_15, "odd", lambda p, q: Expectation(5, 2, 2, 1),
            description="Z_p^4 x| Z_p, t: a_i -> a_i b_i, b_i fixed"))
_reg(Family("D8", _d8, "two", lambda p, q: Expectation(3, 2, 1, 2), description="dihedral group of order 8"))
_reg(Family("Q8", _q8, "two", lambda p, q: Expectation(3, 2, 1, 2), description="quaternion group"))


def _z2z4z2_expect(p, q):
    action = q.get("action", "a->ab,b->b")
    reps = {_aut_name(a): a for a in z4xz2_involution_classes()}
    u, v = reps[action]
    abelian = (u, v) == ((1, 0), (0, 1))
    # derived subgroup is generated by z^-1 phi(z), z in Z_4 x Z_2
    derived = set()
    for z in _z42_points():
        w = _z42_apply((u, v), z)
        derived.add(((w[0] - z[0]) % 4, (w[1] - z[1]) % 2))
    return Expectation(5, 1 if abelian else 2, {1: 0, 2: 1, 4: 2}[len(derived)], 2)


FAMILIES["Z_2x(Z_4xZ_2):Z_2"] = Family(
    "Z_2x(Z_4xZ_2):Z_2", _z2_z4z2_z2, "two", _z2z4z2_expect, (("action", "a->ab,b->b"),),
    description="Z_2 x ((Z_4 x Z_2) x| Z_2); the action is not named, all involution classes are candidates",
    candidates=lambda p: [{"action": _aut_name(a)} for a in z4xz2_involution_classes()],
)

MAIN_ODD = [
    "Phi2(22)", "Phi3(211)a", "Phi3(211)b_r", "Phi2(2111)c", "Phi2(2111)d", "Phi3(1^5)",
    "Phi7(1^5)", "Phi11(1^6)", "Phi12(1^6)", "Phi13(1^6)", "Phi15(1^6)", "(Z_p^4:Z_p)xZ_p^2",
]
MAIN_TWO = ["Z_2^4:Z_2", "Z_2x(Z_4xZ_2):Z_2", "Z_4:Z_4", "D16"]
ORDER_P4 = [
    "Phi2(211)a", "Phi2(1^4)", "Phi2(31)", "Phi2(22)", "Phi2(211)b", "Phi2(211)c",
    "Phi3(211)a", "Phi3(211)b_r", "Phi3(1^4)",
]


# ---------------------------------------------------------------------------
# entries


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    p: int
    params: tuple
    item: int | None
    expect: Expectation
    description: str = ""
    candidate_params: tuple = field(default=(), compare=False)

    @property
    def n(self) -> int:
        return self.expect.n

    @property
    def expected_t(self) -> int | None:
        return self.n + 1 if self.item is not None else None

    @property
    def expected_multiplier(self) -> AbelianInvariants | None:
        if self.expect.multiplier is None:
            return None
        return AbelianInvariants(self.p, self.expect.multiplier)

    @property
    def expected_multiplier_exponent(self) -> int | None:
        if self.expect.multiplier is not None:
            return sum(self.expect.multiplier)
        if self.expect.multiplier_exponent is not None:
            return self.expect.multiplier_exponent
        if self.item is not None:
            return self.n * (self.n - 1) // 2 - (self.n + 1)
        return None

    def build(self) -> PcPresentation:
        return build(self.id, self.p, **dict(self.params))

    @property
    def label(self) -> str:
        extra = [f"{k}={v}" for k, v in self.params if v is not None]
        return self.id + (f" [{', '.join(extra)}]" if extra else "")

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "p": self.p,
            "params": {k: v for k, v in self.params},
            "item": self.item,
            "n": self.n,
            "expected_t": self.expected_t,
            "expected_multiplier": None if self.expected_multiplier is None else self.expected_multiplier.to_json(),
            "expected_multiplier_exponent": self.expected_multiplier_exponent,
            "class": self.expect.nclass,
            "derived_exponent": self.expect.derived,
            "exponent": self.p ** self.expect.exponent,
            "description": self.description,
        }


def _resolve_params(fam: Family, p: int, params: dict) -> dict:
    allowed = dict(fam.defaults)
    unknown = set(params) - set(allowed)
    if unknown:
        raise ParameterError(f"{fam.id} does not take parameters {sorted(unknown)}")
    out = {**allowed, **{k: v for k, v in params.items() if v is not None}}
    if fam.id == "Phi15(1^6)" and out.get("g") is None:
        out["g"] = smallest_nonresidue(p)
    return out


def _check_prime(fam: Family, p: int):
    {"odd": _odd, "two": _two, "any": _any}[fam.primes](p)


def family(id: str) -> Family:
    try:
        return FAMILIES[id]
    except KeyError:
        raise InputError(f"unknown catalog id {id!r}") from None


def entry(id: str, p: int, item: int | None = None, **params) -> CatalogEntry:
    fam = family(id)
    _check_prime(fam, p)
    full = _resolve_params(fam, p, params)
    cands = tuple(tuple(sorted(c.items())) for c in fam.candidates(p)) if fam.candidates else ()
    return CatalogEntry(id, p, tuple(sorted(full.items())), item, fam.expect(p, full), fam.description, cands)


@lru_cache(maxsize=256)
def _build_cached(id: str, p: int, params: tuple) -> PcPresentation:
    fam = family(id)
    pres = fam.builder(p, **dict(params)) if params else fam.builder(p)
    label = id + ("".join(f" {k}={v}" for k, v in params) if params else "")
    return pres.relabel(label)


def build(id: str, p: int = 2, **params) -> PcPresentation:
    """Consistent presentation of a catalog group (validated on construction)."""
    fam = family(id)
    _check_prime(fam, p)
    full = _resolve_params(fam, p, params)
    return _build_cached(id, p, tuple(sorted(full.items())))


def main_theorem_list(p: int) -> list[CatalogEntry]:
    _any(p)
    if p == 2:
        return [entry(i, 2, item=13 + k) for k, i in enumerate(MAIN_TWO)]
    return [entry(i, p, item=1 + k) for k, i in enumerate(MAIN_ODD)]


def auxiliary_list(p: int) -> list[CatalogEntry]:
    _any(p)
    if p == 2:
        return [entry("D8", 2), entry("Q8", 2)]
    out = [entry(i, p) for i in ORDER_P4]
    out += [
        entry("PropK-capable", p),
        entry("ES", p, m=1),
        entry("ES", p, m=2),
        entry("E(2)", p),
        entry("Phi4(1^5)", p),
    ]
    return out


def order_p4_list(p: int) -> list[CatalogEntry]:
    _odd(p)
    return [entry(i, p) for i in ORDER_P4]


def candidate_entries(e: CatalogEntry) -> list[CatalogEntry]:
    """All candidate instantiations of an entry whose defining action is not specified."""
    if not e.candidate_params:
        return [e]
    return [entry(e.id, e.p, item=e.item, **dict(c)) for c in e.candidate_params]


def all_ids() -> list[str]:
    return list(FAMILIES)
