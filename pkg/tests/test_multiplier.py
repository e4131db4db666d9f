import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pschur.catalog import auxiliary_list, build, main_theorem_list
from pschur.constructions import abelian_presentation, cyclic, direct_product
from pschur.errors import InternalError, PreconditionError
from pschur.groups import PcGroup
from pschur.linalg import AbelianInvariants
from pschur.multiplier import (
    MultiplierResult,
    be_applicable,
    be_data,
    blackburn_evens,
    corank_report,
    green_exponent,
    multiplier_of_abelian,
    multiplier_of_direct_product,
    schur_tails,
    tensor_of_abelian,
)


def M(pres):
    return schur_tails(pres).invariants


@pytest.mark.parametrize("p", [2, 3, 5])
def test_cyclic_multiplier_trivial(p):
    assert M(cyclic(p, 2)).is_trivial
    assert M(cyclic(p, 1)).is_trivial


@pytest.mark.parametrize("p", [3, 5])
def test_small_examples(p):
    assert M(build("Phi3(211)a", p)) == AbelianInvariants(p, (1,))
    assert M(build("Phi7(1^5)", p)).order_exponent == 4
    assert M(build("ES", p, m=1)) == AbelianInvariants.elementary(p, 2)


def test_p2_examples():
    assert M(build("D8", 2)) == AbelianInvariants(2, (1,))
    assert M(build("Q8", 2)).is_trivial
    assert M(build("D16", 2)) == AbelianInvariants(2, (1,))
    assert M(build("Z_4:Z_4", 2)) == AbelianInvariants(2, (1,))


def test_abelian_formula_examples():
    assert multiplier_of_abelian(AbelianInvariants(3, (2, 1, 1))) == AbelianInvariants(3, (1, 1, 1))
    assert multiplier_of_abelian(AbelianInvariants(5, (3, 2))) == AbelianInvariants(5, (2,))
    assert tensor_of_abelian(AbelianInvariants(3, (2, 1)), AbelianInvariants(3, (3,))) == AbelianInvariants(3, (2, 1))
    with pytest.raises(PreconditionError):
        tensor_of_abelian(AbelianInvariants(3, (1,)), AbelianInvariants(5, (1,)))


@settings(max_examples=60)
@given(st.sampled_from([2, 3, 5]), st.lists(st.integers(1, 3), min_size=1, max_size=4))
def test_tails_matches_abelian_formula(p, exps):
    if sum(exps) > 7:
        exps = exps[:2]
    inv = AbelianInvariants(p, tuple(exps))
    assert M(abelian_presentation(inv)) == multiplier_of_abelian(inv)


SMALL = [(id, p) for p in (2, 3) for id in ("Phi2(211)a", "Phi3(1^4)", "ES", "Phi2(22)", "D8", "Q8") if not (p == 2) ^ (id in ("D8", "Q8"))]


@settings(max_examples=25)
@given(st.sampled_from(SMALL), st.data())
def test_direct_product_formula(a, data):
    id, p = a
    pa = build(id, p, m=1) if id == "ES" else build(id, p)
    pb = abelian_presentation(data.draw(st.lists(st.integers(1, 2), min_size=1, max_size=2)), p)
    D = direct_product(pa, pb)
    ga, gb = PcGroup(pa), PcGroup(pb)
    want = multiplier_of_direct_product(M(pa), M(pb), ga.abelianization, gb.abelianization)
    assert M(D) == want


def test_direct_product_of_nonabelian_groups():
    a, b = build("ES", 3, m=1), build("Phi3(1^4)", 3)
    want = multiplier_of_direct_product(M(a), M(b), PcGroup(a).abelianization, PcGroup(b).abelianization)
    assert M(direct_product(a, b)) == want


BE_GROUPS = [e for p in (3, 5) for e in main_theorem_list(p) + auxiliary_list(p) if be_applicable(PcGroup(e.build()))[0]]


@pytest.mark.parametrize("e", BE_GROUPS, ids=[f"p{e.p}-{e.label}" for e in BE_GROUPS])
def test_be_agrees_with_tails(e):
    pres = e.build()
    assert blackburn_evens(pres).order_exponent == schur_tails(pres).order_exponent


def test_be_applies_to_the_expected_groups():
    ids = {e.id for e in BE_GROUPS}
    assert {"Phi11(1^6)", "Phi12(1^6)", "Phi13(1^6)", "Phi15(1^6)", "PropK-capable", "ES", "Phi2(1^4)"} <= ids
    assert "Phi3(211)a" not in ids and "Phi2(22)" not in ids


@pytest.mark.parametrize("id,dim", [("Phi11(1^6)", 1), ("Phi12(1^6)", 4), ("Phi13(1^6)", 4), ("Phi15(1^6)", 4), ("PropK-capable", 9)])
@pytest.mark.parametrize("p", [3, 5])
def test_be_dims(id, dim, p):
    d = blackburn_evens(build(id, p)).diagnostics
    assert d["dimX"] == dim and d["dimX1"] == dim


@pytest.mark.parametrize("id", ["Phi12(1^6)", "Phi15(1^6)", "PropK-capable", "Phi4(1^5)"])
def test_be_dims_basis_invariant(id):
    pres = build(id, 5)
    G = PcGroup(pres)
    base = be_data(pres, G)
    rng = random.Random(0)
    for _ in range(4):
        order = list(range(base.V_dim))
        rng.shuffle(order)
        d = be_data(pres, G, order=order)
        assert (d.X.dim, d.X1.dim, d.X2.dim) == (base.X.dim, base.X1.dim, base.X2.dim)


def test_be_form_is_alternating():
    d = be_data(build("PropK-capable", 3))
    B = d.bilinear
    for i, j in itertools.product(range(d.V_dim), repeat=2):
        assert not ((B[i, j] + B[j, i]) % 3).any()
    assert not B[range(d.V_dim), range(d.V_dim)].any()


def test_be_preconditions():
    with pytest.raises(PreconditionError, match="odd"):
        blackburn_evens(build("D8", 2))
    with pytest.raises(PreconditionError, match="class 2"):
        blackburn_evens(build("Phi3(1^4)", 3))
    with pytest.raises(PreconditionError, match="elementary"):
        blackburn_evens(build("Phi2(22)", 3))
    ok, why = be_applicable(PcGroup(build("Phi7(1^5)", 3)))
    assert not ok and "class" in why


def test_corank_examples():
    assert green_exponent(6) == 15
    # Phi11 at any p: n = 6 and |M| = p^8
    assert corank_report(6, 8, False) == (7, 3)
    assert corank_report(4, 6, True) == (0, None)


def test_t_equals_n_plus_one_for_main_list():
    for e in main_theorem_list(3):
        k = schur_tails(e.build()).order_exponent
        t, _ = corank_report(e.n, k, False)
        assert t == e.n + 1, e.label


def test_result_consistency_guard():
    with pytest.raises(InternalError):
        MultiplierResult(3, 2, AbelianInvariants(3, (1,)), "tails")
    r = MultiplierResult(3, 1, AbelianInvariants(3, (1,)), "tails")
    assert r.describe() == "Z_3" and r.to_json()["invariants"] == [3]
    assert MultiplierResult(3, 2, None, "be").describe() == "order 3^2"


def test_tails_free_rank_is_n():
    for id, p in [("Phi7(1^5)", 3), ("D16", 2), ("Phi11(1^6)", 5)]:
        pres = build(id, p)
        assert schur_tails(pres).diagnostics["free_rank"] == pres.n
