import itertools

import numpy as np
import pytest
from helpers import catalog_entries, entry_ids

from pschur.bounds import (
    audit,
    central_quotient_check,
    class3_bound,
    green_bound,
    niroomand_bound,
    psi2_image,
    psi_bound_check,
    psi_images,
    representative_independence,
)
from pschur.catalog import build
from pschur.errors import PreconditionError
from pschur.groups import PcGroup
from pschur.multiplier import schur_tails

ENTRIES = catalog_entries()


def test_green_and_niroomand_values():
    assert [green_bound(n) for n in (4, 6, 7)] == [6, 15, 21]
    assert [niroomand_bound(n) for n in (4, 6, 7)] == [4, 11, 16]
    with pytest.raises(PreconditionError):
        niroomand_bound(2)
    with pytest.raises(PreconditionError):
        green_bound(0)


def test_central_quotient_trivial_k():
    G = PcGroup(build("Phi7(1^5)", 3))
    MG = schur_tails(G.pres)
    c = central_quotient_check(G, G.trivial, MG)
    # A = G and K = 1: both sides equal |M(G)|
    assert c.passed and c.bound == c.computed == MG.order_exponent


def test_central_quotient_derived_subgroup():
    for p in (3, 5):
        G = PcGroup(build("Phi2(2111)d", p))
        MG = schur_tails(G.pres)
        c = central_quotient_check(G, G.derived_subgroup, MG)
        assert c.passed and c.witnesses["derived_meet_K"] == 1
        assert c.witnesses["K_order_exponent"] == 1


def test_central_quotient_phi11_centre():
    G = PcGroup(build("Phi11(1^6)", 3))
    MG = schur_tails(G.pres)
    c = central_quotient_check(G, G.center, MG)
    assert c.passed
    # G/Z is elementary of rank 3, K = Z_p^3
    assert (c.witnesses["M_A"], c.witnesses["M_K"], c.witnesses["tensor"]) == (3, 3, 9)


def test_central_quotient_requires_central_k():
    G = PcGroup(build("ES", 3, m=1))
    with pytest.raises(PreconditionError):
        central_quotient_check(G, G.whole, schur_tails(G.pres))


@pytest.mark.parametrize("p", [3, 5])
def test_psi_phi3_1_4(p):
    """Gbar^ab has rank 2 here, so every basis triple repeats a vector and psi_2 vanishes."""
    G = PcGroup(build("Phi3(1^4)", p))
    d = psi_images(G)
    assert d.delta == 2 and d.psi2.dim == 0 and d.psi3.dim == 1
    bound = class3_bound(G, d.psi2.dim, d.psi3.dim, G.abelianization, d)
    assert bound == schur_tails(G.pres).order_exponent == 2


def test_psi2_vanishes_on_rank_two():
    ranks = {}
    for id, p in [("Phi3(211)a", 3), ("Phi3(211)b_r", 5), ("Phi3(1^4)", 5), ("Phi7(1^5)", 3), ("Phi7(1^5)", 5)]:
        d = psi_images(PcGroup(build(id, p)))
        ranks[id, p] = d.delta
        if d.delta <= 2:
            assert d.psi2.dim == 0
    assert ranks[("Phi3(211)a", 3)] == 2
    # rank 3: a genuine triple exists and psi_2 is non-zero
    assert ranks[("Phi7(1^5)", 5)] == 3 and psi2_image(PcGroup(build("Phi7(1^5)", 5))).dim == 1


@pytest.mark.parametrize("id,p", [("Phi7(1^5)", 3), ("Phi3(1^5)", 5), ("Phi3(211)a", 5)])
def test_psi_dims_basis_invariant(id, p):
    G = PcGroup(build(id, p))
    ref = psi_images(G)
    for order in itertools.permutations(range(ref.delta)):
        d = psi_images(G, order=list(order))
        assert (d.psi2.dim, d.psi3.dim) == (ref.psi2.dim, ref.psi3.dim)
    assert representative_independence(G)


def test_class3_preconditions():
    G = PcGroup(build("ES", 3, m=1))
    with pytest.raises(PreconditionError, match="class 3"):
        psi_images(G)
    with pytest.raises(PreconditionError, match="class 3"):
        class3_bound(G, 0, 0, G.abelianization)
    c = psi_bound_check(G, schur_tails(G.pres))
    assert c.passed is None and "class 3" in c.witnesses["reason"]


def test_known_class3_values():
    G = PcGroup(build("Phi7(1^5)", 3))
    c = psi_bound_check(G, schur_tails(G.pres))
    assert c.passed and c.bound == c.computed == 4
    G = PcGroup(build("Phi3(211)a", 3))
    c = psi_bound_check(G, schur_tails(G.pres))
    assert c.passed and c.bound == 2 and c.computed == 1


def test_report_json_and_summary():
    pres = build("Phi2(1^4)", 3)
    r = audit(pres, schur_tails(pres))
    j = r.to_json()
    assert j["passed"] is True and j["n"] == 4
    names = [c["name"] for c in j["checks"]]
    assert names[:2] == ["green", "niroomand"] and names[-1] == "class-3"
    s = r.summary()
    assert s["fail"] == 0 and s["not_applicable"] == 1 and s["pass"] == len(names) - 1


def test_abelian_niroomand_not_applicable():
    from pschur.constructions import abelian_presentation

    pres = abelian_presentation([1, 1, 1], 3)
    r = audit(pres, schur_tails(pres))
    nir = next(c for c in r.checks if c.name == "niroomand")
    assert nir.passed is None and r.passed


def test_failing_check_is_reported():
    """Feed an inflated multiplier order: the audit must notice."""
    pres = build("ES", 3, m=1)
    MG = schur_tails(pres)
    MG.order_exponent = 5
    MG.invariants = None
    r = audit(pres, MG)
    assert not r.passed and {c.name for c in r.failures} >= {"green", "niroomand"}


@pytest.mark.parametrize("e", ENTRIES, ids=entry_ids(ENTRIES))
def test_audit_catalog(e):
    pres = e.build()
    G = PcGroup(pres)
    r = audit(pres, schur_tails(pres), G)
    assert r.passed, r.failures
    # one central-quotient check per central subgroup of order p
    nz = sum(c.name == "central-quotient" for c in r.checks)
    assert nz == len(G.central_subgroups_of_order_p()) >= 1
    if G.nilpotency_class == 3:
        assert next(c for c in r.checks if c.name == "class-3").passed is True
    assert np.all([c.passed is not False for c in r.checks])
