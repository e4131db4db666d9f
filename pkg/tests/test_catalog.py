import math

import pytest
from helpers import catalog_entries, entry_ids

from pschur.catalog import (
    MAIN_ODD,
    MAIN_TWO,
    all_ids,
    build,
    entry,
    is_nonresidue,
    main_theorem_list,
    order_p4_list,
    smallest_nonresidue,
    z4xz2_automorphisms,
    z4xz2_involution_classes,
)
from pschur.errors import InputError, ParameterError
from pschur.groups import PcGroup
from pschur.multiplier import schur_tails

ENTRIES = catalog_entries()


@pytest.mark.parametrize("e", ENTRIES, ids=entry_ids(ENTRIES))
def test_structure_matches_expectation(e):
    G = PcGroup(e.build())
    x = e.expect
    assert G.n == x.n
    assert G.nilpotency_class == x.nclass
    assert G.derived_subgroup.order == e.p**x.derived
    assert G.exponent == e.p**x.exponent


def test_main_lists():
    for p in (3, 5, 7):
        es = main_theorem_list(p)
        assert [e.item for e in es] == list(range(1, 13))
        assert [e.id for e in es] == MAIN_ODD
        # items 1 to 7 have order p^4 or p^5, items 8 to 11 order p^6, item 12 order p^7
        assert [e.n for e in es] == [4, 4, 4, 5, 5, 5, 5, 6, 6, 6, 6, 7]
        assert all(e.expected_t == e.n + 1 for e in es)
    two = main_theorem_list(2)
    assert [e.item for e in two] == [13, 14, 15, 16] and [e.id for e in two] == MAIN_TWO
    assert all(e.n == 5 or e.n == 4 for e in two)


def test_order_p4_list():
    es = order_p4_list(3)
    assert len(es) == 9 and all(e.n == 4 for e in es)
    with pytest.raises(ParameterError):
        order_p4_list(2)


def test_parameter_errors():
    with pytest.raises(InputError):
        entry("no-such-group", 3)
    with pytest.raises(ParameterError):
        build("Phi11(1^6)", 2)
    with pytest.raises(ParameterError):
        build("D16", 3)
    with pytest.raises(ParameterError):
        build("Phi7(1^5)", 4)
    with pytest.raises(ParameterError):
        build("Phi15(1^6)", 5, g=4)  # 4 is a square mod 5
    with pytest.raises(ParameterError):
        build("Phi3(211)b_r", 3, r=3)
    with pytest.raises(ParameterError):
        build("ES", 3, m=0)
    with pytest.raises(ParameterError):
        build("Phi13(1^6)", 3, form="other")
    with pytest.raises(ParameterError):
        build("ES", 3, bogus=1)


def test_nonresidues():
    assert [smallest_nonresidue(p) for p in (3, 5, 7, 11, 13)] == [2, 2, 3, 2, 2]
    assert is_nonresidue(3, 5) and not is_nonresidue(4, 5)


def test_phi15_independent_of_nonresidue():
    a = schur_tails(build("Phi15(1^6)", 5, g=2)).invariants
    b = schur_tails(build("Phi15(1^6)", 5, g=3)).invariants
    assert a == b and a.order_exponent == 6 + 2


def test_phi13_forms():
    """The two printed readings of the relations differ; only one has |M| = p^8."""
    for p in (3, 5):
        james = PcGroup(build("Phi13(1^6)", p))
        printed = PcGroup(build("Phi13(1^6)", p, form="as-printed"))
        assert james.center.order == p**2 and printed.center.order == p**3
        assert schur_tails(james.pres).invariants.order_exponent == 8
        assert schur_tails(printed.pres).invariants.order_exponent == 9


def test_phi3_211_b_r_parameter():
    for r in (1, 2):
        assert schur_tails(build("Phi3(211)b_r", 3, r=r)).invariants.order_exponent == 1


def test_z4xz2_automorphisms():
    auts = z4xz2_automorphisms()
    assert len(auts) == 8  # Aut(Z_4 x Z_2) is dihedral of order 8
    assert len(z4xz2_involution_classes()) == 4


def test_entry_json_and_label():
    e = entry("Phi15(1^6)", 5)
    j = e.to_json()
    assert j["params"] == {"g": 2} and j["n"] == 6 and j["id"] == "Phi15(1^6)"
    assert e.label == "Phi15(1^6) [g=2]"
    assert entry("D16", 2).label == "D16"


def test_every_id_builds_somewhere():
    for id in all_ids():
        built = False
        for p in (2, 3, 5):
            try:
                pres = build(id, p)
            except ParameterError:
                continue
            assert pres.order == p**pres.n and math.log(pres.order, p) >= 3 - 1e-9
            built = True
        assert built, id
