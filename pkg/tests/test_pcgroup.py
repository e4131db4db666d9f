import random

import pytest
from helpers import catalog_entries, entry_ids

from pschur.catalog import build
from pschur.constructions import abelian_presentation
from pschur.errors import InconsistentPresentation, InputError, ParseError
from pschur.groups import PcGroup
from pschur.pcgroup import (
    Collector,
    PcPresentation,
    check_consistent,
    format_word,
    is_consistent,
    parse_dsl,
    parse_word,
)

ENTRIES = catalog_entries()
TRIPLES = 10_000


def test_empty_word_is_identity():
    c = Collector.for_presentation(build("ES", 3, m=1))
    assert c.collect([]) == c.identity


def test_es_swap_differs_by_commutator():
    pres = build("ES", 3, m=1)
    c = Collector.for_presentation(pres)
    xy = c.collect([(0, 1), (1, 1)])
    yx = c.collect([(1, 1), (0, 1)])
    # g2 g1 = g1 g2 [g2, g1] and [g2, g1] = g3
    assert yx == c.mul(xy, c.gen(2))
    assert xy[0] == (1, 1, 0) and yx[0] == (1, 1, 1)


def test_unknown_generator_in_word():
    c = Collector.for_presentation(build("ES", 3, m=1))
    with pytest.raises(InputError):
        c.collect([(5, 1)])


def test_elementary_abelian_consistent():
    pres = PcPresentation.from_words(5, 3, {}, {})
    assert is_consistent(pres) == (True, None)
    assert PcGroup(pres).is_abelian()


def test_corrupted_es_fails_with_named_overlap():
    # ES(27) with g1^3 = g2 added: clashes with [g2, g1] = g3
    with pytest.raises(InconsistentPresentation) as info:
        PcPresentation.from_words(3, 3, {0: [(1, 1)]}, {(1, 0): [(2, 1)]})
    assert info.value.overlap.startswith("g1^4")


def test_corruption_reported_without_raising():
    good = build("ES", 3, m=1)
    bad = PcPresentation(3, 3, ((0, 1, 0), (0, 0, 0), (0, 0, 0)), good.comms)
    ok, msg = is_consistent(bad)
    assert not ok and "g1" in msg


def test_support_is_validated():
    with pytest.raises(InputError):
        PcPresentation.from_words(3, 3, {1: [(0, 1)]}, {})
    with pytest.raises(InputError):
        PcPresentation.from_words(3, 3, {}, {(2, 1): [(1, 1)]})


def test_commutator_given_in_either_order():
    a = PcPresentation.from_words(3, 3, {}, {(1, 0): [(2, 1)]})
    b = PcPresentation.from_words(3, 3, {}, {(0, 1): [(2, 1)]})
    # [g1, g2] = g3 means [g2, g1] = g3^-1
    assert a.comms[1][0] == (0, 0, 1) and b.comms[1][0] == (0, 0, 2)


@pytest.mark.parametrize("e", ENTRIES, ids=entry_ids(ENTRIES))
def test_catalog_consistent(e):
    assert is_consistent(e.build())[0]


@pytest.mark.parametrize("e", ENTRIES, ids=entry_ids(ENTRIES))
def test_collection_associative(e):
    pres = e.build()
    c = Collector.for_presentation(pres)
    rng = random.Random(hash(e.label) & 0xFFFF)
    p, n = pres.p, pres.n
    for _ in range(TRIPLES):
        a, b, d = (c.element([rng.randrange(p) for _ in range(n)]) for _ in range(3))
        assert c.mul(c.mul(a, b), d) == c.mul(a, c.mul(b, d))


@pytest.mark.parametrize("e", ENTRIES, ids=entry_ids(ENTRIES))
def test_collector_matches_tables(e):
    pres = e.build()
    G = PcGroup(pres)
    c = Collector.for_presentation(pres)
    rng = random.Random(1)
    for _ in range(300):
        x, y = rng.randrange(G.order), rng.randrange(G.order)
        got = c.mul(c.element(G.exps(x)), c.element(G.exps(y)))[0]
        assert got == G.exps(int(G.mul(x, y)))


@pytest.mark.parametrize("e", [e for e in ENTRIES if e.p ** e.n <= 3**6], ids=entry_ids([e for e in ENTRIES if e.p ** e.n <= 3**6]))
def test_normal_form_uniqueness(e):
    """collect is a bijection: every exponent vector is its own normal form, and
    every word collects to exactly one vector."""
    pres = e.build()
    G = PcGroup(pres)
    c = Collector.for_presentation(pres)
    assert G.verify_tables()
    seen = set()
    for x in range(G.order):
        v = G.exps(x)
        word = [(k, a) for k, a in enumerate(v) if a]
        assert c.collect(word)[0] == v
        seen.add(v)
    assert len(seen) == pres.p**pres.n
    # reversed words land somewhere, and inverses are two-sided
    rng = random.Random(2)
    for _ in range(200):
        v = G.exps(rng.randrange(G.order))
        w = [(k, a) for k, a in reversed(list(enumerate(v))) if a]
        x = c.collect(w)
        assert c.mul(x, c.inverse(x)) == c.identity == c.mul(c.inverse(x), x)


@pytest.mark.parametrize("id,p", [("Phi7(1^5)", 3), ("Phi11(1^6)", 5), ("D16", 2), ("Phi3(211)a", 3)])
def test_hall_witt(id, p):
    """[x, y^-1, z]^y [y, z^-1, x]^z [z, x^-1, y]^x = 1 with left-normed commutators."""
    c = Collector.for_presentation(build(id, p))
    pres = build(id, p)
    rng = random.Random(3)
    comm, conj, inv = c.commutator, c.conjugate, c.inverse
    for _ in range(300):
        x, y, z = (c.element([rng.randrange(p) for _ in range(pres.n)]) for _ in range(3))
        t1 = conj(comm(comm(x, inv(y)), z), y)
        t2 = conj(comm(comm(y, inv(z)), x), z)
        t3 = conj(comm(comm(z, inv(x)), y), x)
        assert c.mul(c.mul(t1, t2), t3) == c.identity
        assert comm(x, x) == c.identity
        assert c.power(x, p ** pres.n) == c.identity


def test_dsl_roundtrip():
    for id, p in [("Phi15(1^6)", 5), ("D16", 2), ("Phi3(211)b_r", 3)]:
        pres = build(id, p)
        again = parse_dsl(pres.to_dsl())
        assert again.powers == pres.powers and again.comms == pres.comms


def test_dsl_example():
    text = """
    # extraspecial group of order 27
    p = 3
    gens = 3
    comm 2 1 = g3
    """
    pres = parse_dsl(text)
    assert pres.order == 27 and PcGroup(pres).nilpotency_class == 2


@pytest.mark.parametrize(
    "text,line",
    [
        ("p = 3\ngens = 3\ncomm 2 1 = g3 *** g2", 3),
        ("p = 3\ngens = 3\ncomm 2 1 = g3 % g2", 3),
        ("p = 3\ngens = 3\n\npow 2 = g1", 4),
        ("p = 3\ngens = 3\npow 4 = g3", 3),
        ("p = 4\ngens = 2", 1),
        ("p = 3\ngens = 2\nfoo = 1", 3),
        ("p = 3\npow 1 = g2", 2),
        ("p = 3\ngens = 3\ncomm 2 1 g3", 3),
    ],
)
def test_dsl_parse_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_dsl(text)
    assert info.value.lineno == line and f"line {line}" in str(info.value)


def test_dsl_inconsistent():
    with pytest.raises(InconsistentPresentation):
        parse_dsl("p = 3\ngens = 3\npow 1 = g2\ncomm 2 1 = g3\n")


def test_words():
    assert format_word((0, 2, 1)) == "g2^2 g3"
    assert format_word((0, 0)) == "1"
    assert parse_word("g1^2 g3", 3) == [(0, 2), (2, 1)]
    with pytest.raises(ParseError):
        parse_word("g4", 3)


def test_check_consistent_returns_presentation():
    pres = abelian_presentation([2, 1], 3)
    assert check_consistent(pres) is pres and pres.order == 27
