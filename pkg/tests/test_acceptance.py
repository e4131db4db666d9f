"""Acceptance criteria, one test each.  Every test prints a single PASS/FAIL line,
which is also collected into the terminal summary.

Run standalone with ``python3 tests/test_acceptance.py``.
"""

import subprocess
import sys
import time
from pathlib import Path

import pytest
from helpers import catalog_entries

from pschur.bounds import audit
from pschur.catalog import build
from pschur.groups import PcGroup
from pschur.multiplier import be_applicable, blackburn_evens, schur_tails
from pschur.oracle import schur_from_h2
from pschur.verify import table_shhh, verify_main

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # imported outside pytest
    ACCEPTANCE_LINES = []

HERE = Path(__file__).resolve().parent


def record(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def test_criterion_1_main_list_odd():
    parts, ok = [], True
    for p in (3, 5):
        rep, timing = verify_main(p)
        good = [g for g in rep["groups"] if g["passed"] and g["t"] == g["n"] + 1]
        fast = timing["total"] < 120
        ok &= rep["passed"] and len(good) == 12 and len(rep["groups"]) == 12 and fast
        parts.append(f"p={p} {len(good)}/12 with t = n+1 in {timing['total']:.1f}s")
    record(1, ok, "; ".join(parts))
    assert ok


def test_criterion_2_main_list_two():
    rep, timing = verify_main(2)
    items = {g["item"]: g for g in rep["groups"]}
    ok = rep["passed"] and sorted(items) == [13, 14, 15, 16] and timing["total"] < 300
    for g in rep["groups"]:
        ok &= g["t"] == g["n"] + 1 and "tails" in g["methods"] and "oracle" in g["methods"]
    for k in (13, 14):
        sat = items[k]["satisfying_candidates"]
        ok &= len(sat) >= 1 and all(c["satisfies"] == (c["params"] in sat) for c in items[k]["candidates"])
    sat = "; ".join(f"item {k}: {items[k]['satisfying_candidates']}" for k in (13, 14))
    record(2, ok, f"4/4 with t = n+1 (tails + oracle) in {timing['total']:.1f}s; satisfying actions {sat}")
    assert ok


def test_criterion_3_order_p4_table():
    rep, timing = table_shhh(3)
    rows = rep["rows"]
    ok = rep["passed"] and len(rows) == 9 and all(r["match"] for r in rows) and timing["total"] < 60
    record(3, ok, f"{sum(r['match'] for r in rows)}/9 order-81 multipliers match in {timing['total']:.1f}s")
    assert ok


BE_TARGETS = [("Phi11(1^6)", 1, None), ("Phi12(1^6)", 4, None), ("Phi13(1^6)", 4, None), ("Phi15(1^6)", 4, None),
              ("PropK-capable", 9, 9)]


def test_criterion_4_be_dimensions():
    ok, seen = True, []
    for p in (3, 5):
        for id, dim, order in BE_TARGETS:
            r = blackburn_evens(build(id, p))
            d = r.diagnostics
            good = d["dimX"] == d["dimX1"] == dim and (order is None or r.order_exponent == order)
            ok &= good
            seen.append(f"{id}@{p}:{d['dimX']}/{d['dimX1']}" + ("" if good else "!"))
    record(4, ok, "dim X/dim X1 " + ", ".join(seen) + "; PropK |M| = p^9")
    assert ok


def test_criterion_5_cross_engine():
    t0 = time.perf_counter()
    three, small, bad = 0, 0, []
    for e in catalog_entries():
        if e.p**e.n > 128:
            continue
        pres = e.build()
        G = PcGroup(pres)
        tails = schur_tails(pres)
        oracle = schur_from_h2(G)
        orders = {tails.order_exponent, oracle.order_exponent}
        same = tails.invariants == oracle.invariants
        if e.p == 3 and G.order <= 81 and be_applicable(G)[0]:
            orders.add(blackburn_evens(pres, G).order_exponent)
            three += 1
        small += 1
        if len(orders) != 1 or not same:
            bad.append(f"p{e.p}-{e.label}")
    ok = not bad and three >= 2 and small >= 20
    record(5, ok, f"tails = oracle on {small} catalog groups of order <= 128, BE also on {three} at p=3 "
                  f"with |G| <= 81; mismatches {bad or 'none'} ({time.perf_counter() - t0:.1f}s)")
    assert ok


def test_criterion_6_bound_audit():
    t0 = time.perf_counter()
    failures, checks, groups = [], 0, 0
    for e in catalog_entries():
        pres = e.build()
        G = PcGroup(pres)
        r = audit(pres, schur_tails(pres), G)
        groups += 1
        checks += sum(c.passed is not None for c in r.checks)
        failures += [f"p{e.p}-{e.label}:{c.name}" for c in r.failures]
    ok = not failures
    record(6, ok, f"{checks} bound checks on {groups} catalog groups (p = 2, 3, 5), "
                  f"{len(failures)} failures ({time.perf_counter() - t0:.1f}s)")
    assert ok, failures


PROPERTY_TESTS = [
    "test_pcgroup.py::test_collection_associative",
    "test_pcgroup.py::test_normal_form_uniqueness",
    "test_linalg.py::test_snf_divisor_chain",
    "test_linalg.py::test_snf_product_is_det",
    "test_multiplier.py::test_tails_matches_abelian_formula",
    "test_multiplier.py::test_direct_product_formula",
]


def test_criterion_7_property_suites_standalone():
    t0 = time.perf_counter()
    cmd = [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *[str(HERE / t) for t in PROPERTY_TESTS]]
    r = subprocess.run(cmd, capture_output=True, text=True, cwd=HERE.parent, timeout=1800)
    tail = r.stdout.strip().splitlines()[-1] if r.stdout.strip() else r.stderr.strip()[-200:]
    ok = r.returncode == 0
    record(7, ok, f"standalone property run ({len(PROPERTY_TESTS)} suites, >= 10^4 triples per group): "
                  f"{tail} ({time.perf_counter() - t0:.1f}s)")
    assert ok, r.stdout[-3000:]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
