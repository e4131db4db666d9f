"""Multipliers of every candidate action for the p = 2 items with unspecified actions."""

from pschur.catalog import candidate_entries, main_theorem_list
from pschur.groups import PcGroup
from pschur.multiplier import corank_report, schur_tails
from pschur.oracle import schur_from_h2

for e in main_theorem_list(2):
    for c in candidate_entries(e):
        pres = c.build()
        G = PcGroup(pres)
        tails = schur_tails(pres)
        oracle = schur_from_h2(G)
        t, _ = corank_report(pres.n, tails.order_exponent, G.is_abelian())
        mark = "t = n+1" if t == pres.n + 1 else ""
        print(f"item {c.item:>2}  {c.label:42} M={tails.invariants!s:22} oracle={oracle.invariants!s:22} t={t} {mark}")
