"""Time 10^4 random associativity triples through the collector for each catalog group."""

import random
import time

from pschur.catalog import auxiliary_list, candidate_entries, main_theorem_list
from pschur.pcgroup import Collector

TRIPLES = 10_000

for p in (2, 3, 5):
    for e in main_theorem_list(p) + auxiliary_list(p):
        for c in candidate_entries(e):
            pres = c.build()
            coll = Collector.for_presentation(pres)
            rng = random.Random(0)
            t0 = time.perf_counter()
            for _ in range(TRIPLES):
                a, b, d = (coll.element([rng.randrange(p) for _ in range(pres.n)]) for _ in range(3))
                assert coll.mul(coll.mul(a, b), d) == coll.mul(a, coll.mul(b, d))
            print(f"p={p} {c.label:42} {time.perf_counter() - t0:6.2f}s")
