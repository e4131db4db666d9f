"""Shared group lists for the test modules."""

from functools import lru_cache

from pschur.catalog import auxiliary_list, candidate_entries, main_theorem_list


@lru_cache(maxsize=None)
def catalog_entries(primes=(2, 3, 5)):
    out = []
    for p in primes:
        for e in main_theorem_list(p) + auxiliary_list(p):
            out.extend(candidate_entries(e))
    return tuple(out)


def entry_ids(entries):
    return [f"p{e.p}-{e.label}" for e in entries]
