"""Compare the two readings of the Phi13(1^6) relations at several primes."""

import math

from pschur.catalog import build
from pschur.groups import PcGroup
from pschur.multiplier import blackburn_evens, schur_tails

for p in (3, 5, 7):
    for form in ("james", "as-printed"):
        pres = build("Phi13(1^6)", p, form=form)
        G = PcGroup(pres)
        be = blackburn_evens(pres, G).diagnostics
        z = round(math.log(G.center.order, p))
        print(f"p={p} {form:10} |Z(G)|=p^{z}  M={schur_tails(pres).invariants}  dimX={be['dimX']} dimX1={be['dimX1']}")
