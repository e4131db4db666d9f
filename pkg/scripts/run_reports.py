"""Write verify-main and table-shhh JSON reports for several primes.

    python3 scripts/run_reports.py [--out reports] [--primes 2 3 5]
"""

import argparse
import json
from pathlib import Path

from pschur.verify import table_shhh, verify_main


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("reports"))
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3, 5])
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    status = 0
    for p in args.primes:
        jobs = [("verify-main", verify_main)] + ([("table-shhh", table_shhh)] if p > 2 else [])
        for name, fn in jobs:
            report, timing = fn(p)
            path = args.out / f"{name}-p{p}.json"
            path.write_text(json.dumps({**report, "timing": timing}, sort_keys=True, indent=2) + "\n")
            print(f"{name:12} p={p}  passed={report['passed']}  {timing['total']:.1f}s  -> {path}")
            status |= not report["passed"]
    raise SystemExit(status)


if __name__ == "__main__":
    main()
