"""Command-line interface.

Exit codes: 0 when everything checked passes, 1 on a verification failure (or an
internal self-check failure), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .bounds import audit
from .catalog import FAMILIES, MAIN_ODD, MAIN_TWO, ORDER_P4, CatalogEntry, auxiliary_list, entry, family, main_theorem_list
from .errors import GroupSizeError, InconsistentPresentation, InputError, InternalError, PschurError
from .groups import PcGroup
from .multiplier import corank_report
from .oracle import DEFAULT_CAP, MAX_CAP, schur_from_h2
from .pcgroup import PcPresentation, parse_dsl
from .verify import SCHEMA, compute_multipliers, engines_agree, preferred_method, structure, table_shhh, verify_main

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _common(top: bool) -> argparse.ArgumentParser:
    """Global flags; accepted before or after the subcommand.

    Only the top-level parser carries real defaults, otherwise a subparser would
    overwrite a value given before the subcommand.
    """
    c = argparse.ArgumentParser(add_help=False)

    def d(v):
        return v if top else argparse.SUPPRESS

    c.add_argument("--p", type=int, default=d(None), help="the prime")
    c.add_argument("--format", choices=("json", "text"), default=d("text"))
    c.add_argument("--group-file", type=Path, default=d(None), help="group in the pc text format")
    c.add_argument("--oracle-cap", type=int, default=d(DEFAULT_CAP), help=f"largest order for the oracle (max {MAX_CAP})")
    c.add_argument("--param", action="append", default=d([]), metavar="KEY=VALUE",
                   help="family parameter, e.g. action=one-block")
    return c


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pschur", description="Schur multipliers of p-groups and the t(G) = n + 1 classification check.",
                 parents=[_common(True)])
    common = _common(False)
    ap.add_argument("--version", action="version", version=f"pschur {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    cat = sub.add_parser("catalog", parents=[common], help="catalog operations")
    cat.add_argument("action", choices=("list",))
    for name, hlp in (("show", "presentation and structure"), ("bounds", "bound audit")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("id", nargs="?")
    m = sub.add_parser("multiplier", parents=[common], help="Schur multiplier")
    m.add_argument("id", nargs="?")
    m.add_argument("--method", choices=("be", "tails", "oracle", "all"), default="all")
    o = sub.add_parser("oracle", parents=[common], help="cohomology oracle")
    o.add_argument("id", nargs="?")
    o.add_argument("--e", type=int, default=None, help="largest coefficient exponent to try")
    sub.add_parser("verify-main", parents=[common], help="check t(G) = n + 1 for the classification")
    sub.add_parser("table-shhh", parents=[common], help="multipliers of the order-p^4 groups")
    return ap


# ---------------------------------------------------------------------------
# helpers


def _param_value(v: str):
    try:
        return int(v)
    except ValueError:
        return v


def _params(args) -> dict:
    out = {}
    for kv in args.param:
        if "=" not in kv:
            raise InputError(f"--param expects KEY=VALUE, got {kv!r}")
        k, v = kv.split("=", 1)
        out[k.strip()] = _param_value(v.strip())
    return out


def _item_of(id: str, p: int) -> int | None:
    ids = MAIN_TWO if p == 2 else MAIN_ODD
    if id in ids:
        return (13 if p == 2 else 1) + ids.index(id)
    return None


def group_from_file(path: Path) -> PcPresentation:
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return parse_dsl(text, label=path.stem)


def _resolve(args) -> tuple[PcPresentation, CatalogEntry | None]:
    if args.group_file is not None:
        if getattr(args, "id", None):
            raise InputError("give either a catalog id or --group-file, not both")
        return group_from_file(args.group_file), None
    if not getattr(args, "id", None):
        raise InputError("a catalog id or --group-file is required")
    fam = family(args.id)
    p = args.p
    if p is None:
        if fam.primes == "two":
            p = 2
        else:
            raise InputError("--p is required for this family")
    e = entry(args.id, p, item=_item_of(args.id, p), **_params(args))
    return e.build(), e


def _check_cap(cap: int):
    if cap < 1 or cap > MAX_CAP:
        raise InputError(f"--oracle-cap must lie in 1..{MAX_CAP}")


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _emit(args, report: dict, timing: dict, text: str):
    if args.format == "json":
        print(_dump({**report, "timing": timing}))
    else:
        print(text)


def _table(header: list[str], rows: list[list]) -> str:
    cells = [[str(c) for c in r] for r in [header, *rows]]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _invstr(p: int, inv) -> str:
    if inv is None:
        return "-"
    return " x ".join(f"Z_{d}" for d in inv) if inv else "1"


# ---------------------------------------------------------------------------
# commands


def cmd_catalog(args) -> int:
    rows, out = [], []
    if args.p is None:
        for fid, fam in FAMILIES.items():
            where = "main" if fid in MAIN_ODD + MAIN_TWO else "order p^4" if fid in ORDER_P4 else "auxiliary"
            if fid in MAIN_ODD + MAIN_TWO and fid in ORDER_P4:
                where = "main, order p^4"
            rows.append([fid, fam.primes, where, fam.description])
            out.append({"id": fid, "primes": fam.primes, "role": where, "description": fam.description,
                        "defaults": dict(fam.defaults)})
        report = {"schema": SCHEMA, "command": "catalog list", "families": out}
        _emit(args, report, {}, _table(["id", "primes", "role", "description"], rows))
        return EXIT_OK
    entries = main_theorem_list(args.p) + auxiliary_list(args.p)
    for e in entries:
        rows.append([e.item or "", e.label, e.n, e.expected_multiplier_exponent if e.expected_multiplier_exponent is not None else "-",
                     e.expected_t or "-"])
        out.append(e.to_json())
    report = {"schema": SCHEMA, "command": "catalog list", "p": args.p, "entries": out}
    _emit(args, report, {}, _table(["item", "group", "n", "log_p|M| expected", "t expected"], rows))
    return EXIT_OK


def cmd_show(args) -> int:
    pres, e = _resolve(args)
    G = PcGroup(pres)
    st = structure(G)
    report = {"schema": SCHEMA, "command": "show", "group": pres.label, "p": pres.p, "structure": st,
              "presentation": pres.to_dsl(), "catalog": None if e is None else e.to_json()}
    lines = [
        f"{pres.label}  (p = {pres.p}, |G| = p^{pres.n})",
        f"class {st['class']}, |G'| = p^{st['derived_exponent']}, |Z(G)| = p^{st['center_exponent']}, exponent {st['exponent']}",
        f"G^ab = {_invstr(pres.p, st['abelianization'])}",
        "",
        pres.to_dsl(),
    ]
    _emit(args, report, {}, "\n".join(lines))
    return EXIT_OK


def cmd_multiplier(args) -> int:
    _check_cap(args.oracle_cap)
    pres, e = _resolve(args)
    G = PcGroup(pres)
    methods = ("be", "tails", "oracle") if args.method == "all" else (args.method,)
    t0 = time.perf_counter()
    results, skipped = compute_multipliers(pres, G, methods, oracle_cap=args.oracle_cap, strict=args.method != "all")
    agree = engines_agree(results)
    pref = preferred_method(results)
    k = results[pref].order_exponent
    t, s = corank_report(pres.n, k, G.is_abelian())
    report = {
        "schema": SCHEMA,
        "command": "multiplier",
        "group": pres.label,
        "p": pres.p,
        "n": pres.n,
        "methods": {m: r.to_json() for m, r in sorted(results.items())},
        "skipped_methods": skipped,
        "agree": agree,
        "multiplier_exponent": k,
        "t": t,
        "s": s,
        "expected_t": None if e is None else e.expected_t,
    }
    rows = []
    for m, r in sorted(results.items()):
        d = r.diagnostics
        diag = ", ".join(f"{key}={d[key]}" for key in ("dimX", "dimX1", "dimX2", "free_rank", "stabilized_at_e") if key in d)
        rows.append([m, f"p^{r.order_exponent}", r.describe(), diag])
    for m, why in sorted(skipped.items()):
        rows.append([m, "-", "skipped", why])
    text = "\n".join([
        f"{pres.label}  (p = {pres.p}, n = {pres.n})",
        _table(["method", "|M|", "M(G)", "diagnostics"], rows),
        f"t(G) = {t}" + ("" if s is None else f", s(G) = {s}") + (f", n + 1 = {pres.n + 1}"),
        "engines agree" if agree else "ENGINES DISAGREE",
    ])
    _emit(args, report, {"total": round(time.perf_counter() - t0, 3)}, text)
    return EXIT_OK if agree else EXIT_FAIL


def cmd_oracle(args) -> int:
    _check_cap(args.oracle_cap)
    pres, _ = _resolve(args)
    G = PcGroup(pres)
    t0 = time.perf_counter()
    res = schur_from_h2(G, cap=args.oracle_cap, max_e=args.e)
    report = {"schema": SCHEMA, "command": "oracle", "group": pres.label, "p": pres.p, "n": pres.n,
              "result": res.to_json()}
    hist = res.diagnostics["h2"]
    text = "\n".join([f"{pres.label}  (p = {pres.p}, |G| = {G.order})"]
                     + [f"  H^2(G, Z/{pres.p}^{k + 1}) = {h}" for k, h in enumerate(hist)]
                     + [f"M(G) = {res.describe()}"])
    _emit(args, report, {"total": round(time.perf_counter() - t0, 3)}, text)
    return EXIT_OK


def _bounds_text(rep: dict) -> str:
    rows = []
    for c in rep["checks"]:
        status = {True: "pass", False: "FAIL", None: "n/a"}[c["passed"]]
        w = c["witnesses"]
        if c["name"] == "central-quotient":
            wit = f"K={w['K']}, |G'nK|=p^{w['derived_meet_K']}, M(A)=p^{w['M_A']}, A^ab(x)K=p^{w['tensor']}"
        elif c["name"] == "class-3" and c["passed"] is not None:
            wit = f"dim psi2={w['dim_psi2']}, dim psi3={w['dim_psi3']}"
        else:
            wit = w.get("reason", "")
        rows.append([c["name"], "-" if c["bound"] is None else c["bound"], c["computed"], status, wit])
    return _table(["bound", "bound exp", "log_p|M|", "status", "witness"], rows)


def cmd_bounds(args) -> int:
    pres, _ = _resolve(args)
    G = PcGroup(pres)
    t0 = time.perf_counter()
    results, _ = compute_multipliers(pres, G, ("be", "tails"))
    rep = audit(pres, results[preferred_method(results)], G).to_json()
    report = {"schema": SCHEMA, "command": "bounds", **rep}
    text = f"{pres.label}  (p = {pres.p}, n = {pres.n}, log_p|M| = {rep['multiplier_exponent']})\n" + _bounds_text(rep)
    text += "\n" + ("all bounds hold" if rep["passed"] else "BOUND FAILURE")
    _emit(args, report, {"total": round(time.perf_counter() - t0, 3)}, text)
    return EXIT_OK if rep["passed"] else EXIT_FAIL


def _need_p(args) -> int:
    if args.p is None:
        raise InputError("--p is required")
    return args.p


def cmd_verify_main(args) -> int:
    _check_cap(args.oracle_cap)
    p = _need_p(args)
    report, timing = verify_main(p, oracle_cap=args.oracle_cap)
    rows = []
    for g in report["groups"]:
        rows.append([g["item"], g["label"], g["n"], g["preferred_method"], ",".join(sorted(g["methods"])),
                     f"p^{g['multiplier_exponent']}", g["t"], g["expected_t"], "pass" if g["passed"] else "FAIL"])
    lines = [f"t(G) = n + 1 check at p = {p}", _table(["item", "group", "n", "method", "engines", "|M|", "t", "n+1", "status"], rows)]
    for g in report["groups"]:
        if "candidates" in g:
            lines.append("")
            lines.append(f"item {g['item']} candidates ({g['id']}):")
            for c in g["candidates"]:
                name = ", ".join(f"{k}={v}" for k, v in c["params"].items())
                mark = "satisfies t = n + 1" if c["satisfies"] else f"t = {c['t']}"
                lines.append(f"  {name:<24} |M| = p^{c['multiplier_exponent']:<3} {mark}")
        if not g["passed"]:
            bad = [k for k, v in g["checks"].items() if not v]
            lines.append(f"  {g['label']}: failed checks {bad}")
    s = report["summary"]
    lines.append("")
    lines.append(f"{s['passed']}/{s['total']} passed in {timing['total']:.1f}s")
    _emit(args, report, timing, "\n".join(lines))
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_table_shhh(args) -> int:
    _check_cap(args.oracle_cap)
    p = _need_p(args)
    report, timing = table_shhh(p, oracle_cap=args.oracle_cap)
    rows = []
    for r in report["rows"]:
        orc = "-" if r["oracle"] is None else _invstr(p, r["oracle"])
        rows.append([r["label"], f"p^{r['derived_exponent']}", r["expected_text"], r["tails_text"], orc,
                     "match" if r["match"] else "MISMATCH"])
    s = report["summary"]
    text = "\n".join([f"groups of order {p}^4", _table(["group", "|G'|", "expected", "tails", "oracle", "status"], rows),
                      f"{s['matched']}/{s['total']} match"])
    _emit(args, report, timing, text)
    return EXIT_OK if report["passed"] else EXIT_FAIL


COMMANDS = {
    "catalog": cmd_catalog,
    "show": cmd_show,
    "multiplier": cmd_multiplier,
    "oracle": cmd_oracle,
    "bounds": cmd_bounds,
    "verify-main": cmd_verify_main,
    "table-shhh": cmd_table_shhh,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InputError, InconsistentPresentation, GroupSizeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except PschurError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
