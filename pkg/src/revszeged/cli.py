"""Command-line front end: ``revszeged <subcommand> ...``.

Every subcommand builds a :class:`Result` (a JSON-ready payload, flat rows
for CSV and a text rendering) and the writer emits one of the three. Values
of the indices are written as exact ``q/4`` strings with a decimal alongside.
Exit status is 0 when every requested check passed, 1 when a check failed
and 2 on errors, which are reported as a JSON object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import identities, transformations
from .enumerator import MAX_ORDER, SearchReport, VerificationReport, default_workers, minimize_index, verify_theorem1
from .families import FamilyParams
from .graph_core import Graph, distances, parse_edge_list, parse_graph6, to_graph6, unique_cycle
from .index_engine import INDEX_KINDS, decompose_unicyclic, index_suite
from .transformations import PAIR_CHECKS, REWRITES, Rewrite, TransformReport

EXIT_OK, EXIT_FAILED, EXIT_ERROR = 0, 1, 2
FORMATS = ("json", "csv", "text")


class CliError(Exception):
    pass


@dataclass
class Result:
    payload: object
    rows: list[dict] = field(default_factory=list)
    text: str = ""
    ok: bool = True


# ------------------------------------------------------------------ inputs


def read_graph(args) -> Graph:
    given = [x for x in (args.graph6, args.edge_list, args.family) if x is not None]
    if len(given) != 1:
        raise CliError("give exactly one of --graph6, --edge-list, --family")
    if args.graph6 is not None:
        return parse_graph6(args.graph6)
    if args.edge_list is not None:
        text = sys.stdin.read() if args.edge_list == "-" else Path(args.edge_list).read_text()
        return parse_edge_list(text)
    return FamilyParams.parse(args.family).build()


def parse_params(items: Sequence[str]) -> dict:
    out: dict = {}
    for item in items:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise CliError(f"bad --param {item!r}; expected key=value")
        if "," in raw:
            out[key] = tuple(int(x) for x in raw.split(",") if x)
        else:
            try:
                out[key] = int(raw)
            except ValueError:
                out[key] = raw
    return out


def diameter(g: Graph) -> int:
    return distances(g).diameter


def girth(g: Graph) -> int | None:
    return unique_cycle(g).g if g.m == g.n else None


# ------------------------------------------------------------- subcommands


def cmd_index(args) -> Result:
    g = read_graph(args)
    suite = index_suite(g)
    payload = {"graph6": to_graph6(g), "n": g.n, "m": g.m, "indices": suite.to_dict()}
    rows = [{"graph6": payload["graph6"], "index": k, "exact": v["exact"], "decimal": v["decimal"]} for k, v in payload["indices"].items()]
    text = "\n".join([payload["graph6"]] + [f"{r['index']:<10} {r['exact']:>12}  {r['decimal']}" for r in rows])
    return Result(payload, rows, text)


def cmd_family(args) -> Result:
    fp = FamilyParams.parse(args.spec)
    g = fp.build()
    info = {"spec": fp.format(), "graph6": to_graph6(g), "order": g.n, "size": g.m, "diameter": diameter(g), "girth": girth(g)}
    girth_txt = "none" if info["girth"] is None else info["girth"]
    text = f"{info['graph6']}\norder={g.n} diameter={info['diameter']} girth={girth_txt}"
    return Result(info, [info], text)


def _transform_rows(reps: list[TransformReport]) -> list[dict]:
    rows = []
    for r in reps:
        d = r.to_dict()
        rows.append(
            {
                "name": d["name"],
                "kind": d["kind"],
                "before": d["before"],
                "after": d["after"],
                "value_before": d["value_before"]["exact"],
                "value_after": d["value_after"]["exact"],
                "actual_delta": d["actual_delta"]["exact"],
                "predicted_delta": None if d["predicted_delta"] is None else d["predicted_delta"]["exact"],
                "predicted_signs": " ".join(str(s) for s in d["predicted_signs"]),
                "params": " ".join(f"{k}={v}" for k, v in d["details"].items() if not isinstance(v, (dict, list))),
                "agrees": d["agrees"],
            }
        )
    return rows


def _transform_text(rows: list[dict]) -> str:
    lines = []
    for r in rows:
        verdict = "agrees" if r["agrees"] else "DISAGREES"
        lines.append(
            f"{r['name']} [{r['params']}] {r['kind']}: actual {r['actual_delta']}"
            f" predicted {r['predicted_delta'] or 'sign in {' + r['predicted_signs'] + '}'} -> {verdict}"
        )
    return "\n".join(lines)


def cmd_transform(args) -> Result:
    params = parse_params(args.param)
    if (args.rewrite is None) == (args.pair is None):
        raise CliError("give exactly one of --rewrite or --pair")
    if args.rewrite is not None:
        g = read_graph(args)
        reps = [transformations.check(g, Rewrite(args.rewrite, params), args.kind)]
    elif args.samples:
        rng = random.Random(args.seed)
        reps = [
            transformations.check_pair(args.pair, transformations.sample_pair_params(args.pair, rng), args.kind)
            for _ in range(args.samples)
        ]
    else:
        reps = [transformations.check_pair(args.pair, params, args.kind)]
    rows = _transform_rows(reps)
    payload: object = reps[0].to_dict() if len(reps) == 1 else {"reports": [r.to_dict() for r in reps]}
    return Result(payload, rows, _transform_text(rows), all(r.agrees for r in reps))


def _limit(args) -> int | None:
    return None if args.no_limit else args.limit_n


def search_rows(rep: dict) -> list[dict]:
    base = {k: rep[k] for k in ("n", "d", "index", "minimum", "minimum_decimal", "examined")}
    return [{**base, "graph6": m["graph6"], "girth": m["girth"], "code": m["code"]} for m in rep["minimizers"]]


def cmd_search(args) -> Result:
    rep = minimize_index(args.n, args.d, args.index, args.workers, args.checkpoint, limit=_limit(args))
    payload = rep.to_dict(timing=args.timing)
    rows = search_rows(payload)
    text = "\n".join(
        [f"n={rep.n} d={rep.d} {rep.kind}: minimum {payload['minimum']} ({payload['minimum_decimal']}) over {rep.examined} graphs"]
        + [f"  {m.graph6} girth={m.girth}" for m in rep.minimizers]
    )
    return Result(payload, rows, text)


def verification_rows(rep: dict) -> list[dict]:
    rows = []
    for r in rep["rows"]:
        rows.append(
            {
                "n": rep["n"],
                "d": r["d"],
                "minimum": r["minimum"],
                "minimum_decimal": r["minimum_decimal"],
                "predicted_graph6": r["predicted_graph6"],
                "found_graph6": " ".join(m["graph6"] for m in r["found"]),
                "examined": r["examined"],
                "match": r["match"],
                "unique": r["unique"],
                "girth_ok": r["girth_ok"],
                "pass": r["pass"],
            }
        )
    return rows


def _counterexamples(rep: VerificationReport) -> list[dict]:
    out = []
    for row in rep.failures:
        for m in row.found:
            if m.code != row.predicted:
                out.append({"d": row.d, "graph6": m.graph6, "girth": m.girth, "value": row.minimum.encode()})
        if not row.match:
            out.append({"d": row.d, "predicted_graph6": row.predicted_graph6, "note": "predicted graph is not a minimizer"})
    return out


def cmd_verify(args) -> Result:
    if args.theorem1 == args.identities:
        raise CliError("give exactly one of --theorem1 or --identities")
    if args.theorem1:
        if args.n is None:
            raise CliError("--theorem1 needs --n")
        rep = verify_theorem1(args.n, args.workers, args.checkpoint, allow_small=args.allow_small, limit=_limit(args))
        payload = rep.to_dict(timing=args.timing)
        payload["counterexamples"] = _counterexamples(rep)
        rows = verification_rows(payload)
        lines = [f"n={rep.n}  d  minimum      match unique girth<=4"]
        for r in rep.rows:
            flag = lambda b: "yes" if b else "NO"
            lines.append(f"     {r.d:>3}  {r.minimum.encode():>11}  {flag(r.match):>5} {flag(r.unique):>6} {flag(r.girth_ok):>8}")
        if rep.bipartite is not None:
            lines.append(f"girth 4, d={rep.n - 2}: two-path family only: {'yes' if rep.bipartite.passed else 'NO'}")
        for c in payload["counterexamples"]:
            if "graph6" in c:
                lines.append(f"counterexample d={c['d']}: {c['graph6']} value {c['value']}")
        lines.append("PASS" if rep.passed else "FAIL")
        return Result(payload, rows, "\n".join(lines), rep.passed)

    results = identities.run_suites(args.suite or None, args.max_n)
    payload = {"suites": [r.to_dict() for r in results], "pass": all(r.passed for r in results)}
    rows = [
        {
            "suite": r.name,
            "max_order": r.max_order,
            "checked": r.checked,
            "mismatches": len(r.mismatches),
            "counterexample": r.mismatches[0].graph6 if r.mismatches else "",
            "pass": r.passed,
        }
        for r in results
    ]
    text = "\n".join(
        f"{r['suite']:<18} n<={r['max_order']:<3} checked {r['checked']:>6}  {'PASS' if r['pass'] else 'FAIL ' + r['counterexample']}"
        for r in rows
    )
    return Result(payload, rows, text, payload["pass"])


def cmd_identities(args) -> Result:
    given = [x for x in (args.graph6, args.edge_list, args.family) if x is not None]
    if given:
        graphs = [read_graph(args)]
    else:
        graphs = [g for _, g in identities.unicyclic(args.max_n, args.min_n)]
    reports = []
    for g in graphs:
        rep = decompose_unicyclic(transformations.as_spec(g)).to_dict()
        reports.append({"graph6": to_graph6(g), **rep})
    ok = all(r["consistent"] for r in reports)
    payload = {"reports": reports, "checked": len(reports), "pass": ok}
    bad = [r["graph6"] for r in reports if not r["consistent"]]
    text = f"{len(reports)} unicyclic graphs, all routes agree: {'yes' if ok else 'NO'}"
    if bad:
        text += "\ncounterexamples: " + " ".join(bad)
    return Result(payload, reports, text, ok)


# ---------------------------------------------------------------- plumbing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph6", help="graph in graph6 format")
    p.add_argument("--edge-list", metavar="FILE", help='edge-list file ("n m" then m lines "u v"); - for stdin')
    p.add_argument("--family", metavar="SPEC", help='family spec, e.g. "extremal n=16 d=7"')


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")


def _add_enumeration(p: argparse.ArgumentParser) -> None:
    p.add_argument("--workers", type=int, default=None, help="worker processes (default: $REVSZEGED_WORKERS or 1)")
    p.add_argument("--checkpoint", metavar="FILE", help="JSON-lines checkpoint to resume from and append to")
    p.add_argument("--limit-n", type=int, default=MAX_ORDER, help=f"refuse to enumerate above this order (default {MAX_ORDER})")
    p.add_argument("--no-limit", action="store_true", help="lift the --limit-n guard")
    p.add_argument("--timing", action="store_true", help="include elapsed seconds in the report")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="revszeged", description="Exact revised edge Szeged index toolkit for unicyclic graphs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("index", help="all indices of one graph")
    _add_input(p)
    _add_common(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("family", help="build a named family graph")
    p.add_argument("spec", help='e.g. "extremal n=16 d=14" or "g4 variant=32 l1=0 l2=5 a=0 b=3 i=3"')
    _add_common(p)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("transform", help="apply a rewrite or a pair comparison and test its prediction")
    _add_input(p)
    p.add_argument("--rewrite", choices=sorted(REWRITES))
    p.add_argument("--pair", choices=sorted(PAIR_CHECKS))
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--kind", choices=sorted(INDEX_KINDS), default=transformations.REVISED)
    p.add_argument("--samples", type=int, default=0, help="random parameter draws for --pair")
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("search", help="exhaustive minimisation over unicyclic graphs of order n, diameter d")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--index", choices=sorted(INDEX_KINDS), default="Sz_e_star")
    _add_enumeration(p)
    _add_common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="extremal-graph verification or identity suites")
    p.add_argument("--theorem1", action="store_true", help="compare minimisers with the extremal graphs for all d")
    p.add_argument("--identities", action="store_true", help="run the identity suites")
    p.add_argument("--n", type=int)
    p.add_argument("--allow-small", action="store_true", help="run the extremal comparison below n=16")
    p.add_argument("--suite", action="append", choices=sorted(identities.SUITES))
    p.add_argument("--max-n", type=int, default=None, help="largest order for the identity suites")
    _add_enumeration(p)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("identities", help="decomposition routes for one graph or every unicyclic graph up to --max-n")
    _add_input(p)
    p.add_argument("--min-n", type=int, default=3)
    p.add_argument("--max-n", type=int, default=8)
    _add_common(p)
    p.set_defaults(func=cmd_identities)
    return parser


def render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.payload, indent=2) + "\n"
    if fmt == "text":
        return result.text + "\n"
    buf = io.StringIO()
    if result.rows:
        writer = csv.DictWriter(buf, fieldnames=list(result.rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(result.rows)
    return buf.getvalue()


def error_object(exc: BaseException) -> dict:
    return {"error": type(exc).__name__, "message": str(exc)}


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except CliError as exc:
        stdout.write(json.dumps(error_object(exc)) + "\n")
        return EXIT_ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if getattr(args, "workers", 1) is None:
        args.workers = default_workers()
    try:
        result = args.func(args)
        text = render(result, args.format)
    except (CliError, ValueError, KeyError, OSError, AssertionError) as exc:
        stdout.write(json.dumps(error_object(exc)) + "\n")
        return EXIT_ERROR
    if args.output:
        Path(args.output).write_text(text)
    else:
        stdout.write(text)
    return EXIT_OK if result.ok else EXIT_FAILED


def main() -> None:
    sys.exit(run())


# report parsers, the inverse of the JSON emitters above
def parse_search_report(text: str) -> SearchReport:
    return SearchReport.from_dict(json.loads(text))


def parse_verification_report(text: str) -> VerificationReport:
    return VerificationReport.from_dict(json.loads(text))


def parse_transform_report(text: str) -> TransformReport:
    return TransformReport.from_dict(json.loads(text))


if __name__ == "__main__":
    main()
