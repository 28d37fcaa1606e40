"""Command-line entry point. Every command prints one JSON report on stdout.

Exit codes: 0 ok, 1 violation / rejection / counterexample / library error,
2 usage error, 3 unreadable or malformed input file.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import canonical_flow as cf
from . import io
from .errors import FormatError, GatewayLogicError
from .formula import parse, to_text
from .fuzz import FuzzConfig, soundness_fuzz
from .modelcheck import counterexample, satisfies
from .proofcheck import check_proof

EXIT = {"ok": 0, "violation": 1, "rejected": 1, "error": 1, "usage": 2, "format": 3}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _edges(text: str) -> list[str]:
    return [x for x in text.split(",") if x]


def _build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="gatewaylogic", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    graph = sub.add_parser("graph", help="topology queries")
    gsub = graph.add_subparsers(dest="action", required=True, parser_class=_Parser)
    an = gsub.add_parser("analyze")
    an.add_argument("file")
    an.add_argument("--bridges", action="store_true")
    an.add_argument("--gateway", nargs=3, metavar=("G", "A", "B"), help="edge and two comma-separated edge sets")
    an.add_argument("--component", nargs=2, metavar=("V", "E"))
    an.add_argument("--cycle", metavar="E")

    ck = sub.add_parser("check", help="model-check a formula on a protocol")
    ck.add_argument("protocol")
    ck.add_argument("--formula", required=True)
    ck.add_argument("--run")
    ck.add_argument("--valid", action="store_true")

    pr = sub.add_parser("prove", help="check a proof script")
    pr.add_argument("file")

    flow = sub.add_parser("flow", help="flow constructions on knowledge profiles")
    fsub = flow.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("base", "build"):
        x = fsub.add_parser(name)
        x.add_argument("profile")
        x.add_argument("--out")
    ver = fsub.add_parser("verify")
    ver.add_argument("profile")
    ver.add_argument("flow")
    ver.add_argument("--F", dest="required", help="comma-separated edges held to the strong conditions (default: all)")
    rr = fsub.add_parser("reroute")
    rr.add_argument("profile")
    rr.add_argument("base")
    rr.add_argument("--edge", required=True)
    rr.add_argument("--target", nargs=2, required=True, metavar=("SIDE0", "SIDE1"))
    rr.add_argument("--out")

    fz = sub.add_parser("fuzz", help="randomized soundness checking")
    fsz = fz.add_subparsers(dest="action", required=True, parser_class=_Parser)
    snd = fsz.add_parser("soundness")
    snd.add_argument("--seed", type=int, default=0)
    snd.add_argument("--iters", type=int, default=200)
    snd.add_argument("--per-schema", type=int, default=10)
    return top


def _graph(args):
    g = io.read("graph", args.file)
    report = {"status": "ok", "vertices": len(g.vertices), "edges": len(g.edge_ids), "connected": g.is_connected()}
    if args.bridges or not (args.gateway or args.component or args.cycle):
        report["bridges"] = sorted(g.bridges())
    if args.gateway:
        gate, a_set, b_set = args.gateway[0], _edges(args.gateway[1]), _edges(args.gateway[2])
        report["gateway"] = {"gate": gate, "A": sorted(a_set), "B": sorted(b_set),
                             "result": g.is_gateway(gate, a_set, b_set)}
    if args.component:
        verts, edges = g.component_without(*args.component)
        report["component"] = {"vertices": sorted(verts), "edges": sorted(edges)}
    if args.cycle:
        cyc = g.find_cycle_through(args.cycle)
        report["cycle"] = {"edges": list(cyc.edges), "vertices": list(cyc.vertices)}
    return report


def _check(args):
    P = io.read("protocol", args.protocol)
    try:
        phi = parse(P.sig, args.formula)
    except GatewayLogicError as exc:
        raise FormatError(f"--formula: {exc}") from exc
    report = {"formula": to_text(phi), "status": "ok"}
    if args.run:
        r = io.read("run", args.run)
        holds = satisfies(P, r, phi)
        report["satisfied"] = holds
        if not holds:
            report["status"] = "violation"
    if args.valid or not args.run:
        bad = counterexample(P, phi)
        report["valid"] = bad is None
        if bad is not None:
            report["counterexample"] = dict(bad)
            report["status"] = "violation"
    return report


def _prove(args):
    script = io.read("proof", args.file)
    verdict = check_proof(script)
    report = {"status": "ok" if verdict.accepted else "rejected", "accepted": verdict.accepted,
              "lines": len(script.lines)}
    if not verdict.accepted:
        report.update(line=verdict.line, reason=verdict.reason, message=verdict.message)
    return report


def _write_flow(f, out):
    doc = io.flow_to_doc(f)
    if out:
        Path(out).write_text(io.dump_json(doc), encoding="utf-8")
    return doc


def _flow(args):
    p = io.read("profile", args.profile)
    if args.action in ("base", "build"):
        f = cf.build_base(p) if args.action == "base" else cf.build_flow(p)
        return {"status": "ok", **_write_flow(f, args.out)}
    if args.action == "verify":
        f = io.read("flow", args.flow)
        required = p.graph.edge_ids if args.required is None else _edges(args.required)
        bad = cf.verify_flow(p, f, required)
        return {"status": "violation" if bad else "ok",
                "violations": [{"condition": v.condition, "edge": v.edge, "where": v.where, "message": v.message}
                               for v in bad]}
    base = io.read("flow", args.base)
    try:
        target = tuple(Fraction(x) for x in args.target)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--target: {exc}") from exc
    case = cf.classify_reroute(p, base, args.edge, target)
    f = cf.reroute_to_match(p, base, args.edge, target)
    return {"status": "ok", "case": case, **_write_flow(f, args.out)}


def _fuzz(args):
    rep = soundness_fuzz(FuzzConfig(seed=args.seed, protocols=args.iters, per_schema=args.per_schema))
    doc = rep.to_doc()
    doc["status"] = "violation" if rep.counterexamples else "ok"
    doc["seed"] = args.seed
    return doc


def run_cli(argv=None) -> tuple[int, dict]:
    """Run one command; returns ``(exit code, report)`` without printing."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {"graph": _graph, "check": _check, "prove": _prove, "flow": _flow, "fuzz": _fuzz}[args.command]
        report = handler(args)
    except UsageError as exc:
        return EXIT["usage"], {"status": "usage", "error": "UsageError", "message": str(exc)}
    except FormatError as exc:
        return EXIT["format"], {"status": "error", "error": "FormatError", "message": str(exc),
                                "path": exc.path, "line": exc.line, "column": exc.column}
    except OSError as exc:
        return EXIT["format"], {"status": "error", "error": "FormatError", "message": str(exc),
                                "path": getattr(exc, "filename", None), "line": None, "column": None}
    except GatewayLogicError as exc:
        return EXIT["error"], {"status": "error", "error": exc.code, "message": str(exc)}
    return EXIT[report["status"]], report


def main(argv=None) -> int:
    code, report = run_cli(argv)
    sys.stdout.write(io.dump_json(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
