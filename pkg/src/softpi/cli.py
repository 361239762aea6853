"""``softpi``: check, reduce, measure, embed and explore ``.pi`` files.

Every command prints JSON on stdout (``embed`` and ``fuzz`` print a ``.pi``
term).  Exit status: 0 on success, 1 when the term fails a check or an
invariant, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import metrics as M
from .embed import NotHOpiError, check_simulation, embed_process
from .fuzz import fuzz_generate
from .parser import ParseError, load, print_process
from .reduction import explore, run
from .syntax import Kind, free_vars, has_kind
from .verifier import verify_trace
from .wellformed import CALCULI, check

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _ic(text):
    return frozenset(a.strip() for a in text.split(",") if a.strip()) if text else frozenset()


def infer_calculus(p, ic=frozenset()):
    """The most restrictive calculus accepting ``p`` (SHOpi first), or None."""
    for c in ("shopi", "eshopi", "lhopi", "hopi"):
        if c == "eshopi" and not (ic or has_kind(p, Kind.SPAWN)):
            continue
        if check(p, c, ic).ok:
            return c
    return None


def _checked(p, args):
    """Resolve ``--calculus`` and check ``p``; returns (calculus, report)."""
    ic = _ic(args.ic)
    calc = args.calculus
    if calc == "auto":
        calc = infer_calculus(p, ic) or ("eshopi" if has_kind(p, Kind.SPAWN) else "lhopi")
    return calc, check(p, calc, ic)


def _emit(args, obj):
    text = json.dumps(obj, indent=2)
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n")
    else:
        print(text)


def _redex_json(r):
    return r.to_dict()


def cmd_check(args, p):
    _, report = _checked(p, args)
    out = report.to_dict()
    out["file"] = args.file
    _emit(args, out)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_run(args, p):
    calc, report = _checked(p, args)
    if not report.ok:
        _emit(args, {"file": args.file, "check": report.to_dict()})
        return EXIT_FAIL
    if free_vars(p):
        print(f"error: {args.file} has free variables {sorted(free_vars(p))}", file=sys.stderr)
        return EXIT_FAIL
    ic = report.ic
    trace = run(p, args.strategy, None if args.max_steps < 0 else args.max_steps, seed=args.seed)
    verification = verify_trace(trace, calc, ic, seed=args.seed)
    out = {
        "file": args.file,
        "calculus": calc,
        "ic": sorted(ic),
        "strategy": args.strategy,
        "seed": args.seed,
        "length": len(trace.steps),
        "exhausted": trace.exhausted,
        "steps": [
            {
                "index": i,
                "process": print_process(s.process),
                "redex": _redex_json(s.chosen),
                "metrics": s.metrics.to_dict(),
            }
            for i, s in enumerate(trace.steps)
        ],
        "final": print_process(trace.final),
        "final_metrics": trace.final_metrics.to_dict(),
    }
    if args.verify:
        out["verification"] = verification.to_dict()
    _emit(args, out)
    return EXIT_FAIL if args.verify and not verification.ok else EXIT_OK


def cmd_metrics(args, p):
    ic = _ic(args.ic) if args.ic is not None else None
    out = M.snapshot(p, ic).to_dict()
    if ic is None:
        out.pop("webi")
        out.pop("pgr")
    out["file"] = args.file
    _emit(args, out)
    return EXIT_OK


def cmd_embed(args, p):
    try:
        q = embed_process(p)
    except NotHOpiError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL
    text = f"-- image of {Path(args.file).name} in LHOpi\n{print_process(q)}\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def graph_json(g):
    return {
        "nodes": [{"id": i, "process": n.key} for i, n in enumerate(g.nodes)],
        "edges": [{"src": e.src, "dst": e.dst, "redex": _redex_json(e.redex)} for e in g.edges],
        "truncated": g.truncated,
        "has_cycle": g.has_cycle(),
        "longest_path": g.longest_path(),
    }


def graph_dot(g):
    lines = ["digraph reductions {", "  node [shape=box, fontname=monospace];"]
    for i, n in enumerate(g.nodes):
        label = n.key.replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  n{i} [label="{label}"];')
    for e in g.edges:
        lines.append(f'  n{e.src} -> n{e.dst} [label="{e.redex.kind.value}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_explore(args, p):
    if free_vars(p):
        print(f"error: {args.file} has free variables {sorted(free_vars(p))}", file=sys.stderr)
        return EXIT_FAIL
    g = explore(p, args.budget)
    out = graph_json(g)
    out["file"] = args.file
    if args.dot:
        Path(args.dot).write_text(graph_dot(g))
    _emit(args, out)
    return EXIT_OK


def cmd_simulate(args, p):
    try:
        report = check_simulation(p, args.depth)
    except (NotHOpiError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL
    out = report.to_dict()
    out["file"] = args.file
    _emit(args, out)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_fuzz(args):
    p = fuzz_generate(args.seed, args.size, args.calculus, _ic(args.ic))
    ic = f" --ic {args.ic}" if args.ic else ""
    text = (f"-- softpi fuzz --seed {args.seed} --size {args.size} --calculus {args.calculus}{ic}\n"
            f"{print_process(p)}\n")
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="softpi", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def with_file(name, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("file")
        sp.add_argument("--out", help="write the output here instead of stdout")
        return sp

    calculi = ["auto", *CALCULI]
    sp = with_file("check", "decide well-formation")
    sp.add_argument("--calculus", choices=calculi, default="auto")
    sp.add_argument("--ic", default="", help="comma-separated input channels (eshopi)")

    sp = with_file("run", "reduce along one strategy")
    sp.add_argument("--calculus", choices=calculi, default="auto")
    sp.add_argument("--ic", default="")
    sp.add_argument("--strategy", choices=["first", "random"], default="first")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-steps", type=int, default=1000, help="negative for no limit")
    sp.add_argument("--verify", action="store_true", help="include the invariant report")

    sp = with_file("metrics", "size, box depth, df, weights")
    sp.add_argument("--ic", default=None, help="also compute webi and pgr for these input channels")

    with_file("embed", "translate an HOpi term into LHOpi")

    sp = with_file("explore", "state space modulo structural congruence")
    sp.add_argument("--budget", type=int, default=1000)
    sp.add_argument("--dot", help="also write the graph in DOT format")

    sp = with_file("simulate", "check that the embedding simulates every step")
    sp.add_argument("--depth", type=int, default=5)

    sp = sub.add_parser("fuzz", help="print a random well-formed term")
    sp.add_argument("--calculus", choices=list(CALCULI), default="shopi")
    sp.add_argument("--ic", default="")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--size", type=int, default=20)
    sp.add_argument("--out")
    return ap


COMMANDS = {
    "check": cmd_check,
    "run": cmd_run,
    "metrics": cmd_metrics,
    "embed": cmd_embed,
    "explore": cmd_explore,
    "simulate": cmd_simulate,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "fuzz":
        return cmd_fuzz(args)
    try:
        p = load(args.file)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return COMMANDS[args.command](args, p)


if __name__ == "__main__":
    sys.exit(main())
