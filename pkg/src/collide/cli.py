"""Command-line entry point.

Machine output is JSON on stdout.  Errors go to stderr with a distinct exit
code: 1 usage, 2 invalid input, 3 structural failure, 4 instance too large.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import completion, funcgraph, ordered_recovery, simulate
from .core import (
    CollideError,
    CollisionGraph,
    InstanceTooLarge,
    InvalidHistory,
    NotConnected,
    NotFunctionGraph,
    history_from_json,
    load_graph,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_STRUCTURE = 3
EXIT_TOO_LARGE = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_history(path: str):
    """Accept either a history file or a trajectory file (history is extracted)."""
    data = json.loads(Path(path).read_text())
    if "breakpoints" in data:
        return simulate.extract_history(simulate.TrajectorySet.from_json(data))
    return history_from_json(data)


def _graph_dot(g: CollisionGraph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    lines += [f"  {v};" for v in g.vertices]
    lines += [f"  {u} -- {v};" for u, v in sorted(g.edges)]
    lines.append("}")
    return "\n".join(lines) + "\n"


def _intervals_dot(components) -> str:
    lines = ["graph contraction {"]
    for c, comp in enumerate(components):
        for i, r in comp["intervals"]:
            lines.append(f'  c{c}_{i} [label="[{i},{r}]"];')
        for i, r in comp["intervals"]:
            for j in range(i + 1, r + 1):
                lines.append(f"  c{c}_{i} -- c{c}_{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_simulate(args):
    ts = simulate.generate_trajectories(args.n, args.segments, args.seed)
    if args.out:
        ts.save(args.out)
        h = simulate.extract_history(ts)
        return {"out": args.out, "n": ts.n, "segments": ts.segments, "events": len(h)}
    return ts.to_json()


def cmd_recover(args):
    h = _read_history(args.history)
    if args.timeline:
        tl = ordered_recovery.recover_timeline(h)
        return {"timeline": [list(p) for p in tl.orderings]}
    comps = ordered_recovery.recover_end_position(h)
    return {"components": [list(s) for s in comps.sequences]}


def cmd_layers(args):
    g = load_graph(args.graph)
    dec = funcgraph.layer_decomposition(g)
    comps = []
    for d in dec.components:
        cr = funcgraph.contraction_graph(g, d)
        comps.append({
            "layers": [sorted(layer) for layer in d.layers],
            "intervals": [list(iv) for iv in cr.intervals],
        })
    if args.dot:
        Path(args.dot).write_text(_intervals_dot(comps))
    return {"components": comps}


def cmd_recognize(args):
    g = load_graph(args.graph)
    ok, cert = funcgraph.recognize_function_graph(g)
    if args.dot:
        Path(args.dot).write_text(_graph_dot(g))
    return {
        "function_graph": ok,
        "orientation": sorted(list(a) for a in cert.arcs) if ok else [],
    }


def cmd_interleave(args):
    inst = completion.InterleavingInstance.load(args.instance)
    sol = completion.solve_interleaving(inst)
    out = {"B": sol.achieved, "positions": list(sol.positions)}
    if args.oracle:
        ref = completion.brute_force_interleaving(inst)
        out["oracle"] = {"B": ref.achieved, "positions": list(ref.positions)}
    return out


def cmd_bandwidth(args):
    r = completion.bandwidth_bruteforce(load_graph(args.graph))
    return {"bandwidth": r.value, "layout": list(r.witness)}


def cmd_bf(args):
    value, h = completion.bf_completion(load_graph(args.graph))
    return {"bf": value, "completion": [list(e) for e in sorted(h.edges)]}


def cmd_sandwich(args):
    g = load_graph(args.graph)
    b = completion.bandwidth_bruteforce(g).value
    bf = completion.bf_bruteforce(g)
    return {"bandwidth": b, "bf": bf, "holds": completion.check_sandwich(g)}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="collide", description="Recover orderings from collision data.")
    p.add_argument("--pretty", action="store_true", help="indent JSON output")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="generate random trajectories")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--segments", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("recover", help="orderings from an ordered history")
    s.add_argument("--history", required=True)
    s.add_argument("--timeline", action="store_true")
    s.set_defaults(func=cmd_recover)

    s = sub.add_parser("layers", help="layer decomposition of a function graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--dot", help="write the contraction interval graph as DOT")
    s.set_defaults(func=cmd_layers)

    s = sub.add_parser("recognize", help="function graph recognition")
    s.add_argument("--graph", required=True)
    s.add_argument("--dot", help="write the input graph as DOT")
    s.set_defaults(func=cmd_recognize)

    s = sub.add_parser("interleave", help="optimal interleaving of two sequences")
    s.add_argument("--instance", required=True)
    s.add_argument("--oracle", action="store_true")
    s.set_defaults(func=cmd_interleave)

    for name, fn in (("bandwidth", cmd_bandwidth), ("bf", cmd_bf), ("sandwich", cmd_sandwich)):
        s = sub.add_parser(name)
        s.add_argument("--graph", required=True)
        s.set_defaults(func=fn)
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload = args.func(args)
    except InstanceTooLarge as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (NotConnected, NotFunctionGraph) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_STRUCTURE
    except (InvalidHistory, CollideError, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    print(json.dumps(payload, indent=2 if args.pretty else None))
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
