"""Command-line front end: ``endscope <command> ...``.

Exit codes: 0 success, 1 internal error, 2 input error (I/O, parse, bad
UNode), 3 precondition violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .covering import PropertyReport, report, sigma_cover
from .derivatives import Operator, derive
from .errors import IllegalNodeError, ParseError, PreconditionError
from .graphs import (
    FiniteGraph,
    RootedSpanTree,
    components,
    dfs_normal_tree,
    extend_normal_tree,
    hg_transform,
    is_normal,
    parse_graph,
)
from .oracle import agreement
from .partitions import d_kernel, parse_cones, refine_partition
from .presentation import TreePresentation, format_tree, parse_tree

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3


class InputError(Exception):
    pass


@dataclass
class CliConfig:
    command: str
    json_out: bool = False
    witness_depth: int = 3
    pieces: int = 3
    oracle_depth: int = 12
    oracle_width: int = 4
    seed: int = 0


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc


def load_tree(path: str) -> TreePresentation:
    return parse_tree(_read(path))


def load_graph(path: str) -> FiniteGraph:
    return parse_graph(_read(path))


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {n}")
    return n


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def _yes(b: bool) -> str:
    return "YES" if b else "NO"


def format_report(r: PropertyReport) -> str:
    rows = [
        ("presentation", r.name),
        ("pruned", _yes(r.pruned)),
        ("empty", _yes(r.empty)),
        ("compact", _yes(r.compact)),
        ("Lindelöf degree", r.lindelofDegree.pretty()),
        ("extent", r.extent.pretty()),
        ("scattered", _yes(r.scattered)),
        ("Rothberger", _yes(r.rothberger)),
        ("Menger", _yes(r.menger)),
        ("sigma-compact", _yes(r.sigmaCompact)),
        ("scatter rank", "none (fixpoint nonempty)" if r.scatterRank is None else str(r.scatterRank)),
        ("K-Baire rank", "none (fixpoint nonempty)" if r.kbRank is None else str(r.kbRank)),
    ]
    width = max(len(k) for k, _ in rows)
    lines = [f"{k.ljust(width)}  {v}" for k, v in rows]
    if r.binaryWitness is not None:
        w = r.binaryWitness
        lines.append(f"binary witness: depth {w.depth}, {len(w.map)} nodes (2^<omega embeds, not scattered)")
    if r.baireWitness is not None:
        w = r.baireWitness
        lines.append(
            f"baire witness: depth {w.depth}, width {w.width}, {len(w.phi)} nodes (omega^<omega pattern, not Menger)"
        )
    return "\n".join(lines)


def _analyze_one(path: str, cfg: CliConfig, traces: bool) -> tuple[str, dict | str]:
    P = load_tree(path)
    r = report(P, witness_depth=cfg.witness_depth)
    return path, (r.to_dict(with_traces=traces) if cfg.json_out else format_report(r))


def cmd_analyze(args, cfg: CliConfig) -> int:
    paths = list(args.files)
    if args.batch:
        d = Path(args.batch)
        if not d.is_dir():
            raise InputError(f"{d}: not a directory")
        paths += sorted(str(p) for p in d.glob("*.tree"))
    if not paths:
        raise InputError("no input files")
    if len(paths) == 1:
        results = [_analyze_one(paths[0], cfg, args.traces)]
    else:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(lambda p: _analyze_one(p, cfg, args.traces), paths))
    if cfg.json_out:
        out = results[0][1] if len(results) == 1 and not args.batch else {p: r for p, r in results}
        print(_dump(out))
    else:
        print("\n\n".join(r if len(results) == 1 else f"== {p}\n{r}" for p, r in results))
    return EXIT_OK


def cmd_derive(args, cfg: CliConfig) -> int:
    P = load_tree(args.file)
    ops = [Operator(args.operator)] if args.operator else list(Operator)
    traces = [derive(P, op).to_dict() for op in ops]
    if cfg.json_out:
        print(_dump(traces[0] if len(traces) == 1 else traces))
    else:
        for t in traces:
            rank = "none" if t["rank"] is None else t["rank"]
            print(f"{t['operator']}: rank {rank}")
            for i, s in enumerate(t["stages"]):
                print(f"  stage {i}: {{{', '.join(s)}}}")
    return EXIT_OK


def _parents(text: str, root: str) -> RootedSpanTree:
    """``child:parent,child:parent`` pairs."""
    parent = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        child, sep, par = item.partition(":")
        if not sep:
            raise InputError(f"bad parent link {item!r} (expected child:parent)")
        parent[child] = par
    return RootedSpanTree(root, parent)


def _names(text: str | None) -> list[str]:
    return [s.strip() for s in (text or "").split(",") if s.strip()]


def cmd_graph(args, cfg: CliConfig) -> int:
    G = load_graph(args.file)
    root = args.root or (min(G.vertices) if G.vertices else None)
    if args.action in ("normal-tree", "check-normal", "extend") and root is None:
        raise PreconditionError("empty graph has no root")
    if args.action == "normal-tree":
        T = dfs_normal_tree(G, root)
        out = {**T.to_dict(), "edges": T.tree_edges()}
        text = "\n".join(f"{p} - {c}" for p, c in T.tree_edges()) or root
    elif args.action == "check-normal":
        if args.parents is None:
            raise InputError("check-normal needs --parents child:parent,...")
        check = is_normal(G, _parents(args.parents, root))
        out = {"normal": check.ok, "violation": list(check.violation) if check.violation else None}
        text = "normal" if check else f"not normal: T-path {' - '.join(check.violation)}"
    elif args.action == "extend":
        S = _parents(args.parents, root) if args.parents else dfs_normal_tree(G, root)
        T = set(_names(args.subtree)) | {root}
        ext = extend_normal_tree(G, S, T, set(_names(args.add)))
        out = {**ext.to_dict(), "vertices": sorted(ext.vertices)}
        text = " ".join(sorted(ext.vertices))
    elif args.action == "hg":
        res = hg_transform(G, set(_names(args.dominating)))
        out = res.to_dict()
        text = "\n".join([f"vertices: {' '.join(out['vertices'])}"] + [f"{u} - {v}" for u, v in out["edges"]])
    elif args.action == "components":
        comps = components(G, set(_names(args.remove)))
        out = comps
        text = json.dumps(comps)
    else:  # pragma: no cover - argparse restricts choices
        raise AssertionError(args.action)
    print(_dump(out) if cfg.json_out else text)
    return EXIT_OK


def cmd_refine(args, cfg: CliConfig) -> int:
    P = load_tree(args.file)
    ref = refine_partition(P, parse_cones(args.partition), parse_cones(args.cover))
    print(_dump(ref.to_dict()))
    return EXIT_OK


def cmd_kernel(args, cfg: CliConfig) -> int:
    P = load_tree(args.file)
    rays = d_kernel(P, parse_cones(args.assignment))
    print(_dump([r.to_dict() for r in rays]))
    return EXIT_OK


def cmd_sigma_cover(args, cfg: CliConfig) -> int:
    P = load_tree(args.file)
    pieces = sigma_cover(P, cfg.pieces)
    if cfg.json_out:
        print(_dump(None if pieces is None else [format_tree(Q) for Q in pieces]))
    elif pieces is None:
        print("NONE (not Menger)")
    else:
        print("\n".join(format_tree(Q) for Q in pieces))
    return EXIT_OK


def cmd_oracle(args, cfg: CliConfig) -> int:
    P = load_tree(args.file)
    s, k = agreement(P, depth=cfg.oracle_depth, width=cfg.oracle_width)
    if cfg.json_out:
        print(_dump({
            v.operator.value: {
                "fixpointEmpty": v.fixpoint_empty,
                "rank": v.rank,
                "patternDepth": v.pattern_depth,
                "found": v.found,
                "testedDepth": v.tested_depth,
                "agree": v.agree,
                "strictAgree": v.strict_agree,
            }
            for v in (s, k)
        }))
    else:
        print(f"{s.describe()}, {k.describe()}")
    return EXIT_OK if s.agree and k.agree else EXIT_INTERNAL


def cmd_fuzz(args, cfg: CliConfig) -> int:
    from .corpus import fuzz_corpus
    from .covering import report_violations

    bad = 0
    for P in fuzz_corpus(args.count, cfg.seed):
        problems = report_violations(report(P))
        s, k = agreement(P, width=3)
        problems += [v.describe() for v in (s, k) if not v.strict_agree]
        if problems:
            bad += 1
            print(f"{P.name}: {'; '.join(problems)}")
            print("  " + format_tree(P).replace("\n", "\n  ").rstrip())
    print(f"{args.count} presentations, {bad} flagged")
    return EXIT_OK if bad == 0 else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="endscope", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version="%(prog)s 0.1.0")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help: str, file: bool = True) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        if file:
            sp.add_argument("file")
        sp.add_argument("--json", dest="json_out", action="store_true", help="emit JSON")
        sp.set_defaults(fn=fn)
        return sp

    a = sub.add_parser("analyze", help="decide every covering property of a .tree presentation")
    a.add_argument("files", nargs="*")
    a.add_argument("--batch", metavar="DIR", help="analyze every .tree file in DIR concurrently")
    a.add_argument("--json", dest="json_out", action="store_true")
    a.add_argument("--traces", action="store_true", help="include derivative traces in JSON")
    a.add_argument("--witness-depth", type=_positive, default=3)
    a.set_defaults(fn=cmd_analyze)

    d = add("derive", cmd_derive, "print derivative traces")
    d.add_argument("--operator", choices=[o.value for o in Operator])

    g = sub.add_parser("graph", help="finite graph constructions")
    g.add_argument("action", choices=["normal-tree", "check-normal", "extend", "hg", "components"])
    g.add_argument("file")
    g.add_argument("--json", dest="json_out", action="store_true")
    g.add_argument("--root")
    g.add_argument("--parents", help="tree as child:parent,... (check-normal, extend)")
    g.add_argument("--subtree", help="down-closed vertex set T to extend (extend)")
    g.add_argument("--add", help="vertices H to absorb (extend)")
    g.add_argument("--dominating", help="comma-separated vertex set D (hg)")
    g.add_argument("--remove", help="comma-separated vertex set F (components)")
    g.set_defaults(fn=cmd_graph)

    r = add("refine", cmd_refine, "refine a cone partition by a cone cover")
    r.add_argument("--partition", required=True)
    r.add_argument("--cover", required=True)

    k = add("kernel", cmd_kernel, "closed discrete kernel for a cone assignment")
    k.add_argument("--assignment", required=True)

    s = add("sigma-cover", cmd_sigma_cover, "compact pieces exhausting a Menger ray space")
    s.add_argument("--pieces", type=_positive, default=3)

    o = add("oracle", cmd_oracle, "cross-check derivative verdicts against brute-force search")
    o.add_argument("--depth", dest="oracle_depth", type=_positive, default=12)
    o.add_argument("--width", dest="oracle_width", type=_positive, default=4)

    f = add("fuzz", cmd_fuzz, "run the invariant and oracle checks on a seeded random corpus", file=False)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--count", type=_positive, default=500)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    cfg = CliConfig(
        command=args.command,
        json_out=getattr(args, "json_out", False),
        witness_depth=getattr(args, "witness_depth", 3),
        pieces=getattr(args, "pieces", 3),
        oracle_depth=getattr(args, "oracle_depth", 12),
        oracle_width=getattr(args, "oracle_width", 4),
        seed=getattr(args, "seed", 0),
    )
    try:
        return args.fn(args, cfg)
    except (InputError, ParseError, IllegalNodeError) as exc:
        print(f"endscope: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"endscope: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except Exception as exc:  # noqa: BLE001
        print(f"endscope: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
