"""Command-line front end.

Exit codes: 0 success, 1 domain error (bad input, wrong graph class, over a
limit), 2 internal defect (a rule engine or oracle contradicted itself; a
minimized reproducer is written next to the working directory), 64 usage.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

from . import __version__
from .decompose import NotSeriesParallel, block_decompose, is_k4_minor_free
from .exact import OverLimit, TreeMismatch, brute_force_max, k4mf_exact
from .exact import NotK4MinorFree as ExactNotK4MinorFree
from .extractor import InvalidContraPair, NoRuleMatched, NotK4MinorFree, extract_half
from .gen import FAMILIES, FamilySpec, InvalidSpec, generate
from .graph import (Graph, GraphError, delete_vertices, emit_graph, emit_vertex_set,
                    parse_vertex_set, read_graph, verify_indeque)
from .pieces import piece_report
from .subcubic import NotSubcubic, subcubic_half_with_partition

EXIT_OK, EXIT_DOMAIN, EXIT_DEFECT, EXIT_USAGE = 0, 1, 2, 64

DOMAIN_ERRORS = (GraphError, NotK4MinorFree, ExactNotK4MinorFree, NotSubcubic, OverLimit,
                 NotSeriesParallel, TreeMismatch, InvalidSpec, OSError)


class UsageError(Exception):
    pass


class Defect(Exception):
    """An internal contradiction; ``graph`` is the input that triggered it."""

    def __init__(self, message: str, graph: Graph | None = None,
                 predicate: Callable[[Graph], bool] | None = None):
        super().__init__(message)
        self.graph = graph
        self.predicate = predicate


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# -- defect minimization -----------------------------------------------------------

def minimize_defect(g: Graph, predicate: Callable[[Graph], bool]) -> Graph:
    """Delete vertices one at a time while ``predicate`` keeps holding."""
    if not predicate(g):
        raise ValueError("predicate does not hold on the input graph")
    cur = g
    shrunk = True
    while shrunk:
        shrunk = False
        for v in range(cur.n):
            smaller, _ = delete_vertices(cur, [v])
            if predicate(smaller):
                cur = smaller
                shrunk = True
                break
    return cur


def _raises(fn: Callable[[Graph], object], kinds: tuple[type, ...]) -> Callable[[Graph], bool]:
    def predicate(h: Graph) -> bool:
        try:
            fn(h)
        except kinds:
            return True
        except Exception:
            return False
        return False
    return predicate


def _dump_defect(cmd: str, exc: Defect) -> str | None:
    if exc.graph is None:
        return None
    g = exc.graph
    if exc.predicate is not None:
        try:
            g = minimize_defect(g, exc.predicate)
        except ValueError:
            pass
    path = f"indeque-defect-{cmd}-{os.getpid()}.graph"
    with open(path, "w", newline="\n") as fh:
        fh.write(emit_graph(g))
    return path


# -- output helpers ----------------------------------------------------------------

def _dump_json(obj, dest: str | None) -> None:
    text = json.dumps(obj, separators=(",", ":"), sort_keys=False)
    if dest is None or dest == "-":
        sys.stdout.write(text + "\n")
    else:
        with open(dest, "w", newline="\n") as fh:
            fh.write(text + "\n")


def _write_text(text: str, dest: str) -> None:
    if dest == "-":
        sys.stdout.write(text)
    else:
        with open(dest, "w", newline="\n") as fh:
            fh.write(text)


def _parse_params(items: Sequence[str]) -> dict:
    params = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"parameter {item!r} is not key=value")
        key, raw = item.split("=", 1)
        try:
            params[key] = json.loads(raw)
        except json.JSONDecodeError:
            params[key] = raw
    return params


def _parse_range(text: str) -> range:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return range(int(lo), int(hi) + 1)
        k = int(text)
        return range(k, k + 1)
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected A..B") from None


# -- subcommands -----------------------------------------------------------------

def cmd_gen(args) -> int:
    spec = FamilySpec(args.family, _parse_params(args.params), args.seed)
    made = generate(spec)
    _write_text(emit_graph(made.graph), args.out)
    if args.out != "-":
        _dump_json(made.annotation(spec), args.out + ".json")
    return EXIT_OK


def cmd_recognize(args) -> int:
    g = read_graph(args.graph)
    ok, reports = is_k4_minor_free(g)
    bd = block_decompose(g)
    _dump_json({"k4_minor_free": ok, "subcubic": g.max_degree() <= 3,
                "blocks": [{"vertices": list(r.vertices), "series_parallel": r.series_parallel}
                           for r in reports],
                "cut_vertices": list(bd.cut_vertices)}, args.out)
    return EXIT_OK


def cmd_pieces(args) -> int:
    g = read_graph(args.graph)
    ok, _ = is_k4_minor_free(g)
    if not ok:
        raise NotK4MinorFree("not_k4_minor_free")
    bd = block_decompose(g)
    cutset = set(bd.cut_vertices)
    out = []
    for i in bd.leaf_blocks:
        block = bd.blocks[i]
        if len(block) < 3:
            continue
        cuts = [x for x in block if x in cutset]
        out.append(piece_report(g, block, cuts[0] if cuts else None))
    _dump_json({"leaf_blocks": out}, args.out)
    return EXIT_OK


def cmd_half(args) -> int:
    g = read_graph(args.graph)
    try:
        result, trace = extract_half(g, fallback_exact=args.fallback_exact)
    except (NoRuleMatched, InvalidContraPair, AssertionError) as exc:
        pred = _raises(lambda h: extract_half(h, fallback_exact=args.fallback_exact),
                       (NoRuleMatched, InvalidContraPair, AssertionError))
        raise Defect(f"{type(exc).__name__}: {exc}", g, pred) from exc
    if not verify_indeque(g, result) or not trace.bound_ok:
        raise Defect("half output failed re-verification", g)
    if args.trace:
        _dump_json(trace.to_json(), args.trace)
    if args.out:
        _write_text(emit_vertex_set(result), args.out)
    _dump_json({"n": g.n, "size": len(result), "bound": math.ceil(g.n / 2),
                "bound_ok": trace.bound_ok, "set": result}, None)
    return EXIT_OK


def cmd_subcubic(args) -> int:
    g = read_graph(args.graph)
    try:
        chosen, part = subcubic_half_with_partition(g, args.seed)
    except AssertionError as exc:
        raise Defect(str(exc), g) from exc
    if not verify_indeque(g, chosen):
        raise Defect("subcubic output failed re-verification", g)
    if args.out:
        _write_text(emit_vertex_set(chosen), args.out)
    _dump_json({"n": g.n, "size": len(chosen), "cut": part.cut_size,
                "moves": part.moves, "seed": args.seed, "set": chosen}, None)
    return EXIT_OK


def cmd_exact(args) -> int:
    g = read_graph(args.graph)
    if args.method == "brute":
        size, witness = brute_force_max(g, args.limit)
    else:
        size, witness = k4mf_exact(g)
    _dump_json({"size": size, "witness": witness, "method": args.method}, args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    g = read_graph(args.graph)
    with open(args.set, "rb") as fh:
        members = parse_vertex_set(fh.read())
    cert = verify_indeque(g, members)
    if not cert:
        sys.stderr.write(f"not indeque: {cert.u} and {cert.w} share component "
                         f"{list(cert.component)} but are not adjacent\n")
        return EXIT_DOMAIN
    _dump_json(cert.to_json(), None)
    return EXIT_OK


# family -> (size parameter, method)
BENCH_FAMILIES: dict[str, tuple[str, str]] = {
    "c4_union": ("k", "half"),
    "triangle_string": ("length", "half"),
    "triangle_ring": ("l1", "half"),
    "gamma_ring": ("length", "half"),
    "kite": ("length", "half"),
    "random_sp": ("edges", "half"),
    "random_k4mf": ("n", "half"),
    "random_tree": ("n", "half"),
    "blown_cycle": ("k", "subcubic"),
    "random_subcubic": ("n", "subcubic"),
}


def bench_row(family: str, params: dict, seed: int, exact_limit: int = 20) -> dict:
    """One benchmark instance; raises :class:`Defect` on any contradiction."""
    spec = FamilySpec(family, params, seed)
    g = generate(spec).graph
    method = BENCH_FAMILIES[family][1]
    start = time.perf_counter()
    if method == "half":
        result, _ = extract_half(g)
    else:
        result, _ = subcubic_half_with_partition(g, seed)
    wall = time.perf_counter() - start
    if not verify_indeque(g, result):
        raise Defect(f"{family}: output not indeque", g)
    exact_size = None
    if method == "half":
        exact_size = k4mf_exact(g)[0]
    elif g.n <= exact_limit:
        exact_size = brute_force_max(g, exact_limit)[0]
    bound = math.ceil(g.n / 2)
    row = {"family": family, "params": params, "seed": seed, "n": g.n, "method": method,
           "set_size": len(result), "bound": bound, "bound_ok": len(result) >= bound,
           "exact_size": exact_size, "wall_time": round(wall, 6)}
    if exact_size is not None and exact_size < len(result):
        raise Defect(f"{family}: exact {exact_size} below heuristic {len(result)}", g)
    return row


def _bench_task(task: tuple) -> dict:
    return bench_row(*task)


def bench_report(families: Sequence[str], sizes: Sequence[int], seeds: Sequence[int],
                 extra: dict | None = None, jobs: int = 1) -> dict:
    tasks = []
    for fam in families:
        key = BENCH_FAMILIES[fam][0]
        for k in sizes:
            params = dict(extra or {})
            params[key] = k
            if fam == "triangle_ring":
                params.setdefault("l2", k)
            for seed in seeds:
                tasks.append((fam, params, seed))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_bench_task, tasks))
    else:
        rows = [_bench_task(t) for t in tasks]
    rows.sort(key=lambda r: (r["family"], json.dumps(r["params"], sort_keys=True), r["seed"]))
    agg: dict[str, dict] = {}
    for r in rows:
        if r["n"] == 0:
            continue
        ratio = r["set_size"] / r["n"]
        a = agg.setdefault(r["family"], {"min_ratio": ratio, "instances": 0,
                                         "all_bound_ok": True})
        a["min_ratio"] = min(a["min_ratio"], ratio)
        a["instances"] += 1
        a["all_bound_ok"] = a["all_bound_ok"] and r["bound_ok"]
    return {"rows": rows, "aggregate": agg}


def cmd_bench(args) -> int:
    families = args.family or ["c4_union"]
    for fam in families:
        if fam not in BENCH_FAMILIES:
            raise UsageError(f"bench does not support family {fam!r}")
    report = bench_report(families, _parse_range(args.k), _parse_range(args.seeds),
                          _parse_params(args.params), args.jobs)
    _dump_json(report, args.out)
    if not all(a["all_bound_ok"] for a in report["aggregate"].values()):
        raise Defect("bench row below the n/2 bound")
    return EXIT_OK


# -- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="indeque", description="Indeque set solvers and certificates.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("gen", help="generate a family member")
    s.add_argument("family", choices=FAMILIES)
    s.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default="-", help="graph file ('-' for stdout)")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("recognize", help="blocks, cut vertices and K4-minor-freeness")
    s.add_argument("graph")
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_recognize)

    s = sub.add_parser("pieces", help="structures the rule engine sees in leaf blocks")
    s.add_argument("graph")
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_pieces)

    s = sub.add_parser("half", help="indeque set of size >= n/2 (K4-minor-free input)")
    s.add_argument("graph")
    s.add_argument("--trace", metavar="FILE")
    s.add_argument("--fallback-exact", action="store_true")
    s.add_argument("--out", metavar="FILE", help="also write the vertex-set file")
    s.set_defaults(func=cmd_half)

    s = sub.add_parser("subcubic", help="indeque set of size >= n/2 (max degree 3)")
    s.add_argument("graph")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", metavar="FILE", help="also write the vertex-set file")
    s.set_defaults(func=cmd_subcubic)

    s = sub.add_parser("exact", help="maximum indeque set")
    s.add_argument("graph")
    s.add_argument("--method", choices=("brute", "dp"), default="brute")
    s.add_argument("--limit", type=int, default=20)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_exact)

    s = sub.add_parser("check", help="verify a vertex set and print its certificate")
    s.add_argument("graph")
    s.add_argument("set")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("bench", help="bound and ratio report over families")
    s.add_argument("--family", action="append", metavar="NAME")
    s.add_argument("--k", default="1..10", help="size range A..B")
    s.add_argument("--seeds", default="0", help="seed range A..B")
    s.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_bench)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except Defect as exc:
        path = _dump_defect(getattr(args, "command", "run"), exc)
        where = f" (reproducer: {path})" if path else ""
        sys.stderr.write(f"defect: {exc}{where}\n")
        return EXIT_DEFECT
    except DOMAIN_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())
