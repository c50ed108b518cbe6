"""Command-line front end: graph files in, tables or JSON out."""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import obstructions as obs
from .compress import DEFAULT_STATE_LIMIT, StateLimitExceeded, compress
from .multigraph import CutwidthError, DeletedLeaf, Dissolved, LoopEdge, MultiGraph, build
from .oracle import dcw, exact_cutwidth
from .ordering import check_permutation, cut_sequence, make_linked, verify_linked, width
from .reduce import NoProgress, TooWide, reduce_step
from .solver import RunReport, cutwidth_decide, cutwidth_exact

FORMAT = 1


class ParseError(CutwidthError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


def _ints(fields, line):
    try:
        return [int(x) for x in fields]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(fields)!r}", line) from None


def parse_graph(text: str) -> MultiGraph:
    """Read `c` comments, one `p cw <n> <m>` header and `e <u> <v> [mult]` lines.

    Vertices are 1-indexed in the file. The edge total in the header is informative
    and not enforced.
    """
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        fields = raw.split()
        if not fields or fields[0] == "c":
            continue
        tag = fields[0]
        if tag == "p":
            if n is not None:
                raise ParseError("second header", lineno)
            if len(fields) != 4 or fields[1] != "cw":
                raise ParseError("header must read 'p cw <n> <m>'", lineno)
            n, _ = _ints(fields[2:], lineno)
            if n < 0:
                raise ParseError("negative vertex count", lineno)
        elif tag == "e":
            if n is None:
                raise ParseError("edge before header", lineno)
            if len(fields) not in (3, 4):
                raise ParseError("edge must read 'e <u> <v> [mult]'", lineno)
            vals = _ints(fields[1:], lineno)
            u, v = vals[0], vals[1]
            m = vals[2] if len(vals) == 3 else 1
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"vertex outside 1..{n}", lineno)
            if u == v:
                raise LoopEdge(u, lineno)
            if m < 1:
                raise ParseError("multiplicity must be positive", lineno)
            edges.append((u - 1, v - 1, m))
        else:
            raise ParseError(f"unknown line type {tag!r}", lineno)
    if n is None:
        raise ParseError("missing 'p cw' header")
    return build(n, edges)


def render(g: MultiGraph) -> str:
    lines = [f"p cw {g.n} {g.num_edges}"]
    for u, v, m in g.edges():
        lines.append(f"e {u + 1} {v + 1}" if m == 1 else f"e {u + 1} {v + 1} {m}")
    return "\n".join(lines) + "\n"


def parse_ordering(text: str) -> list[int]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        fields = raw.split()
        if fields and fields[0] == "c":
            continue
        out.extend(x - 1 for x in _ints(fields, lineno))
    return out


def render_ordering(sigma) -> str:
    return " ".join(str(v + 1) for v in sigma) + "\n"


def _state_limit() -> int:
    raw = os.environ.get("CW_STATE_LIMIT")
    if raw is None:
        return DEFAULT_STATE_LIMIT
    try:
        return int(raw)
    except ValueError:
        raise CutwidthError(f"CW_STATE_LIMIT must be an integer, got {raw!r}") from None


def _one_based(sigma):
    return [v + 1 for v in sigma]


def _emit(args, payload: dict, table: list[tuple[str, object]]) -> None:
    if args.json:
        print(json.dumps({"format": FORMAT, **payload}, sort_keys=True))
    else:
        wide = max((len(k) for k, _ in table), default=0)
        for key, val in table:
            print(f"{key.ljust(wide)}  {val}")


def _load_graph(path) -> MultiGraph:
    return parse_graph(Path(path).read_text())


def _load_ordering(g: MultiGraph, path) -> list[int]:
    sigma = parse_ordering(Path(path).read_text())
    check_permutation(g, sigma)
    return sigma


# --- subcommands -------------------------------------------------------------------


def cmd_solve(args) -> int:
    g = _load_graph(args.file)
    report = RunReport()
    limit = _state_limit()
    if args.k is None:
        k, sigma = cutwidth_exact(g, report, limit)
    else:
        res = cutwidth_decide(g, args.k, report, limit)
        if isinstance(res, TooWide):
            _emit(
                args,
                {"decision": False, "k": args.k, "reason": res.reason, "report": report.as_dict()},
                [("decision", f"cutwidth > {args.k}"), ("reason", res.reason)],
            )
            return 1
        sigma = res
        k = width(g, sigma)
    cuts = cut_sequence(g, sigma)
    _emit(
        args,
        {"cutwidth": k, "ordering": _one_based(sigma), "cuts": cuts, "report": report.as_dict()},
        [
            ("cutwidth" if args.k is None else "width", k),
            ("ordering", render_ordering(sigma).strip()),
            ("cuts", " ".join(map(str, cuts))),
            ("states", report.states_visited),
        ],
    )
    return 0


def cmd_oracle(args) -> int:
    g = _load_graph(args.file)
    k, sigma = exact_cutwidth(g)
    _emit(
        args,
        {"cutwidth": k, "ordering": _one_based(sigma), "cuts": cut_sequence(g, sigma)},
        [("cutwidth", k), ("ordering", render_ordering(sigma).strip())],
    )
    return 0


def cmd_verify(args) -> int:
    g = _load_graph(args.file)
    sigma = _load_ordering(g, args.ordering)
    cuts = cut_sequence(g, sigma)
    w = max(cuts, default=0)
    ok = w <= args.k
    _emit(
        args,
        {"valid": ok, "width": w, "k": args.k, "cuts": cuts},
        [("valid", "yes" if ok else "no"), ("width", w), ("cuts", " ".join(map(str, cuts)))],
    )
    return 0 if ok else 1


def cmd_compress(args) -> int:
    g = _load_graph(args.file)
    sigma = _load_ordering(g, args.ordering)
    tau = compress(g, sigma, args.k, state_limit=_state_limit())
    if tau is None:
        _emit(args, {"decision": False, "k": args.k}, [("decision", f"cutwidth > {args.k}")])
        return 1
    cuts = cut_sequence(g, tau)
    _emit(
        args,
        {"width": max(cuts, default=0), "ordering": _one_based(tau), "cuts": cuts},
        [("width", max(cuts, default=0)), ("ordering", render_ordering(tau).strip())],
    )
    return 0


def _event_json(ev) -> dict:
    if isinstance(ev, Dissolved):
        return {"type": "dissolved", "v": ev.v + 1, "a": ev.a + 1, "b": ev.b + 1}
    if isinstance(ev, DeletedLeaf):
        return {"type": "deleted_leaf", "v": ev.v + 1, "attached_to": ev.attached_to + 1}
    return {
        "type": "removed_cycle_edge",
        "u": ev.u + 1,
        "v": ev.v + 1,
        "witness_path": _one_based(ev.witness_path),
    }


def cmd_reduce(args) -> int:
    g = _load_graph(args.file)
    res = reduce_step(g, args.k)
    if isinstance(res, TooWide):
        _emit(
            args,
            {"decision": False, "k": args.k, "reason": res.reason, "vertex": res.vertex + 1},
            [("decision", f"cutwidth > {args.k}"), ("reason", res.reason), ("vertex", res.vertex + 1)],
        )
        return 1
    if isinstance(res, NoProgress):
        _emit(args, {"progress": False, "reason": res.reason}, [("progress", "none"), ("reason", res.reason)])
        return 0
    h, trace = res
    events = [_event_json(ev) for ev in trace.events]
    _emit(
        args,
        {
            "progress": True,
            "graph": render(h),
            "trace": {"n": trace.n, "kept": _one_based(trace.kept), "events": events},
        },
        [
            ("edges", f"{g.num_edges} -> {h.num_edges}"),
            ("kept", render_ordering(trace.kept).strip()),
            ("events", len(events)),
            ("graph", "\n" + render(h).rstrip()),
        ],
    )
    return 0


def cmd_obstructions(args) -> int:
    if args.catalog:
        obs.write_catalog(args.catalog, args.k, args.max_n, args.max_mult, jobs=args.jobs)
        found = [rec for _, rec in obs.read_catalog(args.catalog) if rec["k"] == args.k]
    else:
        found = []
        obs.search_obstructions(
            args.k,
            args.max_n,
            args.max_mult,
            jobs=args.jobs,
            on_record=lambda rec: found.append(rec) if "graph" in rec else None,
        )
    if args.json:
        for rec in found:
            print(json.dumps(rec, sort_keys=True))
    else:
        print(f"{len(found)} obstructions for k = {args.k}")
        for rec in found:
            gr = rec["graph"]
            es = " ".join(f"{u + 1}-{v + 1}" + (f"x{m}" if m > 1 else "") for u, v, m in gr["edges"])
            print(f"n={gr['n']}  {es}")
    return 0


def cmd_dcw(args) -> int:
    g = _load_graph(args.file)
    d, removed = dcw(g, args.k)
    _emit(
        args,
        {"dcw": d, "k": args.k, "deleted": [[u + 1, v + 1, c] for u, v, c in removed]},
        [("dcw", d), ("deleted", " ".join(f"{u + 1}-{v + 1}x{c}" for u, v, c in removed) or "-")],
    )
    return 0


def cmd_linked(args) -> int:
    g = _load_graph(args.file)
    sigma = _load_ordering(g, args.ordering)
    tau = make_linked(g, sigma)
    ok = verify_linked(g, tau)
    w = width(g, tau)
    _emit(
        args,
        {"linked": ok, "width": w, "ordering": _one_based(tau)},
        [("linked", "yes" if ok else "no"), ("width", w), ("ordering", render_ordering(tau).strip())],
    )
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cutwidth", description="Exact cutwidth toolkit")
    p.add_argument("--json", action="store_true", help="JSON output")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, graph=True):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        if graph:
            sp.add_argument("file")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("solve", cmd_solve, "decide cutwidth <= k, or compute it")
    sp.add_argument("--k", type=int)
    add("oracle", cmd_oracle, "brute-force cutwidth for small graphs")
    sp = add("verify", cmd_verify, "check an ordering's width")
    sp.add_argument("--ordering", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp = add("compress", cmd_compress, "improve an ordering to width <= k")
    sp.add_argument("--ordering", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp = add("reduce", cmd_reduce, "one reduction step")
    sp.add_argument("--k", type=int, required=True)
    sp = add("obstructions", cmd_obstructions, "search small obstructions", graph=False)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--max-n", type=int, required=True)
    sp.add_argument("--max-mult", type=int, default=1)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--catalog", help="append to and resume from this JSON-lines file")
    sp = add("dcw", cmd_dcw, "edge deletions needed for cutwidth <= k")
    sp.add_argument("--k", type=int, required=True)
    sp = add("linked", cmd_linked, "refine an ordering to a linked one")
    sp.add_argument("--ordering", required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("k", "max_n", "max_mult", "jobs"):
        val = getattr(args, name, None)
        if val is not None and val < 0:
            print(f"error: --{name.replace('_', '-')} must be non-negative", file=sys.stderr)
            return 2
    try:
        return args.fn(args)
    except StateLimitExceeded as exc:
        print(f"error: state limit exceeded ({exc}); raise CW_STATE_LIMIT", file=sys.stderr)
        return 2
    except (CutwidthError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
