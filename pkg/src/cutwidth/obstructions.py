"""Obstruction workbench: exhaustive search, disjoint-union obstructions, bounds."""
from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .multigraph import (
    CutwidthError,
    MultiGraph,
    TooLarge,
    canonical_code,
    disjoint_union,
    is_connected,
)
from .oracle import (
    aic,
    cw,
    immersion_leq,
    is_minimal_excluded,
    obstruction_certificate,
)

SEARCH_LIMIT = 8


class NotAntichain(CutwidthError):
    pass


def _max_degree(g: MultiGraph) -> int:
    return max(g.degrees(), default=0)


def _graphs_within(n: int, k: int, max_mult: int):
    """Every graph on exactly n vertices with cw <= k and multiplicities <= max_mult,
    up to isomorphism, grown one edge copy at a time.

    Both cw and degree only grow with added edges, so every graph in the class
    is reached from a smaller one in the class.
    """
    level = {canonical_code(MultiGraph(n, {})): MultiGraph(n, {})}
    while level:
        yield from level.values()
        nxt: dict[bytes, MultiGraph] = {}
        for g in level.values():
            for h in _one_more_edge(g, max_mult):
                code = canonical_code(h)
                if code in nxt:
                    continue
                if cw(h) <= k:
                    nxt[code] = h
        level = nxt


def _one_more_edge(g: MultiGraph, max_mult: int):
    for u, v in itertools.combinations(range(g.n), 2):
        m = g.mult.get((u, v), 0)
        if m < max_mult:
            mult = dict(g.mult)
            mult[(u, v)] = m + 1
            yield MultiGraph(g.n, mult)


def _candidates(n: int, k: int, max_mult: int):
    """Connected graphs of cw k+1 and degree <= 2(k+1) whose edge-deleted
    subgraphs all have cw <= k, by canonical code."""
    seen: dict[bytes, MultiGraph] = {}
    for g in _graphs_within(n, k, max_mult):
        for h in _one_more_edge(g, max_mult):
            if _max_degree(h) > 2 * (k + 1) or not is_connected(h):
                continue
            code = canonical_code(h)
            if code in seen:
                continue
            if cw(h) == k + 1:
                seen[code] = h
    return sorted(seen.items(), key=lambda item: (item[1].num_edges, item[0]))


def _certify(args):
    g, k = args
    return obstruction_certificate(g, k)


def _certify_all(graphs: Sequence[MultiGraph], k: int, jobs: int):
    tasks = [(g, k) for g in graphs]
    if jobs <= 1 or len(tasks) < 2:
        return [_certify(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_certify, tasks, chunksize=8))


def search_obstructions(
    k: int, max_n: int, max_mult: int = 1, jobs: int = 1, min_n: int = 1, on_record: Callable | None = None
) -> list[MultiGraph]:
    """All connected k-obstructions with at most max_n vertices and multiplicities
    at most max_mult, pairwise non-isomorphic, ordered by size then code."""
    if max_n > SEARCH_LIMIT:
        raise TooLarge(f"obstruction search limited to {SEARCH_LIMIT} vertices")
    found = []
    for n in range(max(min_n, 1), max_n + 1):
        cands = _candidates(n, k, max_mult)
        certs = _certify_all([g for _, g in cands], k, jobs)
        for (code, g), cert in zip(cands, certs):
            if cert is None:
                continue
            found.append(g)
            if on_record is not None:
                on_record(record(g, k, cert, code))
        if on_record is not None:
            on_record({"format": 1, "cursor": n, "k": k, "max_mult": max_mult})
    return found


def record(g: MultiGraph, k: int, certificate: dict, code: bytes | None = None) -> dict:
    if code is None:
        code = canonical_code(g)
    return {
        "format": 1,
        "k": k,
        "graph": {"n": g.n, "edges": [list(e) for e in g.edges()]},
        "certificate": certificate,
        "canonical_code": code.hex(),
    }


def write_catalog(path, k: int, max_n: int, max_mult: int = 1, jobs: int = 1) -> list[dict]:
    """Append obstruction records to a JSON-lines catalog, resuming after the
    last completed vertex count recorded there."""
    path = Path(path)
    start = 1
    if path.exists():
        for line in path.read_text().splitlines():
            rec = json.loads(line)
            if "cursor" in rec and rec["k"] == k and rec.get("max_mult") == max_mult:
                start = max(start, rec["cursor"] + 1)
    written: list[dict] = []
    with path.open("a") as fh:

        def emit(rec):
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
            fh.flush()
            written.append(rec)

        search_obstructions(k, max_n, max_mult, jobs=jobs, min_n=start, on_record=emit)
    return written


def read_catalog(path) -> list[tuple[MultiGraph, dict]]:
    from .multigraph import build

    out = []
    for line in Path(path).read_text().splitlines():
        rec = json.loads(line)
        if "graph" in rec:
            gr = rec["graph"]
            out.append((build(gr["n"], gr["edges"]), rec))
    return out


def check_certificate(g: MultiGraph, k: int, certificate: dict) -> bool:
    """Re-check a stored certificate without any search."""
    from .oracle import one_step_reductions
    from .ordering import width

    if width(g, certificate["ordering"]) != k + 1:
        return False
    steps = list(one_step_reductions(g))
    if len(steps) != len(certificate["reductions"]):
        return False
    # width(g) = k+1 only shows cw <= k+1; the reductions show minimality
    for (step, h), rec in zip(steps, certificate["reductions"]):
        if list(step) != rec["step"] or width(h, rec["ordering"]) > k:
            return False
    return True


# --- disjoint-union obstructions -----------------------------------------------


def check_antichain(members: Iterable[MultiGraph]) -> None:
    """Raise NotAntichain if two non-isomorphic members are immersion-comparable."""
    distinct: dict[bytes, MultiGraph] = {}
    for g in members:
        distinct.setdefault(canonical_code(g), g)
    for a, b in itertools.combinations(distinct.values(), 2):
        if immersion_leq(a, b) or immersion_leq(b, a):
            raise NotAntichain("members are comparable under immersion")


def union_obstruction(members: Sequence[MultiGraph], w: int) -> MultiGraph:
    """Disjoint union of w+1 (not necessarily distinct) antichain members."""
    if len(members) != w + 1:
        raise ValueError(f"need exactly w+1 = {w + 1} members, got {len(members)}")
    check_antichain(members)
    out = members[0]
    for g in members[1:]:
        out = disjoint_union(out, g)
    return out


def certify_union(g: MultiGraph, family: Sequence[MultiGraph], w: int) -> bool:
    """aic over family is w+1 and every one-step immersion lands in the class."""

    def member(h):
        return aic(h, list(family)) <= w

    return aic(g, list(family)) == w + 1 and is_minimal_excluded(g, member)


def count_union_obstructions(q: int, w: int) -> int:
    """Multisets of size w+1 from q members: binom(q+w, w+1)."""
    return math.comb(q + w, w + 1)


def union_codes(members: Sequence[MultiGraph], w: int) -> set[bytes]:
    """Canonical codes of all unions of w+1 members drawn with repetition."""
    return {
        canonical_code(union_obstruction(list(pick), w))
        for pick in itertools.combinations_with_replacement(members, w + 1)
    }


# --- words and size bounds -------------------------------------------------------


def is_heavy(word: Sequence[int], n: int, symbol: int, interval: tuple[int, int]) -> bool:
    """Every letter in word[lo..hi] is >= symbol and symbol occurs there >= n times."""
    lo, hi = interval
    if not 0 <= lo <= hi < len(word):
        return False
    part = word[lo : hi + 1]
    return min(part) >= symbol and part.count(symbol) >= n


def heavy_subword(word: Sequence[int], n: int):
    """(symbol, (lo, hi)) with all of word[lo..hi] >= symbol and symbol there >= n
    times, or None. Found by peeling off the smallest symbol and recursing into
    the longest stretch between its occurrences, which always succeeds when
    len(word) >= n ** max(word); otherwise a direct scan decides."""
    word = list(word)
    if not word:
        return None
    lo, hi = 0, len(word) - 1
    s = 1
    top = max(word)
    while lo <= hi and s <= top:
        at = [i for i in range(lo, hi + 1) if word[i] == s]
        if len(at) >= n:
            return s, (lo, hi)
        bounds = [lo - 1] + at + [hi + 1]
        a, b = max(zip(bounds, bounds[1:]), key=lambda p: p[1] - p[0])
        lo, hi = a + 1, b - 1
        s += 1
    return _scan(word, n)


def _scan(word, n):
    for s in sorted(set(word)):
        i = 0
        while i < len(word):
            if word[i] < s:
                i += 1
                continue
            j = i
            while j + 1 < len(word) and word[j + 1] >= s:
                j += 1
            if word[i : j + 1].count(s) >= n:
                return s, (i, j)
            i = j + 1
    return None


def obstruction_size_bound(k: int) -> int:
    """N^(k+1) with N = 2^(2((k+1) log l + l log(k+2))) + 2 and l = (2k+3)(2k+6)."""
    ell = (2 * k + 3) * (2 * k + 6)
    big_n = ell ** (2 * (k + 1)) * (k + 2) ** (2 * ell) + 2
    return big_n ** (k + 1)
