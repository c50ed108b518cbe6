"""Brute-force ground truth: subset DP cutwidth, immersions, obstructions, dcw."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .multigraph import (
    MultiGraph,
    TooLarge,
    add_edge,
    delete_vertex,
    remove_edge,
)

ORACLE_LIMIT = 20
IMMERSION_LIMIT = 8


def _cut_table(g: MultiGraph) -> np.ndarray:
    """delta(S) for every bitmask S, built one vertex at a time."""
    n = g.n
    cut = np.zeros(1 << n, dtype=np.int32)
    for i in range(n):
        size = 1 << i
        # weight from i into each subset of the first i vertices
        into = np.zeros(size, dtype=np.int32)
        for j in range(i):
            m = g.adj[i].get(j, 0)
            if m:
                bit = 1 << j
                idx = np.arange(size)
                into += np.where(idx & bit, m, 0).astype(np.int32)
        deg = sum(g.adj[i].values())
        cut[size : 2 * size] = cut[:size] + deg - 2 * into
    return cut


def _popcount(n: int) -> np.ndarray:
    pc = np.zeros(1 << n, dtype=np.int8)
    for i in range(n):
        size = 1 << i
        pc[size : 2 * size] = pc[:size] + 1
    return pc


def _small_cutwidth(g: MultiGraph) -> tuple[int, list[int]]:
    n = g.n
    full = (1 << n) - 1
    cut = [0] * (1 << n)
    for s in range(1, 1 << n):
        low = (s & -s).bit_length() - 1
        rest = s & (s - 1)
        c = cut[rest] + sum(g.adj[low].values())
        for w, m in g.adj[low].items():
            if rest >> w & 1:
                c -= 2 * m
        cut[s] = c
    f = [0] * (1 << n)
    for s in range(1, 1 << n):
        best = None
        t = s
        while t:
            b = t & -t
            t ^= b
            val = f[s ^ b]
            if best is None or val < best:
                best = val
        c = cut[s]
        f[s] = best if best > c else c
    return f[full], _reconstruct(n, f)


def _reconstruct(n: int, f) -> list[int]:
    order = []
    s = (1 << n) - 1
    while s:
        best_v, best = -1, None
        for v in range(n):
            if s >> v & 1:
                val = f[s ^ (1 << v)]
                if best is None or val < best:
                    best_v, best = v, val
        order.append(best_v)
        s ^= 1 << best_v
    order.reverse()
    return order


def exact_cutwidth(g: MultiGraph, limit: int = ORACLE_LIMIT) -> tuple[int, list[int]]:
    """Exact cutwidth and an optimum ordering via f(S) = max(delta(S), min f(S - v))."""
    n = g.n
    if n > limit:
        raise TooLarge(f"oracle limited to {limit} vertices, got {n}")
    if n <= 1:
        return 0, list(range(n))
    if n <= 10:
        return _small_cutwidth(g)
    cut = _cut_table(g)
    pc = _popcount(n)
    order = np.argsort(pc, kind="stable")
    bounds = np.searchsorted(pc[order], np.arange(n + 2))
    f = np.zeros(1 << n, dtype=np.int32)
    big = np.int32(1 << 30)
    for p in range(1, n + 1):
        masks = order[bounds[p] : bounds[p + 1]]
        best = np.full(masks.shape, big, dtype=np.int32)
        for v in range(n):
            bit = 1 << v
            has = (masks & bit) != 0
            cand = np.where(has, f[masks ^ bit], big)
            np.minimum(best, cand, out=best)
        f[masks] = np.maximum(best, cut[masks])
    full = (1 << n) - 1
    return int(f[full]), _reconstruct(n, f)


def cw(g: MultiGraph) -> int:
    return exact_cutwidth(g)[0]


def permutation_cutwidth(g: MultiGraph) -> int:
    """Cutwidth by enumerating every ordering; independent of the subset DP."""
    from .ordering import width

    if g.n <= 1:
        return 0
    return min(width(g, p, check=False) for p in itertools.permutations(range(g.n)))


# --- immersions ----------------------------------------------------------------


@dataclass
class ImmersionModel:
    phi: dict[int, int]
    # one entry per edge copy of h: ((a, b), path in g)
    psi: list[tuple[tuple[int, int], list[int]]]


def is_immersion(
    h: MultiGraph, g: MultiGraph, strong: bool = False, limit: int = IMMERSION_LIMIT
) -> ImmersionModel | None:
    """Find phi, psi realising h as a (strong) immersion in g, or None."""
    if h.n > limit or g.n > limit:
        raise TooLarge(f"immersion search limited to {limit} vertices")
    if h.n > g.n or h.num_edges > g.num_edges:
        return None
    hdeg = h.degrees()
    gdeg = g.degrees()
    # place high-degree vertices first
    hv = sorted(range(h.n), key=lambda x: -hdeg[x])
    copies = []
    for (a, b), m in sorted(h.mult.items()):
        copies.extend([(a, b)] * m)
    phi: dict[int, int] = {}
    used: set[int] = set()

    def route(idx, cap, branch, out):
        if idx == len(copies):
            return True
        a, b = copies[idx]
        src, dst = phi[a], phi[b]
        for p in _simple_paths(g, cap, src, dst, branch if strong else None):
            for x, y in zip(p, p[1:]):
                cap[(x, y) if x < y else (y, x)] -= 1
            out.append(((a, b), p))
            if route(idx + 1, cap, branch, out):
                return True
            out.pop()
            for x, y in zip(p, p[1:]):
                cap[(x, y) if x < y else (y, x)] += 1
        return False

    def place(i):
        if i == len(hv):
            out: list = []
            cap = dict(g.mult)
            if route(0, cap, set(phi.values()), out):
                return ImmersionModel(dict(phi), out)
            return None
        x = hv[i]
        for y in range(g.n):
            if y in used or gdeg[y] < hdeg[x]:
                continue
            phi[x] = y
            used.add(y)
            found = place(i + 1)
            if found:
                return found
            used.discard(y)
            del phi[x]
        return None

    return place(0)


def _simple_paths(g: MultiGraph, cap, src, dst, forbidden) -> Iterator[list[int]]:
    stack = [(src, [src], {src})]
    while stack:
        u, walk, seen = stack.pop()
        for w in sorted(g.adj[u], reverse=True):
            key = (u, w) if u < w else (w, u)
            if cap.get(key, 0) <= 0 or w in seen:
                continue
            if w == dst:
                yield walk + [w]
                continue
            if forbidden is not None and w in forbidden:
                continue
            stack.append((w, walk + [w], seen | {w}))


def immersion_leq(h: MultiGraph, g: MultiGraph, strong: bool = False) -> bool:
    return is_immersion(h, g, strong) is not None


# --- obstructions --------------------------------------------------------------


def one_step_reductions(g: MultiGraph) -> Iterator[tuple[tuple, MultiGraph]]:
    """Every graph one elementary immersion step below g, tagged by the step.

    Edge deletion, vertex deletion and lifting generate the (weak) immersion order.
    """
    for (u, v) in sorted(g.mult):
        yield ("delete_edge", u, v), remove_edge(g, u, v)
    for x in range(g.n):
        yield ("delete_vertex", x), delete_vertex(g, x)
    for v in range(g.n):
        nbrs = sorted(g.adj[v])
        for u, w in itertools.combinations(nbrs, 2):
            h = remove_edge(remove_edge(g, u, v), v, w)
            yield ("lift", u, v, w), add_edge(h, u, w)


def is_minimal_excluded(g: MultiGraph, member: Callable[[MultiGraph], bool]) -> bool:
    """g lies outside the class while every one-step reduction lies inside."""
    if member(g):
        return False
    return all(member(h) for _, h in one_step_reductions(g))


def is_obstruction(g: MultiGraph, k: int, limit: int = ORACLE_LIMIT) -> bool:
    if g.n > limit:
        raise TooLarge(f"obstruction check limited to {limit} vertices")
    if cw(g) != k + 1:
        return False
    return all(cw(h) <= k for _, h in one_step_reductions(g))


def obstruction_certificate(g: MultiGraph, k: int) -> dict | None:
    """Witness orderings proving g is a k-obstruction, or None."""
    width, order = exact_cutwidth(g)
    if width != k + 1:
        return None
    steps = []
    for step, h in one_step_reductions(g):
        w, o = exact_cutwidth(h)
        if w > k:
            return None
        steps.append({"step": list(step), "ordering": o})
    return {"ordering": order, "reductions": steps}


# --- edge-deletion distance ------------------------------------------------------


def _deletion_sets(g: MultiGraph, size: int):
    pairs = sorted(g.mult.items())

    def rec(i, left, chosen):
        if left == 0:
            yield list(chosen)
            return
        if i == len(pairs):
            return
        (u, v), m = pairs[i]
        for c in range(min(m, left), -1, -1):
            if c:
                chosen.append((u, v, c))
            yield from rec(i + 1, left - c, chosen)
            if c:
                chosen.pop()

    yield from rec(0, size, [])


def _without(g: MultiGraph, removal) -> MultiGraph:
    mult = dict(g.mult)
    for u, v, c in removal:
        mult[(u, v)] -= c
        if not mult[(u, v)]:
            del mult[(u, v)]
    return MultiGraph(g.n, mult)


def min_deletion(g: MultiGraph, member: Callable[[MultiGraph], bool], limit: int = 12):
    """Smallest edge multiset F with member(g - F), searched by increasing |F|."""
    if g.n > limit:
        raise TooLarge(f"deletion search limited to {limit} vertices")
    for size in range(g.num_edges + 1):
        for removal in _deletion_sets(g, size):
            if member(_without(g, removal)):
                return size, removal
    raise AssertionError("edgeless graph must belong to the class")


def dcw(g: MultiGraph, k: int, limit: int = 12) -> tuple[int, list[tuple[int, int, int]]]:
    """Minimum number of edge deletions bringing cutwidth down to k, with a witness."""
    return min_deletion(g, lambda h: cw(h) <= k, limit)


def aic(g: MultiGraph, family: list[MultiGraph], limit: int = IMMERSION_LIMIT) -> int:
    """Minimum edge deletions leaving g free of immersions of every graph in family."""

    def free(h):
        return not any(immersion_leq(f, h) for f in family)

    return min_deletion(g, free, limit)[0]
