"""One reduction step: shrink the edge count while at most doubling cutwidth."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .multigraph import (
    CutwidthError,
    DeletedLeaf,
    MultiGraph,
    ReductionTrace,
    RemovedCycleEdge,
    dissolve_degree2,
)


class TraceMismatch(CutwidthError):
    pass


@dataclass(frozen=True)
class TooWide:
    """Certified cw(G) > k: a vertex with more than 2k incident edges, or an
    acyclic leaf-free ball that hosts a perfect binary tree of height 2(k+1)."""

    reason: str
    vertex: int


@dataclass(frozen=True)
class NoProgress:
    reason: str


def leaf_threshold(k: int) -> int:
    """(2k+1)^(4(k+1)+2): leaves win once |V1| * threshold >= |E|."""
    return (2 * k + 1) ** (4 * (k + 1) + 2)


def shrink_denominator(k: int) -> int:
    """(2k+1)^(4(k+1)+3): the guaranteed edge drop is |E| / this."""
    return (2 * k + 1) ** (4 * (k + 1) + 3)


def meets_shrink_bound(before: int, after: int, k: int) -> bool:
    """after <= before * (1 - 1/D) in exact integer arithmetic."""
    d = shrink_denominator(k)
    return after * d <= before * (d - 1)


def _bfs_ball(g: MultiGraph, center: int, radius: int):
    dist = {center: 0}
    parent = {center: None}
    queue = deque([center])
    while queue:
        u = queue.popleft()
        if dist[u] == radius:
            continue
        for w in sorted(g.adj[u]):
            if w not in dist:
                dist[w] = dist[u] + 1
                parent[w] = u
                queue.append(w)
    return dist, parent


def pack_balls(g: MultiGraph, k: int) -> list[int]:
    """Greedy centres at pairwise distance > 4(k+1) whose balls cover V.

    A vertex is re-explored only when its distance to the chosen centres
    strictly drops, so each vertex is touched at most 4(k+1) times.
    """
    radius = 4 * (k + 1)
    inf = radius + 1
    dist = [inf] * g.n
    centers = []
    for v in range(g.n):
        if dist[v] <= radius:
            continue
        centers.append(v)
        dist[v] = 0
        queue = deque([v])
        while queue:
            u = queue.popleft()
            d = dist[u] + 1
            if d > radius:
                continue
            for w in g.adj[u]:
                if d < dist[w]:
                    dist[w] = d
                    queue.append(w)
    return centers


def find_ball_cycle(g: MultiGraph, center: int, radius: int) -> list[int] | None:
    """A cycle inside the subgraph induced by the ball, as a vertex sequence.

    A doubled edge counts as the 2-cycle [u, v].
    """
    dist, parent = _bfs_ball(g, center, radius)
    ball = sorted(dist)
    for u in ball:
        for w, m in sorted(g.adj[u].items()):
            if w in dist and u < w and m >= 2:
                return [u, w]
    for u in ball:
        for w in sorted(g.adj[u]):
            if w in dist and u < w and parent[u] != w and parent[w] != u:
                return _close_cycle(parent, dist, u, w)
    return None


def _close_cycle(parent, dist, u, w) -> list[int]:
    a, b = [u], [w]
    x, y = u, w
    while dist[x] > dist[y]:
        x = parent[x]
        a.append(x)
    while dist[y] > dist[x]:
        y = parent[y]
        b.append(y)
    while x != y:
        x = parent[x]
        y = parent[y]
        a.append(x)
        b.append(y)
    # a ends at the common ancestor, b too; drop its duplicate
    return a + b[-2::-1]


def _cycle_edge(cyc: list[int]) -> tuple[int, int, tuple[int, ...]]:
    """Smallest edge of the cycle and the rest of the cycle as a witness path."""
    L = len(cyc)
    best = None
    for i in range(L):
        x, y = cyc[i], cyc[(i + 1) % L]
        key = (min(x, y), max(x, y))
        if best is None or key < best[0]:
            best = (key, i)
    (u, v), i = best
    if L == 2:
        return u, v, (u, v)
    # walk from cyc[i+1] around to cyc[i], avoiding the removed edge
    walk = [cyc[(i + 1 + t) % L] for t in range(L)]
    if walk[0] != u:
        walk.reverse()
    return u, v, tuple(walk)


def reduce_step(g: MultiGraph, k: int):
    """Returns (H, trace), TooWide or NoProgress for a connected graph g."""
    for v in range(g.n):
        if sum(g.adj[v].values()) > 2 * k:
            return TooWide("degree", v)
    gp, trace = dissolve_degree2(g)
    orig = trace.kept
    deg = gp.degrees()
    leaves = [v for v in range(gp.n) if deg[v] == 1]
    m = gp.num_edges
    removed_vertices: set[int] = set()
    removals: list[tuple[int, int]] = []
    events = list(trace.events)
    if len(leaves) * leaf_threshold(k) >= m:
        leaf_set = set(leaves)
        attach: dict[int, int] = {}
        for x in leaves:
            (a,) = gp.adj[x]
            if a not in leaf_set and a not in attach:
                attach[a] = x
        for a in sorted(attach):
            x = attach[a]
            removed_vertices.add(x)
            events.append(DeletedLeaf(orig[x], orig[a]))
    else:
        leaf_set = set(leaves)
        radius = 2 * (k + 1)
        for c in pack_balls(gp, k):
            cyc = find_ball_cycle(gp, c, radius)
            if cyc is None:
                dist, _ = _bfs_ball(gp, c, radius)
                if leaf_set.isdisjoint(dist):
                    return TooWide("binary_tree", orig[c])
                continue
            u, v, path = _cycle_edge(cyc)
            removals.append((u, v))
            events.append(RemovedCycleEdge(orig[u], orig[v], tuple(orig[x] for x in path)))
    if not removed_vertices and not removals and not trace.events:
        return NoProgress("no leaf or ball cycle to remove")
    mult = dict(gp.mult)
    for u, v in removals:
        mult[(u, v)] -= 1
        if not mult[(u, v)]:
            del mult[(u, v)]
    keep = [v for v in range(gp.n) if v not in removed_vertices]
    index = {v: i for i, v in enumerate(keep)}
    hm = {}
    for (a, b), c in mult.items():
        if a in index and b in index:
            hm[(index[a], index[b])] = c
    h = MultiGraph(len(keep), hm)
    return h, ReductionTrace(g.n, [orig[v] for v in keep], events)


class _OrderList:
    """Linked list with integer labels for O(1) order comparisons."""

    GAP = 1 << 60

    def __init__(self, items: Sequence[int]):
        self.next: dict[int, int | None] = {}
        self.label: dict[int, int] = {}
        self.head = items[0] if items else None
        for i, v in enumerate(items):
            self.label[v] = (i + 1) * self.GAP
            self.next[v] = items[i + 1] if i + 1 < len(items) else None

    def insert_after(self, x: int, v: int) -> None:
        nxt = self.next[x]
        lo = self.label[x]
        hi = self.label[nxt] if nxt is not None else lo + 2 * self.GAP
        if hi - lo < 2:
            self._spread(x)
            hi = self.label[nxt] if nxt is not None else lo + 2 * self.GAP
        self.label[v] = (lo + hi) // 2
        self.next[v] = nxt
        self.next[x] = v

    def _spread(self, x: int) -> None:
        # widen the run after x until its label range is sparse, then space it evenly
        lo = self.label[x]
        run = []
        y = self.next[x]
        while y is not None and self.label[y] - lo <= 4 * (len(run) + 1) ** 2:
            run.append(y)
            y = self.next[y]
        hi = self.label[y] if y is not None else lo + (len(run) + 2) * self.GAP
        step = (hi - lo) // (len(run) + 1)
        for i, u in enumerate(run, 1):
            self.label[u] = lo + i * step

    def items(self) -> list[int]:
        out = []
        v = self.head
        while v is not None:
            out.append(v)
            v = self.next[v]
        return out


def lift_ordering(trace: ReductionTrace, tau_h: Sequence[int]) -> list[int]:
    """Ordering of the input graph from an ordering of the reduced graph."""
    if sorted(tau_h) != list(range(len(trace.kept))):
        raise TraceMismatch("ordering does not cover the reduced vertex set")
    base = [trace.kept[i] for i in tau_h]
    if not trace.events:
        return base
    lst = _OrderList(base)
    for ev in reversed(trace.events):
        if isinstance(ev, DeletedLeaf):
            lst.insert_after(ev.attached_to, ev.v)
        elif isinstance(ev, RemovedCycleEdge):
            continue
        else:
            a, b = ev.a, ev.b
            first = a if lst.label[a] < lst.label[b] else b
            lst.insert_after(first, ev.v)
    return lst.items()
