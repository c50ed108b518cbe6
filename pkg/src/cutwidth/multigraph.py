"""Loopless undirected multigraphs with edge multiplicities."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence


class CutwidthError(Exception):
    pass


class LoopEdge(CutwidthError):
    def __init__(self, u: int, line: int | None = None):
        self.u = u
        self.line = line
        where = f" at line {line}" if line is not None else ""
        super().__init__(f"loop edge on vertex {u}{where}")


class IndexOutOfRange(CutwidthError):
    pass


class NoSuchEdge(CutwidthError):
    pass


class TooLarge(CutwidthError):
    pass


class MultiGraph:
    """Immutable multigraph on vertices 0..n-1.

    ``mult`` maps canonical pairs (u, v) with u < v to multiplicities >= 1.
    """

    __slots__ = ("n", "mult", "adj", "_m")

    def __init__(self, n: int, mult: dict[tuple[int, int], int]):
        self.n = n
        self.mult = mult
        adj: list[dict[int, int]] = [dict() for _ in range(n)]
        total = 0
        for (u, v), m in mult.items():
            adj[u][v] = m
            adj[v][u] = m
            total += m
        self.adj = adj
        self._m = total

    @property
    def num_edges(self) -> int:
        """Edge count with multiplicity."""
        return self._m

    def edges(self) -> list[tuple[int, int, int]]:
        return sorted((u, v, m) for (u, v), m in self.mult.items())

    def degree(self, v: int) -> int:
        return sum(self.adj[v].values())

    def degrees(self) -> list[int]:
        return [sum(a.values()) for a in self.adj]

    def multiplicity(self, u: int, v: int) -> int:
        return self.adj[u].get(v, 0)

    def neighbors(self, v: int):
        return self.adj[v].keys()

    def __eq__(self, other):
        return isinstance(other, MultiGraph) and self.n == other.n and self.mult == other.mult

    def __hash__(self):
        return hash((self.n, frozenset(self.mult.items())))

    def __repr__(self):
        return f"MultiGraph({self.n}, {self.edges()})"


def build(n: int, edge_list: Iterable[Sequence[int]]) -> MultiGraph:
    """Build a graph; entries are (u, v) or (u, v, multiplicity), repeats are summed."""
    if n < 0:
        raise IndexOutOfRange(f"negative vertex count {n}")
    mult: dict[tuple[int, int], int] = {}
    for e in edge_list:
        u, v = int(e[0]), int(e[1])
        m = int(e[2]) if len(e) > 2 else 1
        if not (0 <= u < n and 0 <= v < n):
            raise IndexOutOfRange(f"edge ({u}, {v}) outside [0, {n})")
        if u == v:
            raise LoopEdge(u)
        if m < 0:
            raise ValueError(f"negative multiplicity on ({u}, {v})")
        if m == 0:
            continue
        key = (u, v) if u < v else (v, u)
        mult[key] = mult.get(key, 0) + m
    return MultiGraph(n, mult)


def empty(n: int) -> MultiGraph:
    return MultiGraph(n, {})


def path(n: int) -> MultiGraph:
    return build(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> MultiGraph:
    if n == 2:
        return build(2, [(0, 1, 2)])
    return build(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> MultiGraph:
    return build(n, itertools.combinations(range(n), 2))


def star(m: int) -> MultiGraph:
    return build(m + 1, [(0, i) for i in range(1, m + 1)])


def binary_tree(height: int) -> MultiGraph:
    """Perfect binary tree with 2^(height+1) - 1 vertices, heap-indexed."""
    n = 2 ** (height + 1) - 1
    return build(n, [((i - 1) // 2, i) for i in range(1, n)])


def delta(g: MultiGraph, s: Iterable[int]) -> int:
    """Number of edges, with multiplicity, having exactly one endpoint in s."""
    s = s if isinstance(s, (set, frozenset)) else set(s)
    total = 0
    for u in s:
        for w, m in g.adj[u].items():
            if w not in s:
                total += m
    return total


def induced(g: MultiGraph, vs: Sequence[int]) -> tuple[MultiGraph, list[int]]:
    """Subgraph induced by vs, relabelled densely in the given order."""
    index = {v: i for i, v in enumerate(vs)}
    mult = {}
    for (u, v), m in g.mult.items():
        if u in index and v in index:
            a, b = index[u], index[v]
            mult[(a, b) if a < b else (b, a)] = m
    return MultiGraph(len(vs), mult), list(vs)


def delete_vertex(g: MultiGraph, x: int) -> MultiGraph:
    return induced(g, [v for v in range(g.n) if v != x])[0]


def remove_edge(g: MultiGraph, u: int, v: int, count: int = 1) -> MultiGraph:
    key = (u, v) if u < v else (v, u)
    have = g.mult.get(key, 0)
    if have < count:
        raise NoSuchEdge(f"edge ({u}, {v}) has multiplicity {have}")
    mult = dict(g.mult)
    if have == count:
        del mult[key]
    else:
        mult[key] = have - count
    return MultiGraph(g.n, mult)


def add_edge(g: MultiGraph, u: int, v: int, count: int = 1) -> MultiGraph:
    if u == v:
        raise LoopEdge(u)
    key = (u, v) if u < v else (v, u)
    mult = dict(g.mult)
    mult[key] = mult.get(key, 0) + count
    return MultiGraph(g.n, mult)


def subdivide(g: MultiGraph, u: int, v: int) -> MultiGraph:
    """Replace one copy of uv by a fresh vertex adjacent to u and v."""
    h = remove_edge(g, u, v)
    w = g.n
    mult = dict(h.mult)
    for a in (u, v):
        mult[(a, w)] = mult.get((a, w), 0) + 1
    return MultiGraph(g.n + 1, mult)


def disjoint_union(a: MultiGraph, b: MultiGraph) -> MultiGraph:
    mult = dict(a.mult)
    for (u, v), m in b.mult.items():
        mult[(u + a.n, v + a.n)] = m
    return MultiGraph(a.n + b.n, mult)


def components(g: MultiGraph) -> list[frozenset[int]]:
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        stack = [s]
        comp = [s]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
                    comp.append(w)
        out.append(frozenset(comp))
    return out


def is_connected(g: MultiGraph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


# --- reduction traces -------------------------------------------------------


@dataclass(frozen=True)
class Dissolved:
    v: int
    a: int
    b: int


@dataclass(frozen=True)
class DeletedLeaf:
    v: int
    attached_to: int


@dataclass(frozen=True)
class RemovedCycleEdge:
    u: int
    v: int
    witness_path: tuple[int, ...]


@dataclass
class ReductionTrace:
    """Surgery log in the input graph's vertex indices.

    ``kept[i]`` is the input vertex that became vertex i of the reduced graph.
    """

    n: int
    kept: list[int]
    events: list = field(default_factory=list)

    def reduced_index(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.kept)}


def replay_backward(h: MultiGraph, trace: ReductionTrace) -> MultiGraph:
    """Rebuild the input graph of a reduction from its result and trace."""
    mult: dict[tuple[int, int], int] = {}

    def bump(u, v, m):
        key = (u, v) if u < v else (v, u)
        c = mult.get(key, 0) + m
        if c:
            mult[key] = c
        else:
            del mult[key]

    for (a, b), m in h.mult.items():
        bump(trace.kept[a], trace.kept[b], m)
    for ev in reversed(trace.events):
        if isinstance(ev, Dissolved):
            bump(ev.a, ev.b, -1)
            bump(ev.v, ev.a, 1)
            bump(ev.v, ev.b, 1)
        elif isinstance(ev, DeletedLeaf):
            bump(ev.v, ev.attached_to, 1)
        else:
            bump(ev.u, ev.v, 1)
    return MultiGraph(trace.n, mult)


def dissolve_degree2(g: MultiGraph) -> tuple[MultiGraph, ReductionTrace]:
    """Exhaustively suppress degree-2 vertices whose two neighbours differ."""
    adj = [dict(a) for a in g.adj]
    alive = [True] * g.n
    events = []
    queue = [v for v in range(g.n)]
    queued = [True] * g.n
    while queue:
        v = queue.pop()
        queued[v] = False
        if not alive[v] or len(adj[v]) != 2:
            continue
        (a, ma), (b, mb) = adj[v].items()
        if ma != 1 or mb != 1:
            continue
        alive[v] = False
        adj[v] = {}
        del adj[a][v]
        del adj[b][v]
        adj[a][b] = adj[a].get(b, 0) + 1
        adj[b][a] = adj[b].get(a, 0) + 1
        if a > b:
            a, b = b, a
        events.append(Dissolved(v, a, b))
        for x in (a, b):
            if not queued[x]:
                queued[x] = True
                queue.append(x)
    kept = [v for v in range(g.n) if alive[v]]
    index = {v: i for i, v in enumerate(kept)}
    mult = {}
    for u in kept:
        for w, m in adj[u].items():
            if u < w:
                mult[(index[u], index[w])] = m
    return MultiGraph(len(kept), mult), ReductionTrace(g.n, kept, events)


# --- canonical codes --------------------------------------------------------

CANONICAL_LIMIT = 10


def _refine(g: MultiGraph) -> list[int]:
    """Isomorphism-invariant colour per vertex by iterated refinement."""
    colour = [0] * g.n
    while True:
        sig = [
            (colour[v], tuple(sorted((colour[w], m) for w, m in g.adj[v].items())))
            for v in range(g.n)
        ]
        rank = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [rank[s] for s in sig]
        if len(rank) == len(set(colour)):
            return new
        colour = new


@lru_cache(maxsize=200_000)
def _canonical(n: int, items: frozenset) -> bytes:
    g = MultiGraph(n, dict(items))
    colour = _refine(g)
    classes: dict[int, list[int]] = {}
    for v in range(n):
        classes.setdefault(colour[v], []).append(v)
    groups = [classes[c] for c in sorted(classes)]
    best = None
    for parts in itertools.product(*(itertools.permutations(grp) for grp in groups)):
        order = [v for part in parts for v in part]
        code = bytes(
            g.adj[order[i]].get(order[j], 0) for i in range(n) for j in range(i + 1, n)
        )
        if best is None or code < best:
            best = code
    return bytes([n]) + (best or b"")


def canonical_code(g: MultiGraph, limit: int = CANONICAL_LIMIT) -> bytes:
    """Byte string equal for two graphs exactly when they are isomorphic.

    Disconnected graphs are coded component by component, so only each
    component has to respect the vertex limit.
    """
    if any(m > 255 for m in g.mult.values()):
        raise TooLarge("multiplicity above 255")
    comps = components(g)
    if len(comps) > 1:
        parts = sorted(canonical_code(induced(g, sorted(c))[0], limit) for c in comps)
        return b"U" + b"".join(len(p).to_bytes(2, "big") + p for p in parts)
    if g.n > limit:
        raise TooLarge(f"canonical_code limited to {limit} vertices, got {g.n}")
    return _canonical(g.n, frozenset(g.mult.items()))
