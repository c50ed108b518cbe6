"""Graph families shared by the test modules."""
from __future__ import annotations

import itertools
import random
from functools import lru_cache
from pathlib import Path

import networkx as nx

from cutwidth.multigraph import MultiGraph, build, canonical_code, is_connected


def from_nx(G) -> MultiGraph:
    index = {v: i for i, v in enumerate(G.nodes())}
    return build(len(index), [(index[u], index[v]) for u, v in G.edges()])


@lru_cache(maxsize=None)
def connected_simple(max_n: int = 7) -> tuple[MultiGraph, ...]:
    """Every connected simple graph on 1..max_n vertices, up to isomorphism."""
    out = []
    for G in nx.graph_atlas_g()[1:]:
        if G.number_of_nodes() <= max_n and nx.is_connected(G):
            out.append(from_nx(G))
    if max_n >= 8:
        out.extend(connected_eight())
    return tuple(out)


DATA = Path(__file__).parent / "data"


def connected_eight() -> list[MultiGraph]:
    """The 11117 connected 8-vertex graphs, read from the graph6 cache when present."""
    cache = DATA / "connected8.g6"
    if cache.exists():
        return [from_nx(nx.from_graph6_bytes(line)) for line in cache.read_bytes().split()]
    return _connected_eight()


def _connected_eight() -> list[MultiGraph]:
    # each connected 8-vertex graph has a non-cut vertex whose removal leaves a
    # connected 7-vertex graph, so extending those by one vertex reaches them all
    seven = [G for G in nx.graph_atlas_g() if G.number_of_nodes() == 7 and nx.is_connected(G)]
    buckets: dict[str, list] = {}
    out = []
    for G in seven:
        for r in range(1, 8):
            for nbrs in itertools.combinations(range(7), r):
                H = G.copy()
                H.add_edges_from((7, u) for u in nbrs)
                key = nx.weisfeiler_lehman_graph_hash(H, iterations=4)
                bucket = buckets.setdefault(key, [])
                if any(nx.is_isomorphic(H, K) for K in bucket):
                    continue
                bucket.append(H)
                out.append(from_nx(H))
    return out


@lru_cache(maxsize=None)
def connected_multi(max_n: int = 5, max_mult: int = 3) -> tuple[MultiGraph, ...]:
    """Every connected multigraph on <= max_n vertices with multiplicities <= max_mult."""
    seen = set()
    out = []
    for base in connected_simple(max_n):
        pairs = sorted(base.mult)
        for ms in itertools.product(range(1, max_mult + 1), repeat=len(pairs)):
            g = MultiGraph(base.n, dict(zip(pairs, ms)))
            code = canonical_code(g)
            if code not in seen:
                seen.add(code)
                out.append(g)
    return tuple(out)


def random_multigraph(rng: random.Random, n: int, extra: int, max_mult: int = 3) -> MultiGraph:
    """Random spanning tree plus `extra` random edge copies, multiplicities capped."""
    mult: dict[tuple[int, int], int] = {}
    for v in range(1, n):
        u = rng.randrange(v)
        mult[(u, v)] = 1
    for _ in range(extra if n > 1 else 0):
        u, v = sorted(rng.sample(range(n), 2))
        if mult.get((u, v), 0) < max_mult:
            mult[(u, v)] = mult.get((u, v), 0) + 1
    perm = list(range(n))
    rng.shuffle(perm)
    g = build(n, [(perm[u], perm[v], m) for (u, v), m in mult.items()])
    assert is_connected(g)
    return g


def random_connected(rng: random.Random, n: int, p: float) -> MultiGraph:
    """Simple connected graph: random tree plus each other pair with probability p."""
    edges = {tuple(sorted((rng.randrange(v), v))) for v in range(1, n)}
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < p:
            edges.add((u, v))
    return build(n, sorted(edges))
