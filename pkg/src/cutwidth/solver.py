"""Reduction & Compression: decide cutwidth <= k with a witness ordering."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .compress import Diagnostics, compress
from .multigraph import MultiGraph, components, induced
from .ordering import best_insert, cut_sequence, local_improve, seed_order, width
from .reduce import NoProgress, TooWide, lift_ordering, reduce_step


# orderings this small get a vertex-move local search before the DP
LOCAL_SEARCH_LIMIT = 200


@dataclass
class RunReport:
    k_tried: list[int] = field(default_factory=list)
    states_visited: int = 0
    reductions: int = 0
    fallbacks: int = 0
    compress_calls: int = 0

    def as_dict(self) -> dict:
        return {
            "k_tried": list(self.k_tried),
            "states_visited": self.states_visited,
            "reductions": self.reductions,
            "fallbacks": self.fallbacks,
            "compress_calls": self.compress_calls,
        }


def bfs_order(g: MultiGraph) -> list[int]:
    seen = [False] * g.n
    order = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        queue = deque([s])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in sorted(g.adj[u]):
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
    return order


def _compress(g, sigma, k, report, state_limit):
    """compress, seeded with a low-frontier ordering unless sigma already fits."""
    if width(g, sigma, check=False) > k:
        if g.n <= LOCAL_SEARCH_LIMIT:
            sigma = local_improve(g, sigma, k)
            if width(g, sigma, check=False) <= k:
                return sigma
        sigma = seed_order(g, sigma)
    diag = Diagnostics()
    report.compress_calls += 1
    try:
        return compress(g, sigma, k, diagnostics=diag, state_limit=state_limit)
    finally:
        report.states_visited += sum(diag.generated_per_layer) + diag.probe_states


def _incremental(g: MultiGraph, k: int, report: RunReport, state_limit) -> list[int] | None:
    """Insert vertices one at a time at their best position, compressing each prefix graph."""
    report.fallbacks += 1
    order: list[int] = []
    pos = [-1] * g.n
    for v in bfs_order(g):
        p = best_insert(g, order, pos, v)[0]
        order.insert(p, v)
        for i in range(p, len(order)):
            pos[order[i]] = i
        sub, _ = induced(g, order)
        tau = _compress(sub, list(range(len(order))), k, report, state_limit)
        if tau is None:
            return None
        order = [order[i] for i in tau]
        for i, u in enumerate(order):
            pos[u] = i
    return order


def _solve_connected(g: MultiGraph, k: int, report: RunReport, state_limit) -> list[int] | None:
    levels = []
    cur = g
    while True:
        if cur.num_edges <= 2 * k + 1:
            tau = _compress(cur, bfs_order(cur), k, report, state_limit)
            break
        res = reduce_step(cur, k)
        if isinstance(res, TooWide):
            return None
        if isinstance(res, NoProgress):
            tau = _incremental(cur, k, report, state_limit)
            break
        h, trace = res
        report.reductions += 1
        levels.append((cur, trace))
        cur = h
    if tau is None:
        return None
    for graph, trace in reversed(levels):
        tau = lift_ordering(trace, tau)
        tau = _compress(graph, tau, k, report, state_limit)
        if tau is None:
            return None
    return tau


def cutwidth_decide(
    g: MultiGraph, k: int, report: RunReport | None = None, state_limit: int | None = None
) -> TooWide | list[int]:
    """A width-<=k ordering of g, or TooWide when cw(g) > k."""
    if report is None:
        report = RunReport()
    report.k_tried.append(k)
    order: list[int] = []
    for comp in sorted(components(g), key=min):
        vs = sorted(comp)
        sub, _ = induced(g, vs)
        tau = _solve_connected(sub, k, report, state_limit)
        if tau is None:
            return TooWide("component", vs[0])
        order.extend(vs[i] for i in tau)
    return order


def cutwidth_exact(
    g: MultiGraph, report: RunReport | None = None, state_limit: int | None = None
) -> tuple[int, list[int]]:
    k = 0
    while True:
        res = cutwidth_decide(g, k, report, state_limit)
        if not isinstance(res, TooWide):
            return k, res
        k += 1


def verify_certificate(g: MultiGraph, sigma: Sequence[int], k: int) -> bool:
    if len(sigma) != g.n or sorted(sigma) != list(range(g.n)):
        return False
    return max(cut_sequence(g, sigma, check=False), default=0) <= k
