"""Linear orderings: cut sequences, blocks, block minimisation and linked refinement."""
from __future__ import annotations

import heapq
from collections import deque
from typing import Iterable, Sequence

from .multigraph import CutwidthError, MultiGraph, delta


class NotAPermutation(CutwidthError):
    pass


class NotOptimal(CutwidthError):
    pass


def check_permutation(g: MultiGraph, sigma: Sequence[int]) -> None:
    if len(sigma) != g.n or sorted(sigma) != list(range(g.n)):
        raise NotAPermutation(f"ordering is not a permutation of 0..{g.n - 1}")


def positions(sigma: Sequence[int]) -> dict[int, int]:
    return {v: i for i, v in enumerate(sigma)}


def cut_sequence(g: MultiGraph, sigma: Sequence[int], check: bool = True) -> list[int]:
    """c[i] = delta(first i+1 vertices of sigma), for i in 0..n-2."""
    if check:
        check_permutation(g, sigma)
    pos = [0] * g.n
    for i, v in enumerate(sigma):
        pos[v] = i
    cuts = []
    c = 0
    for i, v in enumerate(sigma[:-1]):
        for w, m in g.adj[v].items():
            c += m if pos[w] > i else -m
        cuts.append(c)
    return cuts


def width(g: MultiGraph, sigma: Sequence[int], check: bool = True) -> int:
    cuts = cut_sequence(g, sigma, check)
    return max(cuts, default=0)


def cut_sum(g: MultiGraph, sigma: Sequence[int]) -> int:
    return sum(cut_sequence(g, sigma))


def frontier_sizes(g: MultiGraph, sigma: Sequence[int]) -> list[int]:
    """Number of unplaced vertices adjacent to each proper prefix of sigma."""
    placed = [False] * g.n
    touching = [0] * g.n
    size = 0
    out = []
    for v in sigma[:-1]:
        if touching[v]:
            size -= 1
        placed[v] = True
        for u in g.adj[v]:
            if not placed[u]:
                if not touching[u]:
                    size += 1
                touching[u] += 1
        out.append(size)
    return out


def frontier_order(g: MultiGraph, start: int = 0) -> list[int]:
    """Greedy ordering that keeps few unplaced vertices adjacent to the prefix.

    The next vertex is a frontier vertex bringing the fewest new vertices into
    the frontier, ties broken by more edges into the prefix, then by index.
    """
    n = g.n
    if n == 0:
        return []
    state = [0] * n  # 0 untouched, 1 frontier, 2 placed
    fresh = [0] * n  # untouched neighbours of each vertex
    into = [0] * n  # edge copies into the placed prefix
    for v in range(n):
        fresh[v] = len(g.adj[v])
    heap: list = []
    order = []

    def touch(u):
        state[u] = 1
        for w in g.adj[u]:
            fresh[w] -= 1
            if state[w] == 1:
                heapq.heappush(heap, (fresh[w], -into[w], w))
        heapq.heappush(heap, (fresh[u], -into[u], u))

    touch(start)
    nxt_root = 0
    while len(order) < n:
        while heap:
            f, neg, v = heapq.heappop(heap)
            if state[v] == 1 and f == fresh[v] and -neg == into[v]:
                break
        else:
            while state[nxt_root]:
                nxt_root += 1
            touch(nxt_root)
            continue
        state[v] = 2
        order.append(v)
        for u, m in g.adj[v].items():
            if state[u] == 2:
                continue
            into[u] += m
            if state[u] == 0:
                touch(u)
            else:
                heapq.heappush(heap, (fresh[u], -into[u], u))
    return order


def seed_order(g: MultiGraph, sigma: Sequence[int] | None = None, all_starts: int = 32) -> list[int]:
    """Among sigma and frontier-greedy orderings, the one with the smallest
    (largest frontier, total frontier); small graphs try every start vertex."""
    starts = range(g.n) if g.n <= all_starts else ([sigma[0], sigma[-1]] if sigma else [0])
    cands = [frontier_order(g, s) for s in starts]
    if sigma is not None:
        cands.append(list(sigma))

    def score(o):
        f = frontier_sizes(g, o)
        return (max(f, default=0), sum(f))

    return min(cands, key=score)


def best_insert(g: MultiGraph, order: list[int], pos: list[int], v: int) -> tuple[int, int]:
    """(index, width) of the best place to insert v into order.

    ``pos[u]`` is u's index in order, or -1 for vertices not in order; edges to
    those are ignored.
    """
    L = len(order)
    # cuts[j] = cut after the first j placed vertices, ignoring v
    cuts = [0] * (L + 1)
    c = 0
    for j, u in enumerate(order):
        for w, m in g.adj[u].items():
            if w == v or pos[w] < 0:
                continue
            c += m if pos[w] > j else -m
        cuts[j + 1] = c
    to_v = [0] * (L + 1)  # edges from v into order[:j]
    for w, m in g.adj[v].items():
        if pos[w] >= 0:
            to_v[pos[w] + 1] += m
    for j in range(L):
        to_v[j + 1] += to_v[j]
    dv = to_v[L]
    # v at index p: cut t <= p gains to_v[t]; cut t > p sees order[:t-1] plus v
    best_p, best = 0, None
    pre = [0] * (L + 1)
    for t in range(1, L + 1):
        pre[t] = max(pre[t - 1], cuts[t] + to_v[t])
    suf = 0
    for p in range(L, -1, -1):
        if p < L:
            suf = max(suf, cuts[p] + dv - to_v[p])
        wid = max(pre[p], suf)
        if best is None or wid <= best:
            best_p, best = p, wid
    return best_p, best


def local_improve(g: MultiGraph, sigma: Sequence[int], target: int = 0, rounds: int = 20) -> list[int]:
    """Move single vertices to their best position while (width, cut sum) drops."""
    order = list(sigma)
    pos = [0] * g.n

    def score(o):
        c = cut_sequence(g, o, check=False)
        return (max(c, default=0), sum(c))

    cur = score(order)
    for _ in range(rounds):
        if cur[0] <= target:
            break
        improved = False
        for v in list(order):
            rest = [u for u in order if u != v]
            for i in range(g.n):
                pos[i] = -1
            for i, u in enumerate(rest):
                pos[u] = i
            p, _ = best_insert(g, rest, pos, v)
            cand = rest[:p] + [v] + rest[p:]
            sc = score(cand)
            if sc < cur:
                order, cur, improved = cand, sc, True
        if not improved:
            break
    return order


# --- blocks -------------------------------------------------------------------


def block_runs(sigma: Sequence[int], x: Iterable[int]) -> list[tuple[bool, list[int]]]:
    """Maximal runs of sigma, each tagged with membership in x."""
    x = set(x)
    runs: list[tuple[bool, list[int]]] = []
    for v in sigma:
        side = v in x
        if runs and runs[-1][0] == side:
            runs[-1][1].append(v)
        else:
            runs.append((side, [v]))
    return runs


def blocks(sigma: Sequence[int], x: Iterable[int]) -> int:
    """Number of maximal runs of consecutive vertices of x in sigma."""
    return sum(1 for side, _ in block_runs(sigma, x) if side)


def block_bound(delta_a: int, w: int) -> int:
    """Ceiling on (A,B)-blocks of a block-minimal optimum ordering."""
    return (2 * delta_a + 1) * (2 * w + 3) + 2 * delta_a


def minimize_blocks(
    g: MultiGraph, sigma: Sequence[int], cut: tuple[Iterable[int], Iterable[int]], w: int | None = None
) -> list[int]:
    """Swap adjacent (A,B)-blocks, leftmost first, while width stays within w."""
    a = set(cut[0])
    if w is None:
        w = width(g, sigma)
    runs = [list(r) for _, r in block_runs(sigma, a)]
    while len(runs) >= 3:
        order = [v for r in runs for v in r]
        pos = [0] * g.n
        for i, v in enumerate(order):
            pos[v] = i
        cuts = [0] + cut_sequence(g, order, check=False)
        start = 0
        done = False
        for t in range(len(runs) - 1):
            x, y = runs[t], runs[t + 1]
            if _swap_fits(g, pos, cuts[start], y + x, start, w):
                merged = runs[:t]
                if merged:
                    merged[-1] = merged[-1] + y
                else:
                    merged.append(y)
                rest = runs[t + 2:]
                if rest:
                    merged.append(x + rest[0])
                    merged.extend(rest[1:])
                else:
                    merged.append(x)
                runs = merged
                done = True
                break
            start += len(x)
        if not done:
            break
    return [v for r in runs for v in r]


def _swap_fits(g, pos, c, seq, start, w) -> bool:
    # cuts inside the swapped window; the cut after the window is unchanged
    inside = set(seq)
    left: set[int] = set()
    for v in seq[:-1]:
        for u, m in g.adj[v].items():
            if u in left or (u not in inside and pos[u] < start):
                c -= m
            else:
                c += m
        left.add(v)
        if c > w:
            return False
    return True


# --- max-flow -----------------------------------------------------------------


def max_flow(g: MultiGraph, s: Iterable[int], t: Iterable[int], limit: int | None = None):
    """Edge-capacitated max-flow between vertex sets.

    Returns (value, flow, source_side) where flow[(u, v)] is the net flow
    u -> v and source_side is the residual-reachable set of a minimum cut.
    """
    s = set(s)
    t = set(t)
    if s & t:
        raise ValueError("source and sink sets intersect")
    flow: dict[tuple[int, int], int] = {}
    value = 0
    while limit is None or value < limit:
        parent: dict[int, int | None] = {v: None for v in s}
        queue = deque(s)
        hit = None
        while queue and hit is None:
            u = queue.popleft()
            for w, m in g.adj[u].items():
                if w in parent or w in s:
                    continue
                if m - flow.get((u, w), 0) > 0:
                    parent[w] = u
                    if w in t:
                        hit = w
                        break
                    queue.append(w)
        if hit is None:
            return value, flow, set(parent)
        w = hit
        while parent[w] is not None:
            u = parent[w]
            flow[(u, w)] = flow.get((u, w), 0) + 1
            flow[(w, u)] = flow.get((w, u), 0) - 1
            w = u
        value += 1
    return value, flow, None


def edge_disjoint_paths(g: MultiGraph, s: Iterable[int], t: Iterable[int], k: int):
    """k pairwise edge-disjoint s-t paths, or None if fewer exist."""
    s = set(s)
    t = set(t)
    if k <= 0:
        return []
    value, flow, _ = max_flow(g, s, t, limit=k)
    if value < k:
        return None
    out = {key: f for key, f in flow.items() if f > 0}
    paths = []
    for _ in range(k):
        start = next(u for (u, w), f in out.items() if u in s and f > 0 and w not in s)
        walk = [start]
        index = {start: 0}
        u = start
        while u not in t:
            w = next(w for w in g.adj[u] if out.get((u, w), 0) > 0)
            out[(u, w)] -= 1
            if w in index:
                # drop a flow cycle
                for a in walk[index[w] + 1:]:
                    del index[a]
                walk = walk[: index[w] + 1]
            else:
                index[w] = len(walk)
                walk.append(w)
            u = w
        paths.append(walk)
    return paths


# --- linked orderings ----------------------------------------------------------


def _find_violation(g: MultiGraph, sigma: Sequence[int], lo: int):
    """First pair (i, j) of prefix lengths, shortest interval first, lacking enough paths."""
    n = len(sigma)
    cuts = [0] + cut_sequence(g, sigma, check=False)
    for span in range(1, n - 1 - lo + 1):
        for i in range(max(lo, 1), n - span):
            j = i + span
            need = min(cuts[i : j + 1])
            if need == 0:
                continue
            value, _, side = max_flow(g, sigma[:i], sigma[j:], limit=need)
            if value < need:
                return i, j, side
    return None


def _exchange(sigma: Sequence[int], i: int, j: int, side: set[int]) -> list[int]:
    head = list(sigma[:i])
    mid = sigma[i:j]
    tail = list(sigma[j:])
    return head + [v for v in mid if v in side] + [v for v in mid if v not in side] + tail


def make_linked(g: MultiGraph, sigma: Sequence[int], optimum: int | None = None) -> list[int]:
    """Refine sigma by min-cut exchanges until it is linked; width never grows."""
    check_permutation(g, sigma)
    if optimum is not None and width(g, sigma) > optimum:
        raise NotOptimal(f"ordering width {width(g, sigma)} exceeds optimum {optimum}")
    sigma = list(sigma)
    while True:
        hit = _find_violation(g, sigma, 1)
        if hit is None:
            return sigma
        sigma = _exchange(sigma, *hit)


def verify_linked(g: MultiGraph, sigma: Sequence[int], lo: int = 1) -> bool:
    check_permutation(g, sigma)
    return _find_violation(g, sigma, lo) is None


def cw_with_subset(g: MultiGraph, sigma: Sequence[int], x: Iterable[int]) -> int:
    """delta(X) plus the width of sigma restricted to G[X]."""
    from .multigraph import induced

    x = set(x)
    sub = [v for v in sigma if v in x]
    h, _ = induced(g, sub)
    return delta(g, x) + width(h, list(range(len(sub))), check=False)


def make_x_linked(g: MultiGraph, x: Iterable[int], sigma_x: Sequence[int]) -> list[int]:
    """Full ordering with x as suffix (in sigma_x order, refined) that is x-linked."""
    x = set(x)
    if set(sigma_x) != x or len(sigma_x) != len(x):
        raise NotAPermutation("sigma_x must order x")
    rest = [v for v in range(g.n) if v not in x]
    sigma = rest + list(sigma_x)
    lo = len(rest)
    if not x:
        return sigma
    while True:
        hit = _find_violation(g, sigma, lo)
        if hit is None:
            return sigma
        sigma = _exchange(sigma, *hit)


def verify_x_linked(g: MultiGraph, sigma: Sequence[int], x: Iterable[int]) -> bool:
    x = set(x)
    n = len(sigma)
    if set(sigma[n - len(x):]) != x:
        return False
    return verify_linked(g, sigma, lo=n - len(x))
