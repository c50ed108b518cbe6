"""Bucket-profile dynamic programming: compress an ordering of width r to width k.

A state describes how the first w vertices of the input ordering sit inside
some final ordering tau. It is a left-to-right tuple of tokens:

* a block: a maximal run of already placed vertices, carrying the largest
  current cut over its interior positions (-1 when it has none);
* a segment: a stretch of positions reserved for future vertices, carrying its
  current cut;
* a slot: the committed position of a future vertex adjacent to the prefix.

Runs of segments and slots between two blocks (or at either end) are gaps;
inside a gap segments and slots alternate, starting and ending with a segment.
Current cuts count every edge with a placed endpoint, the unplaced endpoint
sitting at its slot. They only grow as vertices are added, so any value above
k is a dead end.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Sequence

from .multigraph import CutwidthError, MultiGraph
from .ordering import NotAPermutation, check_permutation, width

BASE = 1 << 40
SLOT = 2 * BASE
HOLE = -1

# scenario tags
NEW_ODD, MERGE_LEFT, MERGE_RIGHT, MERGE_BOTH = range(4)
SCENARIOS = ("NewOddBucket", "MergeLeft", "MergeRight", "MergeBoth")

DEFAULT_STATE_LIMIT = 10**7
# depth-first probe budget in the hybrid strategy
PROBE_BASE = 2000
PROBE_PER_VERTEX = 20


class WidthMismatch(CutwidthError):
    pass


class StateLimitExceeded(CutwidthError):
    pass


class _OutOfBudget(Exception):
    pass


def bucket_count(r: int, k: int) -> int:
    """Number of buckets l = 4rk + 2k + 8r + 4."""
    return 4 * r * k + 2 * k + 8 * r + 4


def block_cap(r: int, k: int) -> int:
    """Maximum number of odd buckets (blocks) a profile may use."""
    return bucket_count(r, k) // 2


def state_count_bound(k: int, r: int) -> int:
    """(l*k)^(2k) * (k+1)^(l+2k): the ceiling on profiles per prefix length."""
    ell = bucket_count(r, k)
    return (ell * k) ** (2 * k) * (k + 1) ** (ell + 2 * k)


def seg(c: int) -> int:
    return c


def block(m: int) -> int:
    return BASE + 1 + m


def slot(y: int) -> int:
    return SLOT + y


def describe(tokens: Sequence[int]) -> list[tuple[str, int]]:
    out = []
    for t in tokens:
        if t >= SLOT:
            out.append(("slot", t - SLOT))
        elif t >= BASE:
            out.append(("block", t - BASE - 1))
        else:
            out.append(("seg", t))
    return out


@dataclass(frozen=True)
class DPState:
    w: int
    profile: tuple[int, ...]


@dataclass(frozen=True)
class PlacementChoice:
    position: int
    scenario: int
    inserts: tuple[int, ...]
    flip: bool = False


@dataclass
class Diagnostics:
    states_per_layer: list[int] = field(default_factory=list)
    generated_per_layer: list[int] = field(default_factory=list)
    discarded_width: int = 0
    discarded_blocks: int = 0
    discarded_gaps: int = 0
    probe_states: int = 0

    @property
    def max_layer(self) -> int:
        return max(self.generated_per_layer, default=0)


def _gap_bounds(tokens, p):
    gs = p
    while gs > 0 and not (BASE <= tokens[gs - 1] < SLOT):
        gs -= 1
    ge = p
    last = len(tokens) - 1
    while ge < last and not (BASE <= tokens[ge + 1] < SLOT):
        ge += 1
    return gs, ge


def _open_shape(tokens, v, v_slotted):
    """Yield (position, pre, mL, post, mR, scenario) for every way v can be placed."""
    if v_slotted:
        spots = [tokens.index(SLOT + v)]
    else:
        spots = [i for i, t in enumerate(tokens) if 0 <= t < BASE]
    n = len(tokens)
    for p in spots:
        gs, ge = _gap_bounds(tokens, p)
        if v_slotted:
            left = tokens[gs:p]
            right = tokens[p + 1 : ge + 1]
        else:
            left = tokens[gs : p + 1]
            right = tokens[p : ge + 1]
        for scen in (NEW_ODD, MERGE_LEFT, MERGE_RIGHT, MERGE_BOTH):
            close_l = scen in (MERGE_LEFT, MERGE_BOTH)
            close_r = scen in (MERGE_RIGHT, MERGE_BOTH)
            if close_l:
                if len(left) != 1:
                    continue
                if gs > 0:
                    b1 = tokens[gs - 1] - BASE - 1
                    m_l = b1 if b1 > left[0] else left[0]
                    pre = tokens[: gs - 1]
                else:
                    m_l = -1
                    pre = ()
            else:
                m_l = -1
                pre = tokens[:gs] + left
            if close_r:
                if len(right) != 1:
                    continue
                if ge < n - 1:
                    b2 = tokens[ge + 1] - BASE - 1
                    m_r = b2 if b2 > right[0] else right[0]
                    post = tokens[ge + 2 :]
                else:
                    m_r = -1
                    post = ()
            else:
                m_r = -1
                post = right + tokens[ge + 1 :]
            yield p, pre, m_l, post, m_r, scen


class ProfileDP:
    """Forward layered search over profiles for a fixed graph, ordering and k."""

    def __init__(
        self,
        g: MultiGraph,
        sigma: Sequence[int],
        k: int,
        r: int | None = None,
        prune_dominated: bool = True,
    ):
        self.g = g
        self.prune_dominated = prune_dominated
        self.sigma = list(sigma)
        self.k = k
        self.r = width(g, sigma) if r is None else r
        self.lam = block_cap(self.r, k)
        n = g.n
        pos = [0] * n
        for i, v in enumerate(self.sigma):
            pos[v] = i
        self.steps = []
        for i, v in enumerate(self.sigma):
            slotted = any(pos[u] < i for u in g.adj[v])
            old = []
            new = []
            for y, m in sorted(g.adj[v].items()):
                if pos[y] < i:
                    continue
                if any(pos[u] < i for u in g.adj[y]):
                    old.append((y, m))
                else:
                    new.append((y, m))
            self.steps.append((v, slotted, tuple(old), tuple(new)))
        # after placing sigma[i]: edges each slotted vertex still lacks, and the
        # least degree of a future vertex without a slot
        deg = g.degrees()
        left = list(deg)
        slotted_now: set[int] = set()
        free = sorted((deg[v], pos[v]) for v in range(n))
        head = 0
        tail = n - 1
        self.need = []
        self.min_future = []
        self.max_future = []
        for i, v in enumerate(self.sigma):
            slotted_now.discard(v)
            for y, m in g.adj[v].items():
                if pos[y] > i:
                    left[y] -= m
                    slotted_now.add(y)
            self.need.append({y: left[y] for y in slotted_now})
            while head < n and (
                free[head][1] <= i or self.sigma[free[head][1]] in slotted_now
                or any(pos[u] <= i for u in g.adj[self.sigma[free[head][1]]])
            ):
                head += 1
            self.min_future.append(free[head][0] if head < n else 0)
            while tail >= head and (
                free[tail][1] <= i or self.sigma[free[tail][1]] in slotted_now
                or any(pos[u] <= i for u in g.adj[self.sigma[free[tail][1]]])
            ):
                tail -= 1
            self.max_future.append(free[tail][0] if tail >= head else -1)
        self.diag = Diagnostics()

    def initial(self) -> DPState:
        return DPState(0, (seg(0),))

    def accepting(self, state: DPState) -> bool:
        t = state.profile
        return state.w == self.g.n and len(t) == 1 and BASE <= t[0] < SLOT

    def successors(self, state: DPState):
        """Yield (choice, DPState) pairs in a fixed enumeration order.

        A profile and its mirror image describe mirrored orderings, so each
        successor is stored in the lexicographically smaller orientation;
        ``flip`` in the choice records when that reversal happened.
        """
        w = state.w
        v, slotted, old, new = self.steps[w]
        k = self.k
        remaining = self.g.n - w - 1
        lam = self.lam
        diag = self.diag
        need = self.need[w]
        min_future = self.min_future[w]
        max_future = self.max_future[w]
        k2 = 2 * k
        for p, pre, m_l, post, m_r, scen in _open_shape(state.profile, v, slotted):
            blocks = 1
            gaps = 0
            in_gap = False
            for t in pre:
                if BASE <= t < SLOT:
                    blocks += 1
                    in_gap = False
                elif not in_gap:
                    gaps += 1
                    in_gap = True
            in_gap = False
            for t in post:
                if BASE <= t < SLOT:
                    blocks += 1
                    in_gap = False
                elif not in_gap:
                    gaps += 1
                    in_gap = True
            if blocks > lam:
                diag.discarded_blocks += 1
                continue
            if gaps > remaining:
                diag.discarded_gaps += 1
                continue
            toks = list(pre)
            toks.append(HOLE)
            toks.extend(post)
            bi = len(pre)
            inc_l = inc_r = 0
            ok = True
            for y, m in old:
                s = toks.index(SLOT + y)
                if s > bi:
                    lo, hi = bi + 1, s
                    inc_r += m
                else:
                    lo, hi = s + 1, bi
                    inc_l += m
                if not _bump(toks, lo, hi, m, k):
                    ok = False
                    break
            if not ok or (m_l >= 0 and m_l + inc_l > k) or (m_r >= 0 and m_r + inc_r > k):
                diag.discarded_width += 1
                continue
            for inserts, out, il, ir in _place_new(toks, bi, new, 0, inc_l, inc_r, m_l, m_r, k):
                ml = m_l + il if m_l >= 0 else -1
                mr = m_r + ir if m_r >= 0 else -1
                hole = out.index(HOLE)
                out[hole] = BASE + 1 + (ml if ml > mr else mr)
                if not _room_left(out, need, min_future, max_future, k2):
                    diag.discarded_width += 1
                    continue
                fwd = tuple(out)
                rev = fwd[::-1]
                if rev < fwd:
                    yield PlacementChoice(p, scen, inserts, True), DPState(w + 1, rev)
                else:
                    yield PlacementChoice(p, scen, inserts, False), DPState(w + 1, fwd)

    def run(self, state_limit: int | None = None):
        """Search all layers; returns the accepting path as choices, or None."""
        if state_limit is None:
            state_limit = int(os.environ.get("CW_STATE_LIMIT", DEFAULT_STATE_LIMIT))
        n = self.g.n
        layers: list[dict] = []
        current = {self.initial(): None}
        self.diag.states_per_layer.append(1)
        self.diag.generated_per_layer.append(1)
        for _ in range(n):
            nxt: dict = {}
            for state in current:
                for choice, succ in self.successors(state):
                    if succ not in nxt:
                        nxt[succ] = (state, choice)
                        if len(nxt) > state_limit:
                            raise StateLimitExceeded(
                                f"more than {state_limit} profiles at prefix length {succ.w}"
                            )
            self.diag.generated_per_layer.append(len(nxt))
            if self.prune_dominated:
                nxt = _drop_dominated(nxt)
            layers.append(nxt)
            self.diag.states_per_layer.append(len(nxt))
            current = nxt
            if not current:
                return None
        final = [s for s in current if self.accepting(s)]
        if not final:
            return None
        state = final[0]
        choices = []
        for layer in reversed(layers):
            prev, choice = layer[state]
            choices.append(choice)
            state = prev
        choices.reverse()
        return choices

    def run_depth_first(self, state_limit: int | None = None, budget: int | None = None):
        """Depth-first variant of run that stops at the first accepting profile.

        Every profile left behind on backtracking is dead, and so is any later
        profile of the same shape whose values are all at least as large.
        """
        if state_limit is None:
            state_limit = int(os.environ.get("CW_STATE_LIMIT", DEFAULT_STATE_LIMIT))
        n = self.g.n
        counts = [0] * (n + 1)
        counts[0] = 1
        seen = {self.initial()}
        dead: dict[tuple, list] = {}
        stack = [(self.initial(), self._ranked(self.initial()))]
        path: list = []
        try:
            while stack:
                state, it = stack[-1]
                if state.w == n:
                    if self.accepting(state):
                        return path
                    stack.pop()
                    path.pop()
                    continue
                for choice, succ in it:
                    if succ in seen:
                        continue
                    seen.add(succ)
                    if self.prune_dominated and _dominated(dead, succ):
                        continue
                    counts[succ.w] += 1
                    if len(seen) > state_limit:
                        raise StateLimitExceeded(f"more than {state_limit} profiles visited")
                    if budget is not None and len(seen) > budget:
                        raise _OutOfBudget
                    path.append(choice)
                    stack.append((succ, self._ranked(succ) if succ.w < n else iter(())))
                    break
                else:
                    stack.pop()
                    if self.prune_dominated:
                        _mark_dead(dead, state)
                    if path:
                        path.pop()
            return None
        finally:
            self.diag.states_per_layer.extend(counts)
            self.diag.generated_per_layer.extend(counts)

    def _ranked(self, state: DPState):
        # compact profiles first: few tokens, then small cut values
        succ = list(self.successors(state))
        succ.sort(key=lambda cs: (len(cs[1].profile), _load(cs[1].profile)))
        return iter(succ)

    def replay(self, choices) -> list[int]:
        """Rebuild tau from the placement choices along an accepting path."""
        layout: list = [("seg",)]
        for (v, slotted, old, new), ch in zip(self.steps, choices):
            kinds = tuple(_kind_token(x) for x in layout)
            p = ch.position
            gs, ge = _gap_bounds(kinds, p)
            if slotted:
                left = layout[gs:p]
                right = layout[p + 1 : ge + 1]
            else:
                left = layout[gs : p + 1]
                right = layout[p : ge + 1]
            verts = [v]
            close_l = ch.scenario in (MERGE_LEFT, MERGE_BOTH)
            close_r = ch.scenario in (MERGE_RIGHT, MERGE_BOTH)
            if close_l:
                if gs > 0:
                    verts = layout[gs - 1][1] + verts
                    pre = layout[: gs - 1]
                else:
                    pre = []
            else:
                pre = layout[:gs] + left
            if close_r:
                if ge < len(layout) - 1:
                    verts = verts + layout[ge + 1][1]
                    post = layout[ge + 2 :]
                else:
                    post = []
            else:
                post = right + layout[ge + 1 :]
            layout = pre + [("block", verts)] + post
            for (y, _), j in zip(new, ch.inserts):
                layout = layout[:j] + [("seg",), ("slot", y), ("seg",)] + layout[j + 1 :]
            if ch.flip:
                layout = [("block", x[1][::-1]) if x[0] == "block" else x for x in reversed(layout)]
        assert len(layout) == 1 and layout[0][0] == "block"
        return layout[0][1]


def _load(profile) -> int:
    total = 0
    for t in profile:
        if t < BASE:
            total += t
        elif t < SLOT:
            total += t - BASE - 1
    return total


def _kind_token(x) -> int:
    if x[0] == "block":
        return BASE
    if x[0] == "slot":
        return SLOT + x[1]
    return 0


def _shape(profile):
    return tuple(t if t >= SLOT else (BASE if t >= BASE else 0) for t in profile)


def _drop_dominated(layer: dict) -> dict:
    """Keep profiles not pointwise dominated by another of the same shape.

    Transitions and pruning are monotone in the cut values, so a profile whose
    values are all at least those of a same-shaped profile adds no completion.
    """
    groups: dict[tuple, list] = {}
    for state in layer:
        groups.setdefault(_shape(state.profile), []).append(state)
    keep = set()
    for members in groups.values():
        if len(members) == 1:
            keep.add(members[0])
            continue
        members.sort(key=lambda s: sum(s.profile))
        kept: list = []
        for st in members:
            a = st.profile
            if not any(all(x <= y for x, y in zip(b.profile, a)) for b in kept):
                kept.append(st)
        keep.update(kept)
    return {s: v for s, v in layer.items() if s in keep}


def _dominated(dead: dict, state: DPState) -> bool:
    a = state.profile
    for b in dead.get((state.w, _shape(a)), ()):
        if all(x <= y for x, y in zip(b, a)):
            return True
    return False


def _mark_dead(dead: dict, state: DPState) -> None:
    dead.setdefault((state.w, _shape(state.profile)), []).append(state.profile)


def _room_left(toks, need, min_future, max_future, k2) -> bool:
    """Necessary condition for completing the profile within width k.

    A future vertex y sitting at a slot with neighbouring cuts a and b ends up
    with cuts at least a + x and b + need[y] - x on its two sides, so
    a + b + need[y] <= 2k. A gap that is a lone segment of value c still has
    to receive some vertex, giving 2c + min_future <= 2k. Every future vertex
    without a slot lands in some segment, so the lowest segment value c must
    satisfy 2c + max_future <= 2k.
    """
    last = len(toks) - 1
    low = k2
    for i, t in enumerate(toks):
        if t >= SLOT:
            if toks[i - 1] + toks[i + 1] + need[t - SLOT] > k2:
                return False
        elif t < BASE:
            if t < low:
                low = t
            if (i == 0 or BASE <= toks[i - 1] < SLOT) and (i == last or BASE <= toks[i + 1] < SLOT):
                if 2 * t + min_future > k2:
                    return False
    return max_future < 0 or 2 * low + max_future <= k2


def _bump(toks, lo, hi, m, k) -> bool:
    """Add m to every cut value in toks[lo:hi]; False once one exceeds k."""
    for i in range(lo, hi):
        t = toks[i]
        if t < BASE:
            t += m
            if t > k:
                return False
            toks[i] = t
        elif BASE < t < SLOT:
            t += m
            if t - BASE - 1 > k:
                return False
            toks[i] = t
    return True


def _place_new(toks, bi, new, idx, inc_l, inc_r, m_l, m_r, k):
    """Insert slots for new neighbours one at a time, pruning as cuts grow."""
    if idx == len(new):
        yield (), list(toks), inc_l, inc_r
        return
    y, m = new[idx]
    if m_r >= 0 and m_r + inc_r + m > k:
        right_ok = False
    else:
        right_ok = True
    left_ok = not (m_l >= 0 and m_l + inc_l + m > k)
    for j, t in enumerate(toks):
        if not (0 <= t < BASE):
            continue
        if j > bi:
            if not right_ok:
                continue
            out = toks[:j] + [t, SLOT + y, t] + toks[j + 1 :]
            if not _bump(out, bi + 1, j + 1, m, k):
                continue
            for more, res, il, ir in _place_new(out, bi, new, idx + 1, inc_l, inc_r + m, m_l, m_r, k):
                yield (j,) + more, res, il, ir
        else:
            if not left_ok:
                continue
            out = toks[:j] + [t, SLOT + y, t] + toks[j + 1 :]
            nb = bi + 2
            if not _bump(out, j + 2, nb, m, k):
                continue
            for more, res, il, ir in _place_new(out, nb, new, idx + 1, inc_l + m, inc_r, m_l, m_r, k):
                yield (j,) + more, res, il, ir


def expand(state: DPState, g: MultiGraph, sigma: Sequence[int], k: int) -> set[DPState]:
    """All successor profiles of state when placing the next vertex of sigma."""
    dp = ProfileDP(g, sigma, k)
    return {s for _, s in dp.successors(state)}


def _degree_infeasible(g: MultiGraph, k: int) -> bool:
    return any((d + 1) // 2 > k for d in g.degrees())


def compress(
    g: MultiGraph,
    sigma: Sequence[int],
    k: int,
    r: int | None = None,
    diagnostics: Diagnostics | None = None,
    state_limit: int | None = None,
    strategy: str = "hybrid",
) -> list[int] | None:
    """An ordering of width <= k found by the profile DP seeded with sigma, or None.

    ``strategy`` is "depth" (stop at the first accepting profile), "layered"
    (materialise every prefix layer with dominance pruning) or "hybrid": a
    depth-first probe with a small state budget, then a layered run. Failing
    searches must exhaust the space and the layered run does that cheaper.
    """
    try:
        check_permutation(g, sigma)
    except NotAPermutation as exc:
        raise WidthMismatch(str(exc)) from None
    actual = width(g, sigma, check=False)
    if r is not None and actual > r:
        raise WidthMismatch(f"ordering width {actual} exceeds declared {r}")
    if k >= actual:
        return list(sigma)
    if _degree_infeasible(g, k):
        return None
    if strategy not in ("hybrid", "depth", "layered"):
        raise ValueError(f"unknown strategy {strategy!r}")
    dp = ProfileDP(g, sigma, k, actual)
    if strategy == "hybrid":
        try:
            choices = dp.run_depth_first(state_limit, budget=PROBE_BASE + PROBE_PER_VERTEX * g.n)
            strategy = "done"
        except _OutOfBudget:
            if diagnostics is not None:
                diagnostics.probe_states += sum(dp.diag.generated_per_layer)
            dp = ProfileDP(g, sigma, k, actual)
            strategy = "layered"
    try:
        if strategy == "layered":
            choices = dp.run(state_limit)
        elif strategy == "depth":
            choices = dp.run_depth_first(state_limit)
    finally:
        if diagnostics is not None:
            diagnostics.states_per_layer.extend(dp.diag.states_per_layer)
            diagnostics.generated_per_layer.extend(dp.diag.generated_per_layer)
            diagnostics.discarded_width += dp.diag.discarded_width
            diagnostics.discarded_blocks += dp.diag.discarded_blocks
            diagnostics.discarded_gaps += dp.diag.discarded_gaps
            diagnostics.probe_states += dp.diag.probe_states
    if choices is None:
        return None
    tau = dp.replay(choices)
    assert width(g, tau) <= k
    return tau


def optimum_from_ordering(
    g: MultiGraph, sigma: Sequence[int], diagnostics: list | None = None, strategy: str = "hybrid"
) -> tuple[int, list[int]]:
    """Smallest k for which compress succeeds, with its witness ordering."""
    check_permutation(g, sigma)
    r = width(g, sigma, check=False)
    for k in range(r + 1):
        diag = Diagnostics()
        tau = compress(g, sigma, k, r, diagnostics=diag, strategy=strategy)
        if diagnostics is not None:
            diagnostics.append((k, r, diag))
        if tau is not None:
            return k, tau
    raise AssertionError("compress must succeed at k = width(sigma)")
