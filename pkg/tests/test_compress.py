from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutwidth.compress import (
    BASE,
    SLOT,
    Diagnostics,
    DPState,
    ProfileDP,
    StateLimitExceeded,
    WidthMismatch,
    bucket_count,
    compress,
    describe,
    expand,
    optimum_from_ordering,
    seg,
    state_count_bound,
)
from cutwidth.multigraph import build, complete, cycle, empty, path
from cutwidth.oracle import cw
from cutwidth.ordering import width

from graphs import connected_multi, random_multigraph

START = DPState(0, (seg(0),))


def test_expand_first_isolated_vertex():
    g = empty(2)
    succ = expand(START, g, [0, 1], 0)
    assert succ
    for s in succ:
        kinds = [kind for kind, _ in describe(s.profile)]
        assert s.w == 1 and kinds.count("block") == 1 and "slot" not in kinds
        assert all(val == 0 for kind, val in describe(s.profile) if kind == "seg")


def test_expand_dies_on_k2_at_zero():
    k2 = path(2)
    layer = expand(START, k2, [0, 1], 0)
    assert all(not expand(s, k2, [0, 1], 0) for s in layer)
    # at k = 1 the pending edge gets a slot
    layer = expand(START, k2, [0, 1], 1)
    assert any("slot" in [kind for kind, _ in describe(s.profile)] for s in layer)


def test_p3_has_accepting_path():
    dp = ProfileDP(path(3), [0, 1, 2], 1)
    choices = dp.run()
    assert choices is not None
    assert width(path(3), dp.replay(choices)) == 1


def test_compress_examples():
    p4 = path(4)
    sigma = [0, 2, 1, 3]
    assert width(p4, sigma) == 3
    tau = compress(p4, sigma, 1)
    assert width(p4, tau) == 1
    c4 = cycle(4)
    assert compress(c4, [0, 1, 2, 3], 1) is None
    assert compress(build(1, []), [0], 0) == [0]
    assert compress(c4, [0, 1, 2, 3], 5) == [0, 1, 2, 3]


def test_compress_errors():
    with pytest.raises(WidthMismatch):
        compress(path(3), [0, 0, 1], 1)
    with pytest.raises(WidthMismatch):
        compress(path(3), [0, 2, 1], 1, r=1)


def test_state_limit():
    g = cycle(8)
    with pytest.raises(StateLimitExceeded):
        ProfileDP(g, list(range(8)), 2).run(state_limit=1)
    with pytest.raises(StateLimitExceeded):
        compress(g, [0, 4, 1, 5, 2, 6, 3, 7], 2, strategy="layered", state_limit=1)


def test_optimum_from_ordering_examples():
    assert optimum_from_ordering(path(5), list(range(5)))[0] == 1
    k, tau = optimum_from_ordering(complete(4), [3, 1, 0, 2])
    assert k == 4 and width(complete(4), tau) == 4
    assert optimum_from_ordering(empty(3), [2, 0, 1])[0] == 0


@pytest.mark.parametrize("strategy", ["hybrid", "depth", "layered"])
def test_strategies_agree_with_oracle(strategy):
    rng = random.Random(17)
    for _ in range(60):
        n = rng.randint(2, 7)
        g = random_multigraph(rng, n, rng.randint(0, 2 * n), max_mult=2)
        sigma = list(range(n))
        rng.shuffle(sigma)
        k, tau = optimum_from_ordering(g, sigma, strategy=strategy)
        assert k == cw(g) and width(g, tau) == k


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 12), st.randoms())
def test_compress_sound_and_complete(n, extra, rnd):
    g = random_multigraph(random.Random(rnd.random()), n, extra)
    sigma = list(range(n))
    rnd.shuffle(sigma)
    opt = cw(g)
    for k in range(width(g, sigma) + 1):
        tau = compress(g, sigma, k)
        if tau is None:
            assert k < opt
        else:
            assert sorted(tau) == list(range(n)) and width(g, tau) <= k


def test_every_start_on_small_multigraphs():
    rng = random.Random(23)
    graphs = [g for g in connected_multi(4, 2)]
    for g in graphs:
        opt = cw(g)
        for sigma in itertools.permutations(range(g.n)):
            if rng.random() < 0.5:
                assert optimum_from_ordering(g, list(sigma))[0] == opt


def _layers(g, sigma, k, reverse):
    dp = ProfileDP(g, sigma, k, prune_dominated=False)
    layers = [{dp.initial()}]
    for _ in range(g.n):
        nxt = set()
        states = sorted(layers[-1], key=lambda s: s.profile, reverse=reverse)
        for s in states:
            succ = [t for _, t in dp.successors(s)]
            if reverse:
                succ.reverse()
            nxt.update(succ)
        layers.append(nxt)
    return layers


def test_layers_do_not_depend_on_exploration_order():
    rng = random.Random(31)
    for _ in range(20):
        n = rng.randint(2, 7)
        g = random_multigraph(rng, n, rng.randint(0, n), max_mult=2)
        sigma = list(range(n))
        rng.shuffle(sigma)
        k = max(cw(g), 1)
        assert _layers(g, sigma, k, False) == _layers(g, sigma, k, True)


def test_state_counts_below_bound():
    rng = random.Random(41)
    for _ in range(40):
        n = rng.randint(2, 7)
        g = random_multigraph(rng, n, rng.randint(0, n), max_mult=2)
        sigma = list(range(n))
        rng.shuffle(sigma)
        r = width(g, sigma)
        for k in range(1, min(r, 3) + 1):
            diag = Diagnostics()
            compress(g, sigma, k, r, diagnostics=diag, strategy="layered")
            assert diag.max_layer <= state_count_bound(k, r)


def test_profile_tokens():
    assert describe((seg(3), BASE + 1 + 2, SLOT + 5)) == [("seg", 3), ("block", 2), ("slot", 5)]
    assert bucket_count(1, 1) == 18
