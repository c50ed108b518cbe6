from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cutwidth.multigraph import (
    MultiGraph,
    TooLarge,
    build,
    canonical_code,
    complete,
    cycle,
    disjoint_union,
    empty,
    path,
    star,
)
from cutwidth.oracle import (
    cw,
    dcw,
    exact_cutwidth,
    immersion_leq,
    is_immersion,
    is_obstruction,
    obstruction_certificate,
    one_step_reductions,
    permutation_cutwidth,
)
from cutwidth.ordering import width

from graphs import connected_multi, random_multigraph


def all_multigraphs(n, max_mult):
    """Every multigraph on exactly n vertices, connected or not, up to isomorphism."""
    pairs = list(itertools.combinations(range(n), 2))
    seen = {}
    for ms in itertools.product(range(max_mult + 1), repeat=len(pairs)):
        g = MultiGraph(n, {p: m for p, m in zip(pairs, ms) if m})
        seen.setdefault(canonical_code(g), g)
    return list(seen.values())


def test_exact_cutwidth_examples():
    for n in range(1, 12):
        assert cw(path(n)) == (1 if n > 1 else 0)
    assert cw(complete(4)) == 4 == permutation_cutwidth(complete(4))
    assert cw(star(4)) == 2 == permutation_cutwidth(star(4))
    assert exact_cutwidth(empty(0)) == (0, [])


def test_exact_cutwidth_witness_and_limit():
    rng = random.Random(1)
    for _ in range(50):
        n = rng.randint(2, 12)
        g = random_multigraph(rng, n, rng.randint(0, 2 * n))
        k, sigma = exact_cutwidth(g)
        assert width(g, sigma) == k
    with pytest.raises(TooLarge):
        exact_cutwidth(path(21))


def test_subset_dp_matches_permutations_on_small_multigraphs():
    # every connected multigraph on <= 5 vertices with multiplicity <= 2
    for g in connected_multi(5, 2):
        assert cw(g) == permutation_cutwidth(g)


def test_subset_dp_matches_permutations_on_six_vertices():
    rng = random.Random(6)
    for _ in range(300):
        g = random_multigraph(rng, 6, rng.randint(0, 10), max_mult=2)
        assert cw(g) == permutation_cutwidth(g)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.randoms())
def test_cutwidth_of_union_is_max(n1, n2, rnd):
    rng = random.Random(rnd.random())
    a = random_multigraph(rng, n1, rng.randint(0, n1))
    b = random_multigraph(rng, n2, rng.randint(0, n2))
    assert cw(disjoint_union(a, b)) == max(cw(a), cw(b))


def _check_model(h, g, model, strong):
    phi = model.phi
    assert len(set(phi.values())) == h.n
    used = {}
    branch = set(phi.values())
    count = {}
    for (a, b), p in model.psi:
        count[(a, b)] = count.get((a, b), 0) + 1
        assert {p[0], p[-1]} == {phi[a], phi[b]}
        for x, y in zip(p, p[1:]):
            key = (min(x, y), max(x, y))
            used[key] = used.get(key, 0) + 1
            assert used[key] <= g.mult.get(key, 0)
        if strong:
            assert not branch.intersection(p[1:-1])
    assert count == dict(h.mult)


def test_immersion_examples():
    c5 = cycle(5)
    model = is_immersion(path(3), c5)
    _check_model(path(3), c5, model, False)
    model = is_immersion(cycle(3), c5, strong=True)
    _check_model(cycle(3), c5, model, True)
    assert is_immersion(complete(4), c5) is None
    with pytest.raises(TooLarge):
        is_immersion(path(2), path(9))


def test_one_step_reductions_generate_immersion_order():
    # closure under one-step reductions equals the immersion relation, on every
    # multigraph with <= 4 vertices and multiplicity <= 2 and every simple one on 5
    pool = [g for n in range(5) for g in all_multigraphs(n, 2)]
    pool += all_multigraphs(5, 1)
    for g in pool:
        closure = {canonical_code(g)}
        stack = [g]
        while stack:
            x = stack.pop()
            for _, h in one_step_reductions(x):
                code = canonical_code(h)
                if code not in closure:
                    closure.add(code)
                    stack.append(h)
        for h in pool:
            if h.n > g.n or h.num_edges > g.num_edges:
                continue
            assert (canonical_code(h) in closure) == immersion_leq(h, g)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.randoms())
def test_cutwidth_monotone_under_immersion(n, rnd):
    rng = random.Random(rnd.random())
    g = random_multigraph(rng, n, rng.randint(0, n), max_mult=2)
    h = g
    for _ in range(rng.randint(1, 4)):
        steps = list(one_step_reductions(h))
        if not steps:
            break
        h = rng.choice(steps)[1]
    assert immersion_leq(h, g)
    assert cw(h) <= cw(g)
    assert dcw(h, 1)[0] <= dcw(g, 1)[0]


def test_obstruction_examples():
    # K3 is not a 1-obstruction: lifting at a vertex leaves a doubled edge of cutwidth 2
    assert cw(complete(3)) == 2
    assert not is_obstruction(complete(3), 1)
    assert is_obstruction(build(2, [(0, 1, 2)]), 1)
    assert is_obstruction(star(3), 1)
    assert not is_obstruction(path(3), 0)
    assert is_obstruction(path(2), 0)
    for k in range(3):
        assert not is_obstruction(empty(3), k)


def test_obstruction_certificate_checks_out():
    g = star(3)
    cert = obstruction_certificate(g, 1)
    assert width(g, cert["ordering"]) == 2
    steps = list(one_step_reductions(g))
    assert len(cert["reductions"]) == len(steps)
    for (step, h), rec in zip(steps, cert["reductions"]):
        assert list(step) == rec["step"] and width(h, rec["ordering"]) <= 1
    assert obstruction_certificate(complete(3), 1) is None


def test_dcw_examples():
    assert dcw(path(4), 1) == (0, [])
    d, removed = dcw(complete(3), 1)
    assert d == 1 and len(removed) == 1
    assert dcw(disjoint_union(complete(3), complete(3)), 1)[0] == 2


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 1), st.randoms())
def test_dcw_additive(n1, n2, k, rnd):
    rng = random.Random(rnd.random())
    a = random_multigraph(rng, n1, rng.randint(0, n1))
    b = random_multigraph(rng, n2, rng.randint(0, n2))
    assert dcw(disjoint_union(a, b), k)[0] == dcw(a, k)[0] + dcw(b, k)[0]
