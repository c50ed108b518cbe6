from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from cutwidth.multigraph import binary_tree, build, complete, disjoint_union, empty, path
from cutwidth.oracle import cw
from cutwidth.ordering import width
from cutwidth.reduce import TooWide
from cutwidth.solver import RunReport, cutwidth_decide, cutwidth_exact, verify_certificate

from graphs import random_multigraph


def test_decide_examples():
    tau = cutwidth_decide(path(100), 1)
    assert verify_certificate(path(100), tau, 1)
    assert isinstance(cutwidth_decide(complete(4), 3), TooWide)
    assert isinstance(cutwidth_decide(binary_tree(4), 1), TooWide)


def test_exact_examples():
    assert cutwidth_exact(empty(3))[0] == 0
    k, tau = cutwidth_exact(complete(4))
    assert k == 4 and verify_certificate(complete(4), tau, 4)
    g = disjoint_union(complete(3), path(5))
    k, tau = cutwidth_exact(g)
    assert k == 2 == cw(g) and verify_certificate(g, tau, 2)


def test_verify_certificate_examples():
    k4 = complete(4)
    assert verify_certificate(k4, [2, 0, 3, 1], 4)
    assert not verify_certificate(k4, [2, 0, 3, 1], 3)
    assert verify_certificate(build(1, []), [0], 0)
    assert verify_certificate(empty(0), [], 0)
    assert not verify_certificate(path(3), [0, 1], 1)


def test_report_counts():
    report = RunReport()
    cutwidth_exact(path(40), report)
    d = report.as_dict()
    assert d["k_tried"] == [0, 1]
    assert d["reductions"] >= 1 and d["compress_calls"] >= 1


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 11), st.integers(0, 12), st.randoms())
def test_exact_matches_oracle(n, extra, rnd):
    g = random_multigraph(random.Random(rnd.random()), n, extra)
    k, tau = cutwidth_exact(g)
    assert k == cw(g)
    assert verify_certificate(g, tau, k)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 9), st.randoms())
def test_decision_monotone(n, rnd):
    g = random_multigraph(random.Random(rnd.random()), n, rnd.randint(0, n))
    verdicts = [isinstance(cutwidth_decide(g, k), TooWide) for k in range(cw(g) + 2)]
    # TooWide exactly below the optimum
    assert verdicts == [True] * cw(g) + [False, False]


def test_components_are_concatenated():
    g = disjoint_union(disjoint_union(path(4), complete(4)), path(3))
    tau = cutwidth_decide(g, 4)
    assert sorted(tau) == list(range(g.n)) and width(g, tau) <= 4
