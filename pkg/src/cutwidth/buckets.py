"""Boundaried graphs, bucketings and bucket interfaces at toy scale."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .multigraph import CutwidthError, MultiGraph, TooLarge, build
from .ordering import check_permutation

CONFORM_LIMIT = 8
BUCKET_LIMIT = 24


class ArityMismatch(CutwidthError):
    pass


class BadBucketIndex(CutwidthError):
    pass


class BadIndex(CutwidthError):
    pass


@dataclass(frozen=True)
class BoundariedGraph:
    g: MultiGraph
    boundary: tuple[int, ...]

    def __post_init__(self):
        for x in self.boundary:
            if not 0 <= x < self.g.n:
                raise BadIndex(f"boundary vertex {x} not in graph")

    @property
    def arity(self) -> int:
        return len(self.boundary)


@dataclass(frozen=True)
class BucketInterface:
    """b, b' give the buckets of x_i and x_i'; mu, mu_star bound bucket widths.

    Buckets are numbered 1..l as in the bucketing; mu[j - 1] belongs to bucket j.
    """

    b: tuple[int, ...]
    b_prime: tuple[int, ...]
    mu: tuple[int, ...]
    mu_star: tuple[int, ...]


def extension(bg: BoundariedGraph) -> MultiGraph:
    """G plus one pendant vertex per boundary slot, numbered after G's vertices."""
    n = bg.g.n
    edges = [(u, v, m) for (u, v), m in bg.g.mult.items()]
    edges += [(x, n + i) for i, x in enumerate(bg.boundary)]
    return build(n + bg.arity, edges)


def join(a: BoundariedGraph, b: BoundariedGraph) -> MultiGraph:
    """Disjoint union (b shifted after a) plus an edge x_i y_i per boundary slot."""
    if a.arity != b.arity:
        raise ArityMismatch(f"arities {a.arity} and {b.arity} differ")
    na = a.g.n
    edges = [(u, v, m) for (u, v), m in a.g.mult.items()]
    edges += [(u + na, v + na, m) for (u, v), m in b.g.mult.items()]
    edges += [(x, y + na) for x, y in zip(a.boundary, b.boundary)]
    return build(na + b.g.n, edges)


# --- bucket widths -----------------------------------------------------------------


def _check_bucketing(sigma: Sequence[int], t: Mapping[int, int] | Sequence[int]) -> None:
    last = 0
    for v in sigma:
        if t[v] < 1:
            raise BadBucketIndex(f"bucket {t[v]} of vertex {v} below 1")
        if t[v] < last:
            raise BadBucketIndex("bucketing is not monotone along the ordering")
        last = t[v]


def _prefix_cuts(g: MultiGraph, sigma: Sequence[int]) -> list[int]:
    """cut[j] = number of edges leaving the first j vertices of sigma, j = 0..n."""
    pos = {v: i for i, v in enumerate(sigma)}
    cuts = [0]
    c = 0
    for i, v in enumerate(sigma):
        for w, m in g.adj[v].items():
            c += m if pos[w] > i else -m
        cuts.append(c)
    return cuts


def _bucket_span(sigma, t, i) -> tuple[int, int]:
    """[start, end) positions of bucket i in sigma."""
    start = sum(1 for v in sigma if t[v] < i)
    end = start + sum(1 for v in sigma if t[v] == i)
    return start, end


def bucket_width(
    g: MultiGraph, sigma: Sequence[int], t: Mapping[int, int] | Sequence[int], i: int
) -> int:
    """Largest cut with all earlier buckets plus a sigma-prefix of bucket i on the left."""
    check_permutation(g, sigma)
    _check_bucketing(sigma, t)
    if i < 1:
        raise BadBucketIndex(f"bucket index {i} below 1")
    cuts = _prefix_cuts(g, sigma)
    start, end = _bucket_span(sigma, t, i)
    return max(cuts[start : end + 1])


def segment_width(
    g: MultiGraph,
    sigma: Sequence[int],
    t: Mapping[int, int] | Sequence[int],
    markers,
    i: int,
    j: int,
) -> int:
    """Width of the j-th segment of bucket i, the segments being cut out by the
    marker vertices of the bucket: the cuts whose bucket-prefix holds exactly the
    first j markers."""
    check_permutation(g, sigma)
    _check_bucketing(sigma, t)
    if i < 1:
        raise BadBucketIndex(f"bucket index {i} below 1")
    markers = set(markers)
    cuts = _prefix_cuts(g, sigma)
    start, end = _bucket_span(sigma, t, i)
    at = [p for p in range(start, end) if sigma[p] in markers]
    if not 0 <= j <= len(at):
        raise BadIndex(f"segment {j} outside 0..{len(at)}")
    lo = start if j == 0 else at[j - 1] + 1
    hi = end if j == len(at) else at[j]
    return max(cuts[lo : hi + 1])


def split_join(a: BoundariedGraph, b: BoundariedGraph, sigma: Sequence[int], t: Sequence[int]):
    """Restrict an ordering and bucketing of a join to A and to B*.

    Returns (sigma_a, t_a, sigma_bstar, t_bstar) on A's and B*'s own vertex
    numbering; the pendant y_i' of B* takes the place and bucket of x_i.
    """
    na = a.g.n
    pos = {v: p for p, v in enumerate(sigma)}
    sigma_a = [v for v in sigma if v < na]
    t_a = [t[v] for v in range(na)]
    nb = b.g.n
    items = [(pos[v], v - na) for v in sigma if v >= na]
    items += [(pos[x], nb + i) for i, x in enumerate(a.boundary)]
    items.sort()
    sigma_b = [v for _, v in items]
    t_b = [t[v + na] for v in range(nb)] + [t[x] for x in a.boundary]
    return sigma_a, t_a, sigma_b, t_b


# --- interfaces --------------------------------------------------------------------


def _widths(g: MultiGraph, sigma, t, ell) -> tuple[int, ...]:
    cuts = _prefix_cuts(g, sigma)
    out = []
    start = 0
    for i in range(1, ell + 1):
        end = start
        while end < len(sigma) and t[sigma[end]] == i:
            end += 1
        out.append(max(cuts[start : end + 1]))
        start = end
    return tuple(out)


def _bucketings(sigma, parity, ell):
    """Monotone labels 1..ell along sigma with the parity each vertex demands."""
    labels = [0] * len(sigma)

    def rec(p, low):
        if p == len(sigma):
            yield labels
            return
        want = parity[sigma[p]]
        first = low if low % 2 == want else low + 1
        for lab in range(first, ell + 1, 2):
            labels[p] = lab
            yield from rec(p + 1, lab)

    yield from rec(0, 1)


def _check_scale(bg: BoundariedGraph, ell: int) -> None:
    if bg.g.n + bg.arity > CONFORM_LIMIT:
        raise TooLarge(f"extension has more than {CONFORM_LIMIT} vertices")
    if ell > BUCKET_LIMIT:
        raise TooLarge(f"more than {BUCKET_LIMIT} buckets")


def _realisations(bg: BoundariedGraph, ell: int):
    """Yield (b, b', widths in G, widths in G*) for every ordering and bucketing of G*."""
    gstar = extension(bg)
    n = bg.g.n
    k = bg.arity
    parity = [1] * n + [0] * k
    for sigma in itertools.permutations(range(n + k)):
        inner = [v for v in sigma if v < n]
        for labels in _bucketings(sigma, parity, ell):
            t = [0] * (n + k)
            for v, lab in zip(sigma, labels):
                t[v] = lab
            b = tuple(t[x] for x in bg.boundary)
            bp = tuple(t[n + i] for i in range(k))
            yield b, bp, _widths(bg.g, inner, t, ell), _widths(gstar, sigma, t, ell)


def conforms_interface(bg: BoundariedGraph, iface: BucketInterface, ell: int) -> bool:
    """Exhaustive search for an ordering and bucketing of G* meeting the interface."""
    _check_scale(bg, ell)
    if len(iface.b) != bg.arity or len(iface.b_prime) != bg.arity:
        raise ArityMismatch("interface arity differs from the boundary")
    if len(iface.mu) != ell or len(iface.mu_star) != ell:
        raise BadIndex("interface widths must cover every bucket")
    for b, bp, mu, mu_star in _realisations(bg, ell):
        if b != iface.b or bp != iface.b_prime:
            continue
        if all(x <= y for x, y in zip(mu, iface.mu)) and all(
            x <= y for x, y in zip(mu_star, iface.mu_star)
        ):
            return True
    return False


@lru_cache(maxsize=4096)
def achievable(bg: BoundariedGraph, ell: int, cap: int) -> frozenset:
    """Minimal (b, b', mu, mu*) realised by G* with every width at most cap.

    An interface with values in [0, cap] is conformed with exactly when it lies
    pointwise above one of these tuples.
    """
    _check_scale(bg, ell)
    best: dict[tuple, list] = {}
    for b, bp, mu, mu_star in _realisations(bg, ell):
        vec = mu + mu_star
        if max(vec, default=0) > cap:
            continue
        group = best.setdefault((b, bp), [])
        if any(all(x <= y for x, y in zip(o, vec)) for o in group):
            continue
        group[:] = [o for o in group if not all(x <= y for x, y in zip(vec, o))]
        group.append(vec)
    return frozenset(
        (b, bp, vec[:ell], vec[ell:]) for (b, bp), group in best.items() for vec in group
    )


def conformed_interfaces(bg: BoundariedGraph, ell: int, cap: int):
    """Every (k, l)-bucket interface with values in [0, cap] that bg conforms with."""
    k = bg.arity
    mins = achievable(bg, ell, cap)
    for b in itertools.product(range(1, ell + 1), repeat=k):
        for bp in itertools.product(range(1, ell + 1), repeat=k):
            lows = [(m, ms) for (bb, bbp, m, ms) in mins if bb == b and bbp == bp]
            if not lows:
                continue
            for mu in itertools.product(range(cap + 1), repeat=ell):
                for mu_star in itertools.product(range(cap + 1), repeat=ell):
                    if any(
                        all(x <= y for x, y in zip(m, mu)) and all(x <= y for x, y in zip(ms, mu_star))
                        for m, ms in lows
                    ):
                        yield BucketInterface(b, bp, mu, mu_star)


def similar(a: BoundariedGraph, b: BoundariedGraph, k: int, ell: int, cap: int | None = None) -> bool:
    """Equal sets of conformed (k, l)-bucket interfaces, widths capped at cap (default k).

    Two up-closed sets are equal exactly when their minimal elements are.
    """
    if a.arity != k or b.arity != k:
        raise ArityMismatch(f"both graphs must be {k}-boundaried")
    if cap is None:
        cap = k
    return achievable(a, ell, cap) == achievable(b, ell, cap)


def interface_count_bound(k: int, ell: int) -> int:
    """2^(2(k log l + l log(k+1))) = l^(2k) * (k+1)^(2l), evaluated exactly."""
    return ell ** (2 * k) * (k + 1) ** (2 * ell)


def interface_count(k: int, ell: int, cap: int | None = None) -> int:
    """Number of (k, l)-bucket interfaces, counted by enumerating them."""
    if cap is None:
        cap = k
    maps_b = sum(1 for _ in itertools.product(range(1, ell + 1), repeat=k))
    maps_mu = sum(1 for _ in itertools.product(range(cap + 1), repeat=ell))
    return maps_b * maps_b * maps_mu * maps_mu
