"""Completing graphs with missing collisions.

Two pieces live here.  The interleaving solver merges two interval-annotated
sequences sharing a first element so that the longest interval is as short
as possible.  The exhaustive oracles for bandwidth and completion degree are
only usable on tiny graphs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import CollisionGraph, InstanceTooLarge
from .funcgraph import recognize_function_graph

Interval = tuple[int, int]

MAX_INTERLEAVE = 14
MAX_BANDWIDTH = 10
MAX_BF = 6


@dataclass(frozen=True)
class InterleavingInstance:
    """Sequences ``x_0..x_k`` and ``y_0..y_l`` with ``x_0 = y_0``, and interval sets on each."""

    k: int
    l: int
    intervals_x: tuple[Interval, ...] = ()
    intervals_y: tuple[Interval, ...] = ()

    def __post_init__(self):
        ix = tuple((int(i), int(j)) for i, j in self.intervals_x)
        iy = tuple((int(i), int(j)) for i, j in self.intervals_y)
        object.__setattr__(self, "intervals_x", ix)
        object.__setattr__(self, "intervals_y", iy)
        if self.k < 0 or self.l < 0:
            raise ValueError("sequence lengths must be non-negative")
        for name, ivs, top in (("x", ix, self.k), ("y", iy, self.l)):
            for i, j in ivs:
                if not 0 <= i <= j <= top:
                    raise ValueError(f"interval ({i}, {j}) on {name} out of range [0, {top}]")

    def swapped(self) -> "InterleavingInstance":
        return InterleavingInstance(self.l, self.k, self.intervals_y, self.intervals_x)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "ix": [list(iv) for iv in self.intervals_x],
            "iy": [list(iv) for iv in self.intervals_y],
        }

    @classmethod
    def from_json(cls, data: dict) -> "InterleavingInstance":
        return cls(int(data["k"]), int(data["l"]), tuple(data["ix"]), tuple(data["iy"]))

    @classmethod
    def load(cls, path: str | Path) -> "InterleavingInstance":
        return cls.from_json(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class InterleavingSolution:
    positions: tuple[int, ...]  # p_{x_i|Y} for i = 1..k
    achieved: int


@dataclass(frozen=True)
class BandwidthResult:
    value: int
    witness: tuple[int, ...]  # witness[v] = position of vertex v


def merged_length(
    instance: InterleavingInstance, positions: Sequence[int], interval: Interval, which: str
) -> int:
    """Number of merged elements spanned by an interval of X (``which="x"``) or Y."""
    i, j = interval
    p = (0, *positions)
    if which == "x":
        return (j - i + 1) + (p[j] - p[i])
    if which == "y":
        return (j - i + 1) + sum(1 for q in positions if i <= q <= j - 1)
    raise ValueError("which must be 'x' or 'y'")


def max_merged_length(instance: InterleavingInstance, positions: Sequence[int]) -> int:
    lengths = [merged_length(instance, positions, iv, "x") for iv in instance.intervals_x]
    lengths += [merged_length(instance, positions, iv, "y") for iv in instance.intervals_y]
    return max(lengths, default=0)


def _forward(instance: InterleavingInstance, lower: list[int], b: int) -> list[int] | None:
    """Smallest non-decreasing placement above ``lower`` that keeps every Y interval within ``b``."""
    slack = [(a, c, b - (c - a + 1)) for a, c in instance.intervals_y if c > a]
    placed: list[int] = []
    prev = 0
    for i in range(instance.k):
        q = max(prev, lower[i])
        while q <= instance.l:
            # x_i at q lands strictly inside [y_a, y_c] when a <= q < c.
            clash = [
                c for a, c, room in slack
                if a <= q < c and sum(1 for r in placed if a <= r < c) + 1 > room
            ]
            if not clash:
                break
            q = min(clash)
        if q > instance.l:
            return None
        placed.append(q)
        prev = q
    return placed


def feasible(instance: InterleavingInstance, b: int) -> tuple[bool, tuple[int, ...] | None]:
    """Decide whether some interleaving keeps every interval at most ``b`` long.

    Forward passes place each x as early as the Y intervals allow; backward
    passes raise the lower bound of x_i whenever an X interval ``[x_i, x_j]``
    is too long.  Lower bounds only grow, so the alternation reaches a fixed
    point or pushes some x past ``y_l``.
    """
    if b < 1:
        raise ValueError("b must be at least 1")
    for i, j in (*instance.intervals_x, *instance.intervals_y):
        if j - i + 1 > b:
            return False, None
    k, l = instance.k, instance.l
    lower = [0] * k
    budget = k * (l + 1) + 1
    for _ in range(budget):
        p = _forward(instance, lower, b)
        if p is None:
            return False, None
        full = [0, *p]
        raised = False
        for i, j in sorted(instance.intervals_x, key=lambda iv: (-iv[1], -iv[0])):
            need = full[j] - (b - (j - i + 1))
            if need > full[i]:
                if i == 0:
                    return False, None  # x_0 is pinned to y_0
                full[i] = need
                raised = True
        if not raised:
            witness = tuple(p)
            assert max_merged_length(instance, witness) <= b
            return True, witness
        lower = [max(lo, q) for lo, q in zip(lower, full[1:])]
        if max(lower) > l:
            return False, None
    raise RuntimeError(f"no fixed point after {budget} alternations; please report this instance")


def solve_interleaving(instance: InterleavingInstance) -> InterleavingSolution:
    """Optimal interleaving by binary search over the bound."""
    if not instance.intervals_x and not instance.intervals_y:
        return InterleavingSolution((0,) * instance.k, 0)
    lo = max(j - i + 1 for i, j in (*instance.intervals_x, *instance.intervals_y))
    hi = instance.k + instance.l + 1
    ok, best = feasible(instance, hi)
    assert ok
    while lo < hi:
        mid = (lo + hi) // 2
        ok, witness = feasible(instance, mid)
        if ok:
            hi, best = mid, witness
        else:
            lo = mid + 1
    return InterleavingSolution(best, hi)


def brute_force_interleaving(instance: InterleavingInstance) -> InterleavingSolution:
    """Try every order-preserving merge; ties go to the lexicographically first placement."""
    k, l = instance.k, instance.l
    if k + l > MAX_INTERLEAVE:
        raise InstanceTooLarge(f"k + l = {k + l} exceeds {MAX_INTERLEAVE}")
    if k == 0:
        return InterleavingSolution((), max_merged_length(instance, ()))
    cands = np.array(list(combinations_with_replacement(range(l + 1), k)), dtype=np.int64)
    assert len(cands) == comb(k + l, k)
    full = np.hstack([np.zeros((len(cands), 1), dtype=np.int64), cands])
    worst = np.zeros(len(cands), dtype=np.int64)
    for i, j in instance.intervals_x:
        worst = np.maximum(worst, (j - i + 1) + full[:, j] - full[:, i])
    for a, c in instance.intervals_y:
        inside = ((cands >= a) & (cands < c)).sum(axis=1)
        worst = np.maximum(worst, (c - a + 1) + inside)
    best = int(np.argmin(worst))
    return InterleavingSolution(tuple(int(q) for q in cands[best]), int(worst[best]))


# --- bandwidth and completion degree ---------------------------------------------


def bandwidth_bruteforce(g: CollisionGraph) -> BandwidthResult:
    """Exact bandwidth by exhaustive layout search with pruning.

    Layouts are built left to right.  A partial layout is dropped as soon as a
    placed vertex has an unplaced neighbour that can no longer land within
    the candidate bound.
    """
    n = g.n
    if n > MAX_BANDWIDTH:
        raise InstanceTooLarge(f"n = {n} exceeds {MAX_BANDWIDTH}")
    if not g.edges:
        return BandwidthResult(0, tuple(range(n)))
    adj = g.adj

    def search(b: int) -> list[int] | None:
        order: list[int] = []
        pos: dict[int, int] = {}

        def place() -> bool:
            t = len(order)
            if t == n:
                return True  # every neighbour check already passed on placement
            # A vertex at t - b - 1 must have all its neighbours placed by now.
            if t - b - 1 >= 0 and any(u not in pos for u in adj[order[t - b - 1]]):
                return False
            for v in range(n):
                if v in pos:
                    continue
                if any(t - pos[u] > b for u in adj[v] if u in pos):
                    continue
                order.append(v)
                pos[v] = t
                if place():
                    return True
                order.pop()
                del pos[v]
            return False

        return order if place() else None

    lower = max(1, (g.max_degree() + 1) // 2)
    for b in range(lower, n):
        order = search(b)
        if order is not None:
            witness = [0] * n
            for t, v in enumerate(order):
                witness[v] = t
            return BandwidthResult(b, tuple(witness))
    raise AssertionError("unreachable: every layout has bandwidth at most n - 1")


def layout_stretch(g: CollisionGraph, witness: Sequence[int]) -> int:
    return max((abs(witness[u] - witness[v]) for u, v in g.edges), default=0)


def bf_completion(g: CollisionGraph) -> tuple[int, CollisionGraph]:
    """Lowest maximum degree over function-graph supergraphs, with one such supergraph."""
    n = g.n
    if n > MAX_BF:
        raise InstanceTooLarge(f"n = {n} exceeds {MAX_BF}")
    missing = [(u, v) for u in range(n) for v in range(u + 1, n) if not g.has_edge(u, v)]
    base = [g.degree(v) for v in range(n)]

    def search(cap: int):
        deg = list(base)
        chosen: list[tuple[int, int]] = []

        def step(idx: int):
            if idx == len(missing):
                h = CollisionGraph(n, g.edges | frozenset(chosen))
                return h if recognize_function_graph(h)[0] else None
            u, v = missing[idx]
            if deg[u] < cap and deg[v] < cap:
                deg[u] += 1
                deg[v] += 1
                chosen.append((u, v))
                found = step(idx + 1)
                chosen.pop()
                deg[u] -= 1
                deg[v] -= 1
                if found is not None:
                    return found
            return step(idx + 1)

        return step(0)

    for cap in range(g.max_degree(), max(n - 1, 0) + 1):
        h = search(cap)
        if h is not None:
            return cap, h
    raise AssertionError("unreachable: the complete graph is a function graph")


def bf_bruteforce(g: CollisionGraph) -> int:
    return bf_completion(g)[0]


def check_sandwich(g: CollisionGraph) -> bool:
    """Whether ``B(G)/2 <= B_f(G) <= 2 B(G)`` holds for ``g``."""
    if g.n > MAX_BF:
        raise InstanceTooLarge(f"n = {g.n} exceeds {MAX_BF}")
    b = bandwidth_bruteforce(g).value
    bf = bf_bruteforce(g)
    return b <= 2 * bf and bf <= 2 * b


def random_instance(rng: np.random.Generator, max_total: int = 12, max_intervals: int = 4) -> InterleavingInstance:
    """Random instance with ``k + l <= max_total`` and up to ``max_intervals`` per side."""
    total = int(rng.integers(0, max_total + 1))
    k = int(rng.integers(0, total + 1))
    l = total - k

    def draw(top: int) -> list[Interval]:
        out = []
        for _ in range(int(rng.integers(0, max_intervals + 1))):
            i, j = sorted(int(x) for x in rng.integers(0, top + 1, size=2))
            out.append((i, j))
        return out

    return InterleavingInstance(k, l, tuple(draw(k)), tuple(draw(l)))


def instances(seed: int, count: int, **kw) -> Iterable[InterleavingInstance]:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield random_instance(rng, **kw)
