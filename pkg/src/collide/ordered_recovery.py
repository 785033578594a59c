"""Ordering recovery from a fully time-ordered collision history."""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    CollisionEvent,
    InvalidHistory,
    NotConnected,
    Ordering,
    OrderedHistory,
    OrderingTimeline,
    canonicalize_ordering,
    is_connected,
    underlying_graph,
)


@dataclass(frozen=True)
class ComponentOrdering:
    """End-position of every connected component, each in canonical orientation."""

    sequences: tuple[Ordering, ...]

    def component_of(self, v: int) -> Ordering:
        for seq in self.sequences:
            if v in seq:
                return seq
        raise KeyError(v)


@dataclass(frozen=True)
class SwapRecord:
    """The relabelled endpoint pair for each event, in event order."""

    entries: tuple[tuple[int, tuple[int, int]], ...]


class _Block:
    """A contiguous run of objects addressed by integer coordinates.

    Coordinates may be negative so that the run can grow at either end without
    shifting existing members.
    """

    __slots__ = ("cells", "lo", "hi")

    def __init__(self, v: int, coord: dict[int, int]):
        self.cells = {0: v}
        self.lo = self.hi = 0
        coord[v] = 0

    def __len__(self):
        return self.hi - self.lo + 1

    def members(self) -> list[int]:
        return [self.cells[c] for c in range(self.lo, self.hi + 1)]


def _end_blocks(h: OrderedHistory) -> tuple[list[_Block], dict[int, _Block]]:
    coord: dict[int, int] = {}
    owner: dict[int, _Block] = {}
    blocks = []
    for v in range(h.n):
        b = _Block(v, coord)
        owner[v] = b
        blocks.append(b)

    for k, e in enumerate(h.events, start=1):
        u, v = e.u, e.v
        bu, bv = owner[u], owner[v]
        if bu is bv:
            cu, cv = coord[u], coord[v]
            if abs(cu - cv) != 1:
                raise InvalidHistory(f"event {k}: {u} and {v} collide but are not adjacent")
            bu.cells[cu], bu.cells[cv] = v, u
            coord[u], coord[v] = cv, cu
            continue

        # Different blocks: both endpoints must sit at an end of their block.
        for x, b in ((u, bu), (v, bv)):
            if coord[x] not in (b.lo, b.hi):
                raise InvalidHistory(f"event {k}: {x} is interior to its component")
        big, small, xb, xs = (bu, bv, u, v) if len(bu) >= len(bv) else (bv, bu, v, u)
        at_hi = coord[xb] == big.hi
        # Order the small block so that xs comes first next to xb.
        seq = small.members()
        if seq[0] != xs:
            seq.reverse()
        if at_hi:
            for offset, w in enumerate(seq, start=1):
                c = big.hi + offset
                big.cells[c] = w
                coord[w] = c
            big.hi += len(seq)
        else:
            for offset, w in enumerate(seq, start=1):
                c = big.lo - offset
                big.cells[c] = w
                coord[w] = c
            big.lo -= len(seq)
        for w in seq:
            owner[w] = big
        blocks.remove(small)
        cb, cs = coord[xb], coord[xs]
        big.cells[cb], big.cells[cs] = xs, xb
        coord[xb], coord[xs] = cs, cb
    return blocks, owner


def recover_end_position(h: OrderedHistory) -> ComponentOrdering:
    """Unique (up to reversal) end ordering of each connected component.

    Objects that never collide form singleton components.
    """
    blocks, _ = _end_blocks(h)
    seqs = [canonicalize_ordering(b.members()) for b in blocks]
    seqs.sort(key=min)
    return ComponentOrdering(tuple(seqs))


def _swap_adjacent(p: list[int], pos: dict[int, int], a: int, b: int, k: int) -> None:
    i, j = pos[a], pos[b]
    if abs(i - j) != 1:
        raise InvalidHistory(f"event {k}: {a} and {b} are not adjacent in p_{k}")
    p[i], p[j] = b, a
    pos[a], pos[b] = j, i


def recover_timeline(h: OrderedHistory) -> OrderingTimeline:
    """Every intermediate ordering p_0..p_m, by undoing events from the end-position."""
    if not is_connected(underlying_graph(h)):
        raise NotConnected("history does not connect all objects; orderings are not unique")
    (end,) = recover_end_position(h).sequences
    p = list(end)
    pos = {v: i for i, v in enumerate(p)}
    out = [tuple(p)]
    for k in range(len(h.events), 0, -1):
        e = h.events[k - 1]
        _swap_adjacent(p, pos, e.u, e.v, k)
        out.append(tuple(p))
    out.reverse()
    return OrderingTimeline(tuple(out)).canonical()


def swap_transform(h: OrderedHistory) -> tuple[OrderedHistory, SwapRecord]:
    """Relabel so that every collision becomes a touch instead of a crossing.

    After event ``e_k = (u, v)`` is processed, ``u`` and ``v`` are exchanged in
    every later event.
    """
    label = list(range(h.n))
    events = []
    entries = []
    for k, e in enumerate(h.events, start=1):
        a, b = label[e.u], label[e.v]
        events.append(CollisionEvent(a, b, e.time))
        entries.append((k, (a, b)))
        # Later occurrences of object x get label[x]; exchange a and b there.
        for x in range(h.n):
            if label[x] == a:
                label[x] = b
            elif label[x] == b:
                label[x] = a
    return OrderedHistory(h.n, tuple(events)), SwapRecord(tuple(entries))


def _path_order(n: int, edges) -> list[int]:
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    if n == 1:
        return [0]
    ends = sorted(v for v in range(n) if len(adj[v]) == 1)
    if len(edges) != n - 1 or len(ends) != 2 or any(len(a) > 2 for a in adj.values()):
        raise InvalidHistory("swapped history is not a path")
    order = [ends[0]]
    prev = None
    while len(order) < n:
        cur = order[-1]
        (nxt,) = adj[cur] - {prev} if prev is not None else adj[cur]
        prev = cur
        order.append(nxt)
    return order


def recover_timeline_by_swapping(h: OrderedHistory) -> OrderingTimeline:
    """Same output as :func:`recover_timeline`, built from the swapped history.

    The swapped curves never cross, so the path they form is the ordering at
    every time.  The original orderings are then rebuilt from the end by
    undoing the recorded swaps.
    """
    if not is_connected(underlying_graph(h)):
        raise NotConnected("history does not connect all objects; orderings are not unique")
    transformed, record = swap_transform(h)
    path = _path_order(h.n, underlying_graph(transformed).edges)
    slot = {c: i for i, c in enumerate(path)}

    # Object occupying each path slot at the end of the history.
    label = list(range(h.n))
    for _, (a, b) in record.entries:
        for x in range(h.n):
            if label[x] == a:
                label[x] = b
            elif label[x] == b:
                label[x] = a
    p: list[int] = [0] * h.n
    for x in range(h.n):
        p[slot[label[x]]] = x

    out = [tuple(p)]
    for _, (a, b) in reversed(record.entries):
        i, j = slot[a], slot[b]
        if abs(i - j) != 1:
            raise InvalidHistory("swap record touches non-neighbouring path slots")
        p[i], p[j] = p[j], p[i]
        out.append(tuple(p))
    out.reverse()
    return OrderingTimeline(tuple(out)).canonical()
