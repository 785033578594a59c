"""Shared value types, graph primitives and serialization.

Objects are dense integer ids ``0..n-1``.  Orderings are tuples read
bottom-to-top along the line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

Ordering = tuple[int, ...]
Edge = tuple[int, int]


class CollideError(Exception):
    """Base class for all errors raised by this package."""


class InvalidHistory(CollideError):
    """No trajectory realization is consistent with the history."""


class NotConnected(CollideError):
    """The collision graph has more than one component, so orderings are not unique."""


class NotFunctionGraph(CollideError):
    """The graph's complement has no transitive orientation."""


class InstanceTooLarge(CollideError):
    """Input exceeds the size bound of an exhaustive routine."""


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class CollisionEvent:
    u: int
    v: int
    time: float

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError(f"self-collision of object {self.u}")

    @property
    def pair(self) -> Edge:
        return _edge(self.u, self.v)


@dataclass(frozen=True)
class OrderedHistory:
    n: int
    events: tuple[CollisionEvent, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        if self.n < 0:
            raise ValueError("negative object count")
        last = float("-inf")
        for e in self.events:
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise ValueError(f"event {e} references an id outside [0, {self.n})")
            if e.time <= last:
                raise ValueError("event times must be strictly increasing")
            last = e.time

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Sequence[int]]) -> "OrderedHistory":
        """Build a history with evenly spaced synthetic times."""
        pairs = list(pairs)
        m = len(pairs)
        events = [CollisionEvent(u, v, (k + 1) / (m + 1)) for k, (u, v) in enumerate(pairs)]
        return cls(n, tuple(events))

    @property
    def pairs(self) -> list[Edge]:
        return [(e.u, e.v) for e in self.events]

    def __len__(self):
        return len(self.events)


@dataclass(frozen=True)
class CollisionGraph:
    n: int
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        normalized = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) outside [0, {self.n})")
            normalized.add(_edge(u, v))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "CollisionGraph":
        return cls(n, frozenset((u, v) for u, v in edges))

    @cached_property
    def adj(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def complement(self) -> "CollisionGraph":
        return CollisionGraph(
            self.n,
            frozenset(
                (u, v)
                for u in range(self.n)
                for v in range(u + 1, self.n)
                if v not in self.adj[u]
            ),
        )

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(vs[j] in self.adj[vs[i]] for i in range(len(vs)) for j in range(i + 1, len(vs)))

    def components(self, within: Iterable[int] | None = None) -> list[frozenset[int]]:
        """Connected components of the induced subgraph, ordered by smallest member."""
        allowed = set(self.vertices if within is None else within)
        seen: set[int] = set()
        comps = []
        for start in sorted(allowed):
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in self.adj[x]:
                    if y in allowed and y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def induced(self, vertices: Iterable[int]) -> tuple["CollisionGraph", list[int]]:
        """Induced subgraph relabelled to ``0..k-1``; also returns new-to-old ids."""
        old = sorted(set(vertices))
        index = {v: i for i, v in enumerate(old)}
        edges = frozenset(
            (index[u], index[v]) for u, v in self.edges if u in index and v in index
        )
        return CollisionGraph(len(old), edges), old

    def relabel(self, mapping: Sequence[int], n: int) -> "CollisionGraph":
        return CollisionGraph(n, frozenset(_edge(mapping[u], mapping[v]) for u, v in self.edges))


def canonicalize_ordering(seq: Sequence[int]) -> Ordering:
    """Return the lexicographically smaller of ``seq`` and its reversal."""
    seq = tuple(seq)
    rev = seq[::-1]
    return min(seq, rev)


def underlying_graph(h: OrderedHistory) -> CollisionGraph:
    return CollisionGraph(h.n, frozenset(e.pair for e in h.events))


def is_connected(g: CollisionGraph) -> bool:
    if g.n < 1:
        raise ValueError("connectivity is undefined for an empty vertex set")
    return len(g.components()) == 1


@dataclass(frozen=True)
class OrderingTimeline:
    orderings: tuple[Ordering, ...]

    def __post_init__(self):
        object.__setattr__(self, "orderings", tuple(tuple(p) for p in self.orderings))

    def __len__(self):
        return len(self.orderings)

    def __getitem__(self, k: int) -> Ordering:
        return self.orderings[k]

    def reversed(self) -> "OrderingTimeline":
        return OrderingTimeline(tuple(p[::-1] for p in self.orderings))

    def canonical(self) -> "OrderingTimeline":
        """Orient every ordering so that the final one is in canonical form."""
        if not self.orderings:
            return self
        last = self.orderings[-1]
        return self if canonicalize_ordering(last) == last else self.reversed()

    def equals_up_to_reversal(self, other: "OrderingTimeline") -> bool:
        return self.canonical().orderings == other.canonical().orderings

    def check_against(self, h: OrderedHistory) -> None:
        """Raise ``ValueError`` unless each step is the adjacent swap of the matching event."""
        if len(self.orderings) != len(h.events) + 1:
            raise ValueError("timeline length must be one more than the event count")
        for k, e in enumerate(h.events, start=1):
            prev, cur = self.orderings[k - 1], self.orderings[k]
            i = prev.index(e.u)
            j = prev.index(e.v)
            if abs(i - j) != 1:
                raise ValueError(f"event {k} endpoints not adjacent in p_{k - 1}")
            expected = list(prev)
            expected[i], expected[j] = expected[j], expected[i]
            if tuple(expected) != cur:
                raise ValueError(f"p_{k} is not p_{k - 1} with event {k} swapped")


@dataclass(frozen=True)
class DominanceRelation:
    """Strict order: ``(u, v)`` in ``pairs`` means u stays above v for all time."""

    n: int
    pairs: frozenset[Edge]

    def above(self, v: int) -> set[int]:
        return {a for a, b in self.pairs if b == v}

    def is_strict_partial_order(self) -> bool:
        for a, b in self.pairs:
            if a == b or (b, a) in self.pairs:
                return False
        succ: dict[int, set[int]] = {}
        for a, b in self.pairs:
            succ.setdefault(a, set()).add(b)
        for a, bs in succ.items():
            for b in bs:
                if not succ.get(b, set()) <= bs:
                    return False
        return True


def _canonical_layers(layers: Sequence[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    fwd = tuple(tuple(sorted(layer)) for layer in layers)
    return min(fwd, fwd[::-1])


@dataclass(frozen=True)
class LayerDecomposition:
    layers: tuple[frozenset[int], ...]
    stage_universals: tuple[frozenset[int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(frozenset(x) for x in self.layers))
        object.__setattr__(
            self, "stage_universals", tuple(frozenset(x) for x in self.stage_universals)
        )

    def __len__(self):
        return len(self.layers)

    def canonical(self) -> tuple[tuple[int, ...], ...]:
        return _canonical_layers(self.layers)

    def same_up_to_reversal(self, other: "LayerDecomposition") -> bool:
        return self.canonical() == other.canonical()

    def layer_of(self) -> dict[int, int]:
        return {v: i for i, layer in enumerate(self.layers) for v in layer}

    def vertices(self) -> frozenset[int]:
        return frozenset().union(*self.layers) if self.layers else frozenset()


@dataclass(frozen=True)
class ContractionResult:
    """Layers contracted to single vertices; layer indices are 1-based."""

    contraction_edges: frozenset[Edge]
    right_reach: tuple[int, ...]

    @property
    def intervals(self) -> list[tuple[int, int]]:
        """Closed intervals ``[i, i*]`` whose intersection graph is the contraction graph."""
        return [(i, r) for i, r in enumerate(self.right_reach, start=1)]


# --- serialization -----------------------------------------------------------


def history_to_json(h: OrderedHistory) -> dict:
    return {"n": h.n, "events": [{"u": e.u, "v": e.v, "t": e.time} for e in h.events]}


def history_from_json(data: dict) -> OrderedHistory:
    events = [CollisionEvent(int(e["u"]), int(e["v"]), float(e["t"])) for e in data["events"]]
    return OrderedHistory(int(data["n"]), tuple(events))


def graph_to_json(g: CollisionGraph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in sorted(g.edges)]}


def graph_from_json(data: dict) -> CollisionGraph:
    return CollisionGraph.from_edges(int(data["n"]), data["edges"])


def graph_to_edgelist(g: CollisionGraph) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def graph_from_edgelist(text: str) -> CollisionGraph:
    n = None
    edges = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            n = int(parts[1])
            continue
        if n is None:
            raise ValueError("edge list must start with an 'n <count>' header")
        edges.append((int(parts[0]), int(parts[1])))
    if n is None:
        raise ValueError("missing 'n <count>' header")
    return CollisionGraph.from_edges(n, edges)


def load_graph(path: str | Path) -> CollisionGraph:
    """Read a graph from JSON, or from the edge-list text format otherwise."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return graph_from_json(json.loads(text))
    return graph_from_edgelist(text)


def load_history(path: str | Path) -> OrderedHistory:
    return history_from_json(json.loads(Path(path).read_text()))
