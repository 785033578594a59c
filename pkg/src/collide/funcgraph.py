"""Function-graph recognition, modules, and layer decomposition of unordered collision graphs.

A graph is a function graph exactly when its complement admits a transitive
orientation; the orientation is the "stays above" relation between objects
that never meet.  The layer decomposition peels off the undominated objects
repeatedly.  :func:`layer_decomposition` computes it from the graph alone with
bounded expansions, and :func:`layers_via_orientation` computes it from the
orientation certificate as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import (
    CollideError,
    CollisionGraph,
    ContractionResult,
    DominanceRelation,
    Edge,
    LayerDecomposition,
    NotFunctionGraph,
)


class LayerFailure(CollideError):
    """A recovered layer is not a maximal clique of the residual graph."""


class EmptyExterior(CollideError):
    """Every tried maximal clique together with its neighbours covers the graph."""


class InconsistentSides(CollideError):
    """Exterior components do not split into two sides around the clique."""


class IntervalViolation(CollideError):
    """Contracted layers do not follow the ``i <= j <= i*`` adjacency pattern."""


@dataclass(frozen=True)
class OrientationCertificate:
    """Arcs ``(u, v)`` orienting every non-edge; read ``u -> v`` as u above v."""

    arcs: frozenset[Edge]

    def reversed(self) -> "OrientationCertificate":
        return OrientationCertificate(frozenset((v, u) for u, v in self.arcs))

    def as_dominance(self, n: int) -> DominanceRelation:
        return DominanceRelation(n, self.arcs)


@dataclass(frozen=True)
class ModuleReport:
    modules: tuple[frozenset[int], ...]
    representative: dict[int, int]


@dataclass(frozen=True)
class BoundedExpansion:
    chain: tuple[frozenset[int], ...]
    unreached: frozenset[int]


# --- recognition ---------------------------------------------------------------


def is_transitive(arcs: Iterable[Edge]) -> bool:
    succ: dict[int, set[int]] = {}
    arcs = set(arcs)
    for a, b in arcs:
        if (b, a) in arcs or a == b:
            return False
        succ.setdefault(a, set()).add(b)
    return all(succ.get(b, set()) <= bs for bs in succ.values() for b in bs)


def transitive_orientation(g: CollisionGraph) -> frozenset[Edge] | None:
    """Transitive orientation of ``g`` itself, or None if it is not a comparability graph.

    Implication classes are peeled off one at a time (Golumbic's
    G-decomposition); the forcing relation is evaluated on the edges that
    remain, and a class that contains both directions of an edge proves that
    no orientation exists.
    """
    nbrs = [set(a) for a in g.adj]
    remaining = set(g.edges)
    arcs: set[Edge] = set()
    while remaining:
        a, b = min(remaining)
        cls = {(a, b)}
        stack = [(a, b)]
        while stack:
            x, y = stack.pop()
            forced = [(x, z) for z in nbrs[x] if z != y and z not in nbrs[y]]
            forced += [(z, y) for z in nbrs[y] if z != x and z not in nbrs[x]]
            for arc in forced:
                if arc not in cls:
                    cls.add(arc)
                    stack.append(arc)
        if any((y, x) in cls for x, y in cls):
            return None
        arcs |= cls
        for x, y in cls:
            remaining.discard((min(x, y), max(x, y)))
            nbrs[x].discard(y)
            nbrs[y].discard(x)
    if not is_transitive(arcs):
        return None
    return frozenset(arcs)


def recognize_function_graph(g: CollisionGraph) -> tuple[bool, OrientationCertificate | None]:
    arcs = transitive_orientation(g.complement())
    if arcs is None:
        return False, None
    return True, OrientationCertificate(arcs)


# --- modules -------------------------------------------------------------------


def _module_closure(g: CollisionGraph, seed: Iterable[int], within: frozenset[int]) -> set[int]:
    """Smallest module of ``G(within)`` containing ``seed``."""
    s = set(seed)
    grew = True
    while grew:
        grew = False
        for w in sorted(within - s):
            hits = len(g.adj[w] & s)
            if 0 < hits < len(s):
                s.add(w)
                grew = True
    return s


def _proper_module_classes(g: CollisionGraph, within: frozenset[int]) -> list[frozenset[int]]:
    """Unions of overlapping pair closures that stay proper."""
    vs = sorted(within)
    classes: list[set[int]] = []
    for i, u in enumerate(vs):
        for v in vs[i + 1:]:
            m = _module_closure(g, (u, v), within)
            if len(m) == len(within):
                continue
            for c in [c for c in classes if c & m]:
                classes.remove(c)
                m |= c
            classes.append(m)
    return sorted((frozenset(c) for c in classes), key=min)


def is_prime(g: CollisionGraph) -> bool:
    """No module other than single vertices and the whole vertex set."""
    if g.n <= 2:
        return True
    return not _proper_module_classes(g, frozenset(g.vertices))


def find_modules(g: CollisionGraph) -> ModuleReport:
    """Maximal strong modules with more than one member.

    Disconnected graphs report their components and graphs with a
    disconnected complement report the co-components.  A complete graph
    reports its whole vertex set, since every subset of a clique is a module.
    """
    everything = frozenset(g.vertices)
    if g.n >= 2 and len(g.edges) == g.n * (g.n - 1) // 2:
        mods = [everything]
    elif len(comps := g.components()) > 1:
        mods = [c for c in comps if len(c) > 1]
    elif len(co := g.complement().components()) > 1:
        mods = [c for c in co if len(c) > 1]
    else:
        mods = [c for c in _proper_module_classes(g, everything) if len(c) > 1]
    rep = {v: v for v in g.vertices}
    for m in mods:
        r = min(m)
        for v in m:
            rep[v] = r
    return ModuleReport(tuple(mods), rep)


def contract_modules(g: CollisionGraph) -> tuple[CollisionGraph, dict[int, int]]:
    """Collapse modules to their lowest-id member until the quotient is prime.

    Returns the quotient (vertices renumbered in order of their
    representatives) and a map from each original vertex to its
    representative's original id.
    """
    rep = {v: v for v in g.vertices}
    cur, ids = g, list(g.vertices)
    while True:
        report = find_modules(cur)
        if not report.modules:
            break
        keep = sorted({report.representative[v] for v in cur.vertices})
        for v in cur.vertices:
            target = ids[report.representative[v]]
            for orig, r in rep.items():
                if r == ids[v]:
                    rep[orig] = target
        cur, local = cur.induced(keep)
        ids = [ids[x] for x in local]
    return cur, rep


def universal_vertices(g: CollisionGraph, within: Iterable[int] | None = None) -> frozenset[int]:
    s = frozenset(g.vertices if within is None else within)
    return frozenset(v for v in s if s - {v} <= g.adj[v])


# --- bounded expansion ---------------------------------------------------------


def _bn(g: CollisionGraph, within: frozenset[int], s: frozenset[int]) -> frozenset[int]:
    outside = within - s
    found = set()
    for v in outside:
        inner = g.adj[v] & s
        if not inner:
            continue
        # w must be outside, distinct from v and not adjacent to v
        ws = outside - g.adj[v] - {v}
        if any(not (ws <= g.adj[u]) for u in inner):
            found.add(v)
    return frozenset(found)


def bounded_neighborhood(g: CollisionGraph, s: Iterable[int]) -> frozenset[int]:
    """Outside vertices v with some inside u and outside w such that uv is the only edge among them."""
    s = frozenset(s)
    if not s:
        raise ValueError("bounded neighbourhood needs a nonempty set")
    return _bn(g, frozenset(g.vertices), s)


def _expand(g: CollisionGraph, within: frozenset[int], seed: frozenset[int]) -> BoundedExpansion:
    if not seed:
        raise ValueError("bounded expansion needs a nonempty seed")
    chain = [seed]
    while step := _bn(g, within, chain[-1]):
        chain.append(chain[-1] | step)
    return BoundedExpansion(tuple(chain), within - chain[-1])


def bounded_expansion(g: CollisionGraph, seed: Iterable[int]) -> BoundedExpansion:
    return _expand(g, frozenset(g.vertices), frozenset(seed))


# --- lower bounds and layers ---------------------------------------------------


def _greedy_clique(g: CollisionGraph, start: int, within: Iterable[int]) -> frozenset[int]:
    clique = {start}
    for w in sorted(within):
        if w not in clique and clique <= g.adj[w]:
            clique.add(w)
    return frozenset(clique)


def maximal_cliques(g: CollisionGraph, within: Iterable[int] | None = None):
    """Bron-Kerbosch with pivoting; yields cliques in a deterministic order."""
    allowed = frozenset(g.vertices if within is None else within)

    def grow(r: frozenset[int], p: frozenset[int], x: frozenset[int]):
        if not p and not x:
            yield r
            return
        pivot = max(sorted(p | x), key=lambda u: len(g.adj[u] & p))
        for v in sorted(p - g.adj[pivot]):
            yield from grow(r | {v}, p & g.adj[v], x & g.adj[v])
            p = p - {v}
            x = x | {v}

    yield from grow(frozenset(), allowed, frozenset())


def _candidate_cliques(g: CollisionGraph):
    vs = frozenset(g.vertices)
    seen = set()
    for start in sorted(vs):
        clique = _greedy_clique(g, start, vs)
        if clique not in seen:
            seen.add(clique)
            yield clique
    for clique in maximal_cliques(g):
        if clique not in seen:
            seen.add(clique)
            yield clique


def lower_bound_sides(g: CollisionGraph) -> tuple[frozenset[int], frozenset[int]]:
    """Both sides of the first maximal clique that leaves a nonempty exterior.

    Greedy cliques grown from each vertex in id order are tried first, then
    every other maximal clique.  Each side is a lower bound for one of the two
    mirror-image orientations; the second side may be empty.
    """
    vs = frozenset(g.vertices)
    for clique in _candidate_cliques(g):
        nbhd = frozenset().union(*(g.adj[v] for v in clique)) - clique
        exterior = vs - clique - nbhd
        if not exterior:
            continue
        comps = g.components(exterior)
        touch = [frozenset().union(*(g.adj[v] for v in c)) & nbhd for c in comps]
        side_a = {0} | {j for j in range(1, len(comps)) if touch[0] & touch[j]}
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                same = (i in side_a) == (j in side_a)
                if same != bool(touch[i] & touch[j]):
                    raise InconsistentSides(
                        f"exterior components {sorted(comps[i])} and {sorted(comps[j])} "
                        "do not sit consistently around the clique"
                    )
        a = frozenset().union(*(comps[i] for i in side_a))
        return a, exterior - a
    raise EmptyExterior("every maximal clique dominates the whole graph")


def find_lower_bound(g: CollisionGraph) -> frozenset[int]:
    """A lower bound disjoint from the top layer, found around a maximal clique."""
    return lower_bound_sides(g)[0]


def _check_layer(g: CollisionGraph, layer: frozenset[int], residual: frozenset[int]) -> None:
    if not layer:
        raise LayerFailure("empty layer")
    if not g.is_clique(layer):
        raise LayerFailure(f"layer {sorted(layer)} is not a clique")
    for w in residual - layer:
        if layer <= g.adj[w]:
            raise LayerFailure(f"layer {sorted(layer)} is not maximal: {w} extends it")


def _cocomponents(g: CollisionGraph, vertices: frozenset[int]) -> list[frozenset[int]]:
    """Components of the complement of ``G(vertices)``."""
    seen: set[int] = set()
    out = []
    for start in sorted(vertices):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in vertices - g.adj[x] - comp - {x}:
                comp.add(y)
                stack.append(y)
        seen |= comp
        out.append(frozenset(comp))
    return out


def _bottom(g: CollisionGraph, part: frozenset[int], above: frozenset[int]) -> frozenset[int]:
    """Lowest clique of ``part``, found by expanding down from the vertices above it."""
    low = _expand(g, above | part, above).unreached
    if not low or not g.is_clique(low):
        raise LayerFailure(f"expansion from the peeled vertices left {sorted(low)}, not a clique")
    return low


def _top(
    g: CollisionGraph, part: frozenset[int], lower: frozenset[int], above: frozenset[int]
) -> frozenset[int]:
    """Undominated vertices of ``part`` given a lower bound inside it.

    The unreached set always contains the answer.  When ``G(part)`` has a
    module the unreached set is a union of co-components that are modules;
    the vertices in ``above`` are the only ones that can tell the members of
    such a module apart, so each one is resolved recursively with its own
    bottom clique as the lower bound.
    """
    unreached = _expand(g, part, lower).unreached
    top: set[int] = set()
    for block in _cocomponents(g, unreached):
        if len(block) == 1:
            top |= block
        elif not above:
            raise LayerFailure(f"{sorted(block)} is a module; contract modules first")
        else:
            top |= _top(g, block, _bottom(g, block, above), above)
    return frozenset(top)


def layers_from_lower_bound(g: CollisionGraph, s: Iterable[int]) -> LayerDecomposition:
    """Peel layers top-down starting from a lower bound ``s``.

    Each stage takes the vertices the bounded expansion from the current lower
    bound never reaches.  The next lower bound is whatever an expansion down
    from every peeled vertex never reaches.  Vertices adjacent to everything
    left are set aside first and added to the stage's layer.
    """
    everything = frozenset(g.vertices)
    residual = everything
    lower = frozenset(s)
    if not lower:
        raise ValueError("lower bound must be nonempty")
    layers: list[frozenset[int]] = []
    universals: list[frozenset[int]] = []
    while residual:
        if g.is_clique(residual):
            layers.append(residual)
            universals.append(residual)
            break
        uni = universal_vertices(g, residual)
        stripped = residual - uni
        peeled = everything - residual
        if peeled:
            lower = _bottom(g, stripped, peeled)
        seed = lower & stripped
        if not seed:
            raise LayerFailure(f"no lower-bound vertices left at stage {len(layers) + 1}")
        layer = _top(g, stripped, seed, peeled) | uni
        _check_layer(g, layer, residual)
        layers.append(layer)
        universals.append(uni)
        residual = residual - layer
    return LayerDecomposition(tuple(layers), tuple(universals))


def layers_via_orientation(
    g: CollisionGraph, certificate: OrientationCertificate | None = None
) -> LayerDecomposition:
    """Layers obtained by peeling undominated vertices under the certificate's order.

    Both the certificate and its reversal are peeled and the canonically
    smaller result is returned, matching :func:`layer_decomposition`.
    """
    from .simulate import peel_layers

    if certificate is None:
        ok, certificate = recognize_function_graph(g)
        if not ok:
            raise NotFunctionGraph("complement has no transitive orientation")
    return min(
        peel_layers(g.n, certificate.as_dominance(g.n)),
        peel_layers(g.n, certificate.reversed().as_dominance(g.n)),
        key=LayerDecomposition.canonical,
    )


def _decompose_connected(g: CollisionGraph) -> tuple[LayerDecomposition, bool]:
    """Layers of a connected function graph; flag says the orientation fallback was used."""
    vs = frozenset(g.vertices)
    if g.is_clique(vs):
        return LayerDecomposition((vs,), (vs,)), False
    uni = universal_vertices(g)
    rest = vs - uni
    sub, old = g.induced(rest)
    quotient, rep = contract_modules(sub)
    reps = sorted(set(rep.values()))
    fallback = False

    pieces = quotient.components()
    if len(pieces) > 1:
        # Blocks with no edge between them are stacked; their order is not identifiable.
        layers: list[frozenset[int]] = []
        for piece in pieces:
            pg, pold = quotient.induced(piece)
            inner, fb = _decompose_connected(pg)
            fallback |= fb
            layers.extend(frozenset(pold[x] for x in layer) for layer in inner.layers)
        qlayers = layers
    elif quotient.n == 1 or quotient.is_clique(quotient.vertices):
        qlayers = [frozenset(quotient.vertices)]
    else:
        try:
            qlayers = list(_two_step(quotient).layers)
        except EmptyExterior:
            qlayers = list(layers_via_orientation(quotient).layers)
            fallback = True

    members: dict[int, list[int]] = {}
    for local, r in rep.items():
        members.setdefault(r, []).append(old[local])
    out = [frozenset(x for q in layer for x in members[reps[q]]) for layer in qlayers]
    out[0] = out[0] | uni
    return LayerDecomposition(tuple(out), (uni,) + (frozenset(),) * (len(out) - 1)), fallback


def _two_step(g: CollisionGraph) -> LayerDecomposition:
    """Layers for both mirror orientations; the canonically smaller one is kept.

    Top-down peeling is not symmetric under reflection, so fixing one of the
    two orientations by a canonical rule keeps the output deterministic.
    """
    lower, other = lower_bound_sides(g)
    first = layers_from_lower_bound(g, lower)
    # The top layer of one orientation is a lower bound for the mirror image.
    second = layers_from_lower_bound(g, other or first.layers[0])
    return min(first, second, key=LayerDecomposition.canonical)


@dataclass(frozen=True)
class Decomposition:
    """Per-component layer decompositions, in original vertex ids."""

    components: tuple[LayerDecomposition, ...]
    fallback_used: bool = False

    def canonical(self):
        return tuple(sorted(d.canonical() for d in self.components))


def layer_decomposition(g: CollisionGraph) -> Decomposition:
    """Layers of every connected component of a function graph."""
    ok, _ = recognize_function_graph(g)
    if not ok:
        raise NotFunctionGraph("complement has no transitive orientation")
    parts = []
    fallback = False
    for comp in g.components():
        sub, old = g.induced(comp)
        d, fb = _decompose_connected(sub)
        fallback |= fb
        parts.append(
            LayerDecomposition(
                tuple(frozenset(old[x] for x in layer) for layer in d.layers),
                tuple(frozenset(old[x] for x in u) for u in d.stage_universals),
            )
        )
    return Decomposition(tuple(parts), fallback)


def contraction_graph(g: CollisionGraph, d: LayerDecomposition) -> ContractionResult:
    """Contract each layer to a vertex and check the interval pattern ``i <= j <= i*``."""
    where = d.layer_of()
    k = len(d.layers)
    edges = set()
    for u, v in g.edges:
        if u not in where or v not in where:
            continue
        i, j = sorted((where[u] + 1, where[v] + 1))
        if i != j:
            edges.add((i, j))
    reach = tuple(max([j for i2, j in edges if i2 == i], default=i) for i in range(1, k + 1))
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            if ((i, j) in edges) != (j <= reach[i - 1]):
                raise IntervalViolation(
                    f"layers {i} and {j}: adjacency disagrees with right reach {reach[i - 1]}"
                )
    return ContractionResult(frozenset(edges), reach)
