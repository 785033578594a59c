"""Piecewise-linear trajectories on a shared time grid, and ground-truth oracles.

Everything the recovery modules try to reconstruct (orderings, dominance,
layers) is computed here directly from the trajectories, so that recovery can
be checked against an independent source.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable

import numpy as np

from .core import (
    CollisionEvent,
    CollisionGraph,
    CollideError,
    DominanceRelation,
    LayerDecomposition,
    OrderedHistory,
    OrderingTimeline,
)

# Values or crossing times closer than this are treated as ties.
GENERIC_TOL = 1e-9
MAX_RETRIES = 100


class DegenerateTrajectories(CollideError):
    """Ties, tangencies or simultaneous crossings make the history ill defined."""


class EpsilonTooLarge(CollideError):
    """Module shrinking changed the collision graph; retry with a smaller epsilon."""


@dataclass(frozen=True, eq=False)
class TrajectorySet:
    breakpoints: np.ndarray  # shape (m + 1,), 0 = t_0 < ... < t_m = 1
    values: np.ndarray  # shape (n, m + 1)

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        vals = np.atleast_2d(np.asarray(self.values, dtype=float))
        if bp.ndim != 1 or len(bp) < 2:
            raise ValueError("need at least two breakpoints")
        if bp[0] != 0.0 or bp[-1] != 1.0 or np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must increase strictly from 0 to 1")
        if vals.shape[1] != len(bp):
            raise ValueError("every object needs one value per breakpoint")
        bp.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def segments(self) -> int:
        return len(self.breakpoints) - 1

    def at(self, t: float) -> np.ndarray:
        return np.array([np.interp(t, self.breakpoints, row) for row in self.values])

    def reflected(self) -> "TrajectorySet":
        """Mirror image on the line; flips every ordering and the dominance relation."""
        return TrajectorySet(self.breakpoints, -self.values)

    def to_json(self) -> dict:
        return {
            "breakpoints": self.breakpoints.tolist(),
            "objects": [{"id": i, "values": row.tolist()} for i, row in enumerate(self.values)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TrajectorySet":
        objs = sorted(data["objects"], key=lambda o: o["id"])
        if [o["id"] for o in objs] != list(range(len(objs))):
            raise ValueError("object ids must be dense 0..n-1")
        return cls(np.array(data["breakpoints"]), np.array([o["values"] for o in objs]))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json()))

    @classmethod
    def load(cls, path: str | Path) -> "TrajectorySet":
        return cls.from_json(json.loads(Path(path).read_text()))


def _crossings(ts: TrajectorySet, strict: bool = True) -> list[tuple[float, int, int]]:
    """All pairwise crossings as ``(time, u, v)`` with ``u < v``, sorted by time.

    With ``strict`` any tie at a breakpoint raises; otherwise touching pairs are
    reported with the touching time.
    """
    bp = ts.breakpoints
    out = []
    for u, v in combinations(range(ts.n), 2):
        d = ts.values[u] - ts.values[v]
        if strict and np.any(np.abs(d) <= GENERIC_TOL):
            raise DegenerateTrajectories(f"objects {u} and {v} tie at a breakpoint")
        for s in range(ts.segments):
            d0, d1 = d[s], d[s + 1]
            if d0 * d1 < 0:
                out.append((bp[s] + (bp[s + 1] - bp[s]) * d0 / (d0 - d1), u, v))
            elif not strict and d0 == 0:
                out.append((bp[s], u, v))
        if not strict and d[-1] == 0:
            out.append((bp[-1], u, v))
    out.sort()
    return out


def check_generic(ts: TrajectorySet) -> None:
    """Raise :class:`DegenerateTrajectories` unless ``ts`` is in generic position."""
    times = [c[0] for c in _crossings(ts)]
    if times and np.min(np.diff(times), initial=np.inf) <= GENERIC_TOL:
        raise DegenerateTrajectories("two crossings happen at the same time")


def is_generic(ts: TrajectorySet) -> bool:
    try:
        check_generic(ts)
    except DegenerateTrajectories:
        return False
    return True


def generate_trajectories(
    n: int, segments: int, seed: int, wander: float | None = None
) -> TrajectorySet:
    """Draw a generic random trajectory set, deterministic in ``seed``.

    By default every breakpoint value is uniform on [0, 1], which gives dense
    collision graphs.  With ``wander`` set, object ``i`` of a random permutation
    sits around height ``i`` and jitters with that standard deviation, which
    gives sparser graphs.
    """
    if n < 1 or segments < 1:
        raise ValueError("need n >= 1 and segments >= 1")
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RETRIES):
        inner = np.sort(rng.uniform(0.0, 1.0, segments - 1))
        bp = np.concatenate(([0.0], inner, [1.0]))
        if wander is None:
            vals = rng.uniform(0.0, 1.0, (n, segments + 1))
        else:
            base = rng.permutation(n).astype(float)[:, None]
            vals = base + wander * rng.standard_normal((n, segments + 1))
        try:
            ts = TrajectorySet(bp, vals)
            check_generic(ts)
        except (ValueError, DegenerateTrajectories):
            continue
        return ts
    raise DegenerateTrajectories(
        f"no generic draw in {MAX_RETRIES} attempts for n={n}, segments={segments}"
    )


def stacked(ts_list: Iterable[TrajectorySet], gap: float = 1.0) -> TrajectorySet:
    """Stack independent trajectory sets vertically so that no pair from different sets meets.

    All inputs must share one breakpoint grid.  Ids are assigned consecutively.
    """
    ts_list = list(ts_list)
    bp = ts_list[0].breakpoints
    rows = []
    floor = 0.0
    for ts in ts_list:
        if not np.array_equal(ts.breakpoints, bp):
            raise ValueError("stacked trajectory sets must share breakpoints")
        shifted = ts.values - ts.values.min() + floor
        rows.append(shifted)
        floor = shifted.max() + gap
    return TrajectorySet(bp, np.vstack(rows))


def generate_disconnected(n: int, segments: int, seed: int) -> tuple[TrajectorySet, list[list[int]]]:
    """Generic instance whose collision graph has at least two components.

    Returns the trajectories and the id blocks that were kept apart.
    """
    if n < 2:
        raise ValueError("need at least two objects")
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RETRIES):
        split = int(rng.integers(1, n))
        inner = np.sort(rng.uniform(0.0, 1.0, segments - 1))
        bp = np.concatenate(([0.0], inner, [1.0]))
        parts = [
            TrajectorySet(bp, rng.uniform(0.0, 1.0, (size, segments + 1)))
            for size in (split, n - split)
        ]
        ts = stacked(parts)
        perm = rng.permutation(n)
        ts = TrajectorySet(bp, ts.values[perm])
        if is_generic(ts):
            blocks = [sorted(int(x) for x in np.flatnonzero(perm < split)),
                      sorted(int(x) for x in np.flatnonzero(perm >= split))]
            return ts, blocks
    raise DegenerateTrajectories("could not draw a generic disconnected instance")


def extract_history(ts: TrajectorySet) -> OrderedHistory:
    """Time-sorted list of every crossing, located by linear interpolation."""
    check_generic(ts)
    events = tuple(CollisionEvent(u, v, float(t)) for t, u, v in _crossings(ts))
    return OrderedHistory(ts.n, events)


def collision_graph(ts: TrajectorySet) -> CollisionGraph:
    """Pairs that are ever equal.  Works on non-generic input too (touching counts)."""
    return CollisionGraph(ts.n, frozenset((u, v) for _, u, v in _crossings(ts, strict=False)))


def _order_at(ts: TrajectorySet, t: float) -> tuple[int, ...]:
    return tuple(int(i) for i in np.argsort(ts.at(t), kind="stable"))


def ordering_timeline_oracle(ts: TrajectorySet) -> OrderingTimeline:
    """Bottom-to-top ordering at t=0 and between each pair of consecutive crossings."""
    check_generic(ts)
    times = [c[0] for c in _crossings(ts)]
    samples = [0.0]
    bounds = times + [1.0]
    for k in range(len(times)):
        samples.append(0.5 * (bounds[k] + bounds[k + 1]))
    return OrderingTimeline(tuple(_order_at(ts, t) for t in samples))


def dominance_oracle(ts: TrajectorySet) -> DominanceRelation:
    g = collision_graph(ts)
    v0 = ts.values[:, 0]
    pairs = set()
    for u, v in combinations(range(ts.n), 2):
        if g.has_edge(u, v):
            continue
        pairs.add((u, v) if v0[u] > v0[v] else (v, u))
    return DominanceRelation(ts.n, frozenset(pairs))


def peel_layers(n: int, dominance: DominanceRelation) -> LayerDecomposition:
    """Repeatedly remove the undominated elements."""
    remaining = set(range(n))
    layers = []
    while remaining:
        top = {v for v in remaining if not any((u, v) in dominance.pairs for u in remaining)}
        if not top:
            raise ValueError("dominance relation has a cycle")
        layers.append(frozenset(top))
        remaining -= top
    return LayerDecomposition(tuple(layers))


def layers_oracle(ts: TrajectorySet) -> LayerDecomposition:
    return peel_layers(ts.n, dominance_oracle(ts))


def is_module(g: CollisionGraph, members: Iterable[int]) -> bool:
    s = set(members)
    if len(s) < 2:
        return False
    for w in g.vertices:
        if w in s:
            continue
        hits = len(g.adj[w] & s)
        if 0 < hits < len(s):
            return False
    return True


def shrink_module(
    ts: TrajectorySet, module: Iterable[int], representative: int, epsilon: float
) -> TrajectorySet:
    """Squeeze a module's trajectories into a thin band around the representative.

    Each member ``i`` becomes ``epsilon * v_i(t) + v_rep(t)``; the collision
    graph must come out unchanged, otherwise :class:`EpsilonTooLarge` is raised.
    """
    members = sorted(set(module))
    if representative not in members:
        raise ValueError("representative must belong to the module")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    before = collision_graph(ts)
    if len(members) > 1 and not is_module(before, members):
        raise ValueError(f"{members} is not a module of the collision graph")
    vals = np.array(ts.values)
    rep = ts.values[representative]
    for i in members:
        vals[i] = epsilon * ts.values[i] + rep
    out = TrajectorySet(ts.breakpoints, vals)
    if collision_graph(out) != before:
        raise EpsilonTooLarge(f"epsilon={epsilon} changed the collision graph; shrink it")
    return out


def plant_module(
    ts: TrajectorySet, representative: int, seed: int, scale: float = 1e-3
) -> tuple[TrajectorySet, list[int]]:
    """Append a near-copy of ``representative`` so that the two form a module.

    The copy is ``v_rep + scale * noise`` for piecewise-linear noise on the same
    grid; ``scale`` is halved until the new object meets exactly the same
    outside curves as the representative.
    """
    rng = np.random.default_rng(seed)
    noise = rng.uniform(-1.0, 1.0, ts.segments + 1)
    new_id = ts.n
    for _ in range(60):
        vals = np.vstack([ts.values, ts.values[representative] + scale * noise])
        out = TrajectorySet(ts.breakpoints, vals)
        if is_generic(out) and is_module(collision_graph(out), [representative, new_id]):
            return out, [representative, new_id]
        scale /= 2
    raise DegenerateTrajectories("could not plant a module; try another seed")


def prime_instance(
    n: int, segments: int, seed: int, wander: float | None = None, max_tries: int = 2000
) -> TrajectorySet:
    """First generic draw for ``seed`` whose graph is connected and prime.

    The default jitter grows with ``n``; that keeps the hit rate near one in
    five for ``n <= 12`` with a few segments.
    """
    from .funcgraph import is_prime  # circular at import time otherwise

    if wander is None:
        wander = max(1.2, n / 6)
    for k in range(max_tries):
        ts = generate_trajectories(n, segments, seed * max_tries + k, wander=wander)
        g = collision_graph(ts)
        if len(g.components()) == 1 and is_prime(g):
            return ts
    raise DegenerateTrajectories(f"no prime connected instance found for n={n}")


def inversions(p: tuple[int, ...], q: tuple[int, ...]) -> int:
    """Number of pairs ordered differently by ``p`` and ``q``."""
    pos = {v: i for i, v in enumerate(q)}
    seq = [pos[v] for v in p]
    return sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])


__all__ = [
    "TrajectorySet",
    "DegenerateTrajectories",
    "EpsilonTooLarge",
    "generate_trajectories",
    "generate_disconnected",
    "extract_history",
    "collision_graph",
    "ordering_timeline_oracle",
    "dominance_oracle",
    "layers_oracle",
    "peel_layers",
    "shrink_module",
    "plant_module",
    "prime_instance",
    "is_module",
    "stacked",
    "inversions",
]
