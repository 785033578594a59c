import numpy as np
import pytest

from collide.core import DominanceRelation
from collide.simulate import (
    DegenerateTrajectories,
    EpsilonTooLarge,
    TrajectorySet,
    _crossings,
    check_generic,
    collision_graph,
    dominance_oracle,
    extract_history,
    generate_disconnected,
    generate_trajectories,
    is_module,
    layers_oracle,
    ordering_timeline_oracle,
    peel_layers,
    plant_module,
    shrink_module,
)
from collide.funcgraph import find_modules


def lines(start, end):
    return TrajectorySet(np.array([0.0, 1.0]), np.column_stack([start, end]))


def test_single_object_has_no_collisions():
    ts = generate_trajectories(1, 3, seed=5)
    assert len(extract_history(ts)) == 0


def test_determinism():
    a = generate_trajectories(2, 4, seed=11)
    b = generate_trajectories(2, 4, seed=11)
    assert np.array_equal(a.values, b.values) and np.array_equal(a.breakpoints, b.breakpoints)


def test_crossing_times_distinct_n8_seed7():
    ts = generate_trajectories(8, 5, seed=7)
    times = []
    for u in range(8):
        for v in range(u + 1, 8):
            d = ts.values[u] - ts.values[v]
            for s in range(5):
                if d[s] * d[s + 1] < 0:
                    t0, t1 = ts.breakpoints[s], ts.breakpoints[s + 1]
                    times.append(t0 + (t1 - t0) * d[s] / (d[s] - d[s + 1]))
    assert len(times) == len(extract_history(ts))
    assert len(set(np.round(times, 12))) == len(times)


def test_two_crossing_lines():
    ts = lines([0.0, 1.0], [1.0, 0.0])
    h = extract_history(ts)
    assert [(e.u, e.v) for e in h.events] == [(0, 1)]
    assert abs(h.events[0].time - 0.5) < 1e-12
    assert ordering_timeline_oracle(ts).orderings == ((0, 1), (1, 0))
    assert dominance_oracle(ts).pairs == frozenset()


def test_parallel_lines():
    ts = lines([0.0, 1.0, 2.0], [0.0, 1.0, 2.0])
    assert len(extract_history(ts)) == 0
    assert len(ordering_timeline_oracle(ts)) == 1
    assert dominance_oracle(ts).pairs == {(1, 0), (2, 0), (2, 1)}
    assert layers_oracle(ts).layers == ({2}, {1}, {0})


def test_full_reversal_of_four_gives_six_events():
    # Crossing time of i < j is 1 / (1 + i^2 + ij + j^2): all distinct.
    i = np.arange(4.0)
    ts = lines(i, -(i ** 3))
    h = extract_history(ts)
    assert len(h) == 6
    tl = ordering_timeline_oracle(ts)
    assert tl[0] == (0, 1, 2, 3) and tl[-1] == (3, 2, 1, 0)
    tl.check_against(h)


def test_timeline_oracle_adjacent_swaps_by_hand():
    # Start (1, 0, 2) bottom to top; 0 and 1 cross, then 1 and 2.
    bp = np.array([0.0, 0.5, 1.0])
    vals = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 2.5], [2.0, 2.0, 2.0]])
    ts = TrajectorySet(bp, vals)
    assert ordering_timeline_oracle(ts).orderings[-1] == (0, 2, 1)


def test_tie_is_degenerate():
    with pytest.raises(DegenerateTrajectories):
        check_generic(lines([0.0, 0.0], [1.0, 2.0]))


def test_touching_counts_as_collision():
    ts = TrajectorySet(np.array([0.0, 0.5, 1.0]), np.array([[0.0, 1.0, 0.0], [2.0, 1.0, 2.0]]))
    assert collision_graph(ts).edges == {(0, 1)}


def test_dominance_is_transitive_on_generated():
    for seed in range(30):
        ts = generate_trajectories(7, 3, seed, wander=1.5)
        assert dominance_oracle(ts).is_strict_partial_order()


def test_peel_layers_p4_realization():
    a, b, c, d = range(4)
    dom = DominanceRelation(4, frozenset({(a, c), (a, d), (b, d)}))
    assert [set(x) for x in peel_layers(4, dom).layers] == [{a, b}, {c, d}]


def test_all_crossing_set_is_one_layer():
    ts = lines([0.0, 1.0, 2.0], [2.0, 1.1, 0.3])
    assert len(collision_graph(ts).edges) == 3
    assert layers_oracle(ts).layers == ({0, 1, 2},)


def test_generate_disconnected_blocks_never_meet():
    for seed in range(20):
        ts, blocks = generate_disconnected(6, 3, seed)
        g = collision_graph(ts)
        assert all(not (u in blocks[0]) ^ (v in blocks[0]) for u, v in g.edges)
        assert sorted(blocks[0] + blocks[1]) == list(range(6))


def test_json_round_trip(tmp_path):
    ts = generate_trajectories(4, 3, seed=2)
    p = tmp_path / "ts.json"
    ts.save(p)
    back = TrajectorySet.load(p)
    assert np.allclose(back.values, ts.values) and np.allclose(back.breakpoints, ts.breakpoints)
    assert [o["id"] for o in ts.to_json()["objects"]] == [0, 1, 2, 3]


# Five curves, nine collisions; curves 1 and 4 meet the other three alike and never meet each other.
FIVE_CURVE_SEED = 45
FIVE_CURVE_EDGES = {(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4)}


def five_curve_instance():
    ts = generate_trajectories(4, 3, FIVE_CURVE_SEED)
    return plant_module(ts, 1, FIVE_CURVE_SEED)


def test_five_curve_module_instance():
    ts, module = five_curve_instance()
    g = collision_graph(ts)
    assert module == [1, 4]
    assert g.edges == FIVE_CURVE_EDGES
    assert find_modules(g).modules == (frozenset({1, 4}),)
    eps = 1e-2
    for _ in range(4):
        shrunk = shrink_module(ts, module, 1, eps)
        assert collision_graph(shrunk).edges == FIVE_CURVE_EDGES
        eps /= 2


def test_shrink_singleton_is_identity():
    ts = generate_trajectories(4, 3, 0)
    assert collision_graph(shrink_module(ts, [2], 2, 0.5)) == collision_graph(ts)


def test_shrink_rejects_non_module_and_large_epsilon():
    ts, module = five_curve_instance()
    with pytest.raises(ValueError):
        shrink_module(ts, [0, 1], 0, 1e-3)
    # Scaling curve 4 by 1e6 throws it far from the others.
    with pytest.raises(EpsilonTooLarge):
        shrink_module(ts, module, 1, 1e6)


def test_is_module():
    ts, _ = five_curve_instance()
    g = collision_graph(ts)
    assert is_module(g, [1, 4])
    assert not is_module(g, [1, 2])
    assert not is_module(g, [1])


def test_crossings_sorted():
    ts = generate_trajectories(6, 4, 3)
    times = [c[0] for c in _crossings(ts)]
    assert times == sorted(times)
