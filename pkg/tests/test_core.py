import json

import pytest

from collide.core import (
    CollisionEvent,
    CollisionGraph,
    LayerDecomposition,
    OrderedHistory,
    OrderingTimeline,
    canonicalize_ordering,
    graph_from_edgelist,
    graph_from_json,
    graph_to_edgelist,
    graph_to_json,
    history_from_json,
    history_to_json,
    is_connected,
    load_graph,
    underlying_graph,
)


@pytest.mark.parametrize("seq, expected", [((2, 1, 3), (2, 1, 3)), ((3, 1, 2), (2, 1, 3)), ((0, 1), (0, 1))])
def test_canonicalize_ordering(seq, expected):
    assert canonicalize_ordering(seq) == expected


def test_underlying_graph_dedups_repeated_pairs():
    h = OrderedHistory(2, (CollisionEvent(0, 1, 0.1), CollisionEvent(1, 0, 0.2)))
    assert underlying_graph(h).edges == {(0, 1)}


def test_underlying_graph_path_and_empty():
    h = OrderedHistory.from_pairs(3, [(0, 1), (1, 2)])
    assert underlying_graph(h).edges == {(0, 1), (1, 2)}
    assert underlying_graph(OrderedHistory(3)).edges == frozenset()


def test_is_connected():
    assert is_connected(CollisionGraph.from_edges(3, [(0, 1), (1, 2)]))
    assert not is_connected(CollisionGraph.from_edges(3, [(0, 1)]))
    assert is_connected(CollisionGraph(1))
    with pytest.raises(ValueError):
        is_connected(CollisionGraph(0))


def test_history_validation():
    with pytest.raises(ValueError):
        OrderedHistory(2, (CollisionEvent(0, 1, 0.5), CollisionEvent(0, 1, 0.5)))
    with pytest.raises(ValueError):
        OrderedHistory(2, (CollisionEvent(0, 2, 0.5),))
    with pytest.raises(ValueError):
        CollisionEvent(1, 1, 0.0)


def test_graph_rejects_loops_and_out_of_range():
    with pytest.raises(ValueError):
        CollisionGraph.from_edges(2, [(0, 0)])
    with pytest.raises(ValueError):
        CollisionGraph.from_edges(2, [(0, 2)])


def test_complement_and_induced():
    g = CollisionGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert g.complement().edges == {(0, 2), (0, 3), (1, 3)}
    sub, old = g.induced([1, 2, 3])
    assert old == [1, 2, 3]
    assert sub.edges == {(0, 1), (1, 2)}
    assert g.components([0, 2, 3]) == [frozenset({0}), frozenset({2, 3})]


def test_timeline_canonical_and_check():
    h = OrderedHistory.from_pairs(2, [(0, 1)])
    tl = OrderingTimeline(((0, 1), (1, 0)))
    assert tl.canonical().orderings == ((1, 0), (0, 1))
    assert tl.equals_up_to_reversal(tl.reversed())
    tl.check_against(h)
    with pytest.raises(ValueError):
        OrderingTimeline(((0, 1), (0, 1))).check_against(h)


def test_layer_canonical_form():
    d = LayerDecomposition(({3, 2}, {1, 0}))
    assert d.canonical() == ((0, 1), (2, 3))
    assert d.same_up_to_reversal(LayerDecomposition(({0, 1}, {2, 3})))
    assert d.layer_of() == {2: 0, 3: 0, 0: 1, 1: 1}


def test_json_round_trips(tmp_path):
    h = OrderedHistory.from_pairs(3, [(0, 1), (1, 2)])
    assert history_from_json(json.loads(json.dumps(history_to_json(h)))) == h
    g = CollisionGraph.from_edges(4, [(0, 1), (2, 3)])
    assert graph_from_json(graph_to_json(g)) == g
    assert graph_from_edgelist(graph_to_edgelist(g)) == g
    p = tmp_path / "g.txt"
    p.write_text("# a comment\nn 4\n0 1  # edge\n2 3\n")
    assert load_graph(p) == g
    p.write_text(json.dumps(graph_to_json(g)))
    assert load_graph(p) == g


def test_edgelist_requires_header():
    with pytest.raises(ValueError):
        graph_from_edgelist("0 1\n")
