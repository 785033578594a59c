import pytest

from collide.core import CollisionGraph, InstanceTooLarge
from collide.completion import (
    InterleavingInstance,
    bandwidth_bruteforce,
    bf_bruteforce,
    bf_completion,
    brute_force_interleaving,
    check_sandwich,
    feasible,
    instances,
    layout_stretch,
    max_merged_length,
    merged_length,
    solve_interleaving,
)
from collide.funcgraph import recognize_function_graph
from oracles import atlas, bandwidth_by_permutations

I = InterleavingInstance
INNER = I(2, 2, ((1, 2),), ((1, 2),))
OUTER = I(2, 2, ((0, 2),), ((0, 2),))
C5 = CollisionGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])


def K(n):
    return CollisionGraph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def P(n):
    return CollisionGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def test_merged_length_examples():
    blank = I(2, 2)
    assert merged_length(blank, (0, 2), (1, 1), "x") == 1
    # x0 x1 y1 y2 x2
    assert merged_length(blank, (0, 2), (1, 2), "x") == 4
    # y1 x1 y2
    assert merged_length(blank, (1, 2), (1, 2), "y") == 3
    with pytest.raises(ValueError):
        merged_length(blank, (0, 0), (0, 1), "z")


def test_merged_length_counts_shared_first_element_once():
    inst = I(2, 2)
    # x0=y0 x1 y1 x2 y2: [x0, x2] spans x0 x1 y1 x2.
    assert merged_length(inst, (0, 1), (0, 2), "x") == 4
    # [y0, y1] spans y0 x1 y1.
    assert merged_length(inst, (0, 1), (0, 1), "y") == 3


def test_feasible_examples():
    ok, witness = feasible(I(3, 2), 1)
    assert ok and witness == (0, 0, 0)
    ok, witness = feasible(INNER, 2)
    assert ok and max_merged_length(INNER, witness) <= 2
    assert feasible(OUTER, 4) == (False, None)
    assert feasible(OUTER, 5)[0]


def test_solve_examples():
    assert solve_interleaving(I(3, 4)).achieved == 0
    assert solve_interleaving(INNER).achieved == 2
    assert solve_interleaving(OUTER).achieved == 5


def test_brute_force_examples():
    assert brute_force_interleaving(INNER).achieved == 2
    assert brute_force_interleaving(OUTER).achieved == 5
    assert brute_force_interleaving(I(3, 4)).achieved == 0
    assert brute_force_interleaving(I(0, 3, (), ((1, 3), (0, 1)))).achieved == 3
    with pytest.raises(InstanceTooLarge):
        brute_force_interleaving(I(8, 7))


def test_swapping_roles_keeps_optimum():
    for inst in instances(3, 300):
        assert brute_force_interleaving(inst).achieved == brute_force_interleaving(inst.swapped()).achieved
        assert solve_interleaving(inst).achieved == solve_interleaving(inst.swapped()).achieved


def test_solver_matches_oracle_sample():
    for inst in instances(7, 500):
        sol = solve_interleaving(inst)
        assert sol.achieved == brute_force_interleaving(inst).achieved
        assert max_merged_length(inst, sol.positions) == sol.achieved


def test_instance_validation_and_json():
    with pytest.raises(ValueError):
        I(2, 2, ((1, 3),))
    with pytest.raises(ValueError):
        I(2, 2, (), ((2, 1),))
    inst = I(2, 3, ((0, 1),), ((1, 3),))
    assert I.from_json(inst.to_json()) == inst


def test_bandwidth_examples():
    for n in range(2, 7):
        assert bandwidth_bruteforce(P(n)).value == 1
        assert bandwidth_bruteforce(K(n)).value == n - 1
    r = bandwidth_bruteforce(C5)
    assert r.value == 2 == bandwidth_by_permutations(C5)
    assert layout_stretch(C5, r.witness) == 2
    assert bandwidth_bruteforce(CollisionGraph(4)).value == 0
    with pytest.raises(InstanceTooLarge):
        bandwidth_bruteforce(CollisionGraph(11))


def test_bandwidth_matches_permutation_search():
    for g in atlas(6):
        r = bandwidth_bruteforce(g)
        assert r.value == bandwidth_by_permutations(g)
        assert layout_stretch(g, r.witness) == r.value


def test_bf_examples():
    assert bf_bruteforce(CollisionGraph(4)) == 0
    assert bf_bruteforce(P(4)) == 2
    assert bf_bruteforce(K(4)) == 3
    value, h = bf_completion(C5)
    # C5 needs one chord; a chord lifts two degrees to 3.
    assert value == 3
    assert C5.edges <= h.edges and recognize_function_graph(h)[0] and h.max_degree() == 3
    with pytest.raises(InstanceTooLarge):
        bf_bruteforce(CollisionGraph(7))


def test_bf_at_most_max_degree_for_function_graphs():
    for g in atlas(5):
        if recognize_function_graph(g)[0]:
            assert bf_bruteforce(g) == g.max_degree()


def test_sandwich_examples():
    for g in (P(4), K(4), C5):
        assert check_sandwich(g)
