import warnings
from itertools import combinations, product
from math import gcd

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diginv.digraph import Digraph, Route, cycle_graph, is_weak, path_graph, path_of_length
from diginv.errors import InvariantViolation
from diginv.oracles import closed_route_gcd
from diginv.weight import (
    Verdict, VertexMap, canonical_cycle_epimorphism, canonical_path_epimorphism, weak_tensor_predicate,
    collapse, collapse_to_cycle, cycle_gcd, diameter_zero_weight, enumerate_homomorphisms,
    enumerate_unrepeated_closed_routes, find_epimorphism, identity_map, induced_cycle_map,
    induced_path_map, is_decomposable, iter_homomorphisms, max_cycle_epimorphism,
    strong_tensor_predicate, weight_by_potentials, weight_invariant, weight_report,
)
from diginv.errors import SearchBudgetExceeded

from strategies import digraphs, routes_in

TRIANGLE = Digraph.from_arcs(3, [(0, 1), (1, 2), (0, 2)])


def test_enumerate_c3():
    routes = enumerate_unrepeated_closed_routes(cycle_graph(3))
    assert [r for r in routes if r.weight != 0] == [Route((0, 1, 2, 0), (1, 1, 1))]
    # the remaining classes are the back-and-forth traversals of the three arcs
    assert sorted(r.length for r in routes if r.weight == 0) == [2, 2, 2]


def test_enumerate_path_has_no_positive_class():
    routes = enumerate_unrepeated_closed_routes(path_graph(3))
    assert routes and all(r.weight == 0 for r in routes)
    assert Route((0, 1, 0), (1, -1)) in routes


def test_enumerate_isolated_vertex():
    assert enumerate_unrepeated_closed_routes(Digraph(1, frozenset())) == []


@pytest.mark.parametrize("n", range(1, 9))
def test_cycle_weight(n):
    assert weight_invariant(cycle_graph(n)) == n
    assert cycle_gcd(cycle_graph(n)) == n


def test_weight_examples():
    assert weight_invariant(TRIANGLE) == 1
    assert weight_invariant(path_graph(5)) == 0
    assert cycle_gcd(cycle_graph(6)) == 6
    assert cycle_gcd(TRIANGLE) == 0


def test_cycle_gcd_four_and_six():
    arcs = [(i, (i + 1) % 4) for i in range(4)]
    six = [0, 4, 5, 6, 7, 8]
    arcs += [(six[i], six[(i + 1) % 6]) for i in range(6)]
    assert cycle_gcd(Digraph.from_arcs(9, arcs)) == 2


def test_cycle_gcd_need_not_divide_weight():
    # a 2-cycle plus a transitive triangle: D = 2 while w = 1; only w | D holds
    g = Digraph.from_arcs(3, [(0, 1), (1, 0), (0, 2), (1, 2)])
    assert cycle_gcd(g) == 2 and weight_invariant(g) == 1


def test_weight_of_disconnected_warns():
    g = Digraph.from_arcs(5, [(0, 1), (1, 0), (2, 3), (3, 4), (4, 2)])
    with pytest.warns(UserWarning):
        assert weight_invariant(g) == 1


def test_diameter():
    assert diameter_zero_weight(path_of_length(4)) == 4
    assert diameter_zero_weight(Digraph.from_arcs(3, [(0, 1), (2, 1)])) == 1
    assert diameter_zero_weight(Digraph(1, frozenset())) == 0
    with pytest.raises(ValueError, match="diameter undefined"):
        diameter_zero_weight(cycle_graph(3))


def test_collapse_examples():
    assert collapse(Route((0, 1, 0), (1, -1))) == Route((0,), ())
    r = Route((0, 1, 2, 0), (1, 1, -1))
    c = collapse(r)
    assert c.length == 1 and c.weight == 1 and c.is_closed
    with pytest.raises(ValueError):
        collapse(Route((0, 1, 2, 0), (1, 1, 1)))
    assert collapse_to_cycle(Route((0, 1, 2, 0), (1, 1, 1))) == 3
    assert collapse_to_cycle(Route((0, 1, 0), (1, -1))) == 0


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_collapse_preserves_weight(data):
    g = data.draw(digraphs(max_n=5))
    r = data.draw(routes_in(g, max_len=10))
    closing = [s for s in g.steps[r.end] if s[0] == r.start]
    if not closing:
        return
    u, s = closing[0]
    closed = Route(r.vertices + (u,), r.orientations + (s,))
    assert closed.is_valid_in(g)
    assert collapse_to_cycle(closed) == abs(closed.weight)
    if any(a != b for a, b in zip(closed.orientations, closed.orientations[1:])):
        c = collapse(closed)
        assert c.weight == closed.weight and c.length == closed.length - 2 and c.is_closed


def test_canonical_cycle_maps():
    phi = canonical_cycle_epimorphism(cycle_graph(6))
    assert phi.assignment == tuple(range(6)) and phi.is_epimorphism
    phi = canonical_cycle_epimorphism(TRIANGLE)
    assert phi.codomain == cycle_graph(1) and set(phi.assignment) == {0} and phi.is_homomorphism
    chord = Digraph.from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    w = weight_invariant(chord)
    assert w == gcd(4, 3 - 1) == 1 or w == 1
    assert canonical_cycle_epimorphism(chord).is_epimorphism
    with pytest.raises(ValueError):
        canonical_cycle_epimorphism(path_graph(3))


def test_canonical_path_maps():
    assert canonical_path_epimorphism(path_of_length(3)).assignment == (0, 1, 2, 3)
    assert canonical_path_epimorphism(Digraph.from_arcs(3, [(0, 1), (2, 1)])).assignment == (0, 1, 0)
    star_in = Digraph.from_arcs(4, [(1, 0), (2, 0), (3, 0)])
    assert canonical_path_epimorphism(star_in).assignment == (1, 0, 0, 0)
    with pytest.raises((ValueError, InvariantViolation)):
        canonical_path_epimorphism(cycle_graph(3))


def test_homomorphism_examples():
    homs = enumerate_homomorphisms(cycle_graph(6), cycle_graph(3))
    assert len(homs) == 3 and all(h.is_epimorphism for h in homs)
    assert enumerate_homomorphisms(cycle_graph(3), cycle_graph(2)) == []
    for n in range(1, 7):
        for k in range(0, 7):
            assert enumerate_homomorphisms(cycle_graph(n), path_of_length(k)) == []


def test_homomorphism_budget():
    with pytest.raises(SearchBudgetExceeded):
        list(iter_homomorphisms(Digraph(8, frozenset()), Digraph(8, frozenset()), budget=100))


def _brute_homs(g1, g2):
    return sorted(f for f in product(range(g2.n), repeat=g1.n)
                  if all(g2.has_arc(f[u], f[v]) for u, v in g1.arcs))


@settings(max_examples=150, deadline=None)
@given(digraphs(max_n=4), digraphs(max_n=3))
def test_homomorphisms_against_brute_force(g1, g2):
    assert sorted(h.assignment for h in enumerate_homomorphisms(g1, g2)) == _brute_homs(g1, g2)


def test_induced_cycle_map_winding():
    psi = VertexMap(cycle_graph(6), cycle_graph(3), tuple(i % 3 for i in range(6)))
    phi1 = canonical_cycle_epimorphism(cycle_graph(6))
    phi2 = canonical_cycle_epimorphism(cycle_graph(3))
    assert induced_cycle_map(psi, phi1, phi2).assignment == tuple(k % 3 for k in range(6))


def test_induced_cycle_map_identity():
    g = Digraph.from_arcs(4, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 0)])
    phi = canonical_cycle_epimorphism(g)
    ind = induced_cycle_map(identity_map(g), phi, phi)
    assert ind.assignment == tuple(range(phi.codomain.n))


def test_induced_path_map():
    g = path_of_length(3)
    phi = canonical_path_epimorphism(g)
    assert induced_path_map(identity_map(g), phi, phi).assignment == (0, 1, 2, 3)


def test_strong_tensor_examples():
    assert strong_tensor_predicate(cycle_graph(2), cycle_graph(3))
    assert not strong_tensor_predicate(cycle_graph(2), cycle_graph(2))
    assert not strong_tensor_predicate(cycle_graph(3), path_graph(2))


def test_weak_tensor_examples():
    c = weak_tensor_predicate(cycle_graph(2), cycle_graph(3))
    assert c.verdict is Verdict.WEAK and c.oracle
    c = weak_tensor_predicate(cycle_graph(2), cycle_graph(2))
    assert c.verdict is Verdict.NOT_WEAK and not c.oracle
    c = weak_tensor_predicate(path_graph(3), cycle_graph(3))
    assert c.verdict is Verdict.UNDETERMINED and c.agrees is None
    assert set(c.evidence) >= {"zero_weight_factor", "l", "decomposable"}
    with pytest.raises(ValueError):
        weak_tensor_predicate(Digraph(2, frozenset()), cycle_graph(3))


def _decomposable_oracle(a):
    n = len(a)
    for k in range(1, n):
        for rows in combinations(range(n), k):
            for m in range(1, n):
                for cols in combinations(range(n), m):
                    rs, cs = set(rows), set(cols)
                    if all(a[i][j] == 0 for i in range(n) for j in range(n) if (i in rs) != (j in cs)):
                        return True
    return False


def test_decomposable_examples():
    block = [[1, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]]
    assert is_decomposable(block)
    assert not is_decomposable([[1] * 3] * 3)
    # the 3-cycle permutation matrix splits into 1x1 blocks after permuting columns
    c3 = [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    assert is_decomposable(c3) == _decomposable_oracle(c3) is True
    with pytest.raises(ValueError):
        is_decomposable([[1, 0]])


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n),
                                                     min_size=n, max_size=n)))
def test_decomposable_against_subset_oracle(a):
    assert is_decomposable(a) == _decomposable_oracle(a)


# ---------------------------------------------------------------------------
# properties against independent computations


@settings(max_examples=200, deadline=None)
@given(digraphs(max_n=5))
def test_weight_three_ways(g):
    if not is_weak(g):
        return
    w = weight_invariant(g)
    assert w == weight_by_potentials(g)
    assert w == closed_route_gcd(g, 2 * g.n + 2)
    d = cycle_gcd(g)
    if d:
        assert w and d % w == 0
    rep = weight_report(g)
    assert rep.weight == w and (rep.diameter is None) == (w > 0)
    from math import gcd as g_
    acc = 0
    for r in rep.witness_routes:
        assert r.is_valid_in(g) and r.is_closed and r.is_unrepeated
        acc = g_(acc, r.weight)
    assert acc == w


@settings(max_examples=200, deadline=None)
@given(digraphs(max_n=6))
def test_cycle_gcd_against_networkx(g):
    nxg = nx.DiGraph()
    nxg.add_nodes_from(g.vertices)
    nxg.add_edges_from(g.arcs)
    expected = 0
    for c in nx.simple_cycles(nxg):
        expected = gcd(expected, len(c))
    assert cycle_gcd(g) == expected


@settings(max_examples=100, deadline=None)
@given(digraphs(max_n=5))
def test_canonical_map_is_epimorphism(g):
    if not is_weak(g):
        return
    if weight_invariant(g) > 0:
        phi = canonical_cycle_epimorphism(g)
        assert phi.is_epimorphism and max_cycle_epimorphism(g) == min(weight_invariant(g), g.n) or \
            weight_invariant(g) > g.n
        assert find_epimorphism(g, cycle_graph(weight_invariant(g))) is not None
    else:
        phi = canonical_path_epimorphism(g)
        assert phi.is_epimorphism and phi.codomain == path_of_length(diameter_zero_weight(g))
