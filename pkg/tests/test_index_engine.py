from __future__ import annotations

import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import oracle_indices, to_nx
from revszeged.enumerator import GenerationTask, rooted_trees, unicyclic_graphs
from revszeged.families import SINGLE, UnicyclicSpec, assemble, cyc, from_level_sequence, path, star
from revszeged.graph_core import build_graph, cycle_distance, distances, parse_graph6
from revszeged.index_engine import (
    INDEX_KINDS,
    DecompositionReport,
    EdgeNotFoundError,
    IndexSuite,
    Q4,
    cycle_edge_sum,
    decompose_unicyclic,
    edge_partition,
    index_suite,
    index_value,
    sz_e_star,
    sz_e_star_closed_form,
    tree_edge_sum,
    vertex_partition,
)


def cycle(n):
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


P4 = build_graph(4, [(0, 1), (1, 2), (2, 3)])


# ------------------------------------------------------------------ Q4


def test_q4_arithmetic():
    a, b = Q4.of(Fraction(3, 4)), Q4.of(2)
    assert a + b == Q4(11)
    assert b - a == Q4(5)
    assert 3 * a == Q4(9)
    assert -a < 0 < a
    assert Q4(8) == 2 and int(Q4(8)) == 2
    assert str(a) == "3/4"
    with pytest.raises(ValueError):
        Q4.of(Fraction(1, 3))
    with pytest.raises(ValueError):
        int(a)


@given(st.integers(-10**9, 10**9))
def test_q4_encode_parse_round_trip(q):
    x = Q4(q)
    assert Q4.parse(x.encode()) == x
    assert float(x) == q / 4


def test_q4_parse_accepts_other_denominators():
    assert Q4.parse("27/4") == Q4(27)
    assert Q4.parse("3/2") == Q4(6)
    assert Q4.parse("5") == Q4(20)


# ------------------------------------------------------------ partitions


def test_vertex_partition_examples():
    for g, e, want in [
        (cycle(3), (0, 1), (1, 1, 1)),
        (cycle(4), (0, 1), (2, 2, 0)),
        (build_graph(3, [(0, 1), (1, 2)]), (0, 1), (1, 2, 0)),
    ]:
        p = vertex_partition(g, e, distances(g))
        assert (p.n_u, p.n_v, p.n_0) == want


def test_edge_partition_examples():
    assert tuple(vars(edge_partition(cycle(3), (0, 1), distances(cycle(3)))).values()) == (1, 1, 1)
    assert tuple(vars(edge_partition(cycle(4), (0, 1), distances(cycle(4)))).values()) == (1, 1, 2)


def test_missing_edge():
    with pytest.raises(EdgeNotFoundError):
        edge_partition(P4, (0, 2), distances(P4))
    with pytest.raises(EdgeNotFoundError):
        vertex_partition(P4, (0, 9), distances(P4))


def test_tree_edges_of_unicyclic_graphs_have_single_equidistant_edge():
    for spec, g in unicyclic_graphs(GenerationTask(8)):
        dm = distances(g)
        cyc_edges = {tuple(sorted((i, (i + 1) % spec.g))) for i in range(spec.g)}
        for e in g.edges:
            p = edge_partition(g, e, dm)
            assert p.m_u + p.m_v + p.m_0 == g.m and p.m_0 >= 1
            if e not in cyc_edges:
                assert p.m_0 == 1
            elif spec.g % 2 == 0:
                assert p.m_0 == 2


# --------------------------------------------------------------- indices


@pytest.mark.parametrize(
    "g, want",
    [
        (cycle(3), {"Sz": 3, "Sz_star": Fraction(27, 4), "Sz_e": 3, "Sz_e_star": Fraction(27, 4), "W": 3}),
        (cycle(4), {"Sz": 16, "Sz_star": 16, "Sz_e": 4, "Sz_e_star": 16, "W": 8}),
        (P4, {"W": 10, "W_e_min": 1, "W_e_line": 4, "Sz_e": 1, "Sz_e_star": Fraction(19, 4)}),
    ],
)
def test_index_suite_examples(g, want):
    s = index_suite(g)
    for k, v in want.items():
        assert s.get(k) == Q4.of(v)


def test_closed_form_examples():
    assert sz_e_star_closed_form(cycle(3)) == Q4(27)
    assert sz_e_star_closed_form(P4) == Q4(19)
    assert sz_e_star_closed_form(cycle(5)) == Q4(125)


def test_indices_match_networkx_oracle():
    graphs = [g for n in range(3, 9) for _, g in unicyclic_graphs(GenerationTask(n))]
    graphs += [t.tree for n in range(2, 9) for t in rooted_trees(n)]
    for g in graphs:
        ours = index_suite(g)
        ref = oracle_indices(to_nx(g))
        for kind in INDEX_KINDS:
            assert ours.get(kind).as_fraction() == ref[kind], (kind, g)


def test_index_value_agrees_with_suite():
    rng = random.Random(2)
    graphs = [g for _, g in unicyclic_graphs(GenerationTask(9))]
    for g in rng.sample(graphs, 40):
        s = index_suite(g)
        for kind in INDEX_KINDS:
            assert index_value(g, kind) == s.get(kind)
    with pytest.raises(ValueError):
        index_value(P4, "PI")


def test_sz_e_star_shortcut():
    for _, g in unicyclic_graphs(GenerationTask(7)):
        assert sz_e_star(g) == index_suite(g).Sz_e_star


def test_index_suite_round_trip():
    s = index_suite(parse_graph6("Bw"))
    assert IndexSuite.from_dict(s.to_dict()) == s
    assert s.to_dict()["Sz_e_star"] == {"exact": "27/4", "decimal": 6.75}


def test_bipartite_graphs_have_equal_szeged_variants():
    for spec, g in unicyclic_graphs(GenerationTask(8)):
        s = index_suite(g)
        if spec.g % 2 == 0:
            assert s.Sz_star == s.Sz
        else:
            assert s.Sz_star > s.Sz


def test_edge_szeged_exceeds_edge_wiener_off_trees():
    for _, g in unicyclic_graphs(GenerationTask(7)):
        s = index_suite(g)
        assert s.Sz_e > s.W_e_min
    for t in rooted_trees(7):
        s = index_suite(t.tree)
        assert s.Sz_e == s.W_e_min


# ---------------------------------------------------------- decomposition


def test_decomposition_triangle():
    rep = decompose_unicyclic(cyc(SINGLE, SINGLE, SINGLE))
    assert rep.consistent()
    assert rep.direct == Q4(27)
    assert rep.sz_e_direct == 3
    assert rep.delta_g == 1


def test_decomposition_examples():
    rep4 = decompose_unicyclic(cyc(path(2), SINGLE, SINGLE, SINGLE))
    assert rep4.consistent() and rep4.delta_g == 0
    rep5 = decompose_unicyclic(cyc(path(3), SINGLE, SINGLE, SINGLE, SINGLE))
    assert rep5.consistent() and rep5.delta_g == 1


def test_tree_edge_sum_uses_min_convention():
    # triangle with a rooted P3 at one vertex; the line-graph edge Wiener
    # convention would give a different tree-edge sum
    spec = cyc(path(3), SINGLE, SINGLE)
    rep = decompose_unicyclic(spec)
    assert rep.s1_direct == 3
    assert rep.s1 == 3
    assert rep.consistent()
    t = spec.trees[0]
    tr = distances(t.tree).transmissions[t.root]
    we = index_suite(t.tree)
    assert tree_edge_sum(spec.n, [we.W_e_min, 0, 0], [tr, 0, 0], [2, 0, 0]) == 3
    assert tree_edge_sum(spec.n, [we.W_e_line, 0, 0], [tr, 0, 0], [2, 0, 0]) == 4


def _cycle_sum(n, g, tree_edges, cross_ordered, delta_ordered):
    x = (g - 1) // 2
    odd = g % 2
    total = g * x * x + x * g * (n - g) - odd * x * (n - g)
    for i in range(g):
        for j in range(g):
            if cross_ordered or i < j:
                total += tree_edges[i] * tree_edges[j] * cycle_distance(g, i, j)
            if odd and i != j and (delta_ordered or i < j):
                total -= tree_edges[i] * tree_edges[j]
    return total


def test_cycle_sum_pair_conventions():
    """Only ordered pairs in the distance cross term together with unordered
    pairs in the odd-girth correction reproduce the direct value."""
    spec = cyc(path(2), path(2), SINGLE, SINGLE, SINGLE)
    rep = decompose_unicyclic(spec)
    te = [t.tree.m for t in spec.trees]
    assert cycle_edge_sum(spec.n, spec.g, te) == rep.s2_direct
    assert _cycle_sum(spec.n, spec.g, te, True, False) == rep.s2_direct
    for conv in [(False, False), (True, True), (False, True)]:
        assert _cycle_sum(spec.n, spec.g, te, *conv) != rep.s2_direct


def test_decomposition_round_trip():
    rep = decompose_unicyclic(cyc(star(3), path(2), SINGLE, SINGLE, SINGLE))
    assert DecompositionReport.from_dict(rep.to_dict()) == rep


def test_decomposition_all_unicyclic_up_to_nine():
    for spec, _ in unicyclic_graphs(GenerationTask(9)):
        assert decompose_unicyclic(spec).consistent()


def _union(g0, g1, u):
    """Glue ``g1`` (vertex 0) onto vertex ``u`` of ``g0``."""
    G = nx.disjoint_union(g0, g1)
    G = nx.contracted_nodes(G, u, g0.number_of_nodes(), self_loops=False)
    return nx.convert_node_labels_to_integers(G)


def test_gluing_locality():
    """Attaching different graphs with the same edge count at a vertex of
    ``G0`` leaves the contributions of the ``G0`` edges unchanged."""
    rng = random.Random(20)
    done = 0
    while done < 200:
        n0 = rng.randint(3, 8)
        g0 = nx.random_labeled_tree(n0, seed=rng.randint(0, 10**6))
        if rng.random() < 0.7:
            non = [(a, b) for a in range(n0) for b in range(a + 1, n0) if not g0.has_edge(a, b)]
            g0.add_edge(*rng.choice(non))
        k = rng.randint(1, 6)
        g1 = nx.random_labeled_tree(k + 1, seed=rng.randint(0, 10**6))
        g2 = nx.random_labeled_tree(k + 1, seed=rng.randint(0, 10**6))
        u = rng.randrange(n0)
        sums = []
        for gx in (g1, g2):
            G = _union(g0, gx, u)
            g = build_graph(G.number_of_nodes(), list(G.edges))
            dm = distances(g)
            sums.append(sum(p.m_u * p.m_v for p in (edge_partition(g, tuple(sorted(e)), dm) for e in g0.edges)))
        assert sums[0] == sums[1]
        done += 1


def test_gluing_shift_per_edge():
    """Each ``G0`` edge gains ``|E(G1)|`` on the side nearer the glue vertex."""
    g0 = nx.cycle_graph(5)
    g1 = nx.path_graph(4)
    G = _union(g0, g1, 0)
    g = build_graph(G.number_of_nodes(), list(G.edges))
    base = build_graph(5, list(g0.edges))
    for e in base.edges:
        p0 = edge_partition(base, e, distances(base))
        p = edge_partition(g, e, distances(g))
        d0 = distances(base).dist
        near_u = d0[e[0]][0] < d0[e[1]][0]
        near_v = d0[e[1]][0] < d0[e[0]][0]
        assert p.m_u == p0.m_u + 3 * near_u
        assert p.m_v == p0.m_v + 3 * near_v


def test_spec_n():
    spec = UnicyclicSpec(3, (from_level_sequence((0, 1, 1)), SINGLE, SINGLE))
    assert spec.n == 5 and assemble(spec).m == 5
