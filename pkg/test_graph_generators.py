# -*- coding: utf-8 -*-
"""
图族生成器测试
"""

import itertools

import networkx as nx
import pytest

from errors import PreconditionError
from graph_core import graph_engine
from graph_generators import (build_family, enumerate_cubic_multigraphs, generalized_petersen,
                              petersen_graph, quasi_petersen, random_regular)


def test_petersen_is_petersen():
    assert nx.is_isomorphic(nx.Graph(petersen_graph().to_networkx()), nx.petersen_graph())
    assert nx.is_isomorphic(generalized_petersen(5, 2).to_networkx(), petersen_graph().to_networkx())


@pytest.mark.parametrize("a, b, p", [(1, 2, 5), (2, 3, 7), (2, 2, 6), (3, 4, 9)])
def test_quasi_petersen_is_cubic(a, b, p):
    graph = quasi_petersen(a, b, p)
    assert graph.num_vertices == 2 * p
    assert graph.num_edges == 3 * p
    assert graph_engine.is_cubic(graph)


def test_quasi_petersen_half_step_gives_parallel_edges():
    """a = p/2 时 V 层由成对平行边组成，图仍为三正则"""
    graph = quasi_petersen(3, 2, 6)
    assert graph_engine.is_cubic(graph)
    layer = [tuple(sorted((e.u, e.v))) for e in graph.edges if e.u < 6 and e.v < 6]
    assert len(layer) == 6
    assert len(set(layer)) == 3


@pytest.mark.parametrize("a, b, p", [(0, 2, 5), (1, 3, 5), (1, 1, 12)])
def test_quasi_petersen_range(a, b, p):
    with pytest.raises(PreconditionError):
        quasi_petersen(a, b, p)


def test_generalized_petersen_range():
    with pytest.raises(PreconditionError):
        generalized_petersen(6, 3)


def test_build_family():
    assert build_family('k4').num_edges == 6
    assert build_family('complete-bipartite', m=3, n=3).num_edges == 9
    assert build_family('quasi-petersen', a=1, b=2, p=5).num_vertices == 10
    assert graph_engine.is_cubic(build_family('prism', n=4))


def test_build_family_errors():
    with pytest.raises(PreconditionError):
        build_family('dodecahedron')
    with pytest.raises(PreconditionError):
        build_family('cycle')


def test_random_regular_is_reproducible():
    first = random_regular(3, 8, seed=11)
    second = random_regular(3, 8, seed=11)
    assert first == second
    assert graph_engine.is_cubic(first)


def test_enumerate_small_cubic_multigraphs():
    """2 个顶点的 theta 图，4 个顶点的 K4 与双边四圈"""
    graphs = list(enumerate_cubic_multigraphs(4))
    assert [g.num_vertices for g in graphs] == [2, 4, 4]
    assert any(nx.is_isomorphic(g.to_networkx(), build_family('k4').to_networkx()) for g in graphs)


def test_enumerate_cubic_multigraphs_unique():
    graphs = list(enumerate_cubic_multigraphs(8))
    assert all(graph_engine.is_cubic(g) and not g.has_loops() for g in graphs)
    assert all(nx.is_connected(g.to_networkx()) for g in graphs)
    by_order = itertools.groupby(graphs, key=lambda g: g.num_vertices)
    for _, group in by_order:
        members = [g.to_networkx() for g in group]
        for first, second in itertools.combinations(members, 2):
            assert not nx.is_isomorphic(first, second)
