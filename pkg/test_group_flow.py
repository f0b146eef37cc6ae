# -*- coding: utf-8 -*-
"""
群流测试：校验、割平衡、穷举求解、Z3 构造、阶相同的群以及归约后的流提升
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import BudgetExhaustedError, ParseError, PreconditionError
from graph_core import graph_engine
from graph_generators import (complete_graph, enumerate_cubic_multigraphs, petersen_graph,
                              random_regular, two_triangles_with_bridge)
from group_flow import group_flow_engine
from models.graph import Multigraph
from models.group import AbelianGroup, GroupFlow
from services.config_manager import config_manager

Z3 = AbelianGroup.cyclic(3)
Z4 = AbelianGroup.cyclic(4)
Z5 = AbelianGroup.cyclic(5)
KLEIN = AbelianGroup.klein()


def test_group_parse_and_order():
    group = AbelianGroup.parse('Z2xZ2')
    assert group == KLEIN
    assert group.order == 4
    assert group.label == 'z2xz2'
    assert len(group.nonzero_elements()) == 3
    with pytest.raises(ParseError):
        AbelianGroup.parse('q5')
    with pytest.raises(PreconditionError):
        AbelianGroup((1,))


def test_verify_circulation_reports_violations(k4):
    flow = GroupFlow(Z3, {e: (1,) for e in k4.edge_ids}, k4.default_orientation())
    report = group_flow_engine.verify_circulation(k4, flow)
    assert not report.is_circulation
    assert 0 in report.kcl_violations


def test_verify_circulation_rejects_foreign_element(k4):
    values = {e: (1,) for e in k4.edge_ids}
    values[0] = (7,)
    with pytest.raises(PreconditionError):
        group_flow_engine.verify_circulation(k4, GroupFlow(Z3, values, k4.default_orientation()))


@pytest.mark.parametrize("group, verdict", [
    (Z4, 'proven-none'),
    (Z5, 'found'),
    (Z3, 'proven-none'),
    (KLEIN, 'proven-none'),
])
def test_petersen_flows(petersen, group, verdict):
    result = group_flow_engine.solve_flow_exhaustive(petersen, group)
    assert result.verdict == verdict
    if verdict == 'found':
        assert group_flow_engine.verify_circulation(petersen, result.flow).nowhere_zero
    else:
        assert result.flow is None
        with pytest.raises(PreconditionError):
            result.require_flow()


def test_bipartite_cubic_z3(k33, q3):
    for graph in (k33, q3):
        flow = group_flow_engine.z3_flow_bipartite_cubic(graph)
        assert group_flow_engine.verify_circulation(graph, flow).nowhere_zero
        assert group_flow_engine.solve_flow_exhaustive(graph, Z3).verdict == 'found'


def test_z3_construction_rejects_petersen(petersen):
    with pytest.raises(PreconditionError):
        group_flow_engine.z3_flow_bipartite_cubic(petersen)


def test_solver_is_deterministic(k4):
    first = group_flow_engine.solve_flow_exhaustive(k4, Z4)
    second = group_flow_engine.solve_flow_exhaustive(k4, Z4)
    assert first.verdict == 'found'
    assert first.flow.values == second.flow.values


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_bridge_obstruction(bridge_graph, k):
    result = group_flow_engine.solve_flow_exhaustive(bridge_graph, AbelianGroup.cyclic(k))
    assert result.verdict == 'proven-none'


def test_budget_exhaustion(petersen, monkeypatch):
    """预算为 0 且每个节点都检查时，搜索必然报告预算耗尽"""
    monkeypatch.setitem(config_manager._configs['SOLVER_CONFIG'], 'check_interval', 1)
    result = group_flow_engine.solve_flow_exhaustive(petersen, Z4, budget_ms=0)
    assert result.verdict == 'budget-exhausted'
    with pytest.raises(BudgetExhaustedError):
        result.require_flow()


def test_cut_balance_on_random_circulations(bridge_graph):
    """1000 个随机循环在随机顶点子集上都满足割平衡，割边上的值恒为零"""
    rng = np.random.default_rng(20240501)
    group = AbelianGroup.cyclic(6)
    for _ in range(1000):
        flow = group_flow_engine.random_circulation(bridge_graph, group, rng)
        assert group_flow_engine.verify_circulation(bridge_graph, flow).is_circulation
        assert flow.values[6] == (0,)
        subset = [v for v in bridge_graph.vertices if rng.random() < 0.5]
        assert group_flow_engine.verify_cut_balance(bridge_graph, flow, subset)


PETERSEN = petersen_graph()


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), subset=st.sets(st.integers(0, 9)),
       moduli=st.sampled_from([(2,), (5,), (2, 2), (3, 4)]))
def test_cut_balance_property(seed, subset, moduli):
    flow = group_flow_engine.random_circulation(PETERSEN, AbelianGroup(moduli), np.random.default_rng(seed))
    assert group_flow_engine.verify_cut_balance(PETERSEN, flow, sorted(subset))


def test_reverse_edge_normalize_commutes(k4):
    """反转后再校验与先校验的结论一致，被反转边取负"""
    flow = group_flow_engine.solve_flow_exhaustive(k4, Z5).flow
    normalized = group_flow_engine.reverse_edge_normalize(flow, lambda e, init, ter, x: e % 2 == 0)
    assert group_flow_engine.verify_circulation(k4, normalized).nowhere_zero
    for edge_id in k4.edge_ids:
        if edge_id % 2:
            assert normalized.values[edge_id] == Z5.neg(flow.values[edge_id])
            assert normalized.orientation.arcs[edge_id] == tuple(reversed(flow.orientation.arcs[edge_id]))
        else:
            assert normalized.values[edge_id] == flow.values[edge_id]


def test_group_order_equivalence():
    """顶点数不超过 8 的连通三正则多重图：Z4 流存在当且仅当 Z2 x Z2 流存在"""
    count = 0
    for graph in enumerate_cubic_multigraphs(8):
        z4 = group_flow_engine.solve_flow_exhaustive(graph, Z4, budget_ms=None)
        klein = group_flow_engine.solve_flow_exhaustive(graph, KLEIN, budget_ms=None)
        assert 'budget-exhausted' not in (z4.verdict, klein.verdict)
        assert (z4.verdict == 'found') == (klein.verdict == 'found')
        count += 1
    assert count > 10


def test_lift_through_odd_split():
    graph = Multigraph.from_pairs([0, 1], [(0, 1)] * 5)
    reduced, trace = graph_engine.reduce_to_cubic(graph)
    flow = group_flow_engine.solve_flow_exhaustive(reduced, Z3).require_flow()
    lifted = group_flow_engine.lift_flow(graph, reduced, trace, flow)
    assert group_flow_engine.verify_circulation(graph, lifted).nowhere_zero
    assert lifted.orientation.arcs == graph.default_orientation().arcs


@pytest.mark.parametrize("graph", [complete_graph(5), random_regular(4, 6, seed=7)])
def test_reduce_solve_lift(graph):
    """归约 + Z5 求解 + 提升得到原图上的无处为零流"""
    reduced, trace = graph_engine.reduce_to_cubic(graph)
    flow = group_flow_engine.solve_flow_exhaustive(reduced, Z5).require_flow()
    lifted = group_flow_engine.lift_flow(graph, reduced, trace, flow)
    assert set(lifted.values) == set(graph.edge_ids)
    assert group_flow_engine.verify_circulation(graph, lifted).nowhere_zero


def test_lift_rejects_unverified_flow(k4):
    reduced, trace = graph_engine.reduce_to_cubic(k4)
    bogus = GroupFlow(Z5, {e: (1,) for e in k4.edge_ids}, k4.default_orientation())
    with pytest.raises(PreconditionError):
        group_flow_engine.lift_flow(k4, reduced, trace, bogus)


def test_lift_rejects_mismatched_trace(k4):
    reduced, trace = graph_engine.reduce_to_cubic(two_triangles_with_bridge())
    flow = group_flow_engine.random_circulation(reduced, Z5, np.random.default_rng(0))
    with pytest.raises(PreconditionError):
        group_flow_engine.lift_flow(k4, reduced, trace, flow)
