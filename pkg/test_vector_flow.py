# -*- coding: utf-8 -*-
"""
单位向量流测试：S^0 / S^1 / R3 构造、分解合成、S^6 流水线、注入迁移与流值索引
"""

import numpy as np
import pytest

from errors import PreconditionError
from graph_generators import complete_graph, cycle_graph, quasi_petersen
from immersion_geometry import immersion_engine
from models.vector import Tolerance, VectorFlow
from rank_algebra import rank_algebra_engine
from vector_flow import vector_flow_engine


def random_rotation(rng):
    """均匀随机的三维旋转（行列式为 +1）"""
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def k4_s2_flow():
    return immersion_engine.immersion_to_flow(complete_graph(4), immersion_engine.k4_immersion())


def petersen_s2_flow():
    return immersion_engine.immersion_to_flow(quasi_petersen(1, 2, 5),
                                              immersion_engine.quasi_petersen_immersion(1, 2, 5))


def test_verify_detects_residual(k4):
    values = {e: [1.0, 0.0] for e in k4.edge_ids}
    flow = VectorFlow(2, values, k4.default_orientation(), Tolerance.from_config())
    report = vector_flow_engine.verify_vector_flow(k4, flow)
    assert not report.valid
    assert report.max_kcl_residual == pytest.approx(3.0)
    assert report.max_norm_deviation == 0.0


def test_verify_detects_zero_edge(k4):
    flow = k4_s2_flow()
    values = dict(flow.values)
    values[0] = np.zeros(3)
    report = vector_flow_engine.verify_vector_flow(k4, VectorFlow(3, values, flow.orientation, flow.tolerance))
    assert report.zero_edges == [0]
    assert not report.valid


@pytest.mark.parametrize("graph", [cycle_graph(5), complete_graph(5)])
def test_s0_flow_on_even_graph(graph):
    flow = vector_flow_engine.s0_flow_even_graph(graph)
    assert flow.dim == 1
    assert vector_flow_engine.verify_vector_flow(graph, flow).valid
    assert all(float(x[0]) == 1.0 for x in flow.values.values())


def test_s0_flow_rejects_odd_degree(k4):
    with pytest.raises(PreconditionError):
        vector_flow_engine.s0_flow_even_graph(k4)


@pytest.mark.parametrize("fixture_name", ["k33", "q3"])
def test_s1_flow_bipartite_cubic(request, fixture_name):
    graph = request.getfixturevalue(fixture_name)
    flow = vector_flow_engine.s1_flow_R3(graph)
    assert flow.dim == 2
    assert vector_flow_engine.verify_vector_flow(graph, flow).valid


def test_r3_flow_exhaustive(k33, k4, petersen):
    """R3 流存在当且仅当 Z3 流存在"""
    flow = vector_flow_engine.r3_flow_exhaustive(k33)
    assert flow is not None
    assert vector_flow_engine.verify_vector_flow(k33, flow).valid
    assert vector_flow_engine.r3_flow_exhaustive(k4) is None
    assert vector_flow_engine.r3_flow_exhaustive(petersen) is None


def test_embed_flow(k33):
    flow = vector_flow_engine.embed_flow(vector_flow_engine.s1_flow_R3(k33), 3)
    assert flow.dim == 3
    assert all(x[2] == 0.0 for x in flow.values.values())
    with pytest.raises(PreconditionError):
        vector_flow_engine.embed_flow(flow, 2)


def test_compose_requires_exact_coverage(k4):
    flow = k4_s2_flow()
    with pytest.raises(PreconditionError):
        vector_flow_engine.compose_decomposition(k4, [(k4, flow)], 2)
    composed = vector_flow_engine.compose_decomposition(k4, [(k4, flow), (k4, flow)], 2)
    assert composed.dim == 6
    assert vector_flow_engine.verify_vector_flow(k4, composed).valid


def test_compose_rejects_unverified_part(k4):
    bogus = VectorFlow(3, {e: [1.0, 0.0, 0.0] for e in k4.edge_ids}, k4.default_orientation(),
                       Tolerance.from_config())
    with pytest.raises(PreconditionError):
        vector_flow_engine.compose_decomposition(k4, [(k4, bogus)], 1)


@pytest.mark.parametrize("fixture_name", ["k4", "petersen"])
@pytest.mark.parametrize("strategy", ["search", "recipe"])
def test_s6_pipeline(request, fixture_name, strategy):
    graph = request.getfixturevalue(fixture_name)
    family = vector_flow_engine.find_s6_family(graph, strategy=strategy)
    for edge_id in graph.edge_ids:
        assert sum(edge_id in part for part in family.parts) == 3
    flow = vector_flow_engine.s6_pipeline(graph, strategy=strategy)
    assert flow.dim == 7
    report = vector_flow_engine.verify_vector_flow(graph, flow)
    assert report.max_kcl_residual <= 1e-9
    assert report.max_norm_deviation <= 1e-12


def test_s6_rejects_bridges(bridge_graph):
    with pytest.raises(PreconditionError):
        vector_flow_engine.s6_pipeline(bridge_graph)


def test_injection_and_blow_up_agree(petersen):
    """K4 在顶点处的注入迁移与三角形爆破给出同一个 S^2 流"""
    g = petersen_s2_flow()
    injected = vector_flow_engine.injection_flow_transfer(petersen, g, 0, complete_graph(4), k4_s2_flow(), 0)
    blown = vector_flow_engine.blow_up_flow(petersen, g, 0)
    graph = injected.injection.graph
    assert graph.num_vertices == 12
    report = vector_flow_engine.verify_vector_flow(graph, injected.flow, kcl_tolerance=1e-8)
    assert report.valid
    assert np.allclose(injected.rotation @ injected.rotation.T, np.identity(3))
    assert np.linalg.det(injected.rotation) == pytest.approx(1.0)
    assert blown.injection.graph == graph
    for edge_id in graph.edge_ids:
        assert np.allclose(blown.flow.values[edge_id], injected.flow.values[edge_id], atol=1e-12)


def test_injection_requires_s2(k4):
    flow = vector_flow_engine.embed_flow(vector_flow_engine.s6_pipeline(k4), 8)
    with pytest.raises(PreconditionError):
        vector_flow_engine.injection_flow_transfer(k4, flow, 0, k4, flow, 0)


def test_value_index_k33(k33):
    """K3,3 的平面 S^1 流：三个取值类，平衡向量只有 ±r 两种，r 的坐标为两个同号一个异号的 ±1"""
    flow = vector_flow_engine.embed_flow(vector_flow_engine.s1_flow_R3(k33), 3)
    index = vector_flow_engine.build_value_index(k33, flow)
    assert index.size == 3
    assert len(index.reversed_edges) == 3
    rows = set(vector_flow_engine.balanced_counts(k33, index).values())
    assert len(rows) == 2
    row = max(rows)
    assert tuple(-x for x in row) in rows
    assert sorted(abs(x) for x in row) == [1, 1, 1]
    assert abs(sum(row)) == 1
    assert vector_flow_engine.balanced_residual(k33, index) <= 1e-12
    assert vector_flow_engine.verify_vector_flow(k33, index.flow).valid


@pytest.mark.parametrize("nudged", [1, 2])
def test_balanced_residual_tracks_perturbation(k33, nudged):
    """同一顶点的 nudged 条出边各偏移 1e-3，残差约为 nudged * 1e-3"""
    flow = vector_flow_engine.s1_flow_R3(k33)
    vertex = flow.orientation.init(0)
    outgoing = [e for e in k33.edge_ids if flow.orientation.init(e) == vertex][:nudged]
    values = dict(flow.values)
    for edge_id in outgoing:
        values[edge_id] = values[edge_id] + np.array([0.0, 1e-3])
    perturbed = VectorFlow(2, values, flow.orientation, flow.tolerance)
    index = vector_flow_engine.build_value_index(k33, perturbed)
    residual = vector_flow_engine.balanced_residual(k33, index)
    assert residual == pytest.approx(nudged * 1e-3, abs=1e-12)
    assert residual == pytest.approx(vector_flow_engine.verify_vector_flow(k33, perturbed).max_kcl_residual,
                                     abs=1e-14)


@pytest.mark.parametrize("fixture_name", ["k33", "q3"])
def test_s1_flow_values_span_a_plane(request, fixture_name):
    graph = request.getfixturevalue(fixture_name)
    flow = vector_flow_engine.embed_flow(vector_flow_engine.s1_flow_R3(graph), 3)
    index = vector_flow_engine.build_value_index(graph, flow)
    values = np.array(index.representatives)
    assert values.shape == (3, 3)
    singular = np.linalg.svd(values @ values.T, compute_uv=False)
    assert singular[1] > 0.5
    assert singular[2] <= 1e-12


def test_canonical_sign():
    assert vector_flow_engine.canonical_sign(np.array([-0.5, -0.8660254, 0.0]), 1e-7) == -1
    assert vector_flow_engine.canonical_sign(np.array([0.6, -0.6, 0.0]), 1e-7) == 1


@pytest.mark.parametrize("fixture_name", ["k33", "q3"])
def test_s2_flow_from_klein(request, fixture_name):
    """4-流经三个偶支撑合成 S^2 流"""
    graph = request.getfixturevalue(fixture_name)
    flow = vector_flow_engine.s1_flow_R3(graph)
    certificate = rank_algebra_engine.synthesize_4flow(graph, flow)
    s2 = vector_flow_engine.s2_flow_from_klein(graph, certificate)
    assert s2.dim == 3
    assert vector_flow_engine.verify_vector_flow(graph, s2).valid


def test_injection_absorbs_rotation_of_h(petersen):
    """H 上的流先整体旋转，迁移结果不变"""
    g = petersen_s2_flow()
    h = k4_s2_flow()
    rotation = random_rotation(np.random.default_rng(7))
    rotated = VectorFlow(3, {e: rotation @ x for e, x in h.values.items()}, h.orientation, h.tolerance)
    plain = vector_flow_engine.injection_flow_transfer(petersen, g, 0, complete_graph(4), h, 0)
    turned = vector_flow_engine.injection_flow_transfer(petersen, g, 0, complete_graph(4), rotated, 0)
    for edge_id in plain.injection.graph.edge_ids:
        assert np.allclose(turned.flow.values[edge_id], plain.flow.values[edge_id], atol=1e-9)


def test_s6_pipeline_shares_one_deadline(k4, monkeypatch):
    """三个 R3 子问题共用流水线的同一个时间预算"""
    seen = []
    original = vector_flow_engine.r3_flow_exhaustive

    def recording(sub, budget_ms=None, deadline=None):
        seen.append(deadline)
        return original(sub, budget_ms, deadline)

    monkeypatch.setattr(vector_flow_engine, 'r3_flow_exhaustive', recording)
    flow = vector_flow_engine.s6_pipeline(k4, budget_ms=5000.0, strategy='recipe')
    assert len(seen) == 3
    assert all(deadline is seen[0] for deadline in seen)
    assert seen[0].budget_ms == 5000.0
    assert vector_flow_engine.verify_vector_flow(k4, flow).valid


def test_injection_rotation_tolerance_from_config(petersen, monkeypatch):
    """H 在 w 处的三元组略有变形时，收紧配置中的旋转容差即拒绝注入"""
    from services.config_manager import config_manager
    k4 = complete_graph(4)
    h = k4_s2_flow()
    first, second = (h.outward(e, 0) for e in k4.incident(0)[:2])
    normal = np.cross(first, second)
    normal = normal / np.linalg.norm(normal)
    edge_id = k4.incident(0)[0]
    angle = 5e-10
    values = dict(h.values)
    x = values[edge_id]
    values[edge_id] = (x * np.cos(angle) + np.cross(normal, x) * np.sin(angle)
                       + normal * np.dot(normal, x) * (1 - np.cos(angle)))
    skewed = VectorFlow(3, values, h.orientation, h.tolerance)
    assert vector_flow_engine.verify_vector_flow(k4, skewed).valid

    monkeypatch.setitem(config_manager._configs['TOLERANCE_CONFIG'], 'rotation', 1e-12)
    g = petersen_s2_flow()
    assert g.tolerance.rotation == 1e-12
    with pytest.raises(PreconditionError, match="旋转"):
        vector_flow_engine.injection_flow_transfer(petersen, g, 0, k4, skewed, 0)
