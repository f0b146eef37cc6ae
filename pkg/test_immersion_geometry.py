# -*- coding: utf-8 -*-
"""
等角浸入测试：K4 与准 Petersen 构造、一点/两点浸入、对径翻转、流与浸入互转
"""

import math

import numpy as np
import pytest

from errors import PreconditionError
from graph_generators import complete_bipartite, complete_graph, cube_graph, petersen_graph, quasi_petersen
from immersion_geometry import EQUIANGLE, immersion_engine
from models.graph import Orientation
from models.immersion import DirectedArc, Immersion
from vector_flow import vector_flow_engine


def test_k4_latitude():
    """K4 的余纬度即正四面体的 arccos(-1/3)"""
    points = immersion_engine.k4_immersion().points
    for i in range(1, 4):
        assert abs(math.acos(float(points[i][2])) - math.acos(-1.0 / 3.0)) <= 1e-9


def test_k4_immersion_is_equiangular(k4):
    immersion = immersion_engine.k4_immersion()
    report = immersion_engine.check_equiangular(k4, immersion)
    assert report.valid
    assert immersion.distinct_points()


def test_petersen_pipeline(petersen):
    immersion = immersion_engine.quasi_petersen_immersion(1, 2, 5)
    report = immersion_engine.check_equiangular(petersen, immersion)
    assert report.max_deviation <= 1e-9
    assert immersion.distinct_points()
    flow = immersion_engine.immersion_to_flow(petersen, immersion)
    check = vector_flow_engine.verify_vector_flow(petersen, flow)
    assert check.max_kcl_residual <= 1e-9
    assert check.max_norm_deviation <= 1e-12


@pytest.mark.parametrize("a, b, p", [(2, 3, 7), (2, 2, 5), (3, 2, 8)])
def test_quasi_petersen_family(a, b, p):
    graph = quasi_petersen(a, b, p)
    immersion = immersion_engine.quasi_petersen_immersion(a, b, p)
    assert immersion_engine.check_equiangular(graph, immersion).valid
    assert immersion.distinct_points()


@pytest.mark.parametrize("a, b, p", [(1, 1, 6), (3, 2, 6)])
def test_quasi_petersen_boundary_rejected(a, b, p):
    with pytest.raises(PreconditionError):
        immersion_engine.quasi_petersen_immersion(a, b, p)


@pytest.mark.parametrize("fixture_name", ["k33", "q3"])
def test_bipartite_immersions(request, fixture_name):
    """两点、一点浸入均等角，导出的流与极轴正交"""
    graph = request.getfixturevalue(fixture_name)
    two = immersion_engine.two_point_immersion(graph)
    one = immersion_engine.one_point_immersion(graph)
    for immersion in (two, one):
        assert immersion_engine.check_equiangular(graph, immersion).valid
        flow = immersion_engine.immersion_to_flow(graph, immersion)
        assert all(abs(x[2]) <= 1e-9 for x in flow.values.values())
    assert len({tuple(np.round(p, 9)) for p in two.points.values()}) == 2
    assert len({tuple(np.round(p, 9)) for p in one.points.values()}) == 1
    assert all(arc.length == pytest.approx(2 * math.pi) for arc in one.arcs.values())


def test_two_point_requires_bipartite(petersen):
    with pytest.raises(PreconditionError):
        immersion_engine.two_point_immersion(petersen)


def test_antipodal_flip_is_involution(k33):
    immersion = immersion_engine.two_point_immersion(k33)
    twice = immersion_engine.antipodal_flip(immersion_engine.antipodal_flip(immersion, 0), 0)
    for vertex in k33.vertices:
        assert np.allclose(twice.point(vertex), immersion.point(vertex))
    for edge_id in k33.edge_ids:
        assert twice.arc(edge_id).length == pytest.approx(immersion.arc(edge_id).length)
        assert np.allclose(twice.arc(edge_id).start_vector, immersion.arc(edge_id).start_vector)


def test_antipodal_flip_keeps_equiangularity(k33):
    immersion = immersion_engine.antipodal_flip(immersion_engine.two_point_immersion(k33), 4)
    assert immersion_engine.check_equiangular(k33, immersion).valid


def test_antipodal_flip_long_arc():
    """轴和起点不变，终点翻转后弧长 3π/2 变为 π/2（原弧的一段），再翻转一次还原"""
    arc = DirectedArc((0.0, 0.0, 1.0), (1.0, 0.0, 0.0), 1.5 * math.pi)
    immersion = Immersion({0: [1.0, 0.0, 0.0], 1: [0.0, -1.0, 0.0]}, {0: arc}, Orientation({0: (0, 1)}))
    flipped = immersion_engine.antipodal_flip(immersion, 1)
    short = flipped.arc(0)
    assert short.length == pytest.approx(math.pi / 2)
    assert short.axis == arc.axis
    assert np.allclose(short.end_vector, flipped.point(1))
    assert np.allclose(flipped.point(1), [0.0, 1.0, 0.0])
    assert immersion_engine.antipodal_flip(flipped, 1).arc(0).length == pytest.approx(1.5 * math.pi)

    moved = immersion_engine.antipodal_flip(immersion, 0).arc(0)
    assert moved.length == pytest.approx(math.pi / 2)
    assert np.allclose(moved.start_vector, [-1.0, 0.0, 0.0])
    assert np.allclose(moved.end_vector, immersion.point(1))


def rotate_about(axis, vector, angle):
    k = axis / np.linalg.norm(axis)
    return (vector * math.cos(angle) + np.cross(k, vector) * math.sin(angle)
            + k * float(np.dot(k, vector)) * (1.0 - math.cos(angle)))


@pytest.mark.parametrize("fixture_name, build", [
    ("k4", lambda graph: immersion_engine.k4_immersion()),
    ("petersen", lambda graph: immersion_engine.quasi_petersen_immersion(1, 2, 5)),
    ("k33", immersion_engine.two_point_immersion),
    ("q3", immersion_engine.one_point_immersion),
])
def test_immersion_to_flow_is_stable(request, fixture_name, build):
    """流的残差受等角偏差控制；把一条弧绕起点转 1e-9 后残差的增量不超过 10 倍偏差"""
    graph = request.getfixturevalue(fixture_name)
    immersion = build(graph)
    base = immersion_engine.check_equiangular(graph, immersion)
    residual = vector_flow_engine.verify_vector_flow(
        graph, immersion_engine.immersion_to_flow(graph, immersion)).max_kcl_residual
    assert residual <= 10.0 * base.max_deviation + 10.0 * immersion.tolerance.unit

    edge_id = min(graph.edge_ids)
    arc = immersion.arc(edge_id)
    arcs = dict(immersion.arcs)
    arcs[edge_id] = DirectedArc(tuple(rotate_about(arc.start_vector, arc.axis_vector, 1e-9)), arc.start, arc.length)
    nudged = Immersion(immersion.points, arcs, immersion.orientation, immersion.tolerance)
    report = immersion_engine.check_equiangular(graph, nudged)
    assert report.valid
    assert report.max_deviation >= 5e-10
    drift = vector_flow_engine.verify_vector_flow(
        graph, immersion_engine.immersion_to_flow(graph, nudged)).max_kcl_residual
    assert drift <= residual + 10.0 * (report.max_deviation + report.endpoint_error)


def test_reverse_arc():
    arc = DirectedArc((0.0, 1.0, 0.0), (0.0, 0.0, 1.0), math.pi / 2)
    back = immersion_engine.reverse_arc(arc)
    assert np.allclose(back.start_vector, arc.end_vector)
    assert np.allclose(back.end_vector, arc.start_vector)
    assert np.allclose(immersion_engine.departure_tangent(back, 'start'),
                       immersion_engine.departure_tangent(arc, 'end'))


def test_broken_immersion_detected(k4):
    immersion = immersion_engine.k4_immersion()
    points = dict(immersion.points)
    points[2] = -points[2]
    broken = Immersion(points, immersion.arcs, immersion.orientation, immersion.tolerance)
    assert not immersion_engine.check_equiangular(k4, broken).valid
    with pytest.raises(PreconditionError):
        immersion_engine.immersion_to_flow(k4, broken)


def k4_flow():
    return immersion_engine.immersion_to_flow(complete_graph(4), immersion_engine.k4_immersion())


def petersen_flow():
    return immersion_engine.immersion_to_flow(petersen_graph(), immersion_engine.quasi_petersen_immersion(1, 2, 5))


def k33_flow():
    return vector_flow_engine.embed_flow(vector_flow_engine.s1_flow_R3(complete_bipartite(3, 3)), 3)


def q3_flow():
    return vector_flow_engine.embed_flow(vector_flow_engine.s1_flow_R3(cube_graph()), 3)


@pytest.mark.parametrize("fixture_name, make_flow", [
    ("k4", k4_flow), ("petersen", petersen_flow), ("k33", k33_flow), ("q3", q3_flow)])
def test_flow_immersion_round_trip(request, fixture_name, make_flow):
    graph = request.getfixturevalue(fixture_name)
    flow = make_flow()
    immersion = immersion_engine.flow_to_immersion(graph, flow)
    back = immersion_engine.immersion_to_flow(graph, immersion)
    assert back.orientation.arcs == flow.orientation.arcs
    for edge_id in graph.edge_ids:
        assert np.allclose(back.values[edge_id], flow.values[edge_id], atol=1e-9)


def test_flow_to_immersion_rejects_s1(k33):
    with pytest.raises(PreconditionError):
        immersion_engine.flow_to_immersion(k33, vector_flow_engine.s1_flow_R3(k33))


def test_sample_polylines(k4):
    immersion = immersion_engine.k4_immersion()
    polylines = immersion_engine.sample_polylines(immersion, 5)
    assert sorted(polylines) == list(k4.edge_ids)
    for edge_id, points in polylines.items():
        assert len(points) == 5
        arc = immersion.arc(edge_id)
        assert np.allclose(points[0], arc.start_vector)
        assert np.allclose(points[-1], arc.end_vector)
        assert all(abs(np.linalg.norm(p) - 1.0) <= 1e-12 for p in points)


def test_construct_dispatch(k33):
    graph, immersion = immersion_engine.construct('quasi-petersen', a=1, b=2, p=5)
    assert graph.num_vertices == 10
    graph, immersion = immersion_engine.construct('one-point', graph=k33)
    assert graph is k33
    with pytest.raises(PreconditionError):
        immersion_engine.construct('two-point')
    with pytest.raises(PreconditionError):
        immersion_engine.construct('hexagon')


def test_equiangle_constant():
    assert EQUIANGLE == pytest.approx(2 * math.pi / 3)
