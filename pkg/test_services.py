# -*- coding: utf-8 -*-
"""
基础服务测试：GF(2) 与整数线性代数、二分法、规范化 JSON、文档解析、配置管理
"""

import hashlib
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from base_engine import Deadline
from errors import BracketError, ParseError, PreconditionError
from models.graph import Multigraph
from models.schemas import GraphDocument
from services import gf2
from services.config_manager import config_manager
from services.geometry import bisect_root, spherical_angle
from services.lattice import bareiss_rank, saturation_basis
from services.serialization import load_document, parse_document, sha256_text, to_canonical_json


@settings(max_examples=100, deadline=None)
@given(n=st.integers(1, 8), data=st.data())
def test_gf2_complement_dimension(n, data):
    rows = data.draw(st.lists(st.integers(0, (1 << n) - 1), max_size=8))
    space = gf2.subspace(rows, n)
    complement = gf2.orthogonal_complement(space)
    assert space.dim + complement.dim == n
    for a in space.basis:
        for b in complement.basis:
            assert gf2.parity(a & b) == 0


def test_gf2_solve_combination():
    rows = [0b011, 0b110]
    combo = gf2.solve_combination(0b101, rows, 3)
    assert combo == 0b11
    assert gf2.solve_combination(0b001, rows, 3) is None


def test_enumerate_subspaces_count():
    """Z_2^3 共有 1 + 7 + 7 + 1 个子空间"""
    assert len(gf2.enumerate_subspaces(3)) == 16


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=5))
def test_bareiss_rank_matches_numpy(rows):
    assert bareiss_rank(rows) == np.linalg.matrix_rank(np.array(rows, dtype=float))


def test_saturation_basis():
    assert [tuple(abs(x) for x in v) for v in saturation_basis([[2, 4]])] == [(1, 2)]
    basis = saturation_basis([[1, 1], [1, -1]])
    assert len(basis) == 2
    assert abs(round(np.linalg.det(np.array(basis, dtype=float)))) == 1


def test_bisect_root():
    root = bisect_root(lambda x: x * x - 2.0, 0.0, 2.0)
    assert abs(root - math.sqrt(2.0)) <= 1e-11
    with pytest.raises(BracketError):
        bisect_root(lambda x: x * x + 1.0, -1.0, 1.0)


def test_spherical_angle():
    assert spherical_angle([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]) == pytest.approx(math.pi / 2)


def test_canonical_json_layout():
    assert to_canonical_json({10: 1, 2: [1.5, 2]}) == '{\n  "2": [1.5, 2],\n  "10": 1\n}\n'
    assert to_canonical_json(0.1) == '0.10000000000000001\n'
    assert to_canonical_json(1.0) == '1.0\n'
    assert to_canonical_json({'a': None, 'b': True}) == '{\n  "a": null,\n  "b": true\n}\n'


def test_canonical_json_is_stable():
    data = {'values': {3: np.array([0.5, -0.25]), 1: [1, 2]}, 'name': '图'}
    assert to_canonical_json(data) == to_canonical_json(dict(reversed(list(data.items()))))


def test_sha256_text():
    assert sha256_text('') == hashlib.sha256(b'').hexdigest()


def test_parse_document_rejects_dangling_endpoint():
    text = '{"vertices": [0, 1], "edges": [{"id": 0, "u": 0, "v": 2}]}'
    with pytest.raises(ParseError):
        parse_document(GraphDocument, text)


def test_parse_document_rejects_orientation_mismatch():
    text = ('{"vertices": [0, 1], "edges": [{"id": 0, "u": 0, "v": 1}],'
            ' "orientation": {"0": {"init": 0, "ter": 0}}}')
    with pytest.raises(ParseError):
        parse_document(GraphDocument, text)


def test_parse_document_reads_graph():
    text = '{"vertices": [0, 1], "edges": [{"id": 0, "u": 0, "v": 1}, {"id": 1, "u": 1, "v": 0}]}'
    graph = parse_document(GraphDocument, text).to_graph()
    assert graph.num_edges == 2


def test_load_document_missing_file(tmp_path):
    with pytest.raises(ParseError):
        load_document(GraphDocument, str(tmp_path / 'missing.json'))


def test_loops_need_permission():
    with pytest.raises(PreconditionError):
        Multigraph.from_pairs([0, 1], [(0, 1), (0, 0)])
    graph = Multigraph.from_pairs([0, 1], [(0, 1), (0, 0)], allow_loops=True)
    assert graph.has_loops()


def test_config_env_override(monkeypatch):
    monkeypatch.setenv('VECFLOW_BUDGET_MS', '250')
    monkeypatch.setenv('VECFLOW_LOG_LEVEL', 'debug')
    config_manager.refresh_config()
    try:
        assert config_manager.default_budget_ms() == 250.0
        assert config_manager.get_log()['level'] == 'DEBUG'
        monkeypatch.setenv('VECFLOW_BUDGET_MS', 'soon')
        config_manager.refresh_config()
        assert config_manager.default_budget_ms() == 10000.0
    finally:
        monkeypatch.delenv('VECFLOW_BUDGET_MS', raising=False)
        monkeypatch.delenv('VECFLOW_LOG_LEVEL', raising=False)
        config_manager.refresh_config()


def test_deadline_remaining():
    assert Deadline(None).remaining_ms() is None
    assert not Deadline(None).expired()
    assert Deadline(0.0).remaining_ms() == 0.0
    assert 0.0 < Deadline(1e6).remaining_ms() <= 1e6
