# -*- coding: utf-8 -*-
"""
测试公共夹具
"""

import os
import sys

import pytest
from loguru import logger

# 添加项目根目录到Python路径
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from graph_generators import (complete_bipartite, complete_graph, cube_graph, petersen_graph,
                              two_triangles_with_bridge)

logger.remove()


@pytest.fixture(autouse=True)
def quiet_logger():
    """每个测试结束后移除命令行测试可能添加的日志输出"""
    yield
    logger.remove()


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def k33():
    return complete_bipartite(3, 3)


@pytest.fixture
def q3():
    return cube_graph()


@pytest.fixture
def petersen():
    return petersen_graph()


@pytest.fixture
def bridge_graph():
    return two_triangles_with_bridge()
