# -*- coding: utf-8 -*-
"""
流计算API模块
提供图生成、群流求解、等角浸入、4-流合成与校验接口
"""

import json
from datetime import datetime
from typing import Any, Dict, Optional

from fastapi import APIRouter
from loguru import logger
from pydantic import BaseModel, Field, model_validator

from errors import BudgetExhaustedError
from models.schemas import (GraphDocument, GroupFlowDocument, ImmersionDocument,
                            VectorFlowDocument)
from services.serialization import to_canonical_json

# 创建路由器
router = APIRouter(prefix="/api", tags=["流计算"])


# 请求模型定义
class GenerateRequest(BaseModel):
    """图生成请求模型"""
    family: str = Field(..., description="图族名称，如 petersen、quasi-petersen")
    params: Dict[str, int] = Field(default_factory=dict, description="图族参数")


class SolveGroupRequest(BaseModel):
    """群流求解请求模型"""
    graph: GraphDocument
    group: str = Field(..., description="群，如 z4、z2xz2")
    budget_ms: Optional[float] = Field(None, gt=0, description="时间预算（毫秒）")


class ImmerseRequest(BaseModel):
    """浸入构造请求模型"""
    construction: str = Field(..., description="two-point / one-point / k4 / quasi-petersen")
    graph: Optional[GraphDocument] = None
    a: Optional[int] = None
    b: Optional[int] = None
    p: Optional[int] = None
    polylines: Optional[int] = Field(None, ge=2, description="每条弧的采样点数")


class FourFlowRequest(BaseModel):
    """4-流合成请求模型"""
    graph: GraphDocument
    flow: VectorFlowDocument


class VerifyRequest(BaseModel):
    """校验请求模型，flow / group_flow / immersion 三选一"""
    graph: GraphDocument
    flow: Optional[VectorFlowDocument] = None
    group_flow: Optional[GroupFlowDocument] = None
    immersion: Optional[ImmersionDocument] = None

    @model_validator(mode='after')
    def check_target(self) -> 'VerifyRequest':
        given = [x for x in (self.flow, self.group_flow, self.immersion) if x is not None]
        if len(given) != 1:
            raise ValueError("flow、group_flow、immersion 必须恰好给出一个")
        return self


class ApiResponse(BaseModel):
    """API响应模型"""
    success: bool
    message: str
    data: Optional[Dict[str, Any]] = None
    timestamp: str = Field(default_factory=lambda: datetime.now().isoformat())


# 工具函数
def create_response(success: bool, message: str, data: Optional[Dict[str, Any]] = None) -> ApiResponse:
    """创建标准API响应"""
    return ApiResponse(success=success, message=message, data=data)


def plain(data: Any) -> Any:
    """经规范化 JSON 转为纯 Python 类型（numpy 标量、整数键）"""
    return json.loads(to_canonical_json(data))


@router.post("/generate", response_model=ApiResponse)
def generate_graph(request: GenerateRequest):
    """按图族生成图"""
    from graph_generators import build_family
    graph = build_family(request.family, **request.params)
    logger.info(f"API 生成图 {request.family}: {graph.num_vertices} 个顶点")
    return create_response(True, "生成图成功", plain(GraphDocument.from_graph(graph)))


@router.post("/solve-group", response_model=ApiResponse)
def solve_group(request: SolveGroupRequest):
    """穷举无处为零的群流"""
    from group_flow import group_flow_engine
    from models.group import AbelianGroup
    graph = request.graph.to_graph()
    group = AbelianGroup.parse(request.group)
    result = group_flow_engine.solve_flow_exhaustive(graph, group, request.budget_ms,
                                                     request.graph.to_orientation(graph))
    if result.verdict == 'budget-exhausted':
        raise BudgetExhaustedError(f"{group.label} 流搜索预算耗尽", nodes=result.nodes)
    data = {
        'verdict': result.verdict,
        'nodes': result.nodes,
        'flow': GroupFlowDocument.from_flow(result.flow) if result.flow is not None else None
    }
    return create_response(True, f"求解完成: {result.verdict}", plain(data))


@router.post("/immerse", response_model=ApiResponse)
def immerse(request: ImmerseRequest):
    """构造等角浸入"""
    from immersion_geometry import immersion_engine
    graph = request.graph.to_graph() if request.graph is not None else None
    graph, immersion = immersion_engine.construct(request.construction, graph, request.a, request.b, request.p)
    report = immersion_engine.check_equiangular(graph, immersion)
    data = {
        'graph': GraphDocument.from_graph(graph),
        'immersion': ImmersionDocument.from_immersion(immersion),
        'max_deviation': report.max_deviation
    }
    if request.polylines:
        data['polylines'] = immersion_engine.sample_polylines(immersion, request.polylines)
    return create_response(True, "构造浸入成功", plain(data))


@router.post("/four-flow", response_model=ApiResponse)
def four_flow(request: FourFlowRequest):
    """由低秩 S^d 流合成 Z2 x Z2 流"""
    from rank_algebra import rank_algebra_engine
    graph = request.graph.to_graph()
    certificate = rank_algebra_engine.synthesize_4flow(graph, request.flow.to_flow(graph))
    return create_response(True, "合成 4-流成功", plain(certificate.to_dict()))


@router.post("/verify", response_model=ApiResponse)
def verify(request: VerifyRequest):
    """校验向量流、群流或浸入"""
    graph = request.graph.to_graph()
    if request.flow is not None:
        from vector_flow import vector_flow_engine
        report = vector_flow_engine.verify_vector_flow(graph, request.flow.to_flow(graph))
        valid = report.valid
    elif request.group_flow is not None:
        from group_flow import group_flow_engine
        report = group_flow_engine.verify_circulation(graph, request.group_flow.to_flow(graph))
        valid = report.nowhere_zero
    else:
        from immersion_geometry import immersion_engine
        report = immersion_engine.check_equiangular(graph, request.immersion.to_immersion(graph))
        valid = report.valid
    return create_response(valid, "校验通过" if valid else "校验未通过", plain(report.to_dict()))
