# -*- coding: utf-8 -*-
"""
Web API接口模块
以 RESTful 服务的形式提供流计算功能，领域错误统一转换为标准响应
"""

from typing import Optional

import uvicorn
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from loguru import logger

from api.flow_api import create_response, router as flow_router
from errors import BudgetExhaustedError, FlowError, PreconditionError
from services.config_manager import config_manager

# 创建FastAPI应用
app = FastAPI(
    title="单位向量流工具箱API",
    description="群流、S^d 流、等角浸入与 4-流合成接口",
    version=config_manager.get_output()['version']
)

# 添加CORS中间件
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# 注册流计算路由
app.include_router(flow_router)


def status_for(error: FlowError) -> int:
    """领域错误到 HTTP 状态码的映射"""
    if isinstance(error, PreconditionError):
        return 422
    if isinstance(error, BudgetExhaustedError):
        return 408
    return 500


@app.exception_handler(FlowError)
async def flow_error_handler(request: Request, exc: FlowError):
    status = status_for(exc)
    logger.error(f"请求 {request.url.path} 失败 ({exc.code}): {exc.message}")
    body = create_response(False, exc.message, exc.to_dict())
    return JSONResponse(status_code=status, content=body.model_dump())


@app.get("/api/health")
async def health_check():
    """健康检查"""
    return create_response(True, "服务正常", {"config": config_manager.get_config_summary()})


def start_web_server(host: Optional[str] = None, port: Optional[int] = None):
    """启动Web服务器"""
    web_config = config_manager.get_web()
    host = host or web_config['host']
    port = port or web_config['port']
    logger.info(f"启动Web API服务器，地址: {host}:{port}")

    uvicorn.run(
        app,
        host=host,
        port=port,
        log_level="info"
    )


if __name__ == "__main__":
    start_web_server()
