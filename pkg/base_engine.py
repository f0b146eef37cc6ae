# -*- coding: utf-8 -*-
"""
基础引擎模块
提供公共的前置条件检查、断言、时间预算和操作日志功能
"""

import time
from typing import Any, Optional, Type

from loguru import logger

from errors import FlowError, PreconditionError, TheoremViolationError


class Deadline:
    """时间预算，单位毫秒；None 表示不限时"""

    def __init__(self, budget_ms: Optional[float]):
        self.budget_ms = budget_ms
        self._start = time.monotonic()

    def elapsed_ms(self) -> float:
        """已用时间（毫秒）"""
        return (time.monotonic() - self._start) * 1000.0

    def expired(self) -> bool:
        """预算是否耗尽"""
        return self.budget_ms is not None and self.elapsed_ms() > self.budget_ms

    def remaining_ms(self) -> Optional[float]:
        """剩余预算（毫秒），不限时返回 None"""
        if self.budget_ms is None:
            return None
        return max(self.budget_ms - self.elapsed_ms(), 0.0)


class BaseEngine:
    """基础引擎类，提供公共功能"""

    def __init__(self):
        pass

    def require(self, condition: bool, message: str,
                error_cls: Type[FlowError] = PreconditionError, **details: Any):
        """检查前置条件，不满足时记录日志并抛出异常

        Args:
            condition: 条件
            message: 错误消息
            error_cls: 异常类型
            **details: 诊断详情
        """
        if not condition:
            logger.error(f"前置条件不满足: {message}")
            raise error_cls(message, **details)

    def ensure(self, condition: bool, message: str, **details: Any):
        """检查由定理保证的断言，失败即说明实现或定理有误

        Args:
            condition: 断言条件
            message: 错误消息
            **details: 诊断详情
        """
        if not condition:
            logger.critical(f"定理断言失败: {message}")
            raise TheoremViolationError(message, **details)

    def make_deadline(self, budget_ms: Optional[float]) -> Deadline:
        """创建时间预算，未指定时使用配置中的默认值"""
        if budget_ms is None:
            from services.config_manager import config_manager
            budget_ms = config_manager.default_budget_ms()
        return Deadline(budget_ms)

    def log_operation_start(self, operation_name: str, **kwargs):
        """记录操作开始

        Args:
            operation_name: 操作名称
            **kwargs: 额外参数
        """
        params_str = ", ".join([f"{k}={v}" for k, v in kwargs.items()])
        logger.debug(f"开始执行{operation_name}操作" + (f"，参数: {params_str}" if params_str else ""))

    def log_operation_result(self, operation_name: str, success: bool, message: str = ""):
        """记录操作结果

        Args:
            operation_name: 操作名称
            success: 是否成功
            message: 附加消息
        """
        status = "成功" if success else "失败"
        log_message = f"{operation_name}操作{status}"
        if message:
            log_message += f": {message}"

        if success:
            logger.info(log_message)
        else:
            logger.warning(log_message)
