# -*- coding: utf-8 -*-
"""
异常定义模块
所有领域错误都继承自 FlowError，携带机器可读的错误码和详情
"""

from typing import Any, Dict


class FlowError(Exception):
    """领域错误基类"""

    code = 'error'

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        """转换为诊断字典"""
        return {
            'error': self.code,
            'message': self.message,
            'details': {key: _plain(value) for key, value in self.details.items()}
        }


class PreconditionError(FlowError):
    """操作前置条件不满足"""

    code = 'precondition'


class ParseError(PreconditionError):
    """输入文档格式错误或引用了未知的编号"""

    code = 'parse'


class BudgetExhaustedError(FlowError):
    """搜索时间预算耗尽"""

    code = 'budget'


class TheoremViolationError(FlowError):
    """已证明的结论在运行时被违反，必须立即终止"""

    code = 'theorem-violation'


class BracketError(TheoremViolationError):
    """二分区间端点函数值同号"""

    code = 'bracket'


def _plain(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [_plain(v) for v in items]
    if hasattr(value, 'tolist'):
        return value.tolist()
    return str(value)
