# -*- coding: utf-8 -*-
"""
运行清单模型
"""

from dataclasses import dataclass, field
from typing import Any, Dict


@dataclass
class RunManifest:
    """一次命令运行的可复现记录"""
    command: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    input_hashes: Dict[str, str] = field(default_factory=dict)
    tolerances: Dict[str, Any] = field(default_factory=dict)
    outcome: Dict[str, Any] = field(default_factory=dict)
    output_hash: str = ''
    wall_time_ms: float = 0.0
    version: str = ''

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        return {key: value for key, value in self.__dict__.items()}
