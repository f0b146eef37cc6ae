# -*- coding: utf-8 -*-
"""
单位向量流数据模型
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from errors import PreconditionError
from models.graph import Orientation


@dataclass(frozen=True)
class Tolerance:
    """容差策略，随流和浸入一起传递"""
    unit: float = 1e-9
    kcl: float = 1e-9
    cluster: float = 1e-7
    equiangular: float = 1e-8
    cross_min: float = 1e-6
    rotation: float = 1e-6

    @classmethod
    def from_config(cls) -> 'Tolerance':
        """从配置管理器读取默认容差"""
        from services.config_manager import config_manager
        return cls(**config_manager.get_tolerance())

    def to_dict(self) -> Dict[str, float]:
        return {'unit': self.unit, 'kcl': self.kcl, 'cluster': self.cluster,
                'equiangular': self.equiangular, 'cross_min': self.cross_min,
                'rotation': self.rotation}


@dataclass
class VectorFlow:
    """S^d 流：每条边一个 R^{d+1} 中的向量"""
    dim: int
    values: Dict[int, np.ndarray]
    orientation: Orientation
    tolerance: Tolerance = field(default_factory=Tolerance)

    def __post_init__(self):
        values = {}
        for edge_id, vector in self.values.items():
            array = np.asarray(vector, dtype=float).reshape(-1)
            if array.shape[0] != self.dim:
                raise PreconditionError(
                    f"边 {edge_id} 的向量维数 {array.shape[0]} 与流的维数 {self.dim} 不一致",
                    edge=edge_id, dim=self.dim)
            values[int(edge_id)] = array
        self.values = values

    def value(self, edge_id: int) -> np.ndarray:
        try:
            return self.values[edge_id]
        except KeyError:
            raise PreconditionError(f"流中缺少边 {edge_id} 的取值", edge=edge_id) from None

    def outward(self, edge_id: int, vertex: int) -> np.ndarray:
        """以 vertex 为出发点的取值"""
        init, _ = self.orientation.arcs[edge_id]
        return self.value(edge_id) if init == vertex else -self.value(edge_id)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'dim': self.dim,
            'values': {e: [float(c) for c in x] for e, x in sorted(self.values.items())},
            'orientation': self.orientation.to_dict()
        }


@dataclass
class FlowValueIndex:
    """规范化的流值索引

    representatives[i] 是第 i 个取值类的代表；edge_class 给出每条边的类；
    flow 是翻转取负值的边之后的流（其定向即规范化后的定向）。
    """
    representatives: List[np.ndarray]
    edge_class: Dict[int, int]
    flow: VectorFlow
    reversed_edges: List[int] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.representatives)

    @property
    def orientation(self) -> Orientation:
        return self.flow.orientation

    def to_dict(self) -> Dict[str, Any]:
        return {
            'values': [[float(c) for c in r] for r in self.representatives],
            'edge_class': dict(sorted(self.edge_class.items())),
            'reversed_edges': sorted(self.reversed_edges)
        }
