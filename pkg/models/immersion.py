# -*- coding: utf-8 -*-
"""
球面浸入数据模型
顶点映到 S^2 上的点，边映到有向大圆弧（轴、起点、弧长）
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

from errors import PreconditionError
from models.graph import Orientation
from models.vector import Tolerance

Vector3 = Tuple[float, float, float]


@dataclass(frozen=True)
class DirectedArc:
    """有向测地弧：从 start 出发绕 axis 逆时针转过 length 弧度

    length 取值 (0, 2π]，2π 表示完整大圆（起点即终点）。
    """
    axis: Vector3
    start: Vector3
    length: float

    def __post_init__(self):
        if len(self.axis) != 3 or len(self.start) != 3:
            raise PreconditionError("弧的轴和起点必须是三维向量")
        if not 0.0 < self.length <= 2.0 * math.pi + 1e-12:
            raise PreconditionError(f"弧长必须位于 (0, 2π]: {self.length}", length=self.length)
        object.__setattr__(self, 'axis', tuple(float(c) for c in self.axis))
        object.__setattr__(self, 'start', tuple(float(c) for c in self.start))
        object.__setattr__(self, 'length', float(min(self.length, 2.0 * math.pi)))

    @property
    def axis_vector(self) -> np.ndarray:
        return np.array(self.axis)

    @property
    def start_vector(self) -> np.ndarray:
        return np.array(self.start)

    def point_at(self, t: float) -> np.ndarray:
        """弧参数 t（弧度）处的点"""
        n = self.axis_vector
        s = self.start_vector
        return s * math.cos(t) + np.cross(n, s) * math.sin(t)

    @property
    def end_vector(self) -> np.ndarray:
        return self.point_at(self.length)

    def to_dict(self) -> Dict[str, Any]:
        return {'axis': list(self.axis), 'start': list(self.start), 'length': self.length}


@dataclass
class Immersion:
    """S^2 浸入：γ(v) 与 γ(e)，弧方向与定向一致"""
    points: Dict[int, np.ndarray]
    arcs: Dict[int, DirectedArc]
    orientation: Orientation
    tolerance: Tolerance = field(default_factory=Tolerance)

    def __post_init__(self):
        self.points = {int(v): np.asarray(p, dtype=float).reshape(3) for v, p in self.points.items()}
        self.arcs = {int(e): arc for e, arc in self.arcs.items()}

    def point(self, vertex: int) -> np.ndarray:
        try:
            return self.points[vertex]
        except KeyError:
            raise PreconditionError(f"浸入中缺少顶点 {vertex}", vertex=vertex) from None

    def arc(self, edge_id: int) -> DirectedArc:
        try:
            return self.arcs[edge_id]
        except KeyError:
            raise PreconditionError(f"浸入中缺少边 {edge_id} 的弧", edge=edge_id) from None

    def distinct_points(self, threshold: float = 1e-9) -> bool:
        """所有顶点像是否两两不同（单射）"""
        items: List[np.ndarray] = list(self.points.values())
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                if np.linalg.norm(items[i] - items[j]) <= threshold:
                    return False
        return True

    def to_dict(self) -> Dict[str, Any]:
        return {
            'vertices': {v: [float(c) for c in p] for v, p in sorted(self.points.items())},
            'arcs': {e: arc.to_dict() for e, arc in sorted(self.arcs.items())},
            'orientation': self.orientation.to_dict()
        }
