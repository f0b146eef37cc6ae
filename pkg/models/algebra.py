# -*- coding: utf-8 -*-
"""
代数数据模型：平衡矩阵、GF(2) 子空间、Klein 四元群流证书
GF(2) 向量用整数位集表示，第 i 位即第 i 个坐标
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from models.graph import Orientation
from models.group import AbelianGroup, GroupFlow


@dataclass(frozen=True)
class BalancedMatrix:
    """每个顶点一行的整数平衡向量 ε(v)"""
    b: int
    rows: Tuple[Tuple[int, ...], ...]
    vertices: Tuple[int, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {'b': self.b, 'rows': {v: list(r) for v, r in zip(self.vertices, self.rows)}}


@dataclass(frozen=True)
class GF2Subspace:
    """Z_2^length 的子空间，基为约化行阶梯形位集"""
    length: int
    basis: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def full_mask(self) -> int:
        return (1 << self.length) - 1

    def to_bits(self, vector: int) -> List[int]:
        return [(vector >> i) & 1 for i in range(self.length)]

    def to_dict(self) -> Dict[str, Any]:
        return {'length': self.length, 'basis': [self.to_bits(r) for r in self.basis]}


@dataclass
class OddFreeVerdict:
    """奇坐标自由判定结果；违反时给出恰有一个奇坐标的整数见证向量"""
    free: bool
    witness: Optional[Tuple[int, ...]] = None
    coordinate: Optional[int] = None
    saturation_basis: List[Tuple[int, ...]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'free': self.free,
            'witness': list(self.witness) if self.witness is not None else None,
            'coordinate': self.coordinate
        }


@dataclass
class KleinFlowCertificate:
    """无处为零的 Z_2 x Z_2 流证书"""
    values: Dict[int, Tuple[int, int]]
    x: int
    y: int
    b: int
    class_values: List[Tuple[int, int]]
    orientation: Orientation

    def to_group_flow(self) -> GroupFlow:
        return GroupFlow(AbelianGroup.klein(), dict(self.values), self.orientation)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'edges': {e: list(g) for e, g in sorted(self.values.items())},
            'x': [(self.x >> i) & 1 for i in range(self.b)],
            'y': [(self.y >> i) & 1 for i in range(self.b)],
            'class_values': [list(g) for g in self.class_values],
            'orientation': self.orientation.to_dict()
        }
