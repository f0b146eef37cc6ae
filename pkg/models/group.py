# -*- coding: utf-8 -*-
"""
有限阿贝尔群与群流数据模型
群表示为循环群的直积 Z_k1 x ... x Z_km，元素是余数元组
"""

import itertools
import re
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Tuple

from errors import ParseError, PreconditionError
from models.graph import Orientation

Element = Tuple[int, ...]


@dataclass(frozen=True)
class AbelianGroup:
    """有限阿贝尔群"""
    moduli: Tuple[int, ...]

    def __post_init__(self):
        moduli = tuple(int(k) for k in self.moduli)
        if not moduli or any(k < 2 for k in moduli):
            raise PreconditionError(f"循环因子的模必须 >= 2: {list(self.moduli)}", moduli=list(self.moduli))
        object.__setattr__(self, 'moduli', moduli)

    @classmethod
    def cyclic(cls, k: int) -> 'AbelianGroup':
        return cls((k,))

    @classmethod
    def klein(cls) -> 'AbelianGroup':
        return cls((2, 2))

    @classmethod
    def parse(cls, label: str) -> 'AbelianGroup':
        """解析 'z6'、'z2xz2' 这类记号"""
        parts = label.strip().lower().split('x')
        if not all(re.fullmatch(r'z\d+', p) for p in parts):
            raise ParseError(f"无法解析的群记号: {label}", label=label)
        return cls(tuple(int(p[1:]) for p in parts))

    @property
    def label(self) -> str:
        return 'x'.join(f'z{k}' for k in self.moduli)

    @property
    def order(self) -> int:
        result = 1
        for k in self.moduli:
            result *= k
        return result

    @property
    def identity(self) -> Element:
        return tuple(0 for _ in self.moduli)

    def elements(self) -> Iterator[Element]:
        """按字典序枚举全部元素"""
        return itertools.product(*(range(k) for k in self.moduli))

    def nonzero_elements(self) -> List[Element]:
        return [x for x in self.elements() if any(x)]

    def validate(self, x: Any) -> Element:
        """校验并规范化元素"""
        try:
            values = tuple(int(c) for c in x)
        except TypeError:
            raise PreconditionError(f"群元素必须是余数序列: {x}", element=x) from None
        if len(values) != len(self.moduli) or any(not 0 <= c < k for c, k in zip(values, self.moduli)):
            raise PreconditionError(f"元素 {list(values)} 不属于群 {self.label}", element=list(values))
        return values

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % k for a, b, k in zip(x, y, self.moduli))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % k for a, k in zip(x, self.moduli))

    def sub(self, x: Element, y: Element) -> Element:
        return tuple((a - b) % k for a, b, k in zip(x, y, self.moduli))

    def is_identity(self, x: Element) -> bool:
        return not any(x)

    def total(self, items) -> Element:
        result = self.identity
        for x in items:
            result = self.add(result, x)
        return result


@dataclass
class GroupFlow:
    """群值流：按定向给出每条边的群元素"""
    group: AbelianGroup
    values: Dict[int, Element]
    orientation: Orientation

    def value(self, edge_id: int) -> Element:
        try:
            return self.values[edge_id]
        except KeyError:
            raise PreconditionError(f"流中缺少边 {edge_id} 的取值", edge=edge_id) from None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'group': list(self.group.moduli),
            'values': {e: list(x) for e, x in sorted(self.values.items())},
            'orientation': self.orientation.to_dict()
        }
