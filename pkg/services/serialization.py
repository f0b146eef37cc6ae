# -*- coding: utf-8 -*-
"""
规范化 JSON 输出与文档读取
浮点数固定 17 位有效数字，整数键按数值排序，保证重复运行逐字节一致
"""

import hashlib
import json
import math
from pathlib import Path
from typing import Any, Type, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from errors import FlowError, ParseError

ModelT = TypeVar('ModelT', bound=BaseModel)


def _format_float(value: float, digits: int) -> str:
    if not math.isfinite(value):
        raise FlowError(f"无法序列化非有限浮点数: {value}")
    text = format(value, f'.{digits}g')
    if not any(c in text for c in '.en'):
        text += '.0'
    return text


def _sort_key(key: Any):
    if isinstance(key, (int, np.integer)) and not isinstance(key, bool):
        return (0, int(key), '')
    text = str(key)
    if text.lstrip('-').isdigit():
        return (0, int(text), '')
    return (1, 0, text)


def _render(value: Any, level: int, indent: int, digits: int) -> str:
    pad = ' ' * (indent * (level + 1))
    end_pad = ' ' * (indent * level)
    if isinstance(value, BaseModel):
        value = value.model_dump(mode='python')
    if isinstance(value, np.ndarray):
        value = value.tolist()
    if value is None or isinstance(value, (bool, np.bool_)):
        return json.dumps(None if value is None else bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value), digits)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        if not value:
            return '{}'
        items = sorted(value.items(), key=lambda kv: _sort_key(kv[0]))
        body = (',\n').join(
            f'{pad}{json.dumps(str(k), ensure_ascii=False)}: {_render(v, level + 1, indent, digits)}'
            for k, v in items)
        return '{\n' + body + '\n' + end_pad + '}'
    if isinstance(value, (list, tuple)):
        if not value:
            return '[]'
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in value):
            return '[' + ', '.join(_render(v, level + 1, indent, digits) for v in value) + ']'
        body = ',\n'.join(f'{pad}{_render(v, level + 1, indent, digits)}' for v in value)
        return '[\n' + body + '\n' + end_pad + ']'
    raise FlowError(f"无法序列化的类型: {type(value).__name__}")


def to_canonical_json(data: Any) -> str:
    """规范化 JSON 文本（以换行结尾）"""
    from services.config_manager import config_manager
    output = config_manager.get_output()
    return _render(data, 0, output['indent'], output['float_digits']) + '\n'


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def sha256_file(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_document(model: Type[ModelT], path: str) -> ModelT:
    """读取并校验 JSON 文档"""
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise ParseError(f"无法读取文件 {path}: {e}", path=path) from None
    return parse_document(model, text, source=path)


def parse_document(model: Type[ModelT], text: str, source: str = '<input>') -> ModelT:
    try:
        return model.model_validate_json(text)
    except ValidationError as e:
        raise ParseError(f"文档 {source} 校验失败", source=source,
                         errors=[err['msg'] for err in e.errors()]) from None
