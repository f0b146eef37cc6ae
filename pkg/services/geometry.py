# -*- coding: utf-8 -*-
"""
球面几何工具
单位向量、大圆弧参数化、球面角、带区间检查的二分法求根
"""

import math
from typing import Callable, Optional

import numpy as np
from loguru import logger

from errors import BracketError, PreconditionError, TheoremViolationError

TWO_PI = 2.0 * math.pi


def normalize(vector, floor: float = 1e-15) -> np.ndarray:
    """单位化；范数过小视为退化输入"""
    array = np.asarray(vector, dtype=float)
    norm = float(np.linalg.norm(array))
    if norm <= floor:
        raise PreconditionError("无法单位化零向量", norm=norm)
    return array / norm


def sphere_point(colatitude: float, longitude: float) -> np.ndarray:
    """余纬度/经度 -> 单位球面点"""
    return np.array([
        math.sin(colatitude) * math.cos(longitude),
        math.sin(colatitude) * math.sin(longitude),
        math.cos(colatitude)
    ])


def meridian_axis(longitude: float) -> np.ndarray:
    """沿经线向南前进的弧所绕的轴"""
    return np.array([-math.sin(longitude), math.cos(longitude), 0.0])


def ccw_angle(axis: np.ndarray, start: np.ndarray, end: np.ndarray) -> float:
    """绕 axis 从 start 逆时针转到 end 的角度，取值 [0, 2π)"""
    angle = math.atan2(float(np.dot(axis, np.cross(start, end))), float(np.dot(start, end)))
    return angle % TWO_PI


def spherical_angle(t1, t2) -> float:
    """两切向量夹角，atan2(|t1 x t2|, t1 . t2)"""
    a = normalize(t1)
    b = normalize(t2)
    dot = max(-1.0, min(1.0, float(np.dot(a, b))))
    return math.atan2(float(np.linalg.norm(np.cross(a, b))), dot)


def frame(first, normal) -> np.ndarray:
    """以 [first, normal, first x normal] 为列的正交标架"""
    a = normalize(first)
    n = normalize(normal)
    return np.column_stack([a, n, np.cross(a, n)])


def bisect_root(func: Callable[[float], float], lower: float, upper: float,
                tol: Optional[float] = None, max_iter: Optional[int] = None) -> float:
    """二分法求根，要求区间两端函数值异号

    Args:
        func: 目标函数
        lower: 区间下界
        upper: 区间上界
        tol: 区间宽度容差，默认取配置
        max_iter: 最大迭代次数，默认取配置

    Returns:
        float: 根的近似值
    """
    if tol is None or max_iter is None:
        from services.config_manager import config_manager
        settings = config_manager.get_bisection()
        tol = settings['tol'] if tol is None else tol
        max_iter = settings['max_iter'] if max_iter is None else max_iter

    f_lower = func(lower)
    f_upper = func(upper)
    if f_lower == 0.0:
        return lower
    if f_upper == 0.0:
        return upper
    if (f_lower > 0) == (f_upper > 0):
        raise BracketError("二分区间端点函数值同号", lower=lower, upper=upper,
                           f_lower=f_lower, f_upper=f_upper)

    for iteration in range(max_iter):
        middle = 0.5 * (lower + upper)
        f_middle = func(middle)
        if f_middle == 0.0 or (upper - lower) * 0.5 < tol:
            logger.debug(f"二分法在第 {iteration + 1} 次迭代收敛: x={middle!r}")
            return middle
        if (f_middle > 0) == (f_lower > 0):
            lower, f_lower = middle, f_middle
        else:
            upper = middle
    raise TheoremViolationError("二分法超过最大迭代次数仍未收敛", lower=lower, upper=upper)
