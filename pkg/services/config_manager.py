# -*- coding: utf-8 -*-
"""
配置管理器
合并 config.py 中的默认配置与环境变量覆盖
"""

import os
import threading
from typing import Any, Dict

from loguru import logger

from config import (BISECTION_CONFIG, LOG_CONFIG, OUTPUT_CONFIG, SOLVER_CONFIG,
                    TOLERANCE_CONFIG, WEB_CONFIG)


class ConfigManager:
    """配置管理器 - 文件配置与环境变量混合"""

    _instance = None
    _lock = threading.Lock()

    def __new__(cls):
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not hasattr(self, 'initialized'):
            self._configs: Dict[str, Dict[str, Any]] = {}
            self._refresh_lock = threading.Lock()
            self._load_configs()
            self.initialized = True

    def _load_configs(self):
        """加载文件配置并应用环境变量覆盖"""
        self._configs = {
            'TOLERANCE_CONFIG': TOLERANCE_CONFIG.copy(),
            'SOLVER_CONFIG': SOLVER_CONFIG.copy(),
            'BISECTION_CONFIG': BISECTION_CONFIG.copy(),
            'OUTPUT_CONFIG': OUTPUT_CONFIG.copy(),
            'LOG_CONFIG': LOG_CONFIG.copy(),
            'WEB_CONFIG': WEB_CONFIG.copy()
        }

        budget = os.environ.get(SOLVER_CONFIG['budget_env'])
        if budget:
            try:
                self._configs['SOLVER_CONFIG']['default_budget_ms'] = float(budget)
                logger.debug(f"使用环境变量中的求解预算: {budget} ms")
            except ValueError:
                logger.warning(f"环境变量 {SOLVER_CONFIG['budget_env']} 不是数字: {budget}，使用默认值")

        level = os.environ.get(LOG_CONFIG['level_env'])
        if level:
            self._configs['LOG_CONFIG']['level'] = level.upper()

    def refresh_config(self):
        """手动刷新配置（重新读取环境变量）"""
        with self._refresh_lock:
            self._load_configs()
            logger.debug("配置已刷新")

    def get_tolerance(self) -> Dict[str, float]:
        """获取容差配置"""
        return self._configs['TOLERANCE_CONFIG'].copy()

    def get_solver(self) -> Dict[str, Any]:
        """获取求解器配置"""
        return self._configs['SOLVER_CONFIG'].copy()

    def default_budget_ms(self) -> float:
        """默认求解预算（毫秒）"""
        return float(self._configs['SOLVER_CONFIG']['default_budget_ms'])

    def get_bisection(self) -> Dict[str, Any]:
        """获取二分法配置"""
        return self._configs['BISECTION_CONFIG'].copy()

    def get_output(self) -> Dict[str, Any]:
        """获取输出配置"""
        return self._configs['OUTPUT_CONFIG'].copy()

    def get_log(self) -> Dict[str, Any]:
        """获取日志配置"""
        return self._configs['LOG_CONFIG'].copy()

    def get_web(self) -> Dict[str, Any]:
        """获取Web服务配置"""
        return self._configs['WEB_CONFIG'].copy()

    def get_config_summary(self) -> Dict[str, Any]:
        """获取配置摘要信息（写入运行清单）"""
        return {
            'tolerance': self.get_tolerance(),
            'default_budget_ms': self.default_budget_ms(),
            'bisection': self.get_bisection(),
            'version': self._configs['OUTPUT_CONFIG']['version']
        }


# 全局配置管理器实例
config_manager = ConfigManager()
