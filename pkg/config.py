# -*- coding: utf-8 -*-
"""
单位向量流工具箱配置文件
"""

# 数值容差配置
TOLERANCE_CONFIG = {
    'unit': 1e-9,          # 单位向量范数容差
    'kcl': 1e-9,           # 顶点基尔霍夫残差容差
    'cluster': 1e-7,       # 流值聚类距离
    'equiangular': 1e-8,   # 等角条件容差
    'cross_min': 1e-6,     # 叉积最小范数（由流恢复浸入时使用）
    'rotation': 1e-6       # 注入时对齐两组三元流值的旋转残差
}

# 穷举求解器配置
SOLVER_CONFIG = {
    'default_budget_ms': 10000,
    'budget_env': 'VECFLOW_BUDGET_MS',
    'check_interval': 1024,        # 每搜索多少个节点检查一次时间预算
    'enumerate_limit_log2': 20     # 覆盖对枚举的子空间维数上限
}

# 二分法求根配置
BISECTION_CONFIG = {
    'tol': 1e-12,
    'max_iter': 200
}

# 输出配置
OUTPUT_CONFIG = {
    'float_digits': 17,
    'indent': 2,
    'version': '1.0.0'
}

# 日志配置
LOG_CONFIG = {
    'level': 'INFO',
    'level_env': 'VECFLOW_LOG_LEVEL',
    'file': 'logs/vecflow.log',
    'rotation': '10 MB',
    'retention': '7 days'
}

# Web服务配置
WEB_CONFIG = {
    'host': '127.0.0.1',
    'port': 8000
}

# 退出码
EXIT_CODES = {
    'ok': 0,
    'precondition': 2,
    'budget': 3,
    'theorem': 4
}
