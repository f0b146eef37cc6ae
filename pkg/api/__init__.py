# -*- coding: utf-8 -*-
"""
API模块
包含流计算路由和接口定义
"""
