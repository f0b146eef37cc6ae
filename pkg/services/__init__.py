# Services module
# 基础服务模块：GF(2) 与整数线性代数、球面几何、余树搜索、规范化 JSON、配置管理