# Models module
# 数据模型模块：图、群、向量流、浸入、代数证书、外部文档格式