"""
工具模块：异常、日志、输入输出与网格扫描
"""
