"""
随机数转换保真度工具
"""

__version__ = "1.0.0"
__author__ = "Information Theory Course Team"
