"""
异常类型
所有公开函数抛出的错误都派生自 ConversionError
"""

from typing import Any, Dict, Optional


class ConversionError(Exception):
    """本项目的错误基类"""


class DistributionError(ConversionError, ValueError):
    """分布不满足不变量，或文本无法解析"""


class RegimeError(ConversionError):
    """输入不属于所调用公式的区域（例如两端均为均匀分布）"""


class ThresholdError(RegimeError):
    """阈值方程在搜索区间内找不到变号"""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}

    def __str__(self) -> str:
        base = super().__str__()
        if not self.diagnostics:
            return base
        detail = ', '.join(f"{k}={v!r}" for k, v in self.diagnostics.items())
        return f"{base} ({detail})"


class SearchSpaceError(ConversionError):
    """穷举空间超过上限，或 L 无界"""


class AttainmentError(ConversionError, ValueError):
    """达成曲线 A 不是合法的分布函数"""


class OracleRefusedError(ConversionError):
    """参考解只接受支撑不超过4的目标分布"""


class UsageError(ConversionError, ValueError):
    """命令行参数缺失或格式错误"""
