"""
转换器基类
定义所有最大保真度求解器的基本接口
"""

import time
from abc import ABC, abstractmethod
from typing import Any, Dict, Tuple


class BaseConverter(ABC):
    """转换器基类：求解 P -> Q 的最大保真度并记录调用统计"""

    def __init__(self, name: str = "Converter"):
        self.name = name
        self.total_solves = 0
        self.total_time = 0.0

    @abstractmethod
    def solve(self, source, target) -> Tuple[float, Any]:
        """返回 (保真度, 达成者)；达成者可以是映射或分布"""
        pass

    def max_fidelity(self, source, target) -> Tuple[float, Any]:
        """计时包装，子类只需实现 solve"""
        start = time.perf_counter()
        try:
            return self.solve(source, target)
        finally:
            self.total_solves += 1
            self.total_time += time.perf_counter() - start

    def reset(self):
        """重置统计"""
        self.total_solves = 0
        self.total_time = 0.0

    def get_info(self) -> Dict[str, Any]:
        """获取转换器信息"""
        return {
            'name': self.name,
            'type': self.__class__.__name__,
            'total_solves': self.total_solves,
            'total_time': self.total_time,
            'avg_time_per_solve': self.total_time / max(1, self.total_solves),
        }
