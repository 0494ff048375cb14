"""
有限分布
显式概率向量，一次性（one-shot）问题中的 P 与 Q
"""

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence, Tuple

import numpy as np

import config
from utils.errors import DistributionError


@dataclass(frozen=True)
class FiniteDist:
    """有限集合上的概率分布，构造后不可变"""

    probs: Tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, 'probs', probs)
        if len(probs) < 1:
            raise DistributionError("分布的支撑大小至少为1")
        if any(not np.isfinite(p) for p in probs):
            raise DistributionError(f"概率必须是有限实数: {probs}")
        if any(p < 0.0 for p in probs):
            raise DistributionError(f"概率不能为负: {probs}")
        total = float(np.sum(probs))
        tol = config.NUMERIC_CONFIG['mass_tolerance']
        if abs(total - 1.0) > tol:
            raise DistributionError(f"概率之和必须为1（容差 {tol}），当前为 {total!r}")

    @classmethod
    def uniform(cls, k: int) -> 'FiniteDist':
        """k 点均匀分布"""
        if k < 1:
            raise DistributionError(f"均匀分布的支撑大小必须为正，当前为 {k}")
        return cls(tuple([1.0 / k] * k))

    @classmethod
    def from_weights(cls, weights: Iterable[float]) -> 'FiniteDist':
        """由非负权重归一化得到分布"""
        w = np.asarray(list(weights), dtype=float)
        if w.size == 0 or np.any(w < 0) or not np.isfinite(w).all() or w.sum() <= 0:
            raise DistributionError(f"权重必须非负、有限且不全为0: {w.tolist()}")
        p = w / w.sum()
        # 把舍入误差压到最大分量上，保证总和落在容差内
        p[np.argmax(p)] += 1.0 - p.sum()
        return cls(tuple(p.tolist()))

    @property
    def size(self) -> int:
        return len(self.probs)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)

    def support(self) -> np.ndarray:
        """正概率分量"""
        arr = self.array
        return arr[arr > 0.0]

    def sorted_desc(self) -> np.ndarray:
        """P↓，按降序排列（含零分量）"""
        return np.sort(self.array)[::-1]

    def is_point_mass(self) -> bool:
        return self.support().size == 1


def explicit_power(dist: FiniteDist, n: int, max_size: int = 10 ** 6) -> FiniteDist:
    """P^n 的展开形式（字典序排列的乘积分布），只用于小规模"""
    if n < 1:
        raise DistributionError(f"幂次 n 必须为正整数，当前为 {n}")
    if dist.size ** n > max_size:
        raise DistributionError(f"P^{n} 的支撑 {dist.size}^{n} 超过展开上限 {max_size}")
    arr = reduce(np.kron, [dist.array] * n)
    return FiniteDist.from_weights(arr)


def parse_dist(text: str) -> FiniteDist:
    """
    解析分布文本

    支持两种写法：每行一个概率，或者逗号分隔的行内列表。空行与 # 注释被忽略。
    """
    values = []
    for raw_line in text.splitlines():
        line = raw_line.split('#', 1)[0].strip()
        if not line:
            continue
        for token in line.split(','):
            token = token.strip()
            if not token:
                continue
            try:
                values.append(float(token))
            except ValueError:
                raise DistributionError(f"无法解析的概率值: {token!r}") from None
    if not values:
        raise DistributionError("分布文本为空")
    return FiniteDist(tuple(values))


def format_dist(dist: FiniteDist, digits: int = None) -> str:
    """按每行一个概率写出，默认17位有效数字"""
    digits = digits or config.EXPERIMENT_CONFIG['dist_digits']
    return ''.join(f"{p:.{digits}g}\n" for p in dist.probs)


def as_finite(probs: Sequence[float]) -> FiniteDist:
    """便捷构造：已经是 FiniteDist 时原样返回"""
    if isinstance(probs, FiniteDist):
        return probs
    return FiniteDist(tuple(probs))
