"""
分布的标量泛函：熵、变熵（varentropy）、保真度（Bhattacharyya 系数）
全部使用自然对数
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import entr

import config
from core.finite_dist import FiniteDist
from utils.errors import DistributionError


@dataclass(frozen=True)
class SourceStats:
    """熵 h、变熵 v 与均匀性标志；v == 0 当且仅当 is_uniform"""
    h: float
    v: float
    is_uniform: bool

    @property
    def ratio(self) -> float:
        """H/V，均匀分布时为 inf"""
        return np.inf if self.is_uniform else self.h / self.v


def entropy(dist: FiniteDist) -> float:
    """H(P) = -sum p log p，约定 0 log 0 = 0"""
    return float(np.sum(entr(dist.array)))


def varentropy(dist: FiniteDist) -> float:
    """V(P) = sum p (-log p - H(P))^2"""
    p = dist.support()
    h = entropy(dist)
    return float(np.sum(p * (-np.log(p) - h) ** 2))


def is_uniform(dist: FiniteDist) -> bool:
    """正概率分量是否全部相等"""
    p = dist.support()
    return bool(p.max() <= p.min() * (1.0 + config.NUMERIC_CONFIG['uniform_tolerance']))


def stats(dist: FiniteDist) -> SourceStats:
    """打包 H、V 与均匀性"""
    uniform = is_uniform(dist)
    v = 0.0 if uniform else varentropy(dist)
    return SourceStats(h=entropy(dist), v=v, is_uniform=uniform)


def fidelity(first: FiniteDist, second: FiniteDist) -> float:
    """F(P, Q) = sum sqrt(p q)，逐点配对"""
    if first.size != second.size:
        raise DistributionError(f"保真度要求相同的支撑大小：{first.size} != {second.size}")
    value = float(np.sum(np.sqrt(first.array * second.array)))
    return min(value, 1.0)


def hellinger(first: FiniteDist, second: FiniteDist) -> float:
    """d_H = sqrt(1 - F)"""
    return float(np.sqrt(max(0.0, 1.0 - fidelity(first, second))))
