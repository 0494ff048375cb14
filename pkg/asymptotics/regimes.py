"""
转换区域分类：按 H/V 比值 C_{P,Q} = (H(P)/V(P)) / (H(Q)/V(Q)) 区分
"""

from dataclasses import dataclass

import numpy as np

import config
from config import RegimeKind
from core.finite_dist import as_finite
from core.functionals import SourceStats, stats
from utils.errors import RegimeError


@dataclass(frozen=True)
class ConversionRegime:
    """区域类型、C_{P,Q} 以及两端的 (H, V)"""
    kind: str
    c_pq: float
    source: SourceStats
    target: SourceStats

    @property
    def rate(self) -> float:
        """一阶速率 a* = H(P)/H(Q)"""
        return self.source.h / self.target.h

    @property
    def is_uniform(self) -> bool:
        return self.kind in (RegimeKind.SOURCE_UNIFORM, RegimeKind.TARGET_UNIFORM)


def regime_classify(source, target) -> ConversionRegime:
    """
    判定转换区域；均匀标志优先，其余比较 C_{P,Q} 与 1

    Raises:
        RegimeError: 两端都均匀，或任一端是点质量
    """
    source, target = as_finite(source), as_finite(target)
    if source.is_point_mass() or target.is_point_mass():
        raise RegimeError("点质量分布的熵为0，二阶渐近无定义")
    sp, sq = stats(source), stats(target)
    if sp.is_uniform and sq.is_uniform:
        raise RegimeError("源和目标都是均匀分布：转换是整数速率问题，不在二阶理论范围内")
    if sp.is_uniform:
        return ConversionRegime(RegimeKind.SOURCE_UNIFORM, np.inf, sp, sq)
    if sq.is_uniform:
        return ConversionRegime(RegimeKind.TARGET_UNIFORM, 0.0, sp, sq)

    c_pq = sp.ratio / sq.ratio
    if abs(c_pq - 1.0) <= config.ASYMPTOTIC_CONFIG['ratio_tolerance']:
        kind = RegimeKind.RATIO_EQUAL
    elif c_pq > 1.0:
        kind = RegimeKind.RATIO_GREATER
    else:
        kind = RegimeKind.RATIO_LESS
    return ConversionRegime(kind, float(c_pq), sp, sq)
