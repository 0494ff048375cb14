"""
二阶速率

r2(P, Q|nu) = sup { b | 极限保真度 >= nu }，L^D_n = (H(P)/H(Q)) n + r2 √n + o(√n)。
均匀端和 ratio_equal 有闭式，其余区域对单调递减的极限曲线做 brentq 求逆。
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from scipy.optimize import brentq
from scipy.special import ndtri

import config
from asymptotics.limits import limit_curve, regime_threshold
from asymptotics.regimes import ConversionRegime, regime_classify
from config import RegimeKind, ThresholdKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RateResult:
    """一阶速率 a、二阶速率 r2、区域、阈值（α 或 β）与反解残差"""
    a: float
    r2: float
    regime: ConversionRegime
    threshold: Optional[float]
    residual: float

    def to_record(self) -> Dict[str, Any]:
        return {
            'a': self.a,
            'r2': self.r2,
            'regime': self.regime.kind,
            'c_pq': self.regime.c_pq,
            'threshold': self.threshold,
            'residual': self.residual,
        }


def _closed_form(regime: ConversionRegime, nu: float) -> float:
    sp, sq = regime.source, regime.target
    if regime.kind == RegimeKind.TARGET_UNIFORM:
        return -math.sqrt(sp.v) * ndtri(nu * nu) / sq.h
    if regime.kind == RegimeKind.SOURCE_UNIFORM:
        return -math.sqrt(sp.h * sq.v / sq.h ** 3) * ndtri(nu * nu)
    # ratio_equal: exp(-(H(Q) b)² / (8 V(P))) = nu
    return math.sqrt(8.0 * sp.v * math.log(1.0 / nu)) / sq.h


def _bracket(curve, nu: float) -> Tuple[float, float]:
    """倍增步长直到 curve(lo) > nu > curve(hi)"""
    cfg = config.ASYMPTOTIC_CONFIG
    step = cfg['inversion_initial_step']
    lo, hi = -step, step
    for _ in range(cfg['inversion_max_doublings']):
        if curve(lo) > nu:
            break
        lo -= step
        step *= 2.0
    step = cfg['inversion_initial_step']
    for _ in range(cfg['inversion_max_doublings']):
        if curve(hi) < nu:
            break
        hi += step
        step *= 2.0
    logger.debug("反解区间 [%g, %g]", lo, hi)
    return lo, hi


def second_order_rate(source, target, nu: float) -> RateResult:
    """
    r2(P, Q|nu)

    Args:
        source: 源分布 P
        target: 目标分布 Q
        nu: 保真度要求，(0, 1) 内

    Raises:
        RegimeError: 两端都均匀
    """
    if not 0.0 < nu < 1.0:
        raise ValueError(f"nu 必须在 (0, 1) 内，当前为 {nu}")
    regime = regime_classify(source, target)

    def curve(b: float) -> float:
        return limit_curve(source, target, b, regime)

    threshold = None
    if regime.kind in (RegimeKind.RATIO_GREATER, RegimeKind.RATIO_LESS):
        lo, hi = _bracket(curve, nu)
        r2 = brentq(lambda b: curve(b) - nu, lo, hi, xtol=config.ASYMPTOTIC_CONFIG['root_xtol'])
        which = ThresholdKind.ALPHA if regime.kind == RegimeKind.RATIO_GREATER else ThresholdKind.BETA
        threshold = regime_threshold(regime, r2, which)
    else:
        r2 = _closed_form(regime, nu)
    residual = abs(curve(r2) - nu)
    logger.info("r2(nu=%g) = %.12g，区域 %s，残差 %.3g", nu, r2, regime.kind, residual)
    return RateResult(a=regime.rate, r2=float(r2), regime=regime, threshold=threshold, residual=residual)


def ldn_expand(source, target, nu: float, n: int, rate: Optional[RateResult] = None) -> float:
    """a n + r2 √n，不含三阶项"""
    if n < 0:
        raise ValueError(f"n 不能为负，当前为 {n}")
    if n == 0:
        return 0.0
    if rate is None:
        rate = second_order_rate(source, target, nu)
    return rate.a * n + rate.r2 * math.sqrt(n)
