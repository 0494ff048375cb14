"""
极限保真度曲线

a = H(P)/H(Q) 时 lim F^M(P^n -> Q^{an + b√n}) 随区域不同：
- ratio_greater: F_1(b)，由阈值 α 给出
- ratio_less:    F_2(b)，由阈值 β 给出
- ratio_equal:   b <= 0 时为1，否则 exp(-(H(Q) b)² / (8 V(P)))
- 均匀端: 标准正态 CDF 的闭式
a 偏离 H(P)/H(Q) 时极限只取0或1。
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy.optimize import brentq
from scipy.special import ndtr

import config
from asymptotics.gaussian import (GaussianSpec, overlap, shifted_target_gaussian,
                                  source_gaussian)
from asymptotics.regimes import ConversionRegime, regime_classify
from config import RegimeKind, ThresholdKind
from utils.errors import RegimeError, ThresholdError

logger = logging.getLogger(__name__)


def _require(regime: ConversionRegime, kind: str, what: str):
    if regime.kind != kind:
        raise RegimeError(f"{what} 只适用于 {kind} 区域，当前区域为 {regime.kind}（C = {regime.c_pq:.6g}）")


def _pair(regime: ConversionRegime, b: float):
    return source_gaussian(regime.source), shifted_target_gaussian(regime.source, regime.target, b)


def threshold_residual(n_p: GaussianSpec, n_pqb: GaussianSpec, x: float, which: str) -> float:
    """
    阈值方程的对数残差

    alpha: log(N_P/G_P) - log(N_PQb/G_PQb)
    beta:  log(N_P/(1-G_P)) - log(N_PQb/(1-G_PQb))
    """
    if which == ThresholdKind.ALPHA:
        return float((n_p.logpdf(x) - n_p.logcdf(x)) - (n_pqb.logpdf(x) - n_pqb.logcdf(x)))
    return float((n_p.logpdf(x) - n_p.logsf(x)) - (n_pqb.logpdf(x) - n_pqb.logsf(x)))


def regime_threshold(regime: ConversionRegime, b: float, which: str) -> float:
    """在较宽高斯的 ±40σ 区间内用 brentq 求阈值，区间端点不变号时报错"""
    n_p, n_pqb = _pair(regime, b)
    cfg = config.ASYMPTOTIC_CONFIG
    wide = max(n_p.sd, n_pqb.sd)
    lo = min(n_p.mean, n_pqb.mean) - cfg['bracket_sigmas'] * wide
    hi = max(n_p.mean, n_pqb.mean) + cfg['bracket_sigmas'] * wide
    f_lo = threshold_residual(n_p, n_pqb, lo, which)
    f_hi = threshold_residual(n_p, n_pqb, hi, which)
    if not (np.isfinite(f_lo) and np.isfinite(f_hi)) or f_lo * f_hi > 0:
        raise ThresholdError(
            f"阈值 {which} 的求根区间没有变号",
            {'b': b, 'c_pq': regime.c_pq, 'lo': lo, 'hi': hi, 'f_lo': f_lo, 'f_hi': f_hi},
        )
    root = brentq(lambda x: threshold_residual(n_p, n_pqb, x, which), lo, hi, xtol=cfg['root_xtol'])
    residual = abs(threshold_residual(n_p, n_pqb, root, which))
    if residual > cfg['threshold_residual']:
        logger.warning("阈值 %s 残差 %.3g 超过容差（b=%g）", which, residual, b)
    return float(root)


def solve_threshold(source, target, b: float, which: str) -> float:
    """
    阈值方程的唯一解：alpha 要求 ratio_greater，beta 要求 ratio_less

    Raises:
        RegimeError: 区域与 which 不匹配
        ThresholdError: 在 ±40σ 内找不到变号
    """
    regime = regime_classify(source, target)
    if which == ThresholdKind.ALPHA:
        _require(regime, RegimeKind.RATIO_GREATER, "alpha 阈值")
    elif which == ThresholdKind.BETA:
        _require(regime, RegimeKind.RATIO_LESS, "beta 阈值")
    else:
        raise ValueError(f"未知的阈值类型：{which}")
    return regime_threshold(regime, b, which)


def gaussian_overlap(source, target, b: float, x: float = np.inf) -> float:
    """I_{P,Q,b}(x) = ∫_{-∞}^{x} sqrt(N_P) sqrt(N_{P,Q,b})"""
    regime = regime_classify(source, target)
    if regime.is_uniform:
        raise RegimeError("均匀分布的变熵为0，高斯重叠无定义")
    n_p, n_pqb = _pair(regime, b)
    return overlap(n_p, n_pqb, x)


def _f1(regime: ConversionRegime, b: float) -> float:
    n_p, n_pqb = _pair(regime, b)
    alpha = regime_threshold(regime, b, ThresholdKind.ALPHA)
    head = math.exp(0.5 * (n_p.logcdf(alpha) + n_pqb.logcdf(alpha)))
    tail = overlap(n_p, n_pqb) - overlap(n_p, n_pqb, alpha)
    return float(min(1.0, max(0.0, head + tail)))


def _f2(regime: ConversionRegime, b: float) -> float:
    n_p, n_pqb = _pair(regime, b)
    beta = regime_threshold(regime, b, ThresholdKind.BETA)
    head = overlap(n_p, n_pqb, beta)
    tail = math.exp(0.5 * (n_p.logsf(beta) + n_pqb.logsf(beta)))
    return float(min(1.0, max(0.0, head + tail)))


def _feq(regime: ConversionRegime, b: float) -> float:
    if b <= 0.0:
        return 1.0
    return float(math.exp(-(regime.target.h * b) ** 2 / (8.0 * regime.source.v)))


def _uniform_target(regime: ConversionRegime, b: float) -> float:
    return float(math.sqrt(ndtr(-regime.target.h * b / math.sqrt(regime.source.v))))


def _uniform_source(regime: ConversionRegime, b: float) -> float:
    h_u, h_q, v_q = regime.source.h, regime.target.h, regime.target.v
    return float(math.sqrt(ndtr(-h_q ** 1.5 * b / math.sqrt(h_u * v_q))))


_CURVES = {
    RegimeKind.RATIO_GREATER: _f1,
    RegimeKind.RATIO_LESS: _f2,
    RegimeKind.RATIO_EQUAL: _feq,
    RegimeKind.TARGET_UNIFORM: _uniform_target,
    RegimeKind.SOURCE_UNIFORM: _uniform_source,
}


def f1_limit(source, target, b: float) -> float:
    """F_1(b)，C_{P,Q} > 1"""
    regime = regime_classify(source, target)
    _require(regime, RegimeKind.RATIO_GREATER, "F_1")
    return _f1(regime, b)


def f2_limit(source, target, b: float) -> float:
    """F_2(b)，C_{P,Q} < 1"""
    regime = regime_classify(source, target)
    _require(regime, RegimeKind.RATIO_LESS, "F_2")
    return _f2(regime, b)


def feq_limit(source, target, b: float) -> float:
    """C_{P,Q} = 1：b <= 0 时为1，b > 0 时为 exp(-(H(Q) b)² / (8 V(P)))"""
    regime = regime_classify(source, target)
    _require(regime, RegimeKind.RATIO_EQUAL, "F_eq")
    return _feq(regime, b)


def uniform_target_limit(source, target, b: float) -> float:
    """目标均匀：sqrt(1 - G(H(U) b / sqrt(V(P))))"""
    regime = regime_classify(source, target)
    _require(regime, RegimeKind.TARGET_UNIFORM, "均匀目标极限")
    return _uniform_target(regime, b)


def uniform_source_limit(source, target, b: float) -> float:
    """源均匀：sqrt(G(-H(Q)^{3/2} b / sqrt(H(U) V(Q))))"""
    regime = regime_classify(source, target)
    _require(regime, RegimeKind.SOURCE_UNIFORM, "均匀源极限")
    return _uniform_source(regime, b)


def limit_curve(source, target, b: float, regime: Optional[ConversionRegime] = None) -> float:
    """a = H(P)/H(Q) 时按区域分派的极限曲线"""
    if regime is None:
        regime = regime_classify(source, target)
    return _CURVES[regime.kind](regime, b)


def effective_regime(regime: ConversionRegime, a: float) -> str:
    """一阶速率 a 偏离 H(P)/H(Q) 时为 off_rate，否则为原区域"""
    rate = regime.rate
    if abs(a - rate) > config.ASYMPTOTIC_CONFIG['ratio_tolerance'] * max(1.0, rate):
        return RegimeKind.OFF_RATE
    return regime.kind


def limit_fidelity(source, target, a: float, b: float) -> float:
    """
    lim F^M(P^n -> Q^{an + b√n})

    a 偏离 H(P)/H(Q) 时与 b 无关：低于该比值为1，高于为0。
    """
    if a <= 0:
        raise ValueError(f"一阶速率 a 必须为正，当前为 {a}")
    regime = regime_classify(source, target)
    if effective_regime(regime, a) == RegimeKind.OFF_RATE:
        return 1.0 if a < regime.rate else 0.0
    return limit_curve(source, target, b, regime)
