"""
二阶渐近中的高斯模型

N_P = N(0, V(P))，N_{P,Q,b} = N(H(Q) b, H(P)/H(Q) V(Q))。
所有 CDF/密度都提供对数域版本，阈值方程在尾部不会下溢。
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.integrate import quad
from scipy.special import log_ndtr, ndtr, ndtri

import config
from core.functionals import SourceStats, stats

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class GaussianSpec:
    """一维高斯分布 N(mean, variance)"""
    mean: float
    variance: float

    def __post_init__(self):
        if not (np.isfinite(self.mean) and np.isfinite(self.variance)) or self.variance <= 0.0:
            raise ValueError(f"高斯分布需要有限均值与正方差：mean={self.mean}, variance={self.variance}")

    @property
    def sd(self) -> float:
        return math.sqrt(self.variance)

    def standardize(self, x):
        return (np.asarray(x, dtype=float) - self.mean) / self.sd

    def cdf(self, x):
        return ndtr(self.standardize(x))

    def sf(self, x):
        return ndtr(-self.standardize(x))

    def logcdf(self, x):
        return log_ndtr(self.standardize(x))

    def logsf(self, x):
        return log_ndtr(-self.standardize(x))

    def logpdf(self, x):
        z = self.standardize(x)
        return -0.5 * z * z - math.log(self.sd) - _LOG_SQRT_2PI

    def pdf(self, x):
        return np.exp(self.logpdf(x))

    def ppf(self, u):
        return self.mean + self.sd * ndtri(u)


def source_gaussian(source: SourceStats) -> GaussianSpec:
    """N_P"""
    return GaussianSpec(0.0, source.v)


def shifted_target_gaussian(source: SourceStats, target: SourceStats, b: float) -> GaussianSpec:
    """N_{P,Q,b}"""
    return GaussianSpec(target.h * b, source.h / target.h * target.v)


def model_pair(source, target, b: float) -> Tuple[GaussianSpec, GaussianSpec]:
    """(N_P, N_{P,Q,b})，要求两个分布的变熵都为正"""
    sp, sq = stats(source), stats(target)
    return source_gaussian(sp), shifted_target_gaussian(sp, sq, b)


def product_center(first: GaussianSpec, second: GaussianSpec) -> Tuple[float, float]:
    """sqrt(N_1 N_2) 归一化后仍是高斯，返回其 (均值, 标准差)"""
    precision = 0.5 / first.variance + 0.5 / second.variance
    mean = (0.5 * first.mean / first.variance + 0.5 * second.mean / second.variance) / precision
    return mean, 1.0 / math.sqrt(precision)


def overlap(first: GaussianSpec, second: GaussianSpec, x: float = np.inf) -> float:
    """
    I(x) = ∫_{-∞}^{x} sqrt(N_1(t) N_2(t)) dt 的闭式

    I(∞) = sqrt(2 s1 s2 / (s1² + s2²)) exp(-(m1 - m2)² / (4 (s1² + s2²)))
    """
    total_var = first.variance + second.variance
    log_scale = (0.5 * math.log(2.0 * first.sd * second.sd / total_var)
                 - (first.mean - second.mean) ** 2 / (4.0 * total_var))
    mean, sd = product_center(first, second)
    if x == np.inf:
        return float(math.exp(log_scale))
    return float(math.exp(log_scale + log_ndtr((x - mean) / sd)))


def overlap_quadrature(first: GaussianSpec, second: GaussianSpec, x: float = np.inf) -> float:
    """I(x) 的自适应数值积分，用于校验闭式"""
    cfg = config.ASYMPTOTIC_CONFIG
    mean, sd = product_center(first, second)
    lo = mean - cfg['quad_window_sigmas'] * sd
    hi = min(x, mean + cfg['quad_window_sigmas'] * sd)
    if hi <= lo:
        return 0.0
    value, _ = quad(lambda t: math.exp(0.5 * (first.logpdf(t) + second.logpdf(t))), lo, hi,
                    epsabs=cfg['quad_epsabs'], epsrel=cfg['quad_epsrel'], limit=cfg['quad_limit'])
    return float(value)
