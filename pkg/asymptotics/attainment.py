"""
达成曲线 A

A 是右连续、单调不减、从0升到1的分布函数，分段给出：每段是常数，
或是缩放平移后的高斯 CDF  offset + scale * G((x - mean) / sd)。
极限保真度等于 F(dA/dx, N_{P,Q,b}) = ∫ sqrt(A'(x)) sqrt(N_{P,Q,b}(x)) dx。
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad

import config
from asymptotics.gaussian import GaussianSpec, product_center, shifted_target_gaussian, source_gaussian
from asymptotics.limits import regime_threshold
from asymptotics.regimes import ConversionRegime, regime_classify
from config import RegimeKind, ThresholdKind
from utils.errors import AttainmentError, RegimeError

_CONTINUITY_TOL = 1e-9


@dataclass(frozen=True)
class CdfSegment:
    """(x_lo, x_hi] 上的一段；gaussian 为 None 时是常数 offset"""
    x_lo: float
    x_hi: float
    offset: float = 0.0
    scale: float = 0.0
    gaussian: Optional[GaussianSpec] = None

    def value(self, x):
        if self.gaussian is None:
            return np.full_like(np.asarray(x, dtype=float), self.offset)
        return self.offset + self.scale * self.gaussian.cdf(x)

    def limit_low(self) -> float:
        """x -> x_lo+ 时的取值"""
        return float(self.value(self.x_lo)) if np.isfinite(self.x_lo) else self.offset

    def limit_high(self) -> float:
        if np.isfinite(self.x_hi):
            return float(self.value(self.x_hi))
        return self.offset + (self.scale if self.gaussian is not None else 0.0)


@dataclass(frozen=True)
class AttainmentSpec:
    """按 x 排序、首尾相接的分段分布函数"""
    segments: Tuple[CdfSegment, ...]

    def __post_init__(self):
        segments = tuple(self.segments)
        object.__setattr__(self, 'segments', segments)
        if not segments:
            raise AttainmentError("A 至少需要一段")
        if segments[0].x_lo != -np.inf or segments[-1].x_hi != np.inf:
            raise AttainmentError("A 的分段必须覆盖整条实轴")
        for seg in segments:
            if not seg.x_lo < seg.x_hi:
                raise AttainmentError(f"分段区间为空：({seg.x_lo}, {seg.x_hi}]")
            if seg.gaussian is not None and seg.scale < 0:
                raise AttainmentError(f"缩放系数为负，A 不单调：scale={seg.scale}")
        for left, right in zip(segments[:-1], segments[1:]):
            if left.x_hi != right.x_lo:
                raise AttainmentError(f"分段不相接：{left.x_hi} != {right.x_lo}")
            jump = right.limit_low() - left.limit_high()
            if abs(jump) > _CONTINUITY_TOL:
                raise AttainmentError(f"A 在 x={left.x_hi} 处不连续或下降：跳跃 {jump:.3g}")
        if abs(segments[0].limit_low()) > _CONTINUITY_TOL:
            raise AttainmentError(f"A(-∞) 必须为0，当前为 {segments[0].limit_low()}")
        if abs(segments[-1].limit_high() - 1.0) > _CONTINUITY_TOL:
            raise AttainmentError(f"A(+∞) 必须为1，当前为 {segments[-1].limit_high()}")

    @classmethod
    def gaussian_cdf(cls, gaussian: GaussianSpec) -> 'AttainmentSpec':
        """A = G 单段"""
        return cls((CdfSegment(-np.inf, np.inf, 0.0, 1.0, gaussian),))

    def __call__(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty_like(xs)
        for k, seg in enumerate(self.segments):
            # 区间 (x_lo, x_hi]，第一段包含 -inf
            mask = (xs <= seg.x_hi) & ((xs > seg.x_lo) if k else True)
            out[mask] = seg.value(xs[mask])
        return out


def attainment_curve(source, target, b: float) -> AttainmentSpec:
    """
    区域对应的最优 A

    ratio_greater: x <= α 时 (G_P(α)/G_PQb(α)) G_PQb(x)，之后 G_P(x)
    ratio_less:    x <= β 时 G_P(x)，之后 1 - (1-G_P(β))/(1-G_PQb(β)) (1 - G_PQb(x))
    ratio_equal:   b > 0 时 G_P，否则 G_PQb
    """
    regime = regime_classify(source, target)
    return _curve_for(regime, b)


def _curve_for(regime: ConversionRegime, b: float) -> AttainmentSpec:
    if regime.is_uniform:
        raise RegimeError(f"{regime.kind} 区域没有高斯达成曲线")
    n_p = source_gaussian(regime.source)
    n_pqb = shifted_target_gaussian(regime.source, regime.target, b)
    if regime.kind == RegimeKind.RATIO_GREATER:
        alpha = regime_threshold(regime, b, ThresholdKind.ALPHA)
        kappa = math.exp(n_p.logcdf(alpha) - n_pqb.logcdf(alpha))
        return AttainmentSpec((
            CdfSegment(-np.inf, alpha, 0.0, kappa, n_pqb),
            CdfSegment(alpha, np.inf, 0.0, 1.0, n_p),
        ))
    if regime.kind == RegimeKind.RATIO_LESS:
        beta = regime_threshold(regime, b, ThresholdKind.BETA)
        kappa = math.exp(n_p.logsf(beta) - n_pqb.logsf(beta))
        return AttainmentSpec((
            CdfSegment(-np.inf, beta, 0.0, 1.0, n_p),
            CdfSegment(beta, np.inf, 1.0 - kappa, kappa, n_pqb),
        ))
    return AttainmentSpec.gaussian_cdf(n_p if b > 0 else n_pqb)


def _segment_overlap(seg: CdfSegment, reference: GaussianSpec) -> float:
    if seg.gaussian is None or seg.scale == 0.0:
        return 0.0
    cfg = config.ASYMPTOTIC_CONFIG
    mean, sd = product_center(seg.gaussian, reference)
    lo = max(seg.x_lo, mean - cfg['quad_window_sigmas'] * sd)
    hi = min(seg.x_hi, mean + cfg['quad_window_sigmas'] * sd)
    if hi <= lo:
        return 0.0
    log_scale = 0.5 * math.log(seg.scale)
    gaussian = seg.gaussian

    def integrand(t: float) -> float:
        return math.exp(log_scale + 0.5 * (gaussian.logpdf(t) + reference.logpdf(t)))

    value, _ = quad(integrand, lo, hi, epsabs=cfg['quad_epsabs'], epsrel=cfg['quad_epsrel'],
                    limit=cfg['quad_limit'])
    return float(value)


def attainment_fidelity(spec: AttainmentSpec, source, target, b: float) -> float:
    """F(dA/dx, N_{P,Q,b}) 的逐段自适应积分；常数段贡献为0"""
    regime = regime_classify(source, target)
    if regime.is_uniform:
        raise RegimeError(f"{regime.kind} 区域的变熵为0，N_{{P,Q,b}} 无定义")
    reference = shifted_target_gaussian(regime.source, regime.target, b)
    total = sum(_segment_overlap(seg, reference) for seg in spec.segments)
    return float(min(total, 1.0))


def sample_attainment(spec: AttainmentSpec, source, target, b: float,
                      xs: Sequence[float]) -> List[Tuple[float, float, float, float]]:
    """在网格上列出 (x, G_P(x), G_PQb(x), A(x))"""
    regime = regime_classify(source, target)
    if regime.is_uniform:
        raise RegimeError(f"{regime.kind} 区域没有高斯模型")
    n_p = source_gaussian(regime.source)
    n_pqb = shifted_target_gaussian(regime.source, regime.target, b)
    xs = np.asarray(list(xs), dtype=float)
    values = spec(xs)
    return [(float(x), float(n_p.cdf(x)), float(n_pqb.cdf(x)), float(a))
            for x, a in zip(xs, values)]
