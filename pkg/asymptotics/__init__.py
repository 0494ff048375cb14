"""
二阶渐近模块
高斯模型、区域分类、极限曲线、达成曲线与二阶速率
"""

from .gaussian import GaussianSpec, model_pair, overlap, overlap_quadrature
from .regimes import ConversionRegime, regime_classify
from .limits import (solve_threshold, gaussian_overlap, f1_limit, f2_limit, feq_limit,
                     uniform_target_limit, uniform_source_limit, limit_curve, limit_fidelity, effective_regime)
from .attainment import CdfSegment, AttainmentSpec, attainment_curve, attainment_fidelity, sample_attainment
from .rates import RateResult, second_order_rate, ldn_expand

__all__ = [
    'GaussianSpec', 'model_pair', 'overlap', 'overlap_quadrature',
    'ConversionRegime', 'regime_classify',
    'solve_threshold', 'gaussian_overlap', 'f1_limit', 'f2_limit', 'feq_limit',
    'uniform_target_limit', 'uniform_source_limit', 'limit_curve', 'limit_fidelity', 'effective_regime',
    'CdfSegment', 'AttainmentSpec', 'attainment_curve', 'attainment_fidelity', 'sample_attainment',
    'RateResult', 'second_order_rate', 'ldn_expand',
]
