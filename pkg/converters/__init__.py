"""
转换器模块
优超意义下的 F^M 与确定性映射意义下的 F^D
"""

from .base_converter import BaseConverter
from .majorization import (MajorSolution, majorizes, max_fidelity_major, oracle_max_fidelity,
                           partition_bound, MajorizationConverter)
from .deterministic_maps import (DetMap, pushforward, max_fidelity_det, oneshot_L, fm_L_n,
                                 fm_L_n_search, LSearchResult, DeterministicConverter)

__all__ = [
    'BaseConverter',
    'MajorSolution', 'majorizes', 'max_fidelity_major', 'oracle_max_fidelity', 'partition_bound',
    'MajorizationConverter',
    'DetMap', 'pushforward', 'max_fidelity_det', 'oneshot_L', 'fm_L_n', 'fm_L_n_search',
    'LSearchResult', 'DeterministicConverter',
]
