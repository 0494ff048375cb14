"""
分布核心模块
统一导出有限分布、块分布及其泛函
"""

from .finite_dist import FiniteDist, explicit_power, parse_dist, format_dist, as_finite
from .block_dist import (BlockDist, iid_power, cumulative, rank_fidelity, merged_log_breakpoints,
                         interval_log_masses, as_block, log_diff)
from .functionals import SourceStats, entropy, varentropy, fidelity, hellinger, stats, is_uniform

__all__ = [
    'FiniteDist', 'explicit_power', 'parse_dist', 'format_dist', 'as_finite',
    'BlockDist', 'iid_power', 'cumulative', 'rank_fidelity', 'merged_log_breakpoints',
    'interval_log_masses', 'as_block', 'log_diff',
    'SourceStats', 'entropy', 'varentropy', 'fidelity', 'hellinger', 'stats', 'is_uniform',
]
