"""
finite-n 子命令：有限 n 下的 F^M(P^n -> Q^L) 与极限值对比
L = round(a n + b √n)（或向下取整），至少为1
"""

import logging
import math
from typing import Tuple

from asymptotics.limits import effective_regime, limit_fidelity
from asymptotics.rates import second_order_rate
from asymptotics.regimes import regime_classify
from config import RoundingMode
from converters.majorization import max_fidelity_major
from core.block_dist import iid_power
from experiments.base_experiment import BaseExperiment, ExperimentResult, Table
from utils.errors import UsageError
from utils.sweep_utils import parallel_map

logger = logging.getLogger(__name__)


def target_length(a: float, b: float, n: int, rounding: str = RoundingMode.NEAREST) -> int:
    """目标长度 L(n, b)"""
    exact = a * n + b * math.sqrt(n)
    if rounding == RoundingMode.FLOOR:
        length = math.floor(exact)
    else:
        length = math.floor(exact + 0.5)
    return max(1, int(length))


class FiniteNExperiment(BaseExperiment):
    name = 'finite-n'
    columns = ('n', 'L', 'fm', 'limit', 'gap')

    def _resolve_b(self) -> float:
        cfg = self.config
        if cfg.b is not None:
            return cfg.b
        if cfg.nu is None:
            raise UsageError("finite-n 需要 --b 或 --nu（由 nu 计算 r2）")
        cfg.require_open_nu()
        return second_order_rate(cfg.source, cfg.target, cfg.nu).r2

    def _run(self) -> ExperimentResult:
        cfg = self.config
        cfg.require('source', 'target', 'n_grid')
        regime = regime_classify(cfg.source, cfg.target)
        a = cfg.a if cfg.a is not None else regime.rate
        b = self._resolve_b()
        limit = limit_fidelity(cfg.source, cfg.target, a, b)

        def evaluate(n: int) -> Tuple[int, int, float, float, float]:
            length = target_length(a, b, n, cfg.rounding)
            fm = max_fidelity_major(iid_power(cfg.source, n), iid_power(cfg.target, length)).fidelity
            logger.debug("n=%d L=%d F^M=%.12g", n, length, fm)
            return n, length, fm, limit, fm - limit

        rows = parallel_map(evaluate, cfg.n_grid, label=self.name)
        record = {
            'a': a,
            'b': b,
            'regime': effective_regime(regime, a),
            'limit': limit,
            'rounding': cfg.rounding,
        }
        return ExperimentResult(table=Table(self.columns, rows), record=record)
