"""
rate 子命令：二阶速率记录
"""

from asymptotics.rates import second_order_rate
from experiments.base_experiment import BaseExperiment, ExperimentResult, Table


class RateExperiment(BaseExperiment):
    name = 'rate'
    columns = ('a', 'r2', 'regime', 'c_pq', 'threshold', 'residual')

    def _run(self) -> ExperimentResult:
        cfg = self.config
        cfg.require('source', 'target')
        cfg.require_open_nu()
        record = second_order_rate(cfg.source, cfg.target, cfg.nu).to_record()
        row = tuple(record[c] for c in self.columns)
        return ExperimentResult(table=Table(self.columns, [row]), record=record)
