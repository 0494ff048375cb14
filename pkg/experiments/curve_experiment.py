"""
curve 子命令：a = H(P)/H(Q) 时极限保真度随 b 的曲线，
可选地在 x 网格上列出 G_P、G_{P,Q,b} 与达成曲线 A
"""

from asymptotics.attainment import attainment_curve, sample_attainment
from asymptotics.limits import limit_curve
from asymptotics.regimes import regime_classify
from experiments.base_experiment import BaseExperiment, ExperimentResult, Table
from utils.sweep_utils import parallel_map


class CurveExperiment(BaseExperiment):
    name = 'curve'
    columns = ('b', 'fidelity', 'regime')
    attainment_columns = ('x', 'g_p', 'g_pqb', 'a')

    def _run(self) -> ExperimentResult:
        cfg = self.config
        cfg.require('source', 'target', 'b_grid')
        regime = regime_classify(cfg.source, cfg.target)
        values = parallel_map(lambda b: limit_curve(cfg.source, cfg.target, b, regime), cfg.b_grid,
                              label=self.name)
        rows = [(b, value, regime.kind) for b, value in zip(cfg.b_grid, values)]
        result = ExperimentResult(table=Table(self.columns, rows),
                                  record={'regime': regime.kind, 'c_pq': regime.c_pq, 'a': regime.rate})
        if cfg.attainment_grid:
            spec = attainment_curve(cfg.source, cfg.target, cfg.attainment_b)
            samples = sample_attainment(spec, cfg.source, cfg.target, cfg.attainment_b, cfg.attainment_grid)
            result.extra_tables['attainment'] = Table(self.attainment_columns, samples)
        return result
