"""
oneshot 子命令：一次性的 F^D、F^M、两者之差与最优映射
"""

import logging

from converters.deterministic_maps import DeterministicConverter, oneshot_L
from converters.majorization import (ORACLE_MAX_SUPPORT, MajorizationConverter,
                                     oracle_max_fidelity)
from experiments.base_experiment import BaseExperiment, ExperimentResult, Table
from utils.errors import SearchSpaceError

logger = logging.getLogger(__name__)


class OneshotExperiment(BaseExperiment):
    name = 'oneshot'
    columns = ('fd', 'fm', 'gap', 'assignment')

    def __init__(self, config):
        super().__init__(config)
        self.major = MajorizationConverter()
        self.deterministic = DeterministicConverter()

    def _run(self) -> ExperimentResult:
        cfg = self.config
        cfg.require('source', 'target')
        fm, solution = self.major.max_fidelity(cfg.source, cfg.target)
        record = {'fm': fm}
        try:
            fd, mapping = self.deterministic.max_fidelity(cfg.source, cfg.target)
            assignment = list(mapping.assignment)
            gap = fm - fd
        except SearchSpaceError as e:
            logger.warning("跳过 F^D：%s", e)
            fd, assignment, gap = None, None, None
        record.update({'fd': fd, 'gap': gap, 'assignment': assignment})

        if int((cfg.target.array > 0).sum()) <= ORACLE_MAX_SUPPORT:
            record['oracle'] = oracle_max_fidelity(cfg.source, cfg.target)
        if cfg.nu is not None:
            try:
                record['oneshot_L'] = oneshot_L(cfg.source, cfg.target, cfg.nu)
            except SearchSpaceError as e:
                logger.warning("跳过 L^D：%s", e)
                record['oneshot_L'] = None
        record['solution'] = solution.to_record()
        for converter in (self.major, self.deterministic):
            logger.info("转换器统计：%s", converter.get_info())

        row = (fd, fm, gap, ' '.join(str(y) for y in assignment) if assignment is not None else None)
        return ExperimentResult(table=Table(self.columns, [row]), record=record)
