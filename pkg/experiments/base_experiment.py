"""
实验基类
每个子命令对应一个实验，run() 产生主表格，可附带额外表格与结构化记录
"""

import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

from experiments.experiment_config import ExperimentConfig

logger = logging.getLogger(__name__)


@dataclass
class Table:
    columns: Tuple[str, ...]
    rows: List[Tuple[Any, ...]] = field(default_factory=list)


@dataclass
class ExperimentResult:
    """实验输出：主表格、附加表格、结构化记录与是否成功"""
    table: Table
    extra_tables: Dict[str, Table] = field(default_factory=dict)
    record: Dict[str, Any] = field(default_factory=dict)
    ok: bool = True


class BaseExperiment(ABC):
    """实验基类"""

    name = 'experiment'
    columns: Sequence[str] = ()

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.elapsed = 0.0

    @abstractmethod
    def _run(self) -> ExperimentResult:
        """执行实验"""
        pass

    def run(self) -> ExperimentResult:
        logger.info("实验 %s 开始", self.name)
        start = time.perf_counter()
        result = self._run()
        self.elapsed = time.perf_counter() - start
        logger.info("实验 %s 结束，用时 %.3f 秒，%d 行", self.name, self.elapsed, len(result.table.rows))
        return result

    def get_info(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'type': self.__class__.__name__,
            'elapsed': self.elapsed,
        }
