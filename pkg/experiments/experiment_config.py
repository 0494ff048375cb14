"""
实验配置

配置文件是扁平的 key = value 文本，# 开始注释，列表用逗号分隔，网格写成 lo:hi:step。
命令行参数覆盖文件中的同名键。
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import config
from config import OutputFormat, RoundingMode
from core.finite_dist import FiniteDist
from utils.errors import UsageError
from utils.io_utils import read_dist_arg


def parse_grid(text: str) -> List[float]:
    """'lo:hi:step'（含端点）或逗号列表"""
    text = str(text).strip()
    if ':' in text:
        parts = text.split(':')
        if len(parts) != 3:
            raise UsageError(f"网格格式应为 lo:hi:step：{text!r}")
        try:
            lo, hi, step = (float(p) for p in parts)
        except ValueError:
            raise UsageError(f"网格中有非数值项：{text!r}") from None
        if step <= 0 or hi < lo:
            raise UsageError(f"网格需要 step > 0 且 hi >= lo：{text!r}")
        count = int(math.floor((hi - lo) / step + 1e-9))
        return [round(lo + k * step, 12) for k in range(count + 1)]
    try:
        return [float(tok) for tok in text.split(',') if tok.strip()]
    except ValueError:
        raise UsageError(f"无法解析的列表：{text!r}") from None


def parse_int_list(text: str) -> List[int]:
    values = parse_grid(text)
    if any(v != int(v) for v in values):
        raise UsageError(f"需要整数列表：{text!r}")
    return [int(v) for v in values]


def load_config_file(path: str) -> Dict[str, str]:
    """读取 key = value 文件"""
    entries: Dict[str, str] = {}
    with open(path, 'r', encoding='utf-8') as f:
        for number, raw_line in enumerate(f, start=1):
            line = raw_line.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise UsageError(f"{path}:{number} 缺少 '='：{raw_line.rstrip()!r}")
            key, value = line.split('=', 1)
            entries[key.strip().replace('-', '_')] = value.strip()
    return entries


@dataclass
class ExperimentConfig:
    """一次实验运行所需的全部参数"""
    source: Optional[FiniteDist] = None
    target: Optional[FiniteDist] = None
    nu: Optional[float] = None
    b_grid: List[float] = field(default_factory=list)
    n_grid: List[int] = field(default_factory=list)
    output_path: Optional[str] = None
    format: str = OutputFormat.CSV
    b: Optional[float] = None
    a: Optional[float] = None
    rounding: str = RoundingMode.NEAREST
    attainment_grid: Optional[List[float]] = None
    attainment_b: float = 0.0
    attainment_out: Optional[str] = None

    def validate(self) -> 'ExperimentConfig':
        if self.format not in (OutputFormat.CSV, OutputFormat.JSON):
            raise UsageError(f"不支持的输出格式: {self.format}")
        if self.rounding not in (RoundingMode.NEAREST, RoundingMode.FLOOR):
            raise UsageError(f"不支持的取整方式: {self.rounding}")
        if self.nu is not None and not 0.0 < self.nu <= 1.0:
            raise UsageError(f"nu 必须在 (0, 1] 内，当前为 {self.nu}")
        for name in ('b_grid', 'n_grid'):
            grid = getattr(self, name)
            if grid and any(y <= x for x, y in zip(grid[:-1], grid[1:])):
                raise UsageError(f"{name} 必须严格递增：{grid}")
        if any(n < 1 for n in self.n_grid):
            raise UsageError(f"n_grid 只能包含正整数：{self.n_grid}")
        if self.a is not None and self.a <= 0:
            raise UsageError(f"一阶速率 a 必须为正，当前为 {self.a}")
        return self

    def require(self, *names: str) -> None:
        """检查子命令所需的字段"""
        missing = [name for name in names if getattr(self, name) in (None, [])]
        if missing:
            raise UsageError(f"缺少参数：{', '.join('--' + n.replace('_', '-') for n in missing)}")

    def require_open_nu(self) -> None:
        """二阶速率要求 nu < 1；nu = 1 只对一次性长度有意义"""
        self.require('nu')
        if self.nu >= 1.0:
            raise UsageError(f"计算 r2 时 nu 必须在 (0, 1) 内，当前为 {self.nu}")


_CONVERTERS = {
    'source': read_dist_arg,
    'target': read_dist_arg,
    'nu': float,
    'b': float,
    'a': float,
    'b_grid': parse_grid,
    'n_grid': parse_int_list,
    'attainment': parse_grid,
    'attainment_b': float,
    'format': str,
    'rounding': str,
    'out': str,
    'attainment_out': str,
}

_FIELD_NAMES = {'out': 'output_path', 'attainment': 'attainment_grid'}


def build_config(overrides: Dict[str, Any], config_path: Optional[str] = None,
                 use_defaults: bool = True) -> ExperimentConfig:
    """
    合并配置文件、命令行参数与默认网格

    Args:
        overrides: 命令行取值（None 表示未给出），值为原始字符串
        config_path: 可选的配置文件
        use_defaults: 未给出的网格是否取 EXPERIMENT_CONFIG 的默认值
    """
    raw: Dict[str, Any] = {}
    if config_path:
        raw.update(load_config_file(config_path))
    raw.update({k: v for k, v in overrides.items() if v is not None})
    if use_defaults:
        defaults = config.EXPERIMENT_CONFIG
        raw.setdefault('b_grid', defaults['b_grid'])
        raw.setdefault('n_grid', defaults['n_grid'])
        raw.setdefault('rounding', defaults['rounding'])
        raw.setdefault('attainment_b', defaults['attainment_b'])

    values: Dict[str, Any] = {}
    for key, value in raw.items():
        if key not in _CONVERTERS:
            raise UsageError(f"未知的配置项：{key}")
        try:
            values[_FIELD_NAMES.get(key, key)] = _CONVERTERS[key](value) if isinstance(value, str) else value
        except ValueError as e:
            if isinstance(e, UsageError):
                raise
            raise UsageError(f"配置项 {key} 的取值无法解析：{value!r}（{e}）") from None
    return ExperimentConfig(**values).validate()
