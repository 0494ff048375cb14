#!/usr/bin/env python3
"""
随机数转换保真度命令行工具

子命令：
  rate      二阶速率 r2(P, Q|nu)
  curve     a = H(P)/H(Q) 时极限保真度随 b 的曲线
  finite-n  有限 n 的 F^M 与极限值对比
  oneshot   一次性的 F^D、F^M 与最优映射
  validate  不变量校验

退出码：0 成功，1 输入输出或用法错误，2 区域错误
"""

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional

from config import ExitCode, OutputFormat
from experiments import (CurveExperiment, FiniteNExperiment, OneshotExperiment, RateExperiment,
                         ValidateExperiment, build_config)
from utils.errors import ConversionError, RegimeError, UsageError
from utils.io_utils import render_record, render_table, write_text
from utils.log_utils import setup_logging

logger = logging.getLogger('conversion_cli')

EXPERIMENTS = {
    'rate': RateExperiment,
    'curve': CurveExperiment,
    'finite-n': FiniteNExperiment,
    'oneshot': OneshotExperiment,
    'validate': ValidateExperiment,
}

# 以结构化记录而不是表格写出 JSON 的子命令
RECORD_COMMANDS = ('rate', 'oneshot')


class CliArgumentParser(argparse.ArgumentParser):
    """用法错误抛出 UsageError，由 main 统一映射为退出码1"""

    def error(self, message):
        raise UsageError(message)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--config', type=str, help='key = value 格式的配置文件')
    parser.add_argument('--source', type=str, help='源分布 P：行内列表或文件路径')
    parser.add_argument('--target', type=str, help='目标分布 Q：行内列表或文件路径')
    parser.add_argument('--nu', type=str, help='保真度要求 nu')
    parser.add_argument('--format', type=str, choices=[OutputFormat.CSV, OutputFormat.JSON],
                        help='输出格式')
    parser.add_argument('--out', type=str, help='输出文件，默认标准输出')
    parser.add_argument('--log-level', type=str, default=None, help='日志级别')


def create_parser() -> argparse.ArgumentParser:
    """构造命令行解析器"""
    parser = CliArgumentParser(description="随机数转换保真度工具")
    sub = parser.add_subparsers(dest='command', metavar='command')

    for name in ('rate', 'oneshot', 'validate'):
        _add_common(sub.add_parser(name))

    curve = sub.add_parser('curve')
    _add_common(curve)
    curve.add_argument('--b-grid', type=str, help='b 网格 lo:hi:step')
    curve.add_argument('--attainment', type=str, help='达成曲线的 x 网格 lo:hi:step')
    curve.add_argument('--attainment-b', type=str, help='达成曲线使用的 b')
    curve.add_argument('--attainment-out', type=str, help='达成曲线表格的输出文件')

    finite = sub.add_parser('finite-n')
    _add_common(finite)
    finite.add_argument('--n-grid', type=str, help='n 列表，例如 50,100,200,400')
    finite.add_argument('--b', type=str, help='固定的二阶速率 b（否则由 nu 计算）')
    finite.add_argument('--a', type=str, help='一阶速率 a，默认 H(P)/H(Q)')
    finite.add_argument('--rounding', type=str, help='L 的取整方式 nearest|floor')
    return parser


_OPTION_KEYS = ('source', 'target', 'nu', 'format', 'out', 'b_grid', 'n_grid', 'b', 'a',
                'rounding', 'attainment', 'attainment_b', 'attainment_out')


def run_command(args: argparse.Namespace, major_solver: Optional[Callable] = None) -> int:
    """执行子命令并写出结果，返回退出码"""
    overrides: Dict[str, Optional[str]] = {key: getattr(args, key, None) for key in _OPTION_KEYS}
    config_obj = build_config(overrides, args.config, use_defaults=args.command in ('curve', 'finite-n'))
    fmt = config_obj.format

    experiment_cls = EXPERIMENTS[args.command]
    if experiment_cls is ValidateExperiment and major_solver is not None:
        experiment = experiment_cls(config_obj, major_solver=major_solver)
    else:
        experiment = experiment_cls(config_obj)
    result = experiment.run()

    if args.command in RECORD_COMMANDS and fmt == OutputFormat.JSON:
        text = render_record(result.record, fmt)
    else:
        text = render_table(result.table.columns, result.table.rows, fmt)

    attainment = result.extra_tables.get('attainment')
    if attainment is not None:
        extra = render_table(attainment.columns, attainment.rows, fmt)
        if config_obj.attainment_out:
            write_text(extra, config_obj.attainment_out)
        else:
            text = text + '\n' + extra
    write_text(text, config_obj.output_path)

    if not result.ok:
        for suite, failure in result.record.get('failures', {}).items():
            sys.stderr.write(f"不变量 {suite} 失败：{failure}\n")
        return ExitCode.IO_ERROR
    return ExitCode.OK


def main(argv: Optional[List[str]] = None, major_solver: Optional[Callable] = None) -> int:
    """主函数"""
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("请指定子命令：" + ', '.join(EXPERIMENTS))
        setup_logging(args.log_level)
        return run_command(args, major_solver)
    except RegimeError as e:
        logger.error("区域错误: %s", e)
        sys.stderr.write(f"区域错误: {e}\n")
        return ExitCode.REGIME_ERROR
    except (UsageError, OSError, ConversionError, ValueError) as e:
        logger.error("%s", e)
        sys.stderr.write(f"错误: {e}\n")
        if isinstance(e, UsageError):
            sys.stderr.write(parser.format_usage())
        return ExitCode.IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
