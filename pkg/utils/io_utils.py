"""
输入输出工具：分布参数读取、数值格式化、CSV/JSON 写出
"""

import csv
import io
import json
import os
import sys
from typing import Any, Dict, Iterable, Optional, Sequence

import numpy as np

import config
from config import OutputFormat
from core.finite_dist import FiniteDist, parse_dist
from utils.errors import UsageError


def read_dist_arg(text: str) -> FiniteDist:
    """--source/--target 的取值：存在的文件路径按文件读取，否则按行内列表解析"""
    if os.path.isfile(text):
        with open(text, 'r', encoding='utf-8') as f:
            return parse_dist(f.read())
    return parse_dist(text)


def format_value(value: Any) -> str:
    """浮点数固定12位有效数字，保证输出逐字节可复现"""
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        digits = config.EXPERIMENT_CONFIG['significant_digits']
        return f"{float(value):.{digits}g}"
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not np.isfinite(value):
            return str(value)
        return float(format_value(value))
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def render_table(columns: Sequence[str], rows: Iterable[Sequence[Any]], fmt: str) -> str:
    """表格渲染为 CSV 或 JSON（记录列表）文本"""
    rows = list(rows)
    if fmt == OutputFormat.CSV:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
        return buffer.getvalue()
    if fmt == OutputFormat.JSON:
        records = [dict(zip(columns, row)) for row in rows]
        return json.dumps(_jsonable(records), ensure_ascii=False, indent=2) + '\n'
    raise UsageError(f"不支持的输出格式: {fmt}")


def render_record(record: Dict[str, Any], fmt: str) -> str:
    """单条结构化记录；CSV 时写成 key,value 两列"""
    if fmt == OutputFormat.JSON:
        return json.dumps(_jsonable(record), ensure_ascii=False, indent=2) + '\n'
    flat = [(k, v) for k, v in record.items() if not isinstance(v, (dict, list, tuple))]
    return render_table(['key', 'value'], flat, OutputFormat.CSV)


def write_text(text: str, path: Optional[str] = None) -> None:
    """写到文件，path 为空时写到标准输出"""
    if not path:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
