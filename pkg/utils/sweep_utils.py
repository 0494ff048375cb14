"""
网格扫描工具
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

import config

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def parallel_map(func: Callable[[T], R], items: Sequence[T], threads: Optional[int] = None,
                 label: str = 'sweep') -> List[R]:
    """
    并行计算网格点，结果按输入顺序返回

    Args:
        func: 单点计算函数
        items: 网格
        threads: 线程数，默认读取环境变量 RNGCONV_THREADS
        label: 日志中的名称
    """
    items = list(items)
    threads = threads or config.get_thread_count()
    logger.info("%s: %d 个网格点，%d 个线程", label, len(items), threads)
    if threads <= 1 or len(items) <= 1:
        results = []
        for k, item in enumerate(items):
            results.append(func(item))
            logger.debug("%s: 已完成 %d/%d", label, k + 1, len(items))
        return results
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(func, items))
