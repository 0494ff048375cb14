"""
确定性映射 W: X -> Y 上的精确优化

- max_fidelity_det: 穷举全部 |Y|^|X| 个映射求 F^D
- oneshot_L: 一次性可生成的最大目标长度 L^D(P, Q|nu)
- fm_L_n: 以 F^M 代替 F^D 计算 L^D_n(P, Q|nu)
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

import config
from converters.base_converter import BaseConverter
from converters.majorization import max_fidelity_major
from core.block_dist import iid_power
from core.finite_dist import FiniteDist, as_finite, explicit_power
from core.functionals import entropy
from utils.errors import SearchSpaceError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DetMap:
    """确定性映射：assignment[x] 为源符号 x 的像"""
    assignment: Tuple[int, ...]

    def __post_init__(self):
        assignment = tuple(int(y) for y in self.assignment)
        if not assignment:
            raise ValueError("映射至少需要一个源符号")
        if min(assignment) < 0:
            raise ValueError(f"映射的像必须是非负下标：{assignment}")
        object.__setattr__(self, 'assignment', assignment)

    @classmethod
    def identity(cls, size: int) -> 'DetMap':
        return cls(tuple(range(size)))

    @classmethod
    def constant(cls, size: int, value: int = 0) -> 'DetMap':
        return cls(tuple([value] * size))

    @property
    def image_size(self) -> int:
        return max(self.assignment) + 1


def pushforward(mapping: DetMap, dist, target_size: Optional[int] = None) -> FiniteDist:
    """W(P)(y) = sum_{x in W^{-1}(y)} P(x)"""
    dist = as_finite(dist)
    if len(mapping.assignment) != dist.size:
        raise ValueError(f"映射定义域大小 {len(mapping.assignment)} 与分布大小 {dist.size} 不一致")
    size = target_size if target_size is not None else mapping.image_size
    if mapping.image_size > size:
        raise ValueError(f"映射的像超出目标大小 {size}")
    masses = np.bincount(np.array(mapping.assignment), weights=dist.array, minlength=size)
    return FiniteDist.from_weights(masses)


def _search_space(source_size: int, target_size: int) -> int:
    return target_size ** source_size


def _scan_chunk(p: np.ndarray, q: np.ndarray, start: int, stop: int) -> Tuple[float, int]:
    """在字典序下标 [start, stop) 内求最大保真度及第一个达到它的下标"""
    nx, ny = p.size, q.size
    idx = np.arange(start, stop, dtype=np.int64)
    powers = ny ** np.arange(nx - 1, -1, -1, dtype=np.int64)
    digits = (idx[:, None] // powers[None, :]) % ny
    rows = np.arange(idx.size)
    masses = np.zeros((idx.size, ny))
    for x in range(nx):
        masses[rows, digits[:, x]] += p[x]
    values = np.sqrt(masses * q[None, :]).sum(axis=1)
    best = float(values.max())
    first = int(np.argmax(values >= best - config.NUMERIC_CONFIG['fidelity_slack']))
    return best, start + first


def _decode(index: int, nx: int, ny: int) -> DetMap:
    digits = []
    for _ in range(nx):
        index, d = divmod(index, ny)
        digits.append(d)
    return DetMap(tuple(reversed(digits)))


def max_fidelity_det(source, target) -> Tuple[float, DetMap]:
    """
    F^D(P -> Q)：穷举所有确定性映射

    Returns:
        (最大保真度, 字典序最小的最优映射)

    Raises:
        SearchSpaceError: |Y|^|X| 超过穷举上限
    """
    p = as_finite(source).array
    q = as_finite(target).array
    total = _search_space(p.size, q.size)
    limit = config.SEARCH_CONFIG['exhaustive_limit']
    if total > limit:
        logger.warning("拒绝穷举：%d^%d 个映射超过上限 %d", q.size, p.size, limit)
        raise SearchSpaceError(
            f"映射空间 {q.size}^{p.size} = {total} 超过穷举上限 {limit}，请改用 F^M（max_fidelity_major）"
        )
    chunk = config.SEARCH_CONFIG['chunk_size']
    starts = list(range(0, total, chunk))
    threads = config.get_thread_count()
    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(lambda s: _scan_chunk(p, q, s, min(s + chunk, total)), starts))
    else:
        results = [_scan_chunk(p, q, s, min(s + chunk, total)) for s in starts]

    # 按下标顺序合并，结果与调度无关
    best = max(value for value, _ in results)
    slack = config.NUMERIC_CONFIG['fidelity_slack']
    winner = next(index for value, index in results if value >= best - slack)
    return min(best, 1.0), _decode(winner, p.size, q.size)


def _require_spread(target: FiniteDist):
    if target.is_point_mass():
        raise SearchSpaceError("目标分布是点质量：任意长度 L 都可以完美生成，L 无上界")


def oneshot_L(source, target, nu: float) -> int:
    """
    L^D(P, Q|nu)：max_fidelity_det(P, Q^L) >= nu 的最大 L，L=1 都不满足时返回0

    F^D 对 L 单调不增（Q^L 的边缘就是 Q^{L-1}），遇到第一个失败即停止。
    """
    if not 0.0 < nu <= 1.0:
        raise ValueError(f"nu 必须在 (0, 1] 内，当前为 {nu}")
    source, target = as_finite(source), as_finite(target)
    _require_spread(target)
    slack = config.NUMERIC_CONFIG['fidelity_slack']
    best = 0
    length = 1
    while True:
        if _search_space(source.size, target.size ** length) > config.SEARCH_CONFIG['exhaustive_limit']:
            raise SearchSpaceError(
                f"L={length} 时映射空间 {target.size ** length}^{source.size} 超过穷举上限，无法确定 L^D"
            )
        value, _ = max_fidelity_det(source, explicit_power(target, length))
        if value < nu - slack:
            return best
        best = length
        length += 1


@dataclass
class LSearchResult:
    """fm_L_n 的完整搜索记录"""
    L: int
    upper_limit: int
    evaluations: Dict[int, float] = field(default_factory=dict)
    monotone: bool = True
    fallback: bool = False

    @property
    def sentinel_hit(self) -> bool:
        return self.L >= self.upper_limit


def scan_upper_limit(source: FiniteDist, target: FiniteDist, n: int) -> int:
    """L 的扫描上限 ceil(scan_factor * a * n) + scan_margin，a = H(P)/H(Q)"""
    rate = entropy(source) / entropy(target)
    search = config.SEARCH_CONFIG
    return int(math.ceil(search['scan_factor'] * rate * n)) + int(search['scan_margin'])


def fm_L_n_search(source, target, n: int, nu: float) -> LSearchResult:
    """指数括号 + 二分搜索；检测到非单调时退回线性扫描"""
    if not 0.0 < nu <= 1.0:
        raise ValueError(f"nu 必须在 (0, 1] 内，当前为 {nu}")
    if n < 1:
        raise ValueError(f"n 必须为正整数，当前为 {n}")
    source, target = as_finite(source), as_finite(target)
    _require_spread(target)
    source_n = iid_power(source, n)
    slack = config.NUMERIC_CONFIG['fidelity_slack']
    result = LSearchResult(L=0, upper_limit=scan_upper_limit(source, target, n))

    def fm(length: int) -> float:
        if length not in result.evaluations:
            result.evaluations[length] = max_fidelity_major(source_n, iid_power(target, length)).fidelity
        return result.evaluations[length]

    def ok(length: int) -> bool:
        return fm(length) >= nu - slack

    limit = result.upper_limit
    if not ok(1):
        return result
    lo, hi = 1, 2
    while hi <= limit and ok(hi):
        lo, hi = hi, hi * 2
    if hi > limit:
        if ok(limit):
            lo = hi = limit
        else:
            hi = limit
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    result.L = lo

    lengths = sorted(result.evaluations)
    values = [result.evaluations[k] for k in lengths]
    result.monotone = all(b <= a + slack for a, b in zip(values[:-1], values[1:]))
    if not result.monotone:
        logger.warning("F^M 在 L 上出现非单调（n=%d, nu=%g），退回线性扫描", n, nu)
        result.fallback = True
        result.L = max((k for k in range(1, limit + 1) if ok(k)), default=0)
    logger.debug("fm_L_n: n=%d nu=%g -> L=%d（评估 %d 次）", n, nu, result.L, len(result.evaluations))
    return result


def fm_L_n(source, target, n: int, nu: float) -> int:
    """L^D_n(P, Q|nu) 的 F^M 替代：max_fidelity_major(P^n, Q^L) >= nu 的最大 L"""
    return fm_L_n_search(source, target, n, nu).L


class DeterministicConverter(BaseConverter):
    """F^D 穷举求解器"""

    def __init__(self, name: str = "F^D"):
        super().__init__(name)
        self.maps_evaluated = 0

    def solve(self, source, target) -> Tuple[float, DetMap]:
        source, target = as_finite(source), as_finite(target)
        value, mapping = max_fidelity_det(source, target)
        self.maps_evaluated += _search_space(source.size, target.size)
        return value, mapping

    def reset(self):
        super().reset()
        self.maps_evaluated = 0

    def get_info(self) -> Dict[str, Any]:
        info = super().get_info()
        info['maps_evaluated'] = self.maps_evaluated
        return info
