"""
优超（majorization）预序与一次性最大保真度 F^M

F^M(P -> Q) = max { F(P', Q) | P ≺ P' }。
在秩域上把 (C_Q(l), C_P(l)) 画成一条折线，最优 P' 的累积曲线是它的上凸包
（最小凹优超函数）；凸包每条边上 P' 与 Q 成比例，斜率即比例系数。
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

import config
from converters.base_converter import BaseConverter
from core.block_dist import (BlockDist, as_block, cumulative, interval_log_masses,
                             merged_log_breakpoints)
from core.finite_dist import as_finite
from utils.errors import DistributionError, OracleRefusedError

logger = logging.getLogger(__name__)

ORACLE_MAX_SUPPORT = 4
_HALF_RANK = float(np.log(0.5))
_LOG_FLOAT_MAX = float(np.log(np.finfo(float).max))


@dataclass(frozen=True)
class MajorSolution:
    """F^M 的求解结果：最优值、达成者 P' 以及起作用的累积约束位置"""
    fidelity: float
    optimizer: BlockDist
    active_breakpoints: Tuple[float, ...] = ()
    active_log_breakpoints: Tuple[float, ...] = ()

    def to_record(self) -> Dict[str, Any]:
        """结构化记录，供 oneshot 命令输出"""
        opt = self.optimizer
        blocks = [
            {
                'value': float(np.exp(lv)),
                'count': exact if exact is not None else float(np.exp(lc)),
                'mass': float(mass),
            }
            for lv, lc, exact, mass in zip(opt.log_values, opt.log_counts,
                                           opt.counts_exact, opt.block_masses)
        ]
        return {
            'fidelity': self.fidelity,
            'active_breakpoints': list(self.active_breakpoints),
            'active_log_breakpoints': list(self.active_log_breakpoints),
            'blocks': blocks,
        }


def majorizes(first, second) -> bool:
    """first ≺ second：C_first(l) <= C_second(l) 对所有 l 成立，只需检查合并后的块边界"""
    a, b = as_block(first), as_block(second)
    lam = merged_log_breakpoints(a, b)
    tol = config.NUMERIC_CONFIG['majorization_tolerance']
    return bool(np.all(a.cumulative_log(lam) <= b.cumulative_log(lam) + tol))


def _upper_hull(xs: np.ndarray, ys: np.ndarray) -> List[int]:
    """按 x 排好序的点列的上凸包顶点下标（单调链）

    只弹出落在弦上或弦下方的点；高出弦的点哪怕只高出舍入误差也保留，
    P' 的累积曲线因此处处不低于源分布。
    """
    hull: List[int] = []
    for k in range(xs.size):
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            oax, oay = xs[a] - xs[o], ys[a] - ys[o]
            obx, oby = xs[k] - xs[o], ys[k] - ys[o]
            cross = oax * oby - oay * obx
            if cross >= 0.0:
                hull.pop()
            else:
                break
        hull.append(k)
    return hull


def max_fidelity_major(source, target) -> MajorSolution:
    """
    一次性最大保真度 F^M(source -> target)

    Args:
        source: 源分布 P（FiniteDist 或 BlockDist）
        target: 目标分布 Q（FiniteDist 或 BlockDist）

    Returns:
        MajorSolution，fidelity ∈ [0, 1]，等于1当且仅当 source ≺ target
    """
    src, tgt = as_block(source), as_block(target)
    if majorizes(src, tgt):
        return MajorSolution(fidelity=1.0, optimizer=tgt, active_breakpoints=())

    lam_all = merged_log_breakpoints(src, tgt)
    end = tgt.log_support_size
    tol = config.NUMERIC_CONFIG['merge_tolerance'] * max(1.0, abs(end))
    k_end = int(np.searchsorted(lam_all, end + tol, side='right')) - 1
    lam = lam_all[:k_end + 1]

    log_dt, log_len, t_idx = interval_log_masses(tgt, lam)
    log_ds_all, _, _ = interval_log_masses(src, lam_all)
    log_ds = log_ds_all[:k_end + 1].copy()
    # 超出目标支撑的源质量全部压到最后一个区间
    log_ds[k_end] = logsumexp(log_ds_all[k_end:])

    xs = np.concatenate([[0.0], np.cumsum(np.exp(log_dt))])
    ys = np.concatenate([[0.0], np.cumsum(np.exp(log_ds))])
    xs[-1] = ys[-1] = 1.0
    hull = _upper_hull(xs, ys)
    logger.debug("凸包顶点 %d 个（候选点 %d 个）", len(hull), xs.size)

    value = 0.0
    piece_lv: List[float] = []
    piece_lc: List[float] = []
    piece_exact: List[Any] = []
    for a, b in zip(hull[:-1], hull[1:]):
        edge_t = float(logsumexp(log_dt[a:b]))
        edge_s = float(logsumexp(log_ds[a:b]))
        if not np.isfinite(edge_s) or not np.isfinite(edge_t):
            continue
        value += float(np.exp(0.5 * (edge_t + edge_s)))
        log_slope = edge_s - edge_t
        for i in range(a, b):
            # 秩是整数，长度不足半个元素的区间只是浮点残差
            if not log_len[i] > _HALF_RANK:
                continue
            lc = max(float(log_len[i]), 0.0)
            piece_lv.append(float(tgt.log_values[t_idx[i]]) + log_slope)
            piece_lc.append(lc)
            piece_exact.append(int(round(np.exp(lc))) if lc < 36.0 else None)

    optimizer = BlockDist.from_blocks(piece_lv, piece_lc, piece_exact)
    active_log = tuple(float(lam[v - 1]) for v in hull[1:-1])
    active = tuple(math.exp(x) if x < _LOG_FLOAT_MAX else math.inf for x in active_log)
    return MajorSolution(fidelity=min(value, 1.0), optimizer=optimizer, active_breakpoints=active,
                         active_log_breakpoints=active_log)


def _sorted_support(dist) -> np.ndarray:
    if isinstance(dist, BlockDist):
        return dist.to_sorted_vector()
    return as_finite(dist).sorted_desc()


def oracle_max_fidelity(source, target) -> float:
    """
    小支撑上的独立求解：枚举起作用的累积约束子集

    对每个子集构造在相邻约束之间与目标成比例的候选 P'，保留可行者取最大。
    目标支撑超过4时拒绝。
    """
    q = _sorted_support(target)
    q = q[q > 0]
    m = q.size
    if m > ORACLE_MAX_SUPPORT:
        raise OracleRefusedError(f"oracle 仅支持目标支撑 <= {ORACLE_MAX_SUPPORT}，当前为 {m}")
    p = _sorted_support(source)
    c_src = np.concatenate([[0.0], np.cumsum(p)])
    c_src = np.minimum(c_src, 1.0)
    bound = np.array([c_src[min(l, p.size)] for l in range(m + 1)])
    bound[m] = 1.0
    c_tgt = np.concatenate([[0.0], np.cumsum(q)])
    slack = config.NUMERIC_CONFIG['active_tolerance']

    best = 0.0
    for r in range(m):
        for binding in itertools.combinations(range(1, m), r):
            points = (0,) + binding + (m,)
            x = np.empty(m)
            feasible = True
            value = 0.0
            for lo, hi in zip(points[:-1], points[1:]):
                ds = bound[hi] - bound[lo]
                if ds < -slack:
                    feasible = False
                    break
                ds = max(ds, 0.0)
                dq = c_tgt[hi] - c_tgt[lo]
                x[lo:hi] = q[lo:hi] * ds / dq
                value += np.sqrt(ds * dq)
            if not feasible:
                continue
            if np.all(np.cumsum(x) >= bound[1:] - slack):
                best = max(best, float(value))
    return min(best, 1.0)


def partition_bound(dist, target, cuts: Sequence[float]) -> float:
    """
    按秩区间划分的 Cauchy-Schwarz 上界 sum_A sqrt(P(A) Q(A))

    cuts 为递增的秩位置，区间为 [0, c_1], (c_1, c_2], ..., (c_k, ∞)。
    """
    d, t = as_block(dist), as_block(target)
    cuts = [float(c) for c in cuts]
    if any(c < 0 for c in cuts) or any(b <= a for a, b in zip(cuts[:-1], cuts[1:])):
        raise DistributionError(f"cuts 必须是严格递增的非负秩：{cuts}")
    cum_d = [0.0] + [cumulative(d, c) for c in cuts] + [1.0]
    cum_t = [0.0] + [cumulative(t, c) for c in cuts] + [1.0]
    total = 0.0
    for k in range(len(cum_d) - 1):
        total += np.sqrt(max(0.0, cum_d[k + 1] - cum_d[k]) * max(0.0, cum_t[k + 1] - cum_t[k]))
    return float(total)


class MajorizationConverter(BaseConverter):
    """F^M 求解器，记录调用次数与耗时"""

    def __init__(self, name: str = "F^M"):
        super().__init__(name)
        self.unit_hits = 0

    def solve(self, source, target) -> Tuple[float, MajorSolution]:
        solution = max_fidelity_major(source, target)
        if solution.fidelity >= 1.0:
            self.unit_hits += 1
        return solution.fidelity, solution

    def reset(self):
        super().reset()
        self.unit_hits = 0

    def get_info(self) -> Dict[str, Any]:
        info = super().get_info()
        info['unit_hits'] = self.unit_hits
        return info
