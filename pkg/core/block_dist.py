"""
块分布
把巨大的分布（例如 P^n）压缩成按取值降序排列的 (对数取值, 对数重数) 块。
P^n 的每个块是一个型类（type class），同一型类内所有序列概率相同。

排名位置（秩 l）同样保存在对数域，支撑大小可以远超 float64 的表示范围。
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln, logsumexp

import config
from core.finite_dist import FiniteDist
from utils.errors import DistributionError


def log_diff(log_hi, log_lo):
    """log(e^hi - e^lo)，要求 hi >= lo；lo 可以是 -inf"""
    log_hi = np.asarray(log_hi, dtype=float)
    log_lo = np.asarray(log_lo, dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        out = log_hi + np.log1p(-np.exp(log_lo - log_hi))
    out = np.where(np.isneginf(log_lo), log_hi, out)
    out = np.where(log_lo >= log_hi, -np.inf, out)
    return out


@dataclass(frozen=True, eq=False)
class BlockDist:
    """
    块压缩的排序分布

    Attributes:
        log_values: 每个块内单个元素概率的自然对数，严格降序
        log_counts: 每个块元素个数的自然对数
        counts_exact: 精确整数个数（可表示时），否则为 None
    """

    log_values: np.ndarray
    log_counts: np.ndarray
    counts_exact: Tuple[Optional[int], ...] = None
    log_cum_counts: np.ndarray = field(init=False, repr=False, compare=False)
    cum_masses: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lv = np.array(self.log_values, dtype=float)
        lc = np.array(self.log_counts, dtype=float)
        if lv.ndim != 1 or lv.shape != lc.shape or lv.size == 0:
            raise DistributionError("块分布需要等长且非空的一维数组")
        exact = self.counts_exact
        if exact is None:
            exact = tuple([None] * lv.size)
        exact = tuple(exact)
        if len(exact) != lv.size:
            raise DistributionError("counts_exact 长度与块数不一致")
        if not np.isfinite(lv).all() or not np.isfinite(lc).all():
            raise DistributionError("块的对数取值与对数重数必须有限")
        if np.any(np.diff(lv) >= 0.0):
            raise DistributionError("块的对数取值必须严格降序")
        if np.any(lc < -1e-9):
            raise DistributionError("每个块至少包含一个元素")
        log_mass = float(logsumexp(lc + lv))
        tol = config.NUMERIC_CONFIG['log_mass_tolerance']
        if abs(log_mass) > tol:
            raise DistributionError(f"块分布总质量不为1：log 总质量 = {log_mass!r}")

        for arr in (lv, lc):
            arr.setflags(write=False)
        log_cum = np.logaddexp.accumulate(lc)
        cum = np.cumsum(np.exp(lc + lv))
        for arr in (log_cum, cum):
            arr.setflags(write=False)
        object.__setattr__(self, 'log_values', lv)
        object.__setattr__(self, 'log_counts', lc)
        object.__setattr__(self, 'counts_exact', exact)
        object.__setattr__(self, 'log_cum_counts', log_cum)
        object.__setattr__(self, 'cum_masses', cum)

    # ---------------------------------------------------------------- 构造
    @classmethod
    def from_blocks(cls, log_values: Sequence[float], log_counts: Sequence[float],
                    counts_exact: Optional[Sequence[Optional[int]]] = None) -> 'BlockDist':
        """从任意顺序的块构造：排序并合并取值相同的块"""
        lv, lc, ex = merge_blocks(log_values, log_counts, counts_exact)
        return cls(lv, lc, ex)

    @classmethod
    def from_finite(cls, dist: FiniteDist) -> 'BlockDist':
        """显式分布 -> 块分布（零概率分量被丢弃）"""
        support = dist.support()
        return cls.from_blocks(np.log(support), np.zeros(support.size), [1] * support.size)

    # ---------------------------------------------------------------- 属性
    @property
    def num_blocks(self) -> int:
        return int(self.log_values.size)

    @property
    def block_masses(self) -> np.ndarray:
        return np.exp(self.log_counts + self.log_values)

    @property
    def log_support_size(self) -> float:
        return float(self.log_cum_counts[-1])

    @property
    def support_size(self) -> float:
        """支撑大小（可能溢出为 inf）"""
        return float(np.exp(self.log_support_size))

    def exact_support_size(self) -> Optional[int]:
        if any(c is None for c in self.counts_exact):
            return None
        return int(sum(self.counts_exact))

    def entropy(self) -> float:
        """块层面的熵（自然对数）"""
        return float(np.sum(self.block_masses * -self.log_values))

    def varentropy(self) -> float:
        h = self.entropy()
        return float(np.sum(self.block_masses * (-self.log_values - h) ** 2))

    def to_sorted_vector(self, size: Optional[int] = None, max_size: int = 10 ** 7) -> np.ndarray:
        """展开为降序概率向量，可用零补齐到 size"""
        if self.log_support_size > math.log(max_size) + 1e-9:
            raise DistributionError(f"支撑过大，无法展开（log 支撑 = {self.log_support_size:.3f}）")
        counts = [c if c is not None else int(round(math.exp(lc)))
                  for c, lc in zip(self.counts_exact, self.log_counts)]
        vec = np.repeat(np.exp(self.log_values), counts)
        if size is not None:
            if size < vec.size:
                raise DistributionError(f"size={size} 小于支撑大小 {vec.size}")
            vec = np.concatenate([vec, np.zeros(size - vec.size)])
        return vec

    def to_finite(self) -> FiniteDist:
        return FiniteDist.from_weights(self.to_sorted_vector())

    # ---------------------------------------------------------------- 累积
    def cumulative_log(self, log_ranks) -> np.ndarray:
        """
        C_D 在对数秩处的取值（向量化）

        块内按线性插值，秩超过支撑大小时返回1。
        """
        lam = np.atleast_1d(np.asarray(log_ranks, dtype=float))
        idx = np.searchsorted(self.log_cum_counts, lam, side='left')
        inside = idx < self.num_blocks
        safe = np.minimum(idx, self.num_blocks - 1)
        prev_log = np.where(safe > 0, self.log_cum_counts[np.maximum(safe - 1, 0)], -np.inf)
        prev_mass = np.where(safe > 0, self.cum_masses[np.maximum(safe - 1, 0)], 0.0)
        step = np.exp(log_diff(lam, prev_log) + self.log_values[safe])
        out = np.where(inside, prev_mass + step, 1.0)
        out = np.where(np.isneginf(lam), 0.0, out)
        return np.minimum(out, 1.0)


def merge_blocks(log_values, log_counts, counts_exact=None):
    """排序并合并对数取值在容差内相同的块，返回 (lv, lc, exact)"""
    lv = np.asarray(log_values, dtype=float)
    lc = np.asarray(log_counts, dtype=float)
    if counts_exact is None:
        counts_exact = [None] * lv.size
    ex = list(counts_exact)
    order = np.argsort(-lv, kind='stable')
    lv, lc = lv[order], lc[order]
    ex = [ex[i] for i in order]

    tol = config.NUMERIC_CONFIG['merge_tolerance']
    limit = config.NUMERIC_CONFIG['exact_count_limit']
    out_lv: List[float] = []
    out_lc: List[float] = []
    out_ex: List[Optional[int]] = []
    start = 0
    while start < lv.size:
        stop = start + 1
        anchor = lv[start]
        while stop < lv.size and anchor - lv[stop] <= tol * max(1.0, abs(anchor)):
            stop += 1
        if stop - start == 1:
            out_lv.append(float(lv[start]))
            out_lc.append(float(lc[start]))
            out_ex.append(ex[start])
        else:
            group_lc = lc[start:stop]
            log_count = float(logsumexp(group_lc))
            log_mass = float(logsumexp(group_lc + lv[start:stop]))
            out_lv.append(log_mass - log_count)
            out_lc.append(log_count)
            group_ex = ex[start:stop]
            if all(c is not None for c in group_ex) and sum(group_ex) <= limit:
                out_ex.append(int(sum(group_ex)))
            else:
                out_ex.append(None)
        start = stop
    return np.array(out_lv), np.array(out_lc), tuple(out_ex)


@lru_cache(maxsize=None)
def _compositions(n: int, parts: int) -> np.ndarray:
    """所有和为 n 的 parts 元非负整数向量"""
    if parts == 1:
        return np.array([[n]], dtype=np.int64)
    rows = []
    for first in range(n, -1, -1):
        rest = _compositions(n - first, parts - 1)
        rows.append(np.column_stack([np.full(rest.shape[0], first, dtype=np.int64), rest]))
    return np.vstack(rows)


def iid_power(dist: FiniteDist, n: int) -> BlockDist:
    """
    P^n 的块表示

    先把取值相同的符号合并成组（组内重数 m_g），再枚举各组出现次数 (n_g)，
    型类的重数为多项式系数乘以 prod m_g^{n_g}，全部在对数域计算。
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DistributionError(f"幂次 n 必须为正整数，当前为 {n!r}")
    n = int(n)
    base = BlockDist.from_finite(dist)
    groups = base.num_blocks
    num_types = math.comb(n + groups - 1, groups - 1)
    max_types = config.SEARCH_CONFIG['max_type_classes']
    if num_types > max_types:
        raise DistributionError(f"型类数 {num_types} 超过上限 {max_types}，请减小 n")

    comp = _compositions(n, groups)
    log_p = base.log_values
    log_m = base.log_counts
    log_values = comp @ log_p
    log_counts = gammaln(n + 1) - np.sum(gammaln(comp + 1), axis=1) + comp @ log_m

    limit = config.NUMERIC_CONFIG['exact_count_limit']
    log_limit = math.log(limit) + 1e-6
    multiplicities = base.counts_exact
    exact: List[Optional[int]] = []
    for row, lc in zip(comp, log_counts):
        if lc > log_limit or None in multiplicities:
            exact.append(None)
            continue
        count = 1
        remaining = n
        for k, m in zip(row, multiplicities):
            count *= math.comb(remaining, int(k)) * m ** int(k)
            remaining -= int(k)
        exact.append(count if count <= limit else None)

    # 精确重数可用时以其对数为准
    log_counts = np.array([math.log(c) if c is not None else lc for c, lc in zip(exact, log_counts)])
    return BlockDist.from_blocks(log_values, log_counts, exact)


def cumulative(dist: BlockDist, l: float) -> float:
    """C_D(l)：前 l 个最大概率之和，l 可以是小数（块内线性插值）"""
    if l < 0:
        raise DistributionError(f"秩 l 不能为负，当前为 {l}")
    if l == 0:
        return 0.0
    return float(dist.cumulative_log(math.log(l))[0])


def merged_log_breakpoints(*dists: BlockDist) -> np.ndarray:
    """
    多个块分布的块边界（对数秩）合并去重后排序

    浮点误差造成的近似重复点只保留较小的一个，这样 searchsorted(side='left')
    仍然把以它结尾的区间归到正确的块。
    """
    lam = np.unique(np.concatenate([d.log_cum_counts for d in dists]))
    tol = config.NUMERIC_CONFIG['merge_tolerance']
    keep = np.ones(lam.size, dtype=bool)
    keep[1:] = np.diff(lam) > tol * np.maximum(1.0, np.abs(lam[1:]))
    return lam[keep]


def interval_log_masses(dist: BlockDist, log_ends: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    相邻对数秩区间 (end_{k-1}, end_k] 上的对数质量

    log_ends 必须包含 dist 自身的全部块边界（例如来自 merged_log_breakpoints），
    这样每个区间恰好落在一个块内。返回 (对数质量, 对数长度, 块下标)。
    """
    ends = np.asarray(log_ends, dtype=float)
    starts = np.concatenate([[-np.inf], ends[:-1]])
    log_len = log_diff(ends, starts)
    idx = np.searchsorted(dist.log_cum_counts, ends, side='left')
    beyond = idx >= dist.num_blocks
    idx = np.minimum(idx, dist.num_blocks - 1)
    log_mass = np.where(beyond | np.isneginf(log_len), -np.inf, log_len + dist.log_values[idx])
    return log_mass, log_len, idx


def as_block(dist) -> BlockDist:
    """FiniteDist 或 BlockDist 统一为 BlockDist"""
    if isinstance(dist, BlockDist):
        return dist
    if isinstance(dist, FiniteDist):
        return BlockDist.from_finite(dist)
    raise DistributionError(f"不支持的分布类型：{type(dist).__name__}")


def rank_fidelity(first: BlockDist, second: BlockDist) -> float:
    """按秩对齐的保真度 sum_i sqrt(P↓_i Q↓_i)"""
    ends = merged_log_breakpoints(first, second)
    mass_a, _, _ = interval_log_masses(first, ends)
    mass_b, _, _ = interval_log_masses(second, ends)
    with np.errstate(invalid='ignore'):
        terms = np.exp(0.5 * (mass_a + mass_b))
    return float(min(np.sum(terms[np.isfinite(terms)]), 1.0))
