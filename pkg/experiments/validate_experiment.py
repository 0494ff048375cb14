"""
validate 子命令：跨模块不变量校验

- oracle_equivalence: F^M 与独立枚举解一致，最优 P' 可达且优超源分布
- dominance: F^D <= F^M，且 P ≺ W(P)
- overlap_quadrature: 高斯重叠闭式与数值积分一致
- attainment_identity: 各区域极限曲线等于达成曲线的积分
- inverse_consistency: 极限曲线在 r2 处取值为 nu
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from scipy.special import ndtri

import config
from asymptotics.attainment import attainment_curve, attainment_fidelity
from asymptotics.gaussian import model_pair, overlap, overlap_quadrature, product_center
from asymptotics.limits import limit_curve, limit_fidelity
from asymptotics.rates import second_order_rate
from asymptotics.regimes import regime_classify
from config import RegimeKind
from converters.deterministic_maps import DetMap, max_fidelity_det, pushforward
from converters.majorization import majorizes, max_fidelity_major, oracle_max_fidelity
from core.block_dist import BlockDist, rank_fidelity
from core.finite_dist import FiniteDist
from core.functionals import is_uniform
from experiments.base_experiment import BaseExperiment, ExperimentResult, Table

logger = logging.getLogger(__name__)


@dataclass
class SuiteReport:
    name: str
    checked: int = 0
    failed: int = 0
    max_error: float = 0.0
    first_failure: Optional[str] = None

    def record(self, error: float, tolerance: float, describe: Callable[[], str]) -> None:
        self.checked += 1
        self.max_error = max(self.max_error, error)
        if not error <= tolerance:
            self.failed += 1
            if self.first_failure is None:
                self.first_failure = describe()


def _fmt(dist: FiniteDist) -> str:
    return '(' + ', '.join(f"{p:.6g}" for p in dist.probs) + ')'


class ValidateExperiment(BaseExperiment):
    """
    不变量校验

    Args:
        config: 实验配置（不需要分布）
        sizes: 覆盖 VALIDATION_CONFIG 中的规模与容差
        major_solver: 被检查的 F^M 求解器，测试可注入故障版本
    """

    name = 'validate'
    columns = ('suite', 'checked', 'failed', 'max_error')

    def __init__(self, config_obj, sizes: Optional[Dict[str, Any]] = None,
                 major_solver: Callable = max_fidelity_major):
        super().__init__(config_obj)
        self.settings = dict(config.VALIDATION_CONFIG)
        self.settings.update(sizes or {})
        self.major_solver = major_solver
        self.rng = np.random.default_rng(self.settings['seed'])

    def _random_dist(self, low: int, high: int) -> FiniteDist:
        size = int(self.rng.integers(low, high + 1))
        return FiniteDist.from_weights(self.rng.dirichlet(np.ones(size)))

    # ------------------------------------------------------------ suites
    def _oracle_suite(self) -> SuiteReport:
        report = SuiteReport('oracle_equivalence')
        tol = self.settings['oracle_tolerance']
        for _ in range(self.settings['oracle_pairs']):
            source, target = self._random_dist(1, 4), self._random_dist(2, 4)
            solution = self.major_solver(source, target)
            expected = oracle_max_fidelity(source, target)
            report.record(abs(solution.fidelity - expected), tol,
                          lambda: f"P={_fmt(source)} Q={_fmt(target)}: "
                                  f"F^M={solution.fidelity:.12g} oracle={expected:.12g}")
            attained = rank_fidelity(solution.optimizer, BlockDist.from_finite(target))
            feasible = majorizes(source, solution.optimizer)
            error = abs(attained - solution.fidelity) if feasible else math.inf
            report.record(error, self.settings['dominance_tolerance'],
                          lambda: f"P={_fmt(source)} Q={_fmt(target)}: 最优 P' 不可达或不优超源分布")
        return report

    def _dominance_suite(self) -> SuiteReport:
        report = SuiteReport('dominance')
        tol = self.settings['dominance_tolerance']
        ties = 0
        for _ in range(self.settings['dominance_pairs']):
            source, target = self._random_dist(1, 3), self._random_dist(2, 3)
            fd, mapping = max_fidelity_det(source, target)
            fm = self.major_solver(source, target).fidelity
            report.record(max(0.0, fd - fm), tol,
                          lambda: f"P={_fmt(source)} Q={_fmt(target)}: F^D={fd:.12g} > F^M={fm:.12g}")
            if abs(fd - fm) <= tol:
                ties += 1
            random_map = DetMap(tuple(self.rng.integers(0, target.size, size=source.size)))
            for w in (mapping, random_map):
                image = pushforward(w, source, target.size)
                report.record(0.0 if majorizes(source, image) else math.inf, tol,
                              lambda: f"P={_fmt(source)} W={w.assignment}: P 不被 W(P) 优超")
        logger.info("dominance: F^D = F^M 的情形 %d 个", ties)
        return report

    def _non_uniform_pair(self):
        while True:
            source, target = self._random_dist(2, 4), self._random_dist(2, 4)
            regime = regime_classify(source, target)
            if not regime.is_uniform:
                return source, target, regime

    def _overlap_suite(self) -> SuiteReport:
        report = SuiteReport('overlap_quadrature')
        tol = self.settings['overlap_tolerance']
        for k in range(self.settings['overlap_instances']):
            source, target, _ = self._non_uniform_pair()
            b = float(self.rng.uniform(-3.0, 3.0))
            n_p, n_pqb = model_pair(source, target, b)
            mean, sd = product_center(n_p, n_pqb)
            x = math.inf if k % 2 == 0 else float(mean + sd * self.rng.normal())
            closed, numeric = overlap(n_p, n_pqb, x), overlap_quadrature(n_p, n_pqb, x)
            report.record(abs(closed - numeric), tol,
                          lambda: f"P={_fmt(source)} Q={_fmt(target)} b={b:.6g} x={x:.6g}: "
                                  f"闭式 {closed:.12g} 积分 {numeric:.12g}")
        return report

    def _attainment_instances(self) -> List[tuple]:
        per_regime = self.settings['attainment_instances']
        buckets: Dict[str, List[tuple]] = {RegimeKind.RATIO_GREATER: [], RegimeKind.RATIO_LESS: []}
        attempts = 0
        while any(len(v) < per_regime for v in buckets.values()) and attempts < 200 * per_regime:
            attempts += 1
            source, target, regime = self._non_uniform_pair()
            # C 太接近1时阈值远离两个高斯的主体
            if regime.kind in buckets and 0.1 <= abs(math.log(regime.c_pq)) <= 3.0:
                if len(buckets[regime.kind]) < per_regime:
                    buckets[regime.kind].append((source, target))
        equal = []
        for _ in range(per_regime):
            source = self._random_dist(2, 4)
            if is_uniform(source):
                continue
            equal.append((source, FiniteDist.from_weights(self.rng.permutation(source.array))))
        return buckets[RegimeKind.RATIO_GREATER] + buckets[RegimeKind.RATIO_LESS] + equal

    def _attainment_suite(self) -> SuiteReport:
        report = SuiteReport('attainment_identity')
        tol = self.settings['attainment_tolerance']
        for source, target in self._attainment_instances():
            b = float(self.rng.uniform(-2.0, 2.0))
            curve = limit_curve(source, target, b)
            integral = attainment_fidelity(attainment_curve(source, target, b), source, target, b)
            report.record(abs(curve - integral), tol,
                          lambda: f"P={_fmt(source)} Q={_fmt(target)} b={b:.6g}: "
                                  f"曲线 {curve:.12g} 积分 {integral:.12g}")
        return report

    def _inverse_suite(self) -> SuiteReport:
        report = SuiteReport('inverse_consistency')
        tol = self.settings['inverse_tolerance']
        biased, mild, fair = (FiniteDist((0.8, 0.2)), FiniteDist((0.6, 0.4)), FiniteDist.uniform(2))
        pairs = [(mild, biased), (biased, mild), (biased, biased), (biased, fair), (fair, biased)]
        for source, target in pairs:
            regime = regime_classify(source, target)
            for nu in self.settings['nu_grid']:
                rate = second_order_rate(source, target, nu)
                value = limit_fidelity(source, target, rate.a, rate.r2)
                report.record(abs(value - nu), tol,
                              lambda: f"{regime.kind} nu={nu}: 曲线在 r2={rate.r2:.12g} 处为 {value:.12g}")
                if regime.kind == RegimeKind.TARGET_UNIFORM:
                    # 以比特为单位的变熵：r2 = -sqrt(V_bits) G^{-1}(nu²)
                    v_bits = regime.source.v / math.log(2.0) ** 2
                    expected = -math.sqrt(v_bits) * ndtri(nu * nu)
                    report.record(abs(rate.r2 - expected), 1e-9,
                                  lambda: f"均匀目标 nu={nu}: r2={rate.r2:.12g} 闭式 {expected:.12g}")
        return report

    def _run(self) -> ExperimentResult:
        suites = [self._oracle_suite, self._dominance_suite, self._overlap_suite,
                  self._attainment_suite, self._inverse_suite]
        reports = []
        for suite in suites:
            report = suite()
            logger.info("%s: 检查 %d 项，失败 %d 项，最大误差 %.3g",
                        report.name, report.checked, report.failed, report.max_error)
            if report.failed:
                logger.error("%s 失败：%s", report.name, report.first_failure)
            reports.append(report)
        rows = [(r.name, r.checked, r.failed, r.max_error) for r in reports]
        failures = {r.name: r.first_failure for r in reports if r.failed}
        return ExperimentResult(table=Table(self.columns, rows),
                                record={'suites': [r.name for r in reports], 'failures': failures},
                                ok=not failures)
