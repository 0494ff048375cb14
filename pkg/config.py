# -*- coding:utf-8 -*-
"""
随机数转换保真度工具配置文件
"""

import os

# 数值配置
NUMERIC_CONFIG = {
    'mass_tolerance': 1e-12,        # FiniteDist 总质量容差
    'log_mass_tolerance': 1e-9,     # BlockDist 对数域总质量容差
    'merge_tolerance': 1e-12,       # 块合并容差（相对 max(1, |log_value|)）
    'exact_count_limit': 2 ** 63 - 1,
    'active_tolerance': 1e-10,      # 约束是否起作用
    'majorization_tolerance': 1e-10,
    'fidelity_slack': 1e-12,        # F >= nu 比较时的松弛
    'uniform_tolerance': 1e-12,
}

# 搜索配置
SEARCH_CONFIG = {
    'exhaustive_limit': 10 ** 7,    # 确定性映射穷举上限 |Y|^|X|
    'chunk_size': 65536,
    'max_type_classes': 2_000_000,  # iid_power 枚举的型类上限
    'scan_factor': 3.0,             # fm_L_n 扫描上限 ceil(scan_factor*a*n) + scan_margin
    'scan_margin': 16,
}

# 渐近分析配置
ASYMPTOTIC_CONFIG = {
    'ratio_tolerance': 1e-12,       # C_{P,Q} = 1 判定
    'bracket_sigmas': 40.0,         # 阈值方程求根区间（较宽高斯的标准差倍数）
    'threshold_residual': 1e-10,
    'root_xtol': 1e-14,
    'inversion_initial_step': 1.0,
    'inversion_max_doublings': 60,
    'quad_epsabs': 1e-13,
    'quad_epsrel': 1e-12,
    'quad_limit': 200,
    'quad_window_sigmas': 40.0,
}

# 实验配置
EXPERIMENT_CONFIG = {
    'significant_digits': 12,
    'dist_digits': 17,
    'rounding': 'nearest',
    'b_grid': '-3:3:0.5',
    'n_grid': '50,100,200,400',
    'attainment_b': 0.0,
}

# 校验配置
VALIDATION_CONFIG = {
    'seed': 20240601,
    'oracle_pairs': 500,
    'dominance_pairs': 500,
    'overlap_instances': 100,
    'attainment_instances': 20,
    'nu_grid': [round(0.05 * k, 2) for k in range(1, 20)],
    'oracle_tolerance': 1e-6,
    'dominance_tolerance': 1e-9,
    'overlap_tolerance': 1e-9,
    'attainment_tolerance': 1e-8,
    'inverse_tolerance': 1e-8,
}

# 日志配置
LOG_CONFIG = {
    'level': 'WARNING',
    'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    'file': None,
}

THREADS_ENV_VAR = 'RNGCONV_THREADS'


def get_thread_count() -> int:
    """读取工作线程数，未设置或非法时为1"""
    raw = os.environ.get(THREADS_ENV_VAR, '1')
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# 转换区域
class RegimeKind:
    SOURCE_UNIFORM = 'source_uniform'
    TARGET_UNIFORM = 'target_uniform'
    RATIO_GREATER = 'ratio_greater'
    RATIO_LESS = 'ratio_less'
    RATIO_EQUAL = 'ratio_equal'
    OFF_RATE = 'off_rate'

# 阈值方程类型
class ThresholdKind:
    ALPHA = 'alpha'    # H(P)/V(P) > H(Q)/V(Q)
    BETA = 'beta'      # H(P)/V(P) < H(Q)/V(Q)

# 输出格式
class OutputFormat:
    CSV = 'csv'
    JSON = 'json'

# L 的取整方式
class RoundingMode:
    NEAREST = 'nearest'
    FLOOR = 'floor'

# 命令退出码
class ExitCode:
    OK = 0
    IO_ERROR = 1
    REGIME_ERROR = 2
