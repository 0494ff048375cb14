"""
实验模块
每个命令行子命令对应一个实验类
"""

from .experiment_config import ExperimentConfig, build_config, parse_grid, parse_int_list, load_config_file
from .base_experiment import BaseExperiment, ExperimentResult, Table
from .rate_experiment import RateExperiment
from .curve_experiment import CurveExperiment
from .finite_n_experiment import FiniteNExperiment, target_length
from .oneshot_experiment import OneshotExperiment
from .validate_experiment import ValidateExperiment, SuiteReport

__all__ = [
    'ExperimentConfig', 'build_config', 'parse_grid', 'parse_int_list', 'load_config_file',
    'BaseExperiment', 'ExperimentResult', 'Table',
    'RateExperiment', 'CurveExperiment', 'FiniteNExperiment', 'target_length',
    'OneshotExperiment', 'ValidateExperiment', 'SuiteReport',
]
