"""
pytest 公共配置：把仓库根目录加入 sys.path（扁平布局），并提供常用分布
"""

import os
import sys

import numpy as np
import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from core.finite_dist import FiniteDist  # noqa: E402


@pytest.fixture
def biased():
    """H/V 较小的二元分布"""
    return FiniteDist((0.8, 0.2))


@pytest.fixture
def mild():
    """H/V 较大的二元分布"""
    return FiniteDist((0.6, 0.4))


@pytest.fixture
def fair():
    return FiniteDist.uniform(2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
