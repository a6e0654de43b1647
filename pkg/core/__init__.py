"""
핵심 수치 패키지

이 패키지는 계량 그래프 위 NLS 에너지 최소화의 핵심 기능을 제공합니다:
- 계량 그래프 모델과 오일러 경로
- 이산 필드와 에너지 범함수
- 솔리톤 해석해와 기준 에너지
- 비교/녹이기/펼치기 축약 변환
- 정규화 기울기 흐름
- 시나리오 실행기

Example:
    from core import GridSpec, make_bridge, minimize, soliton_energy

    g = make_bridge(2, [1.0, 1.0])
    result = minimize(g, GridSpec(0.05, 80.0), p=4.0, mu=1.0)
    print(result.report.total - soliton_energy(4.0, 1.0))
"""

import logging

from .exceptions import GraphNLSError, ScenarioError
from .graph_model import (
    EulerPath,
    MetricGraph,
    euler_unfoldable,
    find_euler_path,
    make_bridge,
    make_exceptional_e3,
    make_halfline,
    make_interval,
    make_line,
    make_star,
    make_star_2plus1,
    make_tadpole,
)
from .field import FieldLayout, GraphField, GridSpec, sample
from .functionals import energy, energy_gradient, kirchhoff_residual, mass
from .soliton import soliton_energy, soliton_params, soliton_profile
from .reductions import bridge_reduce, comparison_transform, haircut, melt_selfloop, unfold
from .flows import FlowConfig, FlowResult, minimize
from .scenario_runner import Scenario, ScenarioReport, ScenarioRunner, escaping_sweep

# 패키지 로거 설정
logger = logging.getLogger(__name__)
logger.debug("Core graph NLS package initialized")

# 패키지 메타데이터
__version__ = "1.0.0"
__author__ = "Graph NLS Team"
__description__ = "NLS ground states on metric graphs: energies, reductions and flows"

# 공개 API 정의
__all__ = [
    "GraphNLSError",
    "ScenarioError",
    "EulerPath",
    "MetricGraph",
    "euler_unfoldable",
    "find_euler_path",
    "make_bridge",
    "make_exceptional_e3",
    "make_halfline",
    "make_interval",
    "make_line",
    "make_star",
    "make_star_2plus1",
    "make_tadpole",
    "FieldLayout",
    "GraphField",
    "GridSpec",
    "sample",
    "energy",
    "energy_gradient",
    "kirchhoff_residual",
    "mass",
    "soliton_energy",
    "soliton_params",
    "soliton_profile",
    "bridge_reduce",
    "comparison_transform",
    "haircut",
    "melt_selfloop",
    "unfold",
    "FlowConfig",
    "FlowResult",
    "minimize",
    "Scenario",
    "ScenarioReport",
    "ScenarioRunner",
    "escaping_sweep",
]

# 패키지 레벨 상수
SUPPORTED_OPERATIONS = [
    "minimize",
    "bridge_reduce",
    "unfold",
    "melt_selfloop",
    "haircut",
    "escaping_sweep",
    "compare_soliton",
]


def get_core_info():
    """코어 패키지 정보 반환"""
    return {
        "version": __version__,
        "description": __description__,
        "supported_operations": SUPPORTED_OPERATIONS,
    }
