"""
시나리오/그래프 로더 패키지

텍스트 설정 파일을 실행 가능한 객체로 변환하는 파서들을 제공합니다.

지원하는 파일 형식:
- .cfg: key = value 형식의 시나리오 설정
- .graph: edge 줄 단위의 그래프 명세

Example:
    from loaders import load_scenario, load_graph_spec

    scenario = load_scenario(Path("scenarios/b2_minimize.cfg"))
    graph = load_graph_spec(Path("graphs/b3.graph"))
"""

from pathlib import Path
from typing import Union

# 주요 파서 import
from .scenario_loader import (
    SCENARIO_KEYS,
    load_graph_spec,
    load_scenario,
    parse_graph_spec,
    parse_scenario,
)

# 패키지 레벨 상수
SUPPORTED_FILE_EXTENSIONS = {
    ".cfg": "Scenario files",
    ".graph": "Graph spec files",
}

# 패키지 메타데이터
__version__ = "1.0.0"
__author__ = "Graph NLS Team"
__description__ = "Scenario and graph-spec parsers"

# 공개 API
__all__ = [
    "SCENARIO_KEYS",
    "SUPPORTED_FILE_EXTENSIONS",
    "load_graph_spec",
    "load_scenario",
    "parse_graph_spec",
    "parse_scenario",
    "validate_file_support",
]


def validate_file_support(file_path: Union[str, Path]) -> bool:
    """파일이 지원되는 형식인지 확인

    Args:
        file_path: 파일 경로 (str 또는 Path 객체)

    Returns:
        bool: 지원 여부
    """
    return Path(file_path).suffix.lower() in SUPPORTED_FILE_EXTENSIONS
