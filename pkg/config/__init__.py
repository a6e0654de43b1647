"""
설정 관리 패키지

이 패키지는 격자, 흐름, 허용 오차 등 수치 실험 전역 설정과 상수를 관리합니다.

Example:
    from config import settings
    print(settings.DEFAULT_H)

    # 또는
    from config.settings import DEFAULT_L_TRUNC, FLOW_BACKTRACK
"""

# 주요 설정 모듈에서 자주 사용되는 상수들을 패키지 레벨로 가져옴
from .settings import (
    # 경로 설정
    BASE_DIR,
    SCENARIOS_DIR,
    GRAPHS_DIR,
    OUTPUT_DIR,

    # 문제 기본값
    DEFAULT_P,
    DEFAULT_MU,
    DEFAULT_SEED,

    # 격자 설정
    DEFAULT_H,
    DEFAULT_L_TRUNC,

    # 흐름 설정
    FLOW_STEP_FACTOR,
    FLOW_MAX_ITERS,
    FLOW_ENERGY_TOL,
    FLOW_BACKTRACK,
    FLOW_WINDOW,

    # 출력 설정
    SIGNIFICANT_DIGITS,
    FLOAT_FORMAT,
)

# 패키지 메타데이터
__version__ = "1.0.0"
__author__ = "Graph NLS Team"
__description__ = "Configuration management for the graph NLS toolkit"

# 공개 API 정의
__all__ = [
    "BASE_DIR",
    "SCENARIOS_DIR",
    "GRAPHS_DIR",
    "OUTPUT_DIR",
    "DEFAULT_P",
    "DEFAULT_MU",
    "DEFAULT_SEED",
    "DEFAULT_H",
    "DEFAULT_L_TRUNC",
    "FLOW_STEP_FACTOR",
    "FLOW_MAX_ITERS",
    "FLOW_ENERGY_TOL",
    "FLOW_BACKTRACK",
    "FLOW_WINDOW",
    "SIGNIFICANT_DIGITS",
    "FLOAT_FORMAT",
]
