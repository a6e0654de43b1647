"""
유틸리티 패키지

보고서 출력, 단계별 성능 측정, 로깅 설정과 숫자/시간 포맷 헬퍼를 제공합니다.

Example:
    from utils import performance_monitor, file_utils

    with performance_monitor.measure_time("b2:minimize"):
        ...

    file_utils.write_json({"energy": -0.0104}, "output/b2.json")
"""

import logging
from typing import Optional

from config.settings import LOG_FORMAT, LOG_LEVEL, SIGNIFICANT_DIGITS

from .performance_monitor import PerformanceMonitor, performance_monitor
from . import file_utils

SUPPORTED_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

# 패키지 메타데이터
__version__ = "1.0.0"
__author__ = "Graph NLS Team"
__description__ = "Output helpers, logging and performance monitoring"

__all__ = [
    "PerformanceMonitor",
    "performance_monitor",
    "file_utils",
    "setup_logging",
    "format_number",
    "format_duration",
]


def setup_logging(log_level: str = LOG_LEVEL, log_format: Optional[str] = None):
    """루트 로거 설정. 여러 번 호출하면 레벨만 갱신된다

    Args:
        log_level: DEBUG, INFO, WARNING, ERROR, CRITICAL 중 하나
        log_format: 기본 LOG_FORMAT 대신 사용할 포맷
    """
    level_name = log_level.upper()
    if level_name not in SUPPORTED_LOG_LEVELS:
        raise ValueError(f"unsupported log level: {log_level}")
    level = getattr(logging, level_name)

    logging.basicConfig(level=level, format=log_format or LOG_FORMAT, datefmt="%Y-%m-%d %H:%M:%S")
    # basicConfig 는 첫 호출만 적용됨
    logging.getLogger().setLevel(level)
    logging.getLogger("numexpr").setLevel(logging.WARNING)


def format_number(value: float) -> str:
    """12 유효숫자 출력 형식"""
    return f"{value:.{SIGNIFICANT_DIGITS}g}"


def format_duration(seconds: float) -> str:
    """단계 실행 시간 표시 (예: "35ms", "4.2초", "2분 30.0초")"""
    if seconds < 1:
        return f"{seconds * 1000:.0f}ms"
    if seconds < 60:
        return f"{seconds:.1f}초"
    minutes, rest = divmod(seconds, 60)
    if minutes < 60:
        return f"{int(minutes)}분 {rest:.1f}초"
    hours, minutes = divmod(int(minutes), 60)
    return f"{hours}시간 {minutes}분"


logger = logging.getLogger(__name__)

setup_logging()
