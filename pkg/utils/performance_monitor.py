"""
성능 모니터링 유틸리티
시나리오 단계별 실행 시간과 메모리 변화 추적
"""
import logging
import platform
import time
from contextlib import contextmanager
from typing import Any, Dict

import psutil

logger = logging.getLogger(__name__)


def _rss_mb() -> float:
    return psutil.Process().memory_info().rss / 1024 / 1024


class PerformanceMonitor:
    """단계별 시간/메모리 측정. 측정값은 로그와 요약에만 남고 보고서에는 들어가지 않는다"""

    def __init__(self):
        self.metrics: Dict[str, Dict[str, float]] = {}
        self.start_time = time.perf_counter()

    def _record(self, operation_name: str, elapsed_time: float, memory_before: float) -> None:
        memory_after = _rss_mb()
        self.metrics[operation_name] = {
            "execution_time": elapsed_time,
            "memory_before": memory_before,
            "memory_after": memory_after,
            "memory_diff": memory_after - memory_before,
        }
        logger.info(
            f"{operation_name} - 실행시간: {elapsed_time:.2f}초, "
            f"메모리 변화: {memory_after - memory_before:+.1f}MB"
        )

    @contextmanager
    def measure_time(self, operation_name: str):
        """시간 측정 컨텍스트 매니저"""
        memory_before = _rss_mb()
        start_time = time.perf_counter()
        try:
            yield
        finally:
            self._record(operation_name, time.perf_counter() - start_time, memory_before)

    def get_system_info(self) -> Dict[str, Any]:
        """시스템 정보 조회"""
        memory = psutil.virtual_memory()
        return {
            "platform": platform.platform(),
            "python_version": platform.python_version(),
            "cpu_count": psutil.cpu_count(),
            "memory_percent": memory.percent,
            "available_memory_gb": memory.available / 1024 / 1024 / 1024,
            "process_rss_mb": _rss_mb(),
        }

    def get_performance_summary(self) -> Dict[str, Any]:
        """성능 요약 정보"""
        return {
            "total_runtime": time.perf_counter() - self.start_time,
            "operations": dict(self.metrics),
            "system_info": self.get_system_info(),
        }

    def reset_metrics(self):
        """메트릭 초기화"""
        self.metrics.clear()
        self.start_time = time.perf_counter()


# 글로벌 모니터 인스턴스
performance_monitor = PerformanceMonitor()
