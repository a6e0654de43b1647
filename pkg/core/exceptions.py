"""
수치 도구 전반에서 사용하는 예외 계층
"""
from typing import Optional


class GraphNLSError(ValueError):
    """모든 도메인 오류의 기본 클래스"""


class InvalidGraphError(GraphNLSError):
    """그래프 구성 오류 (길이, 정점 참조, 계열 매개변수)"""


class GraphSpecSyntaxError(GraphNLSError):
    """그래프 명세 텍스트 구문 오류"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class NotUnfoldableError(GraphNLSError):
    """오일러 경로로 직선에 펼칠 수 없는 그래프"""


class ContinuityError(GraphNLSError):
    """정점에서 연속 조건 위반"""


class LayoutMismatchError(GraphNLSError):
    """DOF 벡터 길이 또는 격자 배치 불일치"""


class ZeroMassError(GraphNLSError):
    """질량이 0인 함수에 대한 정규화/비교 요청"""


class ExponentRangeError(GraphNLSError):
    """비선형 지수 p가 (2, 6) 밖에 있음"""


class GridTooCoarseError(GraphNLSError):
    """진단에 필요한 노드 수가 부족한 격자"""


class TruncationError(GraphNLSError):
    """반직선 절단 길이가 요청에 비해 짧음"""


class BoundaryMismatchError(GraphNLSError):
    """자기 루프 녹이기에서 경계값 불일치"""


class FlowDivergenceError(GraphNLSError):
    """기울기 흐름 에너지가 발산 가드 아래로 내려감"""


class ScenarioError(GraphNLSError):
    """시나리오 실행 중 특정 단계에서 발생한 오류"""

    def __init__(self, message: str, stage: Optional[str] = None):
        self.stage = stage
        if stage is not None:
            message = f"[{stage}] {message}"
        super().__init__(message)


def check_exponent(p: float) -> float:
    """2 < p < 6 확인 후 float로 반환"""
    p = float(p)
    if not 2.0 < p < 6.0:
        raise ExponentRangeError(f"p must lie in (2, 6), got {p}")
    return p
