"""
애플리케이션 설정 관리
격자, 흐름, 허용 오차 등 전역 상수를 중앙화하여 관리
"""
from pathlib import Path

# 기본 경로 설정
BASE_DIR = Path(__file__).parent.parent
SCENARIOS_DIR = BASE_DIR / "scenarios"
GRAPHS_DIR = BASE_DIR / "graphs"
OUTPUT_DIR = BASE_DIR / "output"

# 문제 기본값
DEFAULT_P = 4.0
DEFAULT_MU = 1.0
DEFAULT_SEED = 42

# 격자 설정
DEFAULT_H = 0.05
DEFAULT_L_TRUNC = 80.0
MIN_TRUNC_RATIO = 10  # L_trunc >= 10 * h

# 정규화 기울기 흐름 설정
FLOW_STEP_FACTOR = 0.4  # tau_0 = 0.4 * h^2
FLOW_MAX_ITERS = 200000
FLOW_ENERGY_TOL = 1e-12
FLOW_BACKTRACK = 0.5
FLOW_WINDOW = 50
FLOW_MIN_STEP_RATIO = 1e-8  # tau < tau_0 * ratio 이면 정지
FLOW_DIVERGENCE_FACTOR = 10.0
FLOW_LOG_EVERY = 5000
FLOW_SCHEMES = ("explicit", "semi_implicit")

# 허용 오차
CONTINUITY_TOL = 1e-9
BOUNDARY_TOL = 1e-9
NONCONSTANT_TOL = 1e-12

# 탈출 진단
ESCAPE_DISTANCE = 10.0

# 출력 설정
SIGNIFICANT_DIGITS = 12
FLOAT_FORMAT = f"%.{SIGNIFICANT_DIGITS}g"

# 로깅 설정
LOG_LEVEL = "INFO"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# 지원하는 파이프라인 단계
PIPELINE_STAGES = (
    "minimize",
    "bridge_reduce",
    "unfold",
    "melt_selfloop",
    "haircut",
    "escaping_sweep",
    "compare_soliton",
)

# 지원하는 그래프 계열
GRAPH_FAMILIES = (
    "line",
    "halfline",
    "interval",
    "star",
    "bridge",
    "star_2plus1",
    "e3",
    "tadpole",
    "file",
)
