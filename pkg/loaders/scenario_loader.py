"""
시나리오 파일과 그래프 명세 파서
key = value 형식의 시나리오 설정, edge 줄 단위의 그래프 명세 텍스트
"""
import math
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union
import logging

from core.exceptions import GraphSpecSyntaxError, ScenarioError
from core.flows import FlowConfig
from core.graph_model import INF, MetricGraph
from core.scenario_runner import Scenario
from utils.file_utils import read_text

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# 그래프 명세
# ---------------------------------------------------------------------------

def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _parse_length(token: str, line_number: int) -> float:
    if token == "inf":
        return INF
    try:
        value = float(token)
    except ValueError:
        raise GraphSpecSyntaxError(f"invalid length '{token}'", line_number) from None
    if not (value > 0 and math.isfinite(value)):
        raise GraphSpecSyntaxError(f"length must be a positive number or 'inf', got '{token}'", line_number)
    return value


def parse_graph_spec(text: str, name: str = "custom") -> MetricGraph:
    """그래프 명세 텍스트를 MetricGraph 로 변환.

    Args:
        text: "edge <v> <w> <length>" 또는 "edge <v> - inf" 줄들
        name: 그래프 이름

    Returns:
        MetricGraph: 정점 id 는 처음 등장한 순서대로 0, 1, ... 로 부여
    """
    records: List[Tuple[int, str, Optional[str], float]] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        tokens = line.split()
        if tokens[0] != "edge":
            raise GraphSpecSyntaxError(f"expected 'edge', got '{tokens[0]}'", line_number)
        if len(tokens) != 4:
            raise GraphSpecSyntaxError("edge needs: edge <vertex> <vertex|-> <length|inf>", line_number)
        _, left, right, length_token = tokens
        length = _parse_length(length_token, line_number)
        if right == "-":
            if not math.isinf(length):
                raise GraphSpecSyntaxError("a half-line ('-' vertex) must have length 'inf'", line_number)
            records.append((line_number, left, None, length))
        else:
            records.append((line_number, left, right, length))

    if not records:
        raise GraphSpecSyntaxError("graph spec contains no edges")

    mentions: Dict[str, int] = {}
    for _, left, right, _ in records:
        mentions[left] = mentions.get(left, 0) + 1
        if right is not None:
            mentions[right] = mentions.get(right, 0) + 1

    ids: Dict[str, int] = {}
    edges = []
    for line_number, left, right, length in records:
        if right is not None and math.isinf(length):
            # 무한 길이의 이름 붙은 끝점은 다른 곳에 없을 때만 무시
            if mentions[right] > 1:
                raise GraphSpecSyntaxError(
                    f"vertex '{right}' is used elsewhere and cannot end a half-line", line_number
                )
            right = None
        for vid in (left, right):
            if vid is not None and vid not in ids:
                ids[vid] = len(ids)
        edges.append((ids[left], None if right is None else ids[right], length))

    graph = MetricGraph.from_edges(edges, name=name)
    logger.debug(f"Parsed graph spec '{name}': {graph.n_vertices} vertices, {graph.n_edges} edges")
    return graph


def load_graph_spec(path: Union[str, Path]) -> MetricGraph:
    """그래프 명세 파일 로드 (이름은 파일 이름)"""
    path = Path(path)
    return parse_graph_spec(read_text(path), name=path.stem)


# ---------------------------------------------------------------------------
# 시나리오 파일
# ---------------------------------------------------------------------------

def _float_list(value: str) -> Tuple[float, ...]:
    return tuple(float(v) for v in value.split(",") if v.strip())


def _str_list(value: str) -> Tuple[str, ...]:
    return tuple(v.strip() for v in value.split(",") if v.strip())


# 시나리오 키 → (대상, 필드, 변환 함수)
SCENARIO_KEYS: Dict[str, Tuple[str, str, Callable[[str], Any]]] = {
    "name": ("scenario", "name", str),
    "graph": ("scenario", "graph", str),
    "graph.n": ("graph", "n", int),
    "graph.lengths": ("graph", "lengths", _float_list),
    "graph.length": ("graph", "length", float),
    "graph.file": ("graph", "file", str),
    "p": ("scenario", "p", float),
    "mu": ("scenario", "mu", float),
    "h": ("scenario", "h", float),
    "L": ("scenario", "L", float),
    "seed": ("scenario", "seed", int),
    "init": ("scenario", "init", str),
    "init.vertex": ("scenario", "init_vertex", int),
    "init.shift": ("scenario", "init_shift", float),
    "pipeline": ("scenario", "pipeline", _str_list),
    "flow.step": ("flow", "step", float),
    "flow.max_iters": ("flow", "max_iters", int),
    "flow.energy_tol": ("flow", "energy_tol", float),
    "flow.backtrack": ("flow", "backtrack", float),
    "flow.window": ("flow", "window", int),
    "flow.scheme": ("flow", "scheme", str),
    "escape.distance": ("flow", "escape_distance", float),
    "sweep.shifts": ("scenario", "sweep_shifts", _float_list),
    "output": ("scenario", "output", str),
}


def parse_scenario(text: str, base_dir: Optional[Path] = None, default_name: str = "scenario") -> Scenario:
    """시나리오 텍스트를 Scenario 로 변환.

    Args:
        text: key = value 줄들 (# 주석, 빈 줄 허용)
        base_dir: graph.file 상대 경로의 기준 디렉토리
        default_name: name 키가 없을 때 사용할 이름

    Returns:
        Scenario: 검증된 시나리오
    """
    seen: Dict[str, int] = {}
    sections: Dict[str, Dict[str, Any]] = {"scenario": {}, "graph": {}, "flow": {}}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"line {line_number}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in SCENARIO_KEYS:
            raise ScenarioError(f"line {line_number}: unknown key '{key}'")
        if key in seen:
            raise ScenarioError(f"line {line_number}: duplicate key '{key}' (first on line {seen[key]})")
        seen[key] = line_number
        section, attr, convert = SCENARIO_KEYS[key]
        try:
            sections[section][attr] = convert(value)
        except ValueError:
            raise ScenarioError(f"line {line_number}: invalid value for '{key}': '{value}'") from None

    scenario = sections["scenario"]
    for required in ("graph", "pipeline"):
        if required not in scenario:
            raise ScenarioError(f"scenario is missing the '{required}' key")
    graph_params = sections["graph"]
    if "file" in graph_params and base_dir is not None:
        graph_params["file"] = str((base_dir / graph_params["file"]).resolve())
    scenario.setdefault("name", default_name)
    return Scenario(graph_params=graph_params, flow=FlowConfig(**sections["flow"]), **scenario)


def load_scenario(path: Union[str, Path]) -> Scenario:
    """시나리오 파일 로드"""
    path = Path(path)
    scenario = parse_scenario(read_text(path), base_dir=path.parent, default_name=path.stem)
    logger.info(f"Scenario loaded: {path} ({scenario.name})")
    return scenario
