"""
계량 그래프 모델
유한 간선과 반직선을 갖는 그래프, 그래프 계열 생성자, 오일러 경로 탐색
"""
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple
import logging

import networkx as nx

from core.exceptions import InvalidGraphError, NotUnfoldableError

logger = logging.getLogger(__name__)

INF = math.inf

# 반직선 끝의 "무한 정점"을 networkx 그래프에서 나타내는 태그
_TERMINAL = "inf"


@dataclass(frozen=True)
class Edge:
    """간선: 왼쪽 정점 L(e), 오른쪽 정점 R(e), 길이 (반직선이면 INF, right=None)"""

    left: int
    right: Optional[int]
    length: float

    @property
    def is_halfline(self) -> bool:
        return self.right is None

    @property
    def is_loop(self) -> bool:
        return self.right is not None and self.left == self.right


@dataclass(frozen=True)
class MetricGraph:
    """정점과 간선으로 이루어진 계량 그래프 (생성 후 불변)"""

    vertices: Tuple[int, ...]
    edges: Tuple[Edge, ...]
    name: str = "custom"

    def __post_init__(self):
        if len(self.vertices) < 1:
            raise InvalidGraphError("graph needs at least one vertex")
        if len(self.edges) < 1:
            raise InvalidGraphError("graph needs at least one edge")
        if tuple(self.vertices) != tuple(range(len(self.vertices))):
            raise InvalidGraphError("vertex ids must be dense integers 0..N_v-1")

        seen = set()
        for j, edge in enumerate(self.edges):
            if edge.left not in self.vertices:
                raise InvalidGraphError(f"edge {j}: unknown left vertex {edge.left}")
            if edge.is_halfline:
                if not math.isinf(edge.length):
                    raise InvalidGraphError(f"edge {j}: half-line must have infinite length")
            else:
                if edge.right not in self.vertices:
                    raise InvalidGraphError(f"edge {j}: unknown right vertex {edge.right}")
                if math.isinf(edge.length):
                    raise InvalidGraphError(
                        f"edge {j}: infinite edge must be stored as a half-line (right vertex omitted)"
                    )
                seen.add(edge.right)
            if not edge.length > 0 or math.isnan(edge.length):
                raise InvalidGraphError(f"edge {j}: length must be positive, got {edge.length}")
            seen.add(edge.left)

        isolated = set(self.vertices) - seen
        if isolated:
            raise InvalidGraphError(f"isolated vertices are not allowed: {sorted(isolated)}")

    @classmethod
    def from_edges(cls, edges: Iterable[Tuple[int, Optional[int], float]], name: str = "custom") -> "MetricGraph":
        """(left, right, length) 튜플로부터 그래프 생성. 반직선은 right=None, length=INF"""
        built = []
        n_vertices = 0
        for left, right, length in edges:
            length = float(length)
            if math.isinf(length):
                right = None
            built.append(Edge(int(left), None if right is None else int(right), length))
            n_vertices = max(n_vertices, int(left) + 1, 0 if right is None else int(right) + 1)
        return cls(tuple(range(n_vertices)), tuple(built), name)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def is_halfline(self, j: int) -> bool:
        return self.edges[j].is_halfline

    @property
    def halflines(self) -> Tuple[int, ...]:
        return tuple(j for j, e in enumerate(self.edges) if e.is_halfline)

    @property
    def finite_edges(self) -> Tuple[int, ...]:
        return tuple(j for j, e in enumerate(self.edges) if not e.is_halfline)

    def degree(self, v: int) -> int:
        """정점 차수 (자기 루프는 2, 반직선은 1로 계산)"""
        return len(self.incident(v))

    def incident(self, v: int) -> List[Tuple[int, str]]:
        """정점 v에 닿는 (간선 id, 끝 'L'/'R') 목록"""
        ends = []
        for j, edge in enumerate(self.edges):
            if edge.left == v:
                ends.append((j, "L"))
            if edge.right == v:
                ends.append((j, "R"))
        return ends

    def bridge_count(self) -> int:
        """B_n 형태이면 n 반환: 두 정점, 각 정점에 반직선 하나, 나머지는 두 정점 사이의 유한 간선"""
        if self.n_vertices != 2 or len(self.halflines) != 2:
            raise InvalidGraphError(f"{self.name} is not an n-bridge graph")
        anchors = {self.edges[j].left for j in self.halflines}
        if anchors != {0, 1}:
            raise InvalidGraphError(f"{self.name}: half-lines must hang from different vertices")
        for j in self.finite_edges:
            edge = self.edges[j]
            if {edge.left, edge.right} != {0, 1}:
                raise InvalidGraphError(f"{self.name}: edge {j} does not join the two vertices")
        return len(self.finite_edges)

    def to_spec_text(self) -> str:
        """그래프 명세 텍스트로 직렬화"""
        lines = [f"# {self.name}"]
        for edge in self.edges:
            if edge.is_halfline:
                lines.append(f"edge {edge.left} - inf")
            else:
                lines.append(f"edge {edge.left} {edge.right} {edge.length!r}")
        return "\n".join(lines) + "\n"

    def describe(self) -> Dict[str, object]:
        """보고서용 요약"""
        return {
            "name": self.name,
            "n_vertices": self.n_vertices,
            "n_edges": self.n_edges,
            "n_halflines": len(self.halflines),
            "edges": [
                [e.left, e.right, "inf" if e.is_halfline else e.length] for e in self.edges
            ],
        }


@dataclass(frozen=True)
class EulerPath:
    """(간선 id, 역방향 여부) 순서열. 모든 간선을 정확히 한 번 지남"""

    steps: Tuple[Tuple[int, bool], ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    @property
    def edge_ids(self) -> Tuple[int, ...]:
        return tuple(j for j, _ in self.steps)


# ---------------------------------------------------------------------------
# 그래프 계열 생성자
# ---------------------------------------------------------------------------

def _check_length(length: float, what: str) -> float:
    length = float(length)
    if not length > 0 or math.isinf(length) or math.isnan(length):
        raise InvalidGraphError(f"{what} must be a positive finite length, got {length}")
    return length


def make_line(segments: Sequence[float] = ()) -> MetricGraph:
    """실직선 모델: 한 정점에서 만나는 두 반직선.

    segments가 주어지면 차수 2인 내부 정점으로 나뉜 직선을 만든다.
    간선 순서: 왼쪽 반직선, 유한 구간들 (왼쪽→오른쪽), 오른쪽 반직선.
    """
    lengths = [_check_length(l, "segment") for l in segments]
    edges: List[Tuple[int, Optional[int], float]] = [(0, None, INF)]
    for i, length in enumerate(lengths):
        edges.append((i, i + 1, length))
    edges.append((len(lengths), None, INF))
    name = "R" if not lengths else f"R[{len(lengths)} segments]"
    return MetricGraph.from_edges(edges, name=name)


def make_halfline() -> MetricGraph:
    """양의 반직선 R+"""
    return MetricGraph.from_edges([(0, None, INF)], name="R+")


def make_interval(length: float) -> MetricGraph:
    """유한 구간 (0, l) 하나로 이루어진 그래프"""
    return MetricGraph.from_edges([(0, 1, _check_length(length, "interval"))], name="I")


def make_star(n: int) -> MetricGraph:
    """n개의 반직선이 한 정점에서 만나는 별 그래프 S_{n,inf}"""
    if int(n) != n or n < 2:
        raise InvalidGraphError(f"star needs an integer n >= 2, got {n}")
    return MetricGraph.from_edges([(0, None, INF)] * int(n), name=f"S_{int(n)},inf")


def make_bridge(n: int, lengths: Sequence[float]) -> MetricGraph:
    """n-브리지 B_n: 두 반직선의 원점을 n개의 유한 간선이 연결.

    간선 순서: 브리지 e_0..e_{n-1} (모두 정점 0 → 1), 정점 0의 반직선, 정점 1의 반직선.
    """
    if int(n) != n or n < 1:
        raise InvalidGraphError(f"bridge count must be an integer >= 1, got {n}")
    if len(lengths) != n:
        raise InvalidGraphError(f"expected {n} bridge lengths, got {len(lengths)}")
    edges: List[Tuple[int, Optional[int], float]] = [
        (0, 1, _check_length(l, "bridge")) for l in lengths
    ]
    edges += [(0, None, INF), (1, None, INF)]
    return MetricGraph.from_edges(edges, name=f"B_{int(n)}")


def make_star_2plus1(length: float) -> MetricGraph:
    """두 반직선과 길이 l인 유한 간선 하나로 이루어진 별 그래프 S_{2+1}"""
    edges = [(0, 1, _check_length(length, "pendant edge")), (0, None, INF), (0, None, INF)]
    return MetricGraph.from_edges(edges, name="S_2+1")


def make_exceptional_e3(lengths: Sequence[float]) -> MetricGraph:
    """예외 그래프 E_3.

    정점 0에 두 반직선, 정점 0-1 사이 길이 l_0인 평행 간선 두 개,
    정점 1-2 사이 길이 l_1인 평행 간선 두 개, 정점 2의 길이 l_2인 자기 루프.
    같은 정점 쌍을 잇는 간선은 같은 길이를 갖는다.
    """
    if len(lengths) != 3:
        raise InvalidGraphError(f"E_3 takes exactly 3 lengths, got {len(lengths)}")
    l0, l1, l2 = (_check_length(l, "E_3 edge") for l in lengths)
    edges = [
        (0, 1, l0), (0, 1, l0),
        (1, 2, l1), (1, 2, l1),
        (2, 2, l2),
        (0, None, INF), (0, None, INF),
    ]
    return MetricGraph.from_edges(edges, name="E_3")


def make_tadpole(loop_length: float) -> MetricGraph:
    """반직선 끝에 자기 루프가 달린 그래프 (자기 루프 녹이기 시험용)"""
    edges = [(0, 0, _check_length(loop_length, "loop")), (0, None, INF)]
    return MetricGraph.from_edges(edges, name="tadpole")


# ---------------------------------------------------------------------------
# 오일러 경로
# ---------------------------------------------------------------------------

def _terminal(j: int) -> Tuple[str, int]:
    return (_TERMINAL, j)


def _euler_multigraph(g: MetricGraph) -> nx.MultiGraph:
    """유한 간선 + 반직선마다 별도의 무한 정점을 둔 멀티그래프"""
    mg = nx.MultiGraph()
    mg.add_nodes_from(g.vertices)
    for j, edge in enumerate(g.edges):
        if edge.is_halfline:
            mg.add_edge(_terminal(j), edge.left, key=j)
        else:
            mg.add_edge(edge.left, edge.right, key=j)
    return mg


def euler_unfoldable(g: MetricGraph) -> bool:
    """두 반직선을 양 끝으로 하는 오일러 경로가 존재하는지 여부"""
    if len(g.halflines) != 2:
        return False
    mg = _euler_multigraph(g)
    if not nx.is_connected(mg):
        return False
    odd = {node for node, degree in mg.degree() if degree % 2 == 1}
    return odd == {_terminal(j) for j in g.halflines}


def _endpoints(g: MetricGraph, j: int, reverse: bool) -> Tuple[Optional[int], Optional[int]]:
    """순회 방향에 따른 (시작, 끝) 정점. None은 무한 정점"""
    edge = g.edges[j]
    start, end = edge.left, edge.right
    return (end, start) if reverse else (start, end)


def validate_euler_path(g: MetricGraph, path: EulerPath) -> bool:
    """EulerPath 불변식 검사: 모든 간선 정확히 한 번, 연속 항목은 정점을 공유"""
    ids = path.edge_ids
    if sorted(ids) != list(range(g.n_edges)):
        raise InvalidGraphError(f"path does not cover every edge exactly once: {ids}")
    for (j, rev), (k, rev_next) in zip(path.steps, path.steps[1:]):
        _, end = _endpoints(g, j, rev)
        start, _ = _endpoints(g, k, rev_next)
        if end is None or start is None or end != start:
            raise InvalidGraphError(f"steps {j} -> {k} do not share a vertex")
    return True


def find_euler_path(g: MetricGraph) -> EulerPath:
    """Hierholzer 알고리즘 (networkx)으로 반직선 → ... → 반직선 오일러 경로 탐색"""
    if not euler_unfoldable(g):
        raise NotUnfoldableError(f"{g.name} has no Euler path between its two half-lines")

    mg = _euler_multigraph(g)
    first, last = (_terminal(j) for j in g.halflines)
    triples = list(nx.eulerian_path(mg, source=first, keys=True))
    if first not in triples[0][:2]:
        triples = [(v, u, k) for u, v, k in reversed(triples)]

    steps = []
    current = first
    for u, v, k in triples:
        following = v if u == current else u
        edge = g.edges[k]
        if edge.is_halfline:
            reverse = current == _terminal(k)
        elif edge.is_loop:
            reverse = False
        else:
            reverse = current == edge.right
        steps.append((k, reverse))
        current = following

    path = EulerPath(tuple(steps))
    validate_euler_path(g, path)
    if not (g.is_halfline(path.steps[0][0]) and g.is_halfline(path.steps[-1][0])):
        raise NotUnfoldableError(f"{g.name}: Euler path does not start and end on half-lines")
    logger.debug(f"Euler path on {g.name}: {path.steps}")
    return path


def vertex_distances(g: MetricGraph, source: int) -> Dict[int, float]:
    """유한 간선 길이에 대한 정점 간 최단 거리 (도달 불가 정점은 INF)"""
    mg = nx.MultiGraph()
    mg.add_nodes_from(g.vertices)
    for j in g.finite_edges:
        edge = g.edges[j]
        if not edge.is_loop:
            mg.add_edge(edge.left, edge.right, key=j, length=edge.length)
    lengths = nx.single_source_dijkstra_path_length(mg, source, weight="length")
    return {v: float(lengths.get(v, INF)) for v in g.vertices}
