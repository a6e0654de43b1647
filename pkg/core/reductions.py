"""
그래프 축약 변환
비교 보조정리 (두 간선 함수의 병합), 자기 루프 녹이기, 오일러 펼치기, 브리지 수 축약
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np

from config.settings import BOUNDARY_TOL, DEFAULT_P, NONCONSTANT_TOL
from core.exceptions import BoundaryMismatchError, GraphNLSError, InvalidGraphError, ZeroMassError
from core.field import FieldLayout, GraphField
from core.functionals import (
    EnergyReport,
    energy,
    interval_energy,
    interval_kinetic,
    interval_lp,
    interval_mass,
    mass,
)
from core.graph_model import INF, MetricGraph, euler_unfoldable, find_euler_path, make_line

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EdgeFunction:
    """구간 (0, l) 위 함수의 표본. 좌표는 0 에서 시작해 순증가"""

    coords: np.ndarray
    values: np.ndarray
    infinite: bool = False

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float)
        values = np.array(self.values, dtype=float)
        if coords.ndim != 1 or coords.shape != values.shape or len(coords) < 2:
            raise GraphNLSError("edge function needs matching 1-D coords/values with >= 2 nodes")
        if coords[0] != 0.0 or not np.all(np.diff(coords) > 0):
            raise GraphNLSError("edge function coords must start at 0 and increase strictly")
        if not np.all(np.isfinite(values)):
            raise GraphNLSError("edge function values must be finite")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "values", values)

    @property
    def length(self) -> float:
        return INF if self.infinite else float(self.coords[-1])

    @property
    def extent(self) -> float:
        """저장된 좌표 범위 (절단된 반직선이면 절단 길이)"""
        return float(self.coords[-1])

    @property
    def start_value(self) -> float:
        return float(self.values[0])

    @property
    def end_value(self) -> float:
        return float(self.values[-1])

    def mass(self) -> float:
        return interval_mass(self.coords, self.values)

    def lp(self, q: float) -> float:
        return interval_lp(self.coords, self.values, q)

    def kinetic(self) -> float:
        return interval_kinetic(self.coords, self.values)

    def energy(self, p: float) -> EnergyReport:
        return interval_energy(self.coords, self.values, p)

    def rescaled(self, factor: float) -> "EdgeFunction":
        """좌표만 factor 배 늘린 함수 x -> u(x / factor). 값은 그대로"""
        return EdgeFunction(self.coords * factor, self.values, self.infinite)

    def reversed(self) -> "EdgeFunction":
        if self.infinite:
            raise GraphNLSError("cannot reverse a half-line edge function")
        return EdgeFunction(self.coords[-1] - self.coords[::-1], self.values[::-1], False)

    def is_nonconstant(self, tol: float = NONCONSTANT_TOL) -> bool:
        """표본 분산 / 평균 제곱 > tol"""
        mean_square = float(np.mean(self.values ** 2))
        if mean_square == 0:
            return False
        return float(np.var(self.values)) / mean_square > tol


@dataclass(frozen=True, eq=False)
class ComparisonResult:
    """비교 변환 결과"""

    lam: float
    chosen: int
    merged: EdgeFunction
    energy_before: float
    energy_after: float
    candidate_energies: Tuple[float, float]
    strict: bool

    @property
    def weighted_sum(self) -> float:
        """E(u~_1) + lambda E(u~_2)"""
        return self.candidate_energies[0] + self.lam * self.candidate_energies[1]

    @property
    def weighted_bound(self) -> float:
        """(1 + lambda)(E(u_1) + E(u_2))"""
        return (1.0 + self.lam) * self.energy_before

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lambda": self.lam,
            "chosen": self.chosen,
            "energy_before": self.energy_before,
            "energy_after": self.energy_after,
            "candidate_energies": list(self.candidate_energies),
            "strict": self.strict,
            "merged_length": self.merged.length if not self.merged.infinite else "inf",
        }


@dataclass(frozen=True)
class ReductionStep:
    transform: str
    edges: Tuple[int, ...]
    energy_before: float
    energy_after: float
    mass_before: float
    mass_after: float
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "transform": self.transform,
            "edges": list(self.edges),
            "energy_before": self.energy_before,
            "energy_after": self.energy_after,
            "mass_before": self.mass_before,
            "mass_after": self.mass_after,
            "details": self.details,
        }


@dataclass
class ReductionTrace:
    """적용한 변환의 순서 기록 (haircut 인증서)"""

    steps: List[ReductionStep] = field(default_factory=list)

    def record(
        self,
        transform: str,
        edges: Sequence[int],
        before: GraphField,
        after: GraphField,
        p: float,
        **details: Any,
    ) -> ReductionStep:
        step = ReductionStep(
            transform,
            tuple(int(e) for e in edges),
            energy(before, p).total,
            energy(after, p).total,
            mass(before),
            mass(after),
            details,
        )
        self.steps.append(step)
        logger.info(
            f"{transform} on edges {step.edges}: E {step.energy_before:.12g} -> {step.energy_after:.12g}"
        )
        return step

    def is_consistent(self, rtol: float = 1e-10) -> bool:
        """질량 일정, 에너지 비증가"""
        for step in self.steps:
            scale = max(1.0, abs(step.energy_before))
            if not math.isclose(step.mass_before, step.mass_after, rel_tol=rtol):
                return False
            if step.energy_after > step.energy_before + rtol * scale:
                return False
        return True

    def to_list(self) -> List[Dict[str, Any]]:
        return [step.to_dict() for step in self.steps]


# ---------------------------------------------------------------------------
# 간선 함수 단위 변환
# ---------------------------------------------------------------------------

def edge_function(u: GraphField, j: int, reverse: bool = False) -> EdgeFunction:
    """필드의 간선 j 제한을 EdgeFunction 으로 추출"""
    fn = EdgeFunction(u.edge_coords(j), u.edge_values(j), u.graph.is_halfline(j))
    return fn.reversed() if reverse else fn


def comparison_transform(u1: EdgeFunction, u2: EdgeFunction, p: float) -> ComparisonResult:
    """두 간선 함수를 질량 합을 보존하며 하나로 병합 (에너지 비증가).

    lambda = mass(u2) / mass(u1) 로 두고 u~_1 은 좌표를 (1+lambda) 배,
    u~_2 는 (1+lambda)/lambda 배 늘린다. 에너지가 더 낮은 후보를 택하며 같으면 1번.
    두 입력이 크기가 같은 상수일 때만 등호가 가능하므로 그 밖에는 strict 이다.
    """
    m1, m2 = u1.mass(), u2.mass()
    if not (m1 > 0 and m2 > 0):
        raise ZeroMassError("comparison transform needs two nonzero edge functions")
    lam = m2 / m1
    candidates = (u1.rescaled(1.0 + lam), u2.rescaled((1.0 + lam) / lam))
    e1, e2 = (c.energy(p).total for c in candidates)
    before = u1.energy(p).total + u2.energy(p).total
    chosen = 1 if e1 <= e2 else 2
    return ComparisonResult(
        lam=lam,
        chosen=chosen,
        merged=candidates[chosen - 1],
        energy_before=before,
        energy_after=min(e1, e2),
        candidate_energies=(e1, e2),
        strict=not _same_constant(u1, u2),
    )


def _same_constant(u1: EdgeFunction, u2: EdgeFunction, tol: float = NONCONSTANT_TOL) -> bool:
    """두 함수가 크기가 같은 상수인 경우 (비교 변환의 등호 조건)"""
    if u1.is_nonconstant(tol) or u2.is_nonconstant(tol):
        return False
    a = float(np.mean(np.abs(u1.values)))
    b = float(np.mean(np.abs(u2.values)))
    return abs(a - b) <= math.sqrt(tol) * max(a, b)


def melt_selfloop(loop_fn: EdgeFunction, tail_fn: EdgeFunction) -> EdgeFunction:
    """자기 루프 u_1 과 꼬리 u_2 를 (0, l_1 + l_2) 위 하나의 함수로 이어 붙임"""
    if loop_fn.infinite:
        raise BoundaryMismatchError("a self-loop must have finite length")
    base = loop_fn.start_value
    if abs(loop_fn.end_value - base) > BOUNDARY_TOL or abs(tail_fn.start_value - base) > BOUNDARY_TOL:
        raise BoundaryMismatchError(
            f"need u1(0) = u1(l1) = u2(0); got {base}, {loop_fn.end_value}, {tail_fn.start_value}"
        )
    coords = np.concatenate((loop_fn.coords, loop_fn.extent + tail_fn.coords[1:]))
    values = np.concatenate((loop_fn.values, tail_fn.values[1:]))
    return EdgeFunction(coords, values, tail_fn.infinite)


# ---------------------------------------------------------------------------
# 그래프 단위 변환
# ---------------------------------------------------------------------------

def _interior(u: GraphField, j: int) -> np.ndarray:
    return u.edge_values(j)[1:-1]


def _assemble(
    graph: MetricGraph,
    extents: Sequence[float],
    intervals: Sequence[int],
    vertex_values: Sequence[float],
    interiors: Sequence[np.ndarray],
) -> GraphField:
    layout = FieldLayout(graph, tuple(float(x) for x in extents), tuple(int(n) for n in intervals))
    dofs = np.concatenate([np.asarray(vertex_values, dtype=float)] + [np.asarray(v) for v in interiors])
    return GraphField(layout, dofs)


def bridge_reduce(
    g: MetricGraph,
    u: GraphField,
    p: float,
    trace: Optional[ReductionTrace] = None,
) -> Tuple[MetricGraph, GraphField]:
    """짝수 n 의 B_n 에서 가장 앞선 두 브리지를 비교 변환으로 병합해 B_{n-1} 생성"""
    n = g.bridge_count()
    if n < 2 or n % 2:
        raise InvalidGraphError(f"bridge reduction needs an even bridge count >= 2, got {n}")

    first, second = g.finite_edges[:2]
    v1, v2 = g.edges[first].left, g.edges[first].right
    f1 = edge_function(u, first)
    f2 = edge_function(u, second, reverse=g.edges[second].left != v1)

    m1, m2 = f1.mass(), f2.mass()
    if m1 == 0 and m2 == 0:
        raise ZeroMassError(f"bridges {first} and {second} both carry zero mass")
    if m1 == 0 or m2 == 0:
        merged = f2 if m1 == 0 else f1
        details: Dict[str, Any] = {"degenerate": True}
        logger.warning(f"bridge {first if m1 == 0 else second} carries zero mass; dropping it")
    else:
        result = comparison_transform(f1, f2, p)
        merged = result.merged
        details = result.to_dict()

    rest = [j for j in range(g.n_edges) if j not in (first, second)]
    edges = [(v1, v2, merged.extent)] + [
        (g.edges[j].left, g.edges[j].right, g.edges[j].length) for j in rest
    ]
    reduced = MetricGraph.from_edges(edges, name=f"B_{n - 1}")
    w = _assemble(
        reduced,
        [merged.extent] + [u.layout.extents[j] for j in rest],
        [len(merged.coords) - 1] + [u.layout.intervals[j] for j in rest],
        u.vertex_values,
        [merged.values[1:-1]] + [_interior(u, j) for j in rest],
    )
    if trace is not None:
        trace.record("bridge_reduce", (first, second), u, w, p, **details)
    return reduced, w


def unfold(
    g: MetricGraph,
    u: GraphField,
    p: Optional[float] = None,
    trace: Optional[ReductionTrace] = None,
) -> Tuple[MetricGraph, GraphField]:
    """오일러 경로를 따라 간선 표본을 이어 붙여 직선 위 함수로 펼침.

    결과 그래프는 경로의 유한 간선마다 구간 하나를 갖는 분할된 직선이며
    각 간선의 격자가 그대로 보존된다.
    """
    path = find_euler_path(g)
    (head, _), *middle, (tail, _) = path.steps

    segments = [g.edges[j].length for j, _ in middle]
    line = make_line(segments)

    vertex_values = [u.vertex_values[g.edges[head].left]]
    interiors = [_interior(u, head)]
    for j, rev in middle:
        values = u.edge_values(j)[::-1] if rev else u.edge_values(j)
        interiors.append(values[1:-1])
        vertex_values.append(values[-1])
    interiors.append(_interior(u, tail))

    steps = [head] + [j for j, _ in middle] + [tail]
    w = _assemble(
        line,
        [u.layout.extents[j] for j in steps],
        [u.layout.intervals[j] for j in steps],
        vertex_values,
        interiors,
    )
    if trace is not None:
        trace.record("unfold", steps, u, w, p if p is not None else DEFAULT_P, path=[list(s) for s in path.steps])
    return line, w


def line_values(u: GraphField) -> np.ndarray:
    """펼쳐진 직선 필드의 값을 왼쪽 끝에서 오른쪽 끝까지 순서대로"""
    g = u.graph
    pieces = [u.edge_values(0)[::-1]]
    for j in range(1, g.n_edges):
        pieces.append(u.edge_values(j)[1:])
    return np.concatenate(pieces)


def count_level_hits(values: np.ndarray, level: float, tol: float = 1e-12) -> int:
    """값 level 을 취하는 횟수: 일치하는 노드 구간 수 + 노드 사이 부호 변화 수"""
    d = np.asarray(values, dtype=float) - level
    hits = np.abs(d) <= tol
    runs = int(np.sum(hits[1:] & ~hits[:-1]) + (1 if hits[0] else 0))
    crossings = int(np.sum((d[:-1] * d[1:] < 0) & ~hits[:-1] & ~hits[1:]))
    return runs + crossings


def melt_graph_selfloop(
    g: MetricGraph,
    u: GraphField,
    loop_edge: int,
    p: Optional[float] = None,
    trace: Optional[ReductionTrace] = None,
) -> Tuple[MetricGraph, GraphField]:
    """그래프 안에서 자기 루프와 그 정점의 유일한 다른 간선을 하나의 경로로 녹임.

    녹인 간선은 정점 v 에서 시작하며 (v 는 차수 1 이 됨) 루프와 꼬리 사이의
    이음점은 차수 2 정점으로 남아 각 조각의 균일 격자를 유지한다.
    """
    loop = g.edges[loop_edge]
    if not loop.is_loop:
        raise InvalidGraphError(f"edge {loop_edge} is not a self-loop")
    v = loop.left
    others = [j for j, _ in g.incident(v) if j != loop_edge]
    if len(others) != 1:
        raise InvalidGraphError(f"self-loop {loop_edge} must be attached to exactly one other edge")
    tail = others[0]
    tail_edge = g.edges[tail]

    reverse = not tail_edge.is_halfline and tail_edge.left != v
    loop_fn = edge_function(u, loop_edge)
    tail_fn = edge_function(u, tail, reverse=reverse)
    melted = melt_selfloop(loop_fn, tail_fn)

    junction = g.n_vertices
    far = None if tail_edge.is_halfline else (tail_edge.left if reverse else tail_edge.right)
    rest = [j for j in range(g.n_edges) if j not in (loop_edge, tail)]
    edges = [(e.left, e.right, e.length) for e in (g.edges[j] for j in rest)]
    edges += [(v, junction, loop.length), (junction, far, tail_edge.length)]
    melted_graph = MetricGraph.from_edges(edges, name=f"{g.name}/melted")

    n_loop = u.layout.intervals[loop_edge]
    w = _assemble(
        melted_graph,
        [u.layout.extents[j] for j in rest] + [u.layout.extents[loop_edge], u.layout.extents[tail]],
        [u.layout.intervals[j] for j in rest] + [n_loop, u.layout.intervals[tail]],
        list(u.vertex_values) + [melted.values[n_loop]],
        [_interior(u, j) for j in rest] + [loop_fn.values[1:-1], tail_fn.values[1:-1]],
    )
    if trace is not None:
        trace.record("melt_selfloop", (loop_edge, tail), u, w, p if p is not None else DEFAULT_P)
    return melted_graph, w


def meltable_loop(g: MetricGraph) -> Optional[int]:
    """정점의 유일한 다른 간선에 붙은 첫 자기 루프 id (없으면 None)"""
    for j, edge in enumerate(g.edges):
        if edge.is_loop and len([k for k, _ in g.incident(edge.left) if k != j]) == 1:
            return j
    return None


def _even_bridge(g: MetricGraph) -> bool:
    try:
        n = g.bridge_count()
    except InvalidGraphError:
        return False
    return n >= 2 and n % 2 == 0


def haircut(g: MetricGraph, u: GraphField, p: float) -> Tuple[MetricGraph, GraphField, ReductionTrace]:
    """자기 루프 녹이기와 브리지 축약을 반복한 뒤 가능하면 직선으로 펼침"""
    trace = ReductionTrace()
    while True:
        loop = meltable_loop(g)
        if loop is not None:
            g, u = melt_graph_selfloop(g, u, loop, p, trace)
        elif _even_bridge(g):
            g, u = bridge_reduce(g, u, p, trace)
        else:
            break
    if euler_unfoldable(g):
        g, u = unfold(g, u, p, trace)
    else:
        logger.info(f"haircut stopped on {g.name}: no further reduction applies")
    return g, u, trace
