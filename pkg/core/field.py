"""
그래프 위 H^1 함수의 이산 표현
간선별 균일 격자 + 정점 공유 자유도 (연속 조건을 구조적으로 보장), 반직선 절단
"""
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, Union
import logging

import numpy as np
import pandas as pd
from scipy import sparse

from config.settings import CONTINUITY_TOL, FLOAT_FORMAT, MIN_TRUNC_RATIO
from core.exceptions import (
    ContinuityError,
    GraphNLSError,
    InvalidGraphError,
    LayoutMismatchError,
    ZeroMassError,
)
from core.graph_model import MetricGraph

logger = logging.getLogger(__name__)

EdgeFunctionSpec = Union[Callable[[int, np.ndarray], np.ndarray], Sequence[Callable[[np.ndarray], np.ndarray]]]


@dataclass(frozen=True)
class GridSpec:
    """격자 간격 h와 반직선 절단 길이 L_trunc"""

    h: float
    L_trunc: float

    def __post_init__(self):
        if not self.h > 0:
            raise InvalidGraphError(f"grid spacing must be positive, got {self.h}")
        if not self.L_trunc >= MIN_TRUNC_RATIO * self.h:
            raise InvalidGraphError(
                f"L_trunc must be at least {MIN_TRUNC_RATIO}*h, got L_trunc={self.L_trunc}, h={self.h}"
            )

    def intervals_for(self, extent: float) -> int:
        # 1/0.05 = 20.000000000000004 같은 반올림 잡음 제거
        return max(1, math.ceil(extent / self.h - 1e-9))


@dataclass(frozen=True)
class FieldLayout:
    """간선별 범위와 구간 수로 정해지는 자유도 배치.

    자유도 순서: 정점 값 N_v개, 이어서 간선별 내부 노드.
    절단된 반직선의 끝 노드는 0으로 고정되어 자유도가 없다.
    """

    graph: MetricGraph
    extents: Tuple[float, ...]
    intervals: Tuple[int, ...]

    def __post_init__(self):
        g = self.graph
        if len(self.extents) != g.n_edges or len(self.intervals) != g.n_edges:
            raise LayoutMismatchError("layout needs one extent and one interval count per edge")
        for j, edge in enumerate(g.edges):
            if self.intervals[j] < 1:
                raise LayoutMismatchError(f"edge {j}: needs at least one interval")
            if not self.extents[j] > 0:
                raise LayoutMismatchError(f"edge {j}: extent must be positive")
            if not edge.is_halfline and not math.isclose(self.extents[j], edge.length, rel_tol=1e-12):
                raise LayoutMismatchError(f"edge {j}: extent {self.extents[j]} != length {edge.length}")

    @classmethod
    def from_spec(cls, graph: MetricGraph, spec: GridSpec) -> "FieldLayout":
        extents = tuple(spec.L_trunc if e.is_halfline else e.length for e in graph.edges)
        return cls(graph, extents, tuple(spec.intervals_for(x) for x in extents))

    def spacing(self, j: int) -> float:
        return self.extents[j] / self.intervals[j]

    def coords(self, j: int) -> np.ndarray:
        return np.linspace(0.0, self.extents[j], self.intervals[j] + 1)

    @cached_property
    def interior_offsets(self) -> Tuple[int, ...]:
        offsets = []
        start = self.graph.n_vertices
        for n in self.intervals:
            offsets.append(start)
            start += n - 1
        return tuple(offsets)

    @property
    def n_dofs(self) -> int:
        return self.graph.n_vertices + sum(n - 1 for n in self.intervals)

    @property
    def n_nodes(self) -> int:
        return sum(n + 1 for n in self.intervals)

    def node_dofs(self, j: int) -> np.ndarray:
        """간선 j의 노드별 자유도 번호 (고정된 절단 노드는 -1)"""
        edge = self.graph.edges[j]
        n = self.intervals[j]
        start = self.interior_offsets[j]
        last = -1 if edge.is_halfline else edge.right
        return np.concatenate(([edge.left], np.arange(start, start + n - 1), [last])).astype(int)

    @cached_property
    def node_slices(self) -> Tuple[slice, ...]:
        slices = []
        start = 0
        for n in self.intervals:
            slices.append(slice(start, start + n + 1))
            start += n + 1
        return tuple(slices)

    @cached_property
    def prolongation(self) -> sparse.csr_matrix:
        """자유도 → 간선별 노드 값 (연결된 노드 벡터)"""
        dof_index = np.concatenate([self.node_dofs(j) for j in range(self.graph.n_edges)])
        rows = np.flatnonzero(dof_index >= 0)
        cols = dof_index[rows]
        data = np.ones(len(rows))
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n_nodes, self.n_dofs))

    @cached_property
    def difference(self) -> sparse.csr_matrix:
        """자유도 → 각 구간의 전진 차분 (u_{i+1} - u_i)"""
        rows, cols, data = [], [], []
        row = 0
        for j, sl in enumerate(self.node_slices):
            n = self.intervals[j]
            nodes = np.arange(sl.start, sl.stop)
            r = np.arange(row, row + n)
            rows += [r, r]
            cols += [nodes[1:], nodes[:-1]]
            data += [np.ones(n), -np.ones(n)]
            row += n
        d_nodes = sparse.csr_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
            shape=(row, self.n_nodes),
        )
        return (d_nodes @ self.prolongation).tocsr()

    @cached_property
    def interval_spacing(self) -> np.ndarray:
        return np.concatenate([np.full(n, self.spacing(j)) for j, n in enumerate(self.intervals)])

    @cached_property
    def node_weights(self) -> np.ndarray:
        """노드별 사다리꼴 가중치 (끝점 h/2, 내부 h)"""
        weights = []
        for j, n in enumerate(self.intervals):
            w = np.full(n + 1, self.spacing(j))
            w[0] *= 0.5
            w[-1] *= 0.5
            weights.append(w)
        return np.concatenate(weights)

    @cached_property
    def lumped_mass(self) -> np.ndarray:
        """자유도별 사다리꼴 가중치. 정점 자유도는 닿는 모든 간선의 h_j/2를 누적"""
        return np.asarray(self.prolongation.T @ self.node_weights).ravel()

    @cached_property
    def stiffness(self) -> sparse.csr_matrix:
        """이산 운동 에너지 1/2 u^T A u 의 행렬 A"""
        inv_h = sparse.diags(1.0 / self.interval_spacing)
        return (self.difference.T @ inv_h @ self.difference).tocsr()


@dataclass(frozen=True, eq=False)
class GraphField:
    """그래프 위 실수값 이산 함수 (최적화 변수 u)"""

    layout: FieldLayout
    dofs: np.ndarray

    def __post_init__(self):
        values = np.array(self.dofs, dtype=float)
        if values.shape != (self.layout.n_dofs,):
            raise LayoutMismatchError(
                f"expected {self.layout.n_dofs} degrees of freedom, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise GraphNLSError("field samples must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "dofs", values)

    @property
    def graph(self) -> MetricGraph:
        return self.layout.graph

    @property
    def vertex_values(self) -> np.ndarray:
        return self.dofs[: self.graph.n_vertices]

    def edge_values(self, j: int) -> np.ndarray:
        """간선 j의 노드 값 (정점 값과 절단 노드 0 포함)"""
        index = self.layout.node_dofs(j)
        values = np.zeros(len(index))
        mask = index >= 0
        values[mask] = self.dofs[index[mask]]
        return values

    def edge_coords(self, j: int) -> np.ndarray:
        return self.layout.coords(j)

    def node_values(self) -> np.ndarray:
        return self.layout.prolongation @ self.dofs

    def with_dofs(self, dofs: np.ndarray) -> "GraphField":
        return GraphField(self.layout, dofs)

    def scaled(self, alpha: float) -> "GraphField":
        return GraphField(self.layout, alpha * self.dofs)

    def to_frame(self) -> pd.DataFrame:
        """간선 id, 호 길이 좌표, 값 열을 갖는 표"""
        frames = [
            pd.DataFrame({"edge": j, "x": self.edge_coords(j), "value": self.edge_values(j)})
            for j in range(self.graph.n_edges)
        ]
        return pd.concat(frames, ignore_index=True)

    def dump_csv(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format=FLOAT_FORMAT)
        logger.info(f"Field dump written: {path}")
        return path


def _edge_callables(g: MetricGraph, f: EdgeFunctionSpec) -> List[Callable[[np.ndarray], np.ndarray]]:
    if callable(f):
        return [lambda x, j=j: f(j, x) for j in range(g.n_edges)]
    if len(f) != g.n_edges:
        raise LayoutMismatchError(f"expected {g.n_edges} edge functions, got {len(f)}")
    return list(f)


def sample(
    g: MetricGraph,
    spec: GridSpec,
    f: EdgeFunctionSpec,
    layout: Optional[FieldLayout] = None,
) -> GraphField:
    """간선별 함수를 격자에 표본화.

    Args:
        g: 그래프
        spec: 격자 설정
        f: f(edge_id, x) 형태의 함수 또는 간선별 함수 목록 (x는 간선 좌표 배열)
        layout: 기본 배치 대신 사용할 배치

    Returns:
        GraphField: 정점 값은 닿는 간선 끝값들의 평균
    """
    layout = layout or FieldLayout.from_spec(g, spec)
    funcs = _edge_callables(g, f)
    dofs = np.zeros(layout.n_dofs)
    vertex_samples: List[List[float]] = [[] for _ in g.vertices]

    for j, edge in enumerate(g.edges):
        values = np.asarray(funcs[j](layout.coords(j)), dtype=float)
        if values.shape != (layout.intervals[j] + 1,):
            values = np.broadcast_to(values, (layout.intervals[j] + 1,)).astype(float)
        vertex_samples[edge.left].append(values[0])
        if not edge.is_halfline:
            vertex_samples[edge.right].append(values[-1])
        start = layout.interior_offsets[j]
        dofs[start : start + layout.intervals[j] - 1] = values[1:-1]

    for v, samples in enumerate(vertex_samples):
        spread = max(samples) - min(samples)
        if spread > CONTINUITY_TOL:
            raise ContinuityError(f"vertex {v}: endpoint values differ by {spread:.3e}")
        dofs[v] = float(np.mean(samples))

    return GraphField(layout, dofs)


def dof_pack(u: GraphField) -> np.ndarray:
    """자유도 벡터 복사본 (정점 값은 한 번만 저장)"""
    return np.array(u.dofs, copy=True)


def dof_unpack(v: np.ndarray, g: MetricGraph, spec: GridSpec) -> GraphField:
    """자유도 벡터로부터 GraphField 복원"""
    layout = FieldLayout.from_spec(g, spec)
    v = np.asarray(v, dtype=float)
    if v.shape != (layout.n_dofs,):
        raise LayoutMismatchError(f"expected {layout.n_dofs} values, got {v.shape}")
    return GraphField(layout, v)


def rescale_mass(u: GraphField, mu: float) -> GraphField:
    """(mu / mass(u))^{1/2} u 반환"""
    from core.functionals import mass

    current = mass(u)
    if not current > 0:
        raise ZeroMassError("cannot rescale a field with zero mass")
    return u.scaled(math.sqrt(mu / current))


def random_field(
    g: MetricGraph,
    spec: GridSpec,
    rng: np.random.Generator,
    scale: float = 1.0,
    positive: bool = False,
) -> GraphField:
    """무작위 자유도를 갖는 필드 (검증 및 시나리오용)"""
    layout = FieldLayout.from_spec(g, spec)
    if positive:
        dofs = rng.uniform(0.1 * scale, scale, layout.n_dofs)
    else:
        dofs = rng.uniform(-scale, scale, layout.n_dofs)
    return GraphField(layout, dofs)
