"""
질량 제약 에너지 최소화
정규화 기울기 흐름 (기울기 스텝 후 질량 구면으로 재정규화), 역추적, 수렴 판정, 탈출 진단
"""
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple
import logging

import numpy as np
import pandas as pd
from scipy import sparse
from scipy.sparse.linalg import splu

from config.settings import (
    ESCAPE_DISTANCE,
    FLOW_BACKTRACK,
    FLOW_DIVERGENCE_FACTOR,
    FLOW_ENERGY_TOL,
    FLOW_LOG_EVERY,
    FLOW_MAX_ITERS,
    FLOW_MIN_STEP_RATIO,
    FLOW_SCHEMES,
    FLOW_STEP_FACTOR,
    FLOW_WINDOW,
)
from core.exceptions import (
    FlowDivergenceError,
    GraphNLSError,
    LayoutMismatchError,
    TruncationError,
    ZeroMassError,
    check_exponent,
)
from core.field import FieldLayout, GraphField, GridSpec, rescale_mass, sample
from core.functionals import EnergyReport, energy, mass, multiplier_estimate
from core.graph_model import MetricGraph, vertex_distances
from core.soliton import soliton_energy, soliton_profile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlowConfig:
    """흐름 설정. step 이 None 이면 tau_0 = FLOW_STEP_FACTOR * h_min^2"""

    step: Optional[float] = None
    max_iters: int = FLOW_MAX_ITERS
    energy_tol: float = FLOW_ENERGY_TOL
    backtrack: float = FLOW_BACKTRACK
    window: int = FLOW_WINDOW
    scheme: str = "explicit"
    escape_distance: float = ESCAPE_DISTANCE
    divergence_factor: float = FLOW_DIVERGENCE_FACTOR
    min_step_ratio: float = FLOW_MIN_STEP_RATIO

    def __post_init__(self):
        if self.step is not None and not self.step > 0:
            raise GraphNLSError(f"flow step must be positive, got {self.step}")
        if self.max_iters < 1 or self.window < 1:
            raise GraphNLSError("max_iters and window must be positive integers")
        if not self.energy_tol > 0:
            raise GraphNLSError(f"energy_tol must be positive, got {self.energy_tol}")
        if not 0.0 < self.backtrack < 1.0:
            raise GraphNLSError(f"backtrack factor must lie in (0, 1), got {self.backtrack}")
        if self.scheme not in FLOW_SCHEMES:
            raise GraphNLSError(f"unknown flow scheme '{self.scheme}', expected one of {FLOW_SCHEMES}")
        if not self.escape_distance > 0:
            raise GraphNLSError("escape distance must be positive")

    def resolved_step(self, layout: FieldLayout) -> float:
        if self.step is not None:
            return self.step
        h_min = min(layout.spacing(j) for j in range(layout.graph.n_edges))
        return FLOW_STEP_FACTOR * h_min ** 2


@dataclass(frozen=True)
class EscapeMetric:
    """반직선 하나의 탈출 지표"""

    edge: int
    fraction: float
    center: float

    def to_dict(self) -> Dict[str, float]:
        return {"edge": self.edge, "fraction": self.fraction, "center": self.center}


@dataclass
class FlowResult:
    """최소화 결과와 진단.

    stop_reason: "stagnation" (창 안의 에너지 감소가 tol 미만), "step_floor" (tau 를
    tau0 * min_step_ratio 까지 줄여도 감소하는 단계가 없음, 이산 고정점), "max_iters"
    (반복 상한 도달). 앞의 둘만 converged 이다.
    """

    field: GraphField
    energies: np.ndarray
    masses: np.ndarray
    escape_trace: np.ndarray
    report: EnergyReport
    multiplier: float
    multiplier_residual: float
    escape: Tuple[EscapeMetric, ...]
    converged: bool
    iterations: int
    stop_reason: str
    final_step: float
    scheme: str = "explicit"

    @property
    def max_escape_fraction(self) -> float:
        return max((m.fraction for m in self.escape), default=0.0)

    def escape_trend(self, tol: float = 1e-9) -> str:
        """반복 동안 최대 탈출 비율의 변화 방향: outward / inward / flat"""
        if len(self.escape_trace) < 2:
            return "flat"
        change = float(self.escape_trace[-1] - self.escape_trace[0])
        if change > tol:
            return "outward"
        if change < -tol:
            return "inward"
        return "flat"

    def trace_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "iteration": np.arange(len(self.energies)),
                "energy": self.energies,
                "mass": self.masses,
                "max_escape_fraction": self.escape_trace,
            }
        )

    def summary(self) -> Dict[str, Any]:
        return {
            "energy": self.report.to_dict(),
            "multiplier": self.multiplier,
            "multiplier_residual": self.multiplier_residual,
            "escape": [m.to_dict() for m in self.escape],
            "escape_trend": self.escape_trend(),
            "converged": self.converged,
            "iterations": self.iterations,
            "stop_reason": self.stop_reason,
            "final_step": self.final_step,
            "scheme": self.scheme,
        }


# ---------------------------------------------------------------------------
# 탈출 진단
# ---------------------------------------------------------------------------

def _halfline_weights(layout: FieldLayout, distance: float) -> Tuple[List[int], np.ndarray, np.ndarray]:
    """반직선별 (x >= D 노드 가중치, x * 가중치) 를 자유도 공간으로 옮긴 행렬"""
    g = layout.graph
    beyond, moment = [], []
    for j in g.halflines:
        if distance >= layout.extents[j]:
            raise TruncationError(
                f"escape distance {distance} must be below the truncation length {layout.extents[j]}"
            )
        x = layout.coords(j)
        w = np.zeros(layout.n_nodes)
        xw = np.zeros(layout.n_nodes)
        sl = layout.node_slices[j]
        weights = layout.node_weights[sl]
        w[sl] = np.where(x >= distance, weights, 0.0)
        xw[sl] = x * weights
        beyond.append(layout.prolongation.T @ w)
        moment.append(layout.prolongation.T @ xw)
    n = len(beyond)
    shape = (n, layout.n_dofs)
    return (
        list(g.halflines),
        np.asarray(beyond).reshape(shape),
        np.asarray(moment).reshape(shape),
    )


def _halfline_mass_weights(layout: FieldLayout) -> np.ndarray:
    rows = []
    for j in layout.graph.halflines:
        w = np.zeros(layout.n_nodes)
        sl = layout.node_slices[j]
        w[sl] = layout.node_weights[sl]
        rows.append(layout.prolongation.T @ w)
    return np.asarray(rows).reshape(len(rows), layout.n_dofs)


def escape_metrics(u: GraphField, distance: float = ESCAPE_DISTANCE) -> Tuple[EscapeMetric, ...]:
    """반직선마다 x >= D 에 놓인 질량 비율과 질량 중심 int x u^2 / int u^2.

    정점 노드는 반직선의 x = 0 에 있으므로 중심 계산에 기여하지 않는다.
    """
    if not u.graph.halflines:
        raise GraphNLSError(f"{u.graph.name} has no half-line")
    total = mass(u)
    if total == 0:
        raise ZeroMassError("escape metrics undefined for the zero field")
    edges, beyond, moment = _halfline_weights(u.layout, distance)
    own = _halfline_mass_weights(u.layout)
    sq = u.dofs ** 2
    metrics = []
    for k, j in enumerate(edges):
        own_mass = float(own[k] @ sq)
        center = float(moment[k] @ sq) / own_mass if own_mass > 0 else 0.0
        metrics.append(EscapeMetric(j, float(beyond[k] @ sq) / total, center))
    return tuple(metrics)


# ---------------------------------------------------------------------------
# 초기값
# ---------------------------------------------------------------------------

def default_initial_field(
    g: MetricGraph, spec: GridSpec, p: float, mu: float, vertex: int = 0
) -> GraphField:
    """정점 vertex 에서의 측지 거리 d 에 대해 phi_{2 mu}(d) 를 표본화하고 질량 mu 로 정규화"""
    if vertex not in g.vertices:
        raise GraphNLSError(f"unknown vertex {vertex}")
    dist = vertex_distances(g, vertex)

    def f(j: int, x: np.ndarray) -> np.ndarray:
        edge = g.edges[j]
        d = dist[edge.left] + x
        if not edge.is_halfline:
            d = np.minimum(d, dist[edge.right] + (edge.length - x))
        return soliton_profile(p, 2.0 * mu, d)

    return rescale_mass(sample(g, spec, f), mu)


# ---------------------------------------------------------------------------
# 정규화 기울기 흐름
# ---------------------------------------------------------------------------

class _DiscreteProblem:
    """자유도 벡터 위 에너지, 기울기, 질량 사영"""

    def __init__(self, layout: FieldLayout, p: float, mu: float):
        self.layout = layout
        self.p = p
        self.mu = mu
        self.M = layout.lumped_mass
        self.A = layout.stiffness
        self._factors: Dict[float, Any] = {}

    def energy(self, v: np.ndarray) -> float:
        return float(0.5 * v @ (self.A @ v) - self.M @ np.abs(v) ** self.p / self.p)

    def mass(self, v: np.ndarray) -> float:
        return float(self.M @ (v * v))

    def project(self, v: np.ndarray) -> np.ndarray:
        return v * math.sqrt(self.mu / self.mass(v))

    def nonlinear(self, v: np.ndarray) -> np.ndarray:
        return np.abs(v) ** (self.p - 2.0) * v

    def explicit_step(self, v: np.ndarray, tau: float) -> np.ndarray:
        grad = self.A @ v - self.M * self.nonlinear(v)
        return v - tau * grad / self.M

    def semi_implicit_step(self, v: np.ndarray, tau: float) -> np.ndarray:
        """(M + tau A) v* = M v + tau M |v|^{p-2} v"""
        lu = self._factors.get(tau)
        if lu is None:
            lu = splu((sparse.diags(self.M) + tau * self.A).tocsc())
            self._factors[tau] = lu
        return lu.solve(self.M * (v + tau * self.nonlinear(v)))


def minimize(
    g: MetricGraph,
    spec: GridSpec,
    p: float,
    mu: float,
    init: Optional[GraphField] = None,
    cfg: Optional[FlowConfig] = None,
) -> FlowResult:
    """질량 mu 구면 위에서 이산 에너지를 최소화.

    Args:
        g: 그래프
        spec: 격자 설정 (init 이 없을 때 기본 초기값 배치에 사용)
        p: 비선형 지수 (2 < p < 6)
        mu: 질량
        init: 초기 필드 (None 이면 정점 0 의 반-솔리톤 범프)
        cfg: 흐름 설정

    Returns:
        FlowResult: 최종 필드, 에너지/질량/탈출 기록, 승수, 수렴 여부
    """
    p = check_exponent(p)
    if not mu > 0:
        raise GraphNLSError(f"mass must be positive, got {mu}")
    cfg = cfg or FlowConfig()
    if init is None:
        init = default_initial_field(g, spec, p, mu)
    if init.graph != g:
        raise LayoutMismatchError(f"initial field lives on {init.graph.name}, not on {g.name}")
    if not mass(init) > 0:
        raise ZeroMassError("initial field has zero mass")

    layout = init.layout
    problem = _DiscreteProblem(layout, p, mu)
    step = problem.semi_implicit_step if cfg.scheme == "semi_implicit" else problem.explicit_step
    floor = cfg.divergence_factor * soliton_energy(p, mu)

    track_escape = bool(g.halflines) and all(
        cfg.escape_distance < layout.extents[j] for j in g.halflines
    )
    if track_escape:
        _, beyond, _ = _halfline_weights(layout, cfg.escape_distance)
    else:
        beyond = np.zeros((0, layout.n_dofs))

    def max_escape(v: np.ndarray) -> float:
        if not len(beyond):
            return 0.0
        return float(np.max(beyond @ (v * v))) / mu

    tau0 = cfg.resolved_step(layout)
    tau = tau0
    u = problem.project(np.array(init.dofs))
    current = problem.energy(u)
    energies, masses, escapes = [current], [problem.mass(u)], [max_escape(u)]
    converged, reason = False, "max_iters"
    logger.info(
        f"Flow start on {g.name}: p={p}, mu={mu}, dofs={layout.n_dofs}, tau0={tau0:.3e}, "
        f"scheme={cfg.scheme}, E0={current:.12g}"
    )

    iteration = 0
    while iteration < cfg.max_iters:
        accepted = None
        while tau >= tau0 * cfg.min_step_ratio:
            candidate = problem.project(step(u, tau))
            value = problem.energy(candidate)
            if value < current:
                accepted = (candidate, value)
                break
            tau *= cfg.backtrack
            logger.debug(f"iteration {iteration}: backtracking to tau={tau:.3e}")
        if accepted is None:
            converged, reason = True, "step_floor"
            break

        u, current = accepted
        iteration += 1
        if current < floor:
            raise FlowDivergenceError(
                f"energy {current:.6g} fell below the guard {floor:.6g} at iteration {iteration}"
            )
        energies.append(current)
        masses.append(problem.mass(u))
        escapes.append(max_escape(u))
        tau = min(tau0, tau / cfg.backtrack)

        if iteration % FLOW_LOG_EVERY == 0:
            logger.debug(f"iteration {iteration}: E={current:.12g}, tau={tau:.3e}")
        if iteration >= cfg.window and energies[-1 - cfg.window] - current < cfg.energy_tol:
            converged, reason = True, "stagnation"
            break

    if not converged:
        logger.warning(f"Flow on {g.name} hit max_iters={cfg.max_iters} without stagnating")

    final = GraphField(layout, u)
    nu, residual = multiplier_estimate(final, p)
    metrics = escape_metrics(final, cfg.escape_distance) if track_escape else ()
    report = energy(final, p)
    logger.info(
        f"Flow done on {g.name}: {iteration} iterations ({reason}), E={report.total:.12g}, nu={nu:.6g}"
    )
    return FlowResult(
        field=final,
        energies=np.asarray(energies),
        masses=np.asarray(masses),
        escape_trace=np.asarray(escapes),
        report=report,
        multiplier=nu,
        multiplier_residual=residual,
        escape=metrics,
        converged=converged,
        iterations=iteration,
        stop_reason=reason,
        final_step=tau,
        scheme=cfg.scheme,
    )
