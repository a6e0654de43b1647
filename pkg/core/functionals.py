"""
에너지 범함수와 진단
질량, L^p 노름, 운동 에너지, 전체 에너지, 이산 기울기, Kirchhoff 잔차, Gagliardo-Nirenberg 비
"""
import math
from dataclasses import asdict, dataclass
from typing import Dict, Tuple
import logging

import numpy as np
from scipy.integrate import trapezoid

from core.exceptions import GridTooCoarseError, ZeroMassError, check_exponent
from core.field import GraphField

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnergyReport:
    """E(u) = 1/2 ||u'||^2 - 1/p ||u||_p^p 의 항별 값"""

    kinetic: float
    potential: float
    total: float
    mass: float
    p: float

    @classmethod
    def from_terms(cls, kinetic: float, potential: float, mass: float, p: float) -> "EnergyReport":
        return cls(float(kinetic), float(potential), float(kinetic) - float(potential), float(mass), float(p))

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class KirchhoffReport:
    """정점별 |sum_R u'(l) - sum_L u'(0)| (3점 한쪽 차분)"""

    residuals: Tuple[float, ...]
    signed: Tuple[float, ...]

    @property
    def max_residual(self) -> float:
        return max(self.residuals)

    def to_dict(self) -> Dict[str, object]:
        return {"residuals": list(self.residuals), "max_residual": self.max_residual}


# ---------------------------------------------------------------------------
# 구간 단위 이산 범함수 (비균일 좌표 허용)
# ---------------------------------------------------------------------------

def interval_mass(x: np.ndarray, v: np.ndarray) -> float:
    return float(trapezoid(v * v, x))


def interval_lp(x: np.ndarray, v: np.ndarray, q: float) -> float:
    return float(trapezoid(np.abs(v) ** q, x))


def interval_kinetic(x: np.ndarray, v: np.ndarray) -> float:
    """1/2 sum (v_{i+1}-v_i)^2 / (x_{i+1}-x_i)"""
    return float(0.5 * np.sum(np.diff(v) ** 2 / np.diff(x)))


def interval_energy(x: np.ndarray, v: np.ndarray, p: float) -> EnergyReport:
    return EnergyReport.from_terms(
        interval_kinetic(x, v), interval_lp(x, v, p) / p, interval_mass(x, v), p
    )


# ---------------------------------------------------------------------------
# 그래프 범함수
# ---------------------------------------------------------------------------

def mass(u: GraphField) -> float:
    """||u||_2^2 (간선별 사다리꼴 적분의 합)"""
    return float(np.dot(u.layout.lumped_mass, u.dofs ** 2))


def lp_norm_p(u: GraphField, p: float) -> float:
    """||u||_p^p"""
    return float(np.dot(u.layout.lumped_mass, np.abs(u.dofs) ** p))


def kinetic(u: GraphField) -> float:
    """1/2 ||u'||_2^2 (전진 차분)"""
    diffs = u.layout.difference @ u.dofs
    return float(0.5 * np.sum(diffs ** 2 / u.layout.interval_spacing))


def energy(u: GraphField, p: float) -> EnergyReport:
    """에너지 범함수 E(u, G)"""
    p = check_exponent(p)
    return EnergyReport.from_terms(kinetic(u), lp_norm_p(u, p) / p, mass(u), p)


def energy_gradient(u: GraphField, p: float) -> np.ndarray:
    """자유도에 대한 이산 에너지의 정확한 기울기.

    정점 자유도는 닿는 모든 간선의 기여를 누적한다 (이산 Kirchhoff 조건).
    """
    m = u.layout.lumped_mass
    return u.layout.stiffness @ u.dofs - m * np.abs(u.dofs) ** (p - 2) * u.dofs


def l2_gradient(u: GraphField, p: float) -> np.ndarray:
    """질량 가중 내적에 대한 기울기 M^{-1} grad E"""
    return energy_gradient(u, p) / u.layout.lumped_mass


def multiplier_estimate(u: GraphField, p: float) -> Tuple[float, float]:
    """grad E ~ -2 nu M u 를 만족하는 최소제곱 nu 와 상대 잔차"""
    g = energy_gradient(u, p)
    mu_vec = u.layout.lumped_mass * u.dofs
    denom = float(np.dot(mu_vec, mu_vec))
    if denom == 0:
        raise ZeroMassError("multiplier undefined for the zero field")
    nu = -float(np.dot(g, mu_vec)) / (2.0 * denom)
    g_norm = float(np.linalg.norm(g))
    if g_norm == 0:
        return nu, 0.0
    return nu, float(np.linalg.norm(g + 2.0 * nu * mu_vec) / g_norm)


def _one_sided_derivatives(values: np.ndarray, h: float) -> Tuple[float, float]:
    start = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h)
    end = (3.0 * values[-1] - 4.0 * values[-2] + values[-3]) / (2.0 * h)
    return start, end


def kirchhoff_residual(u: GraphField) -> KirchhoffReport:
    """정점별 Kirchhoff 잔차"""
    g = u.graph
    signed = np.zeros(g.n_vertices)
    for j, edge in enumerate(g.edges):
        if u.layout.intervals[j] < 2:
            raise GridTooCoarseError(f"edge {j}: Kirchhoff residual needs at least 3 nodes")
        start, end = _one_sided_derivatives(u.edge_values(j), u.layout.spacing(j))
        signed[edge.left] -= start
        if not edge.is_halfline:
            signed[edge.right] += end
    return KirchhoffReport(tuple(float(abs(s)) for s in signed), tuple(float(s) for s in signed))


def gn_ratio(u: GraphField, p: float, seminorm: bool = False) -> float:
    """Gagliardo-Nirenberg 비 ||u||_p / (||u||_2^{1/2+1/p} ||u||_{H^1}^{1/2-1/p}).

    ||u||_{H^1}^2 = ||u||_2^2 + ||u'||_2^2. seminorm=True 이면 ||u'||_2 를 사용하며
    이때 비는 질량 보존 팽창 sqrt(l) u(l x) 에 대해 불변이다.
    """
    m = mass(u)
    if m == 0:
        raise ZeroMassError("GN ratio undefined for the zero field")
    grad_sq = 2.0 * kinetic(u)
    second = grad_sq if seminorm else m + grad_sq
    if second == 0:
        raise ZeroMassError("GN seminorm ratio undefined for a constant field")
    lp = lp_norm_p(u, p) ** (1.0 / p)
    return lp / (math.sqrt(m) ** (0.5 + 1.0 / p) * math.sqrt(second) ** (0.5 - 1.0 / p))


def gn_lower_bound_constant(ratio: float, p: float, mu: float) -> float:
    """측정된 GN 비로부터 E >= 1/2 ||u'||^2 - C ||u'||^{p/2-1} - C 의 상수 C"""
    return (ratio ** p / p) * mu ** ((p + 2.0) / 4.0) * max(1.0, mu ** ((p - 2.0) / 4.0))


def gn_lower_bound(u: GraphField, p: float, constant: float) -> float:
    grad_norm = math.sqrt(2.0 * kinetic(u))
    return 0.5 * grad_norm ** 2 - constant * grad_norm ** (p / 2.0 - 1.0) - constant
