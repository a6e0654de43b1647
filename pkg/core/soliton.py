"""
솔리톤 해석해
직선 위 최소화 함수 phi_mu, 반직선 위 반-솔리톤, 솔리톤 에너지 기준값, 탈출 수열
"""
import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Dict, Tuple
import logging

import numpy as np
from scipy import integrate, special

from core.exceptions import InvalidGraphError, TruncationError, GraphNLSError, check_exponent
from core.field import GraphField, GridSpec, rescale_mass, sample
from core.graph_model import MetricGraph, make_line

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolitonParams:
    """phi(x) = C_p mu^{2/(6-p)} sech^{2/(p-2)}(c_p mu^{(p-2)/(6-p)} x)"""

    p: float
    mu: float
    C_p: float
    c_p: float

    @property
    def alpha(self) -> float:
        return 2.0 / (self.p - 2.0)

    @property
    def amplitude(self) -> float:
        return self.C_p * self.mu ** (2.0 / (6.0 - self.p))

    @property
    def beta(self) -> float:
        """역폭 (sech 인자의 계수)"""
        return self.c_p * self.mu ** ((self.p - 2.0) / (6.0 - self.p))

    @property
    def width(self) -> float:
        return 1.0 / self.beta

    @property
    def omega(self) -> float:
        """정상 방정식 -phi'' + omega phi = phi^{p-1} 의 omega"""
        return (2.0 * self.beta / (self.p - 2.0)) ** 2

    def to_dict(self) -> Dict[str, float]:
        data = asdict(self)
        data.update(amplitude=self.amplitude, beta=self.beta, omega=self.omega)
        return data


@dataclass(frozen=True)
class ProfileCheck:
    """해석해 자기 검증 결과"""

    mass_relative_error: float
    omega_fit: float
    omega_exact: float
    ode_residual: float
    ode_scale: float

    @property
    def relative_ode_residual(self) -> float:
        return self.ode_residual / self.ode_scale


@lru_cache(maxsize=None)
def soliton_constants(p: float) -> Tuple[float, float]:
    """p 에만 의존하는 상수 (C_p, c_p).

    sech 가정을 -phi'' + omega phi = phi^{p-1} 에 대입하면
    A = (p omega / 2)^{1/(p-2)}, beta = (p-2) sqrt(omega) / 2.
    질량 int A^2 sech^{2 alpha}(beta x) dx = A^2 B(alpha, 1/2) / beta = K omega^{(6-p)/(2(p-2))}
    을 mu 로 맞추면 상수가 결정된다.
    """
    p = check_exponent(p)
    alpha = 2.0 / (p - 2.0)
    K = (p / 2.0) ** (2.0 / (p - 2.0)) * (2.0 / (p - 2.0)) * special.beta(alpha, 0.5)
    C_p = (p / 2.0) ** (1.0 / (p - 2.0)) * K ** (-2.0 / (6.0 - p))
    c_p = 0.5 * (p - 2.0) * K ** (-(p - 2.0) / (6.0 - p))
    return float(C_p), float(c_p)


def soliton_params(p: float, mu: float) -> SolitonParams:
    if not mu > 0:
        raise GraphNLSError(f"mass must be positive, got {mu}")
    C_p, c_p = soliton_constants(float(p))
    return SolitonParams(float(p), float(mu), C_p, c_p)


def _sech(y: np.ndarray) -> np.ndarray:
    # cosh 오버플로 없이 sech 계산
    e = np.exp(-2.0 * np.abs(y))
    return 2.0 * np.exp(-np.abs(y)) / (1.0 + e)


def soliton_profile(p: float, mu: float, x) -> np.ndarray:
    s = soliton_params(p, mu)
    return s.amplitude * _sech(s.beta * np.asarray(x, dtype=float)) ** s.alpha


def soliton_derivative(p: float, mu: float, x) -> np.ndarray:
    s = soliton_params(p, mu)
    y = s.beta * np.asarray(x, dtype=float)
    return -s.amplitude * s.alpha * s.beta * _sech(y) ** s.alpha * np.tanh(y)


def soliton_second_derivative(p: float, mu: float, x) -> np.ndarray:
    s = soliton_params(p, mu)
    sech = _sech(s.beta * np.asarray(x, dtype=float))
    return s.amplitude * s.alpha * s.beta ** 2 * sech ** s.alpha * (s.alpha - (s.alpha + 1.0) * sech ** 2)


def soliton_frequency(p: float, mu: float) -> float:
    return soliton_params(p, mu).omega


def check_profile(p: float, mu: float, h: float = 1e-3) -> ProfileCheck:
    """질량 구적 검사와 최소제곱 omega 에 의한 ODE 잔차 검사"""
    s = soliton_params(p, mu)
    half_mass, _ = integrate.quad(
        lambda x: float(soliton_profile(p, mu, x)) ** 2, 0.0, np.inf, epsabs=1e-14, epsrel=1e-12, limit=200
    )
    mass_error = abs(2.0 * half_mass - mu) / mu

    x = np.arange(-30.0 * s.width, 30.0 * s.width + h, h)
    phi = soliton_profile(p, mu, x)
    d2 = soliton_second_derivative(p, mu, x)
    nonlinear = phi ** (p - 1.0)
    omega_fit = float(np.dot(phi, d2 + nonlinear) / np.dot(phi, phi))
    residual = float(np.max(np.abs(-d2 + omega_fit * phi - nonlinear)))
    return ProfileCheck(mass_error, omega_fit, s.omega, residual, float(np.max(nonlinear)))


def _energy_density(p: float, mu: float):
    def density(x: float) -> float:
        return 0.5 * float(soliton_derivative(p, mu, x)) ** 2 - float(soliton_profile(p, mu, x)) ** p / p
    return density


@lru_cache(maxsize=256)
def soliton_energy(p: float, mu: float) -> float:
    """E(phi_mu, R): 꼬리 기여가 1e-12 미만이 될 때까지 적분 구간을 넓히는 구적"""
    p = check_exponent(p)
    s = soliton_params(p, mu)
    density = _energy_density(p, mu)
    extent = 10.0 * s.width
    while True:
        tail, _ = integrate.quad(density, extent, 2.0 * extent, epsabs=1e-16, epsrel=1e-12, limit=200)
        if abs(tail) < 1e-12:
            break
        extent *= 2.0
    body, _ = integrate.quad(density, 0.0, extent, epsabs=1e-15, epsrel=1e-13, limit=400)
    return 2.0 * float(body)


def soliton_field(g: MetricGraph, spec: GridSpec, p: float, mu: float, center: float = 0.0) -> GraphField:
    """직선 모델 (한 정점의 두 반직선) 또는 반직선 위에 표본화한 phi_mu(x - center)"""
    if g.n_edges == 2 and len(g.halflines) == 2 and g.n_vertices == 1:
        signs = (-1.0, 1.0)
        return sample(g, spec, lambda j, x: soliton_profile(p, mu, signs[j] * x - center))
    if g.n_edges == 1 and g.is_halfline(0):
        return sample(g, spec, lambda j, x: soliton_profile(p, mu, x - center))
    raise InvalidGraphError(f"soliton sampling needs the line model or a half-line, got {g.name}")


def half_soliton_field(g: MetricGraph, spec: GridSpec, p: float, mu: float) -> GraphField:
    """R+ 위의 반-솔리톤: phi_{2 mu} 의 양의 반직선 제한 (질량 mu)"""
    if g.n_edges != 1 or not g.is_halfline(0):
        raise InvalidGraphError(f"half-soliton lives on a single half-line, got {g.name}")
    return sample(g, spec, lambda j, x: soliton_profile(p, 2.0 * mu, x))


def discretization_error(p: float, mu: float, spec: GridSpec) -> float:
    """간격 h 에서 표본화한 솔리톤의 이산 에너지와 E(phi_mu, R) 의 차이 delta_h"""
    from core.functionals import energy

    width = soliton_params(p, mu).width
    wide = GridSpec(spec.h, max(spec.L_trunc, 40.0 * width))
    discrete = energy(soliton_field(make_line(), wide, p, mu), p).total
    return abs(discrete - soliton_energy(p, mu))


def smoothstep(t: np.ndarray) -> np.ndarray:
    """[0,1] 에서 3t^2 - 2t^3, 그 밖에서 0 또는 1 인 C^1 램프"""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    return t * t * (3.0 - 2.0 * t)


def escaping_sequence(g: MetricGraph, spec: GridSpec, p: float, mu: float, n: float) -> GraphField:
    """첫 반직선 위에만 지지된 A_n chi_+(x) phi_mu(x - n), 질량 mu 로 정규화"""
    if not g.halflines:
        raise InvalidGraphError(f"{g.name} has no half-line to escape along")
    if n < 0:
        raise GraphNLSError(f"shift must be nonnegative, got {n}")
    width = soliton_params(p, mu).width
    if spec.L_trunc < n + 10.0 * width:
        raise TruncationError(
            f"L_trunc={spec.L_trunc} too short for shift {n} (needs >= {n + 10.0 * width:.3f})"
        )
    target = g.halflines[0]

    def f(j: int, x: np.ndarray) -> np.ndarray:
        if j != target:
            return np.zeros_like(x)
        return smoothstep(x) * soliton_profile(p, mu, x - n)

    return rescale_mass(sample(g, spec, f), mu)
