"""
시나리오 실행기
그래프 구성, 최소화/축약 파이프라인 실행, JSON 보고서와 CSV 추적 기록 출력
"""
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np
import pandas as pd

from config.settings import (
    DEFAULT_H,
    DEFAULT_L_TRUNC,
    DEFAULT_MU,
    DEFAULT_P,
    DEFAULT_SEED,
    GRAPH_FAMILIES,
    OUTPUT_DIR,
    PIPELINE_STAGES,
)
from core.exceptions import GraphNLSError, InvalidGraphError, ScenarioError, check_exponent
from core.field import GraphField, GridSpec, random_field, rescale_mass
from core.flows import FlowConfig, FlowResult, default_initial_field, minimize
from core.functionals import energy, mass
from core.graph_model import (
    MetricGraph,
    make_bridge,
    make_exceptional_e3,
    make_halfline,
    make_interval,
    make_line,
    make_star,
    make_star_2plus1,
    make_tadpole,
)
from core.reductions import (
    ReductionTrace,
    bridge_reduce,
    haircut,
    meltable_loop,
    melt_graph_selfloop,
    unfold,
)
from core.soliton import discretization_error, escaping_sequence, soliton_energy, soliton_field
from utils import file_utils
from utils.performance_monitor import PerformanceMonitor

logger = logging.getLogger(__name__)

INIT_KINDS = ("bump", "soliton", "random", "escaping")
DEFAULT_SHIFTS = (0.0, 4.0, 8.0, 12.0)


@dataclass(frozen=True)
class Scenario:
    """한 번의 실행을 기술하는 시나리오"""

    name: str
    graph: str
    pipeline: Tuple[str, ...]
    graph_params: Dict[str, Any] = field(default_factory=dict)
    p: float = DEFAULT_P
    mu: float = DEFAULT_MU
    h: float = DEFAULT_H
    L: float = DEFAULT_L_TRUNC
    seed: int = DEFAULT_SEED
    init: str = "bump"
    init_vertex: int = 0
    init_shift: float = 0.0
    flow: FlowConfig = field(default_factory=FlowConfig)
    sweep_shifts: Tuple[float, ...] = DEFAULT_SHIFTS
    output: Optional[str] = None

    def __post_init__(self):
        if not self.pipeline:
            raise ScenarioError("pipeline must name at least one stage")
        unknown = [s for s in self.pipeline if s not in PIPELINE_STAGES]
        if unknown:
            raise ScenarioError(f"unknown pipeline stages {unknown}; expected {PIPELINE_STAGES}")
        if self.graph not in GRAPH_FAMILIES:
            raise ScenarioError(f"unknown graph family '{self.graph}'; expected {GRAPH_FAMILIES}")
        if self.init not in INIT_KINDS:
            raise ScenarioError(f"unknown init '{self.init}'; expected {INIT_KINDS}")
        check_exponent(self.p)
        if not self.mu > 0:
            raise ScenarioError(f"mass must be positive, got {self.mu}")

    @property
    def stem(self) -> str:
        return self.output or self.name

    def grid_spec(self) -> GridSpec:
        return GridSpec(self.h, self.L)

    def with_overrides(self, **overrides: Any) -> "Scenario":
        """None 이 아닌 값만 덮어쓴 사본 (CLI 플래그용)"""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "graph": self.graph,
            "graph_params": dict(self.graph_params),
            "p": self.p,
            "mu": self.mu,
            "h": self.h,
            "L": self.L,
            "seed": self.seed,
            "init": self.init,
            "init_vertex": self.init_vertex,
            "init_shift": self.init_shift,
            "pipeline": list(self.pipeline),
            "flow": {
                "step": self.flow.step,
                "max_iters": self.flow.max_iters,
                "energy_tol": self.flow.energy_tol,
                "backtrack": self.flow.backtrack,
                "window": self.flow.window,
                "scheme": self.flow.scheme,
                "escape_distance": self.flow.escape_distance,
            },
            "sweep_shifts": list(self.sweep_shifts),
            "output": self.stem,
        }


@dataclass
class ScenarioReport:
    """시나리오 실행 결과"""

    scenario: Dict[str, Any]
    graph: Dict[str, Any]
    stages: List[Dict[str, Any]]
    baseline: float
    delta_h: Optional[float] = None
    final_energy: Optional[float] = None
    final_mass: Optional[float] = None
    verdict: Optional[str] = None
    escape_trend: Optional[str] = None
    trace: List[Dict[str, Any]] = field(default_factory=list)
    outputs: Dict[str, str] = field(default_factory=dict)

    @property
    def gap(self) -> Optional[float]:
        if self.final_energy is None:
            return None
        return self.final_energy - self.baseline

    def stage(self, name: str) -> Dict[str, Any]:
        """이름이 name 인 마지막 단계 결과"""
        for entry in reversed(self.stages):
            if entry["stage"] == name:
                return entry
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario,
            "graph": self.graph,
            "stages": self.stages,
            "baseline": self.baseline,
            "delta_h": self.delta_h,
            "final_energy": self.final_energy,
            "final_mass": self.final_mass,
            "gap": self.gap,
            "verdict": self.verdict,
            "escape_trend": self.escape_trend,
            "trace": self.trace,
            "outputs": self.outputs,
        }


def build_graph(s: Scenario) -> MetricGraph:
    """시나리오의 그래프 계열과 매개변수로 그래프 생성"""
    params = s.graph_params
    length = float(params.get("length", 1.0))
    if s.graph == "line":
        return make_line(params.get("lengths", ()))
    if s.graph == "halfline":
        return make_halfline()
    if s.graph == "interval":
        return make_interval(length)
    if s.graph == "star":
        return make_star(int(params.get("n", 3)))
    if s.graph == "bridge":
        n = int(params.get("n", 2))
        return make_bridge(n, params.get("lengths") or [length] * n)
    if s.graph == "star_2plus1":
        return make_star_2plus1(length)
    if s.graph == "e3":
        return make_exceptional_e3(params.get("lengths") or [length] * 3)
    if s.graph == "tadpole":
        return make_tadpole(length)
    if s.graph == "file":
        # loaders 는 core 를 import 하므로 지연 import
        from loaders.scenario_loader import load_graph_spec

        if "file" not in params:
            raise ScenarioError("graph = file needs graph.file")
        return load_graph_spec(Path(params["file"]))
    raise ScenarioError(f"unknown graph family '{s.graph}'")


def escaping_sweep(
    g: MetricGraph, spec: GridSpec, p: float, mu: float, shifts: Sequence[float]
) -> pd.DataFrame:
    """escaping_sequence 의 각 이동량에 대한 (shift, energy, gap, mass) 표"""
    if not g.halflines:
        raise InvalidGraphError(f"{g.name} has no half-line for an escaping sweep")
    baseline = soliton_energy(p, mu)
    rows = []
    for n in shifts:
        u = escaping_sequence(g, spec, p, mu, n)
        e = energy(u, p).total
        rows.append({"shift": float(n), "energy": e, "gap": e - baseline, "mass": mass(u)})
        logger.info(f"escaping sweep on {g.name}: shift={n}, gap={e - baseline:.6e}")
    return pd.DataFrame(rows, columns=["shift", "energy", "gap", "mass"])


def soliton_verdict(gap: float, delta_h: float) -> str:
    """기준 에너지와의 차이를 이산화 오차 3배 기준으로 분류"""
    if gap < -3.0 * delta_h:
        return "below_baseline"
    if gap > 3.0 * delta_h:
        return "above_baseline"
    return "at_baseline"


class ScenarioRunner:
    """시나리오 단계를 순서대로 실행하며 그래프와 필드를 다음 단계로 넘김"""

    def __init__(self, out_dir: Optional[Path] = None, monitor: Optional[PerformanceMonitor] = None,
                 write_outputs: bool = True):
        self.out_dir = Path(out_dir) if out_dir is not None else OUTPUT_DIR
        self.monitor = monitor or PerformanceMonitor()
        self.write_outputs = write_outputs

    def initial_field(self, s: Scenario, g: MetricGraph, spec: GridSpec) -> GraphField:
        """시나리오의 init 설정에 따른 초기 필드 (질량 mu)"""
        if s.init == "soliton":
            return rescale_mass(soliton_field(g, spec, s.p, s.mu, s.init_shift), s.mu)
        if s.init == "random":
            rng = np.random.default_rng(s.seed)
            return rescale_mass(random_field(g, spec, rng, positive=True), s.mu)
        if s.init == "escaping":
            return escaping_sequence(g, spec, s.p, s.mu, s.init_shift)
        return default_initial_field(g, spec, s.p, s.mu, s.init_vertex)

    def run_scenario(self, s: Scenario) -> ScenarioReport:
        """파이프라인 실행 후 보고서 생성 (write_outputs 이면 파일로도 저장)"""
        logger.info(f"Scenario '{s.name}' start: graph={s.graph}, pipeline={list(s.pipeline)}")
        spec = s.grid_spec()
        g = build_graph(s)
        report = ScenarioReport(
            scenario=s.to_dict(),
            graph=g.describe(),
            stages=[],
            baseline=soliton_energy(s.p, s.mu),
        )
        u: Optional[GraphField] = None
        flow: Optional[FlowResult] = None
        trace = ReductionTrace()
        sweep: Optional[pd.DataFrame] = None

        for stage in s.pipeline:
            try:
                with self.monitor.measure_time(f"{s.name}:{stage}"):
                    if stage == "escaping_sweep":
                        sweep = escaping_sweep(g, spec, s.p, s.mu, s.sweep_shifts)
                        result: Dict[str, Any] = {"rows": sweep.to_dict(orient="records")}
                    elif stage == "compare_soliton":
                        result = self._compare(s, spec, u, flow, report)
                    else:
                        if u is None:
                            u = self.initial_field(s, g, spec)
                        g, u, flow, result = self._transform(stage, s, spec, g, u, flow, trace)
            except ScenarioError:
                raise
            except GraphNLSError as exc:
                logger.error(f"Scenario '{s.name}' failed at {stage}: {exc}")
                raise ScenarioError(str(exc), stage) from exc
            report.stages.append({"stage": stage, **result})

        report.graph = g.describe()
        report.trace = trace.to_list()
        if u is not None:
            report.final_mass = mass(u)
            report.final_energy = energy(u, s.p).total
        if flow is not None:
            report.escape_trend = flow.escape_trend()

        if self.write_outputs:
            self._write(s, report, u, flow, sweep)
        logger.info(f"Scenario '{s.name}' done: E={report.final_energy}, verdict={report.verdict}")
        return report

    def _transform(
        self,
        stage: str,
        s: Scenario,
        spec: GridSpec,
        g: MetricGraph,
        u: GraphField,
        flow: Optional[FlowResult],
        trace: ReductionTrace,
    ) -> Tuple[MetricGraph, GraphField, Optional[FlowResult], Dict[str, Any]]:
        if stage == "minimize":
            flow = minimize(g, spec, s.p, s.mu, u, s.flow)
            return g, flow.field, flow, flow.summary()

        before = len(trace.steps)
        if stage == "bridge_reduce":
            g, u = bridge_reduce(g, u, s.p, trace)
        elif stage == "unfold":
            g, u = unfold(g, u, s.p, trace)
        elif stage == "melt_selfloop":
            loop = meltable_loop(g)
            if loop is None:
                raise InvalidGraphError(f"{g.name} has no self-loop attached to a single edge")
            g, u = melt_graph_selfloop(g, u, loop, s.p, trace)
        elif stage == "haircut":
            g, u, steps = haircut(g, u, s.p)
            trace.steps.extend(steps.steps)
        else:
            raise ScenarioError(f"unsupported stage '{stage}'", stage)
        return g, u, flow, {
            "graph": g.name,
            "energy": energy(u, s.p).to_dict(),
            "steps": [step.to_dict() for step in trace.steps[before:]],
        }

    def _compare(
        self,
        s: Scenario,
        spec: GridSpec,
        u: Optional[GraphField],
        flow: Optional[FlowResult],
        report: ScenarioReport,
    ) -> Dict[str, Any]:
        if u is None:
            raise ScenarioError("compare_soliton needs a field from an earlier stage", "compare_soliton")
        delta_h = discretization_error(s.p, s.mu, spec)
        final = energy(u, s.p).total
        gap = final - report.baseline
        report.delta_h = delta_h
        report.verdict = soliton_verdict(gap, delta_h)
        return {
            "baseline": report.baseline,
            "energy": final,
            "gap": gap,
            "delta_h": delta_h,
            "verdict": report.verdict,
            "escape_trend": flow.escape_trend() if flow is not None else None,
        }

    def _write(
        self,
        s: Scenario,
        report: ScenarioReport,
        u: Optional[GraphField],
        flow: Optional[FlowResult],
        sweep: Optional[pd.DataFrame],
    ) -> None:
        json_path, trace_path, sweep_path, field_path = file_utils.output_paths(
            self.out_dir, s.stem, (".json", ".trace.csv", ".sweep.csv", ".field.csv")
        )
        if flow is not None:
            file_utils.write_csv(flow.trace_frame(), trace_path)
            report.outputs["trace"] = trace_path.name
        if sweep is not None:
            file_utils.write_csv(sweep, sweep_path)
            report.outputs["sweep"] = sweep_path.name
        if u is not None:
            file_utils.write_csv(u.to_frame(), field_path)
            report.outputs["field"] = field_path.name
        report.outputs["report"] = json_path.name
        file_utils.write_json(report.to_dict(), json_path)
