"""
계량 그래프 NLS 도구 메인 애플리케이션
시나리오 실행, 그래프 명세 검사, 솔리톤 상수 출력
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from config.settings import LOG_LEVEL, OUTPUT_DIR
from core.exceptions import GraphNLSError
from core.graph_model import euler_unfoldable, find_euler_path
from core.scenario_runner import ScenarioRunner
from core.soliton import soliton_energy, soliton_params
from loaders.scenario_loader import load_graph_spec, load_scenario
from utils import format_duration, format_number, setup_logging
from utils.performance_monitor import performance_monitor

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graph-nls",
        description="NLS ground states on metric graphs: minimization, reductions, soliton baselines",
    )
    parser.add_argument("--log-level", default=LOG_LEVEL, choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("scenario", type=Path)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--out-dir", type=Path, default=OUTPUT_DIR)
    run.add_argument("--h", type=float, default=None, help="grid spacing override")
    run.add_argument("--L", type=float, default=None, help="half-line truncation override")
    run.add_argument("--profile", action="store_true", help="print stage timings after the run")

    graph = sub.add_parser("graph", help="graph-spec utilities")
    graph_sub = graph.add_subparsers(dest="graph_command", required=True)
    check = graph_sub.add_parser("check", help="validate a graph spec and report Euler unfoldability")
    check.add_argument("spec", type=Path)

    soliton = sub.add_parser("soliton", help="print soliton constants and energy")
    soliton.add_argument("p", type=float)
    soliton.add_argument("mu", type=float)
    return parser


def cmd_run(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario).with_overrides(seed=args.seed, h=args.h, L=args.L)
    performance_monitor.reset_metrics()
    runner = ScenarioRunner(args.out_dir, monitor=performance_monitor)
    report = runner.run_scenario(scenario)

    print(f"scenario: {scenario.name}")
    print(f"graph: {report.graph['name']}")
    print(f"baseline: {format_number(report.baseline)}")
    if report.final_energy is not None:
        print(f"energy: {format_number(report.final_energy)}")
        print(f"mass: {format_number(report.final_mass)}")
        print(f"gap: {format_number(report.gap)}")
    if report.verdict is not None:
        print(f"delta_h: {format_number(report.delta_h)}")
        print(f"verdict: {report.verdict}")
    if report.escape_trend is not None:
        print(f"escape_trend: {report.escape_trend}")
    print(f"report: {args.out_dir / report.outputs['report']}")

    if args.profile:
        summary = performance_monitor.get_performance_summary()
        for name, metric in summary["operations"].items():
            elapsed = metric["execution_time"]
            print(
                f"{name}: time_s={format_number(elapsed)} ({format_duration(elapsed)}), "
                f"memory_diff_mb={format_number(metric['memory_diff'])}"
            )
        for key, value in summary["system_info"].items():
            shown = format_number(value) if isinstance(value, (int, float)) else value
            print(f"system.{key}: {shown}")
    return 0


def cmd_graph_check(args: argparse.Namespace) -> int:
    g = load_graph_spec(args.spec)
    info = g.describe()
    print(f"graph: {info['name']}")
    print(f"vertices: {info['n_vertices']}")
    print(f"edges: {info['n_edges']}")
    print(f"half-lines: {info['n_halflines']}")
    unfoldable = euler_unfoldable(g)
    print(f"euler_unfoldable: {str(unfoldable).lower()}")
    if unfoldable:
        steps = " ".join(f"{j}{'-' if rev else '+'}" for j, rev in find_euler_path(g).steps)
        print(f"euler_path: {steps}")
    return 0


def cmd_soliton(args: argparse.Namespace) -> int:
    s = soliton_params(args.p, args.mu)
    for key in ("p", "mu", "C_p", "c_p", "amplitude", "beta", "omega"):
        print(f"{key}: {format_number(s.to_dict()[key])}")
    print(f"energy: {format_number(soliton_energy(args.p, args.mu))}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "graph":
            return cmd_graph_check(args)
        return cmd_soliton(args)
    except (GraphNLSError, OSError) as e:
        logger.error(f"실행 실패: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
