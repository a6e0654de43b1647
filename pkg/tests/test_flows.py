import numpy as np
import pytest

from config.settings import FLOW_STEP_FACTOR
from core.exceptions import (
    FlowDivergenceError,
    GraphNLSError,
    LayoutMismatchError,
    TruncationError,
    ZeroMassError,
)
from core.field import FieldLayout, GridSpec, random_field
from core.functionals import kirchhoff_residual, mass
from core.graph_model import (
    make_bridge,
    make_halfline,
    make_interval,
    make_line,
    make_star,
    make_star_2plus1,
)
from core.flows import (
    FlowConfig,
    default_initial_field,
    escape_metrics,
    minimize,
)
from core.soliton import discretization_error, escaping_sequence, soliton_energy, soliton_frequency

LINE_SPEC = GridSpec(0.1, 40.0)
FAST = FlowConfig(step=0.05, scheme="semi_implicit", max_iters=20000)


@pytest.fixture(scope="module")
def line_result():
    return minimize(make_line(), LINE_SPEC, 4.0, 1.0, cfg=FAST)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"step": 0.0},
        {"step": -1.0},
        {"max_iters": 0},
        {"window": 0},
        {"energy_tol": 0.0},
        {"backtrack": 1.0},
        {"backtrack": 0.0},
        {"scheme": "rk4"},
        {"escape_distance": 0.0},
    ],
)
def test_flow_config_validation(kwargs):
    with pytest.raises(GraphNLSError):
        FlowConfig(**kwargs)


def test_default_step_follows_grid():
    layout = FieldLayout.from_spec(make_line(), GridSpec(0.1, 10.0))
    assert FlowConfig().resolved_step(layout) == pytest.approx(FLOW_STEP_FACTOR * 0.01)
    assert FlowConfig(step=0.3).resolved_step(layout) == 0.3


def test_line_converges_to_soliton(line_result):
    assert line_result.converged
    assert line_result.stop_reason in ("stagnation", "step_floor")
    assert line_result.report.total == pytest.approx(soliton_energy(4.0, 1.0), abs=1e-5)
    assert np.all(np.diff(line_result.energies) < 0)
    np.testing.assert_allclose(line_result.masses, 1.0, rtol=1e-12)
    assert line_result.scheme == "semi_implicit"


def test_line_multiplier(line_result):
    assert line_result.multiplier == pytest.approx(soliton_frequency(4.0, 1.0) / 2.0, rel=1e-2)
    assert line_result.multiplier_residual < 1e-2


def test_rerun_from_minimizer_stops_quickly(line_result):
    again = minimize(make_line(), LINE_SPEC, 4.0, 1.0, init=line_result.field, cfg=FlowConfig(max_iters=5000))
    assert again.converged
    assert again.iterations <= FlowConfig().window
    assert again.report.total == pytest.approx(line_result.report.total, abs=1e-10)


def test_halfline_reaches_half_soliton():
    result = minimize(make_halfline(), LINE_SPEC, 4.0, 1.0, cfg=FAST)
    assert result.converged
    assert result.report.total == pytest.approx(-1.0 / 24.0, abs=1e-4)
    assert np.argmax(result.field.edge_values(0)) == 0


def test_trace_frame_and_summary(line_result):
    frame = line_result.trace_frame()
    assert list(frame.columns) == ["iteration", "energy", "mass", "max_escape_fraction"]
    assert len(frame) == line_result.iterations + 1
    summary = line_result.summary()
    assert summary["iterations"] == line_result.iterations
    assert summary["energy"]["total"] == line_result.report.total
    assert len(summary["escape"]) == 2


def test_iteration_cap_is_not_convergence():
    result = minimize(make_line(), LINE_SPEC, 4.0, 1.0, cfg=FlowConfig(max_iters=5))
    assert not result.converged
    assert result.stop_reason == "max_iters"
    assert result.iterations == 5
    assert result.summary()["converged"] is False


def test_divergence_guard():
    with pytest.raises(FlowDivergenceError):
        minimize(make_line(), LINE_SPEC, 4.0, 1.0, cfg=FlowConfig(divergence_factor=0.0))


def test_minimize_rejects_foreign_initial_field(rng):
    init = random_field(make_star(3), LINE_SPEC, rng)
    with pytest.raises(LayoutMismatchError):
        minimize(make_line(), LINE_SPEC, 4.0, 1.0, init=init)


def test_minimize_rejects_bad_inputs(rng):
    with pytest.raises(GraphNLSError):
        minimize(make_line(), LINE_SPEC, 4.0, 0.0)
    with pytest.raises(GraphNLSError):
        minimize(make_line(), LINE_SPEC, 6.5, 1.0)
    zero = random_field(make_line(), LINE_SPEC, rng).scaled(0.0)
    with pytest.raises(ZeroMassError):
        minimize(make_line(), LINE_SPEC, 4.0, 1.0, init=zero)


def test_default_initial_field():
    g = make_bridge(2, [1.0, 1.5])
    u = default_initial_field(g, GridSpec(0.1, 20.0), 4.0, 2.0)
    assert mass(u) == pytest.approx(2.0, rel=1e-12)
    assert u.vertex_values[0] == pytest.approx(u.dofs.max())
    with pytest.raises(GraphNLSError):
        default_initial_field(g, GridSpec(0.1, 20.0), 4.0, 2.0, vertex=7)


# ---------------------------------------------------------------------------
# 탈출 진단
# ---------------------------------------------------------------------------

def test_escape_metrics_on_escaping_sequence():
    g = make_star(3)
    u = escaping_sequence(g, GridSpec(0.05, 30.0), 4.0, 4.0, 10.0)
    metrics = escape_metrics(u, distance=5.0)
    assert [m.edge for m in metrics] == [0, 1, 2]
    assert metrics[0].fraction > 0.99
    assert metrics[0].center == pytest.approx(10.0, abs=0.1)
    for m in metrics[1:]:
        assert m.fraction == 0.0
        assert m.center == 0.0


def test_escape_metrics_errors(rng):
    with pytest.raises(GraphNLSError):
        escape_metrics(random_field(make_interval(2.0), LINE_SPEC, rng))
    line_field = random_field(make_line(), GridSpec(0.1, 8.0), rng)
    with pytest.raises(TruncationError):
        escape_metrics(line_field, distance=10.0)
    with pytest.raises(ZeroMassError):
        escape_metrics(line_field.scaled(0.0), distance=5.0)


# ---------------------------------------------------------------------------
# 수용 시험 (느림)
# ---------------------------------------------------------------------------

@pytest.mark.slow
def test_two_bridges_approach_soliton_level():
    baseline = soliton_energy(4.0, 1.0)
    g = make_bridge(2, [1.0, 1.0])
    results = {L: minimize(g, GridSpec(0.1, L), 4.0, 1.0, cfg=FAST) for L in (20.0, 40.0, 80.0)}
    delta_h = discretization_error(4.0, 1.0, GridSpec(0.1, 80.0))
    finals = [results[L].report.total for L in (20.0, 40.0, 80.0)]
    assert np.all(np.diff(finals) <= 1e-9)
    for result in results.values():
        assert np.all(np.diff(result.energies) < 0)
        assert result.report.total > baseline - delta_h
        np.testing.assert_allclose(result.masses, 1.0, rtol=0.0, atol=1e-10)
    assert finals[-1] - baseline < 5e-3
    assert results[80.0].escape_trend() == "outward"


@pytest.mark.slow
def test_star_2plus1_goes_below_soliton_level():
    spec = GridSpec(0.05, 40.0)
    delta_h = discretization_error(4.0, 1.0, spec)
    result = minimize(make_star_2plus1(1.0), spec, 4.0, 1.0, cfg=FAST)
    assert result.converged
    np.testing.assert_allclose(result.masses, 1.0, rtol=0.0, atol=1e-10)
    assert result.report.total - soliton_energy(4.0, 1.0) < -3.0 * delta_h
    assert kirchhoff_residual(result.field).residuals[0] <= 10.0 * spec.h ** 2
