import pytest

from config.settings import GRAPHS_DIR, SCENARIOS_DIR
from core.exceptions import GraphNLSError, GraphSpecSyntaxError, ScenarioError
from core.graph_model import (
    euler_unfoldable,
    make_bridge,
    make_exceptional_e3,
    make_star_2plus1,
    make_tadpole,
)
from core.scenario_runner import build_graph
from loaders import validate_file_support
from loaders.scenario_loader import (
    load_graph_spec,
    load_scenario,
    parse_graph_spec,
    parse_scenario,
)


# ---------------------------------------------------------------------------
# 그래프 명세
# ---------------------------------------------------------------------------

def test_parse_bridge_spec():
    g = parse_graph_spec(
        """
        # two bridges
        edge left right 1.0
        edge left right 2.5   # longer one
        edge left - inf
        edge right - inf
        """,
        name="b2",
    )
    assert g.name == "b2"
    assert g.bridge_count() == 2
    assert [g.edges[j].length for j in g.finite_edges] == [1.0, 2.5]


def test_named_endpoint_of_halfline_is_dropped():
    g = parse_graph_spec("edge a far inf\nedge a b 1.0\nedge b - inf\n")
    assert g.n_vertices == 2
    assert g.halflines == (0, 2)


def test_named_endpoint_used_elsewhere():
    with pytest.raises(GraphSpecSyntaxError) as info:
        parse_graph_spec("edge a b inf\nedge b c 1.0\n")
    assert info.value.line_number == 1


@pytest.mark.parametrize(
    "text, line_number",
    [
        ("edge a b\n", 1),
        ("vertex a\n", 1),
        ("edge a b 1.0\nedge a - 2.0\n", 2),
        ("edge a b -1\n", 1),
        ("edge a b 0\n", 1),
        ("edge a b abc\n", 1),
        ("edge a b nan\n", 1),
        ("# nothing\n\n", None),
    ],
)
def test_graph_spec_syntax_errors(text, line_number):
    with pytest.raises(GraphSpecSyntaxError) as info:
        parse_graph_spec(text)
    assert info.value.line_number == line_number


@pytest.mark.parametrize(
    "graph",
    [
        make_bridge(3, [1.0, 2.0, 1.5]),
        make_star_2plus1(0.75),
        make_exceptional_e3([1.0, 0.5, 2.0]),
        make_tadpole(2.0),
    ],
)
def test_spec_text_round_trip(graph):
    assert parse_graph_spec(graph.to_spec_text()).edges == graph.edges


@pytest.mark.parametrize(
    "file_name, unfoldable",
    [("b3.graph", True), ("e3.graph", True), ("star3.graph", False), ("tadpole.graph", False)],
)
def test_bundled_graph_files(file_name, unfoldable):
    g = load_graph_spec(GRAPHS_DIR / file_name)
    assert g.name == file_name.split(".")[0]
    assert euler_unfoldable(g) is unfoldable


def test_missing_graph_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_graph_spec(tmp_path / "missing.graph")


def test_file_support():
    assert validate_file_support("scenarios/b2_minimize.cfg")
    assert validate_file_support("graphs/b3.graph")
    assert not validate_file_support("notes.txt")


# ---------------------------------------------------------------------------
# 시나리오
# ---------------------------------------------------------------------------

SCENARIO_TEXT = """
# comment line
name = demo
graph = bridge
graph.n = 2
graph.lengths = 1, 1.5
p = 3
mu = 2
h = 0.1
L = 30
seed = 5
init = escaping
init.shift = 4
flow.scheme = semi_implicit
flow.step = 0.05
escape.distance = 8
sweep.shifts = 0, 2
pipeline = minimize, compare_soliton
"""


def test_parse_scenario_fields():
    s = parse_scenario(SCENARIO_TEXT)
    assert s.name == "demo"
    assert s.graph_params == {"n": 2, "lengths": (1.0, 1.5)}
    assert (s.p, s.mu, s.h, s.L, s.seed) == (3.0, 2.0, 0.1, 30.0, 5)
    assert s.init == "escaping" and s.init_shift == 4.0
    assert s.flow.scheme == "semi_implicit"
    assert s.flow.step == 0.05
    assert s.flow.escape_distance == 8.0
    assert s.sweep_shifts == (0.0, 2.0)
    assert s.pipeline == ("minimize", "compare_soliton")


def test_default_name():
    s = parse_scenario("graph = line\npipeline = minimize\n", default_name="fallback")
    assert s.name == "fallback"


@pytest.mark.parametrize(
    "text",
    [
        "graph line\npipeline = minimize\n",
        "graph = line\npipeline = minimize\ncolour = red\n",
        "graph = line\ngraph = star\npipeline = minimize\n",
        "graph = line\nh = abc\npipeline = minimize\n",
        "graph = bridge\ngraph.n = 2.5\npipeline = minimize\n",
        "pipeline = minimize\n",
        "graph = line\n",
        "graph = line\npipeline = minimize, teleport\n",
    ],
)
def test_scenario_errors(text):
    with pytest.raises(ScenarioError):
        parse_scenario(text)


def test_invalid_flow_settings():
    with pytest.raises(GraphNLSError):
        parse_scenario("graph = line\npipeline = minimize\nflow.scheme = rk4\n")


def test_graph_file_resolves_against_scenario_dir(tmp_path):
    (tmp_path / "graphs").mkdir()
    (tmp_path / "graphs" / "b1.graph").write_text("edge a b 2\nedge a - inf\nedge b - inf\n", encoding="utf-8")
    (tmp_path / "runs").mkdir()
    cfg = tmp_path / "runs" / "b1.cfg"
    cfg.write_text("graph = file\ngraph.file = ../graphs/b1.graph\npipeline = unfold\n", encoding="utf-8")
    s = load_scenario(cfg)
    assert s.name == "b1"
    assert build_graph(s).bridge_count() == 1


@pytest.mark.parametrize("path", sorted(SCENARIOS_DIR.glob("*.cfg")), ids=lambda p: p.stem)
def test_bundled_scenarios_parse(path):
    s = load_scenario(path)
    assert s.name == path.stem
    g = build_graph(s)
    assert g.n_edges > 0
