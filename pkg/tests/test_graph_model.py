import math

import pytest

from config.settings import GRAPHS_DIR
from core.exceptions import InvalidGraphError, NotUnfoldableError
from core.graph_model import (
    INF,
    Edge,
    EulerPath,
    MetricGraph,
    euler_unfoldable,
    find_euler_path,
    make_bridge,
    make_exceptional_e3,
    make_halfline,
    make_interval,
    make_line,
    make_star,
    make_star_2plus1,
    make_tadpole,
    validate_euler_path,
    vertex_distances,
)
from loaders.scenario_loader import load_graph_spec


def test_bridge_layout():
    g = make_bridge(3, [1.0, 2.0, 1.5])
    assert g.n_vertices == 2
    assert g.n_edges == 5
    assert g.halflines == (3, 4)
    assert g.finite_edges == (0, 1, 2)
    assert g.bridge_count() == 3
    assert g.degree(0) == 4


def test_line_with_segments():
    g = make_line([1.0, 2.0])
    assert g.n_vertices == 3
    assert g.halflines == (0, 3)
    assert [g.edges[j].length for j in g.finite_edges] == [1.0, 2.0]


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
def test_invalid_lengths_rejected(bad):
    with pytest.raises(InvalidGraphError):
        make_bridge(2, [1.0, bad])


def test_bridge_length_count_mismatch():
    with pytest.raises(InvalidGraphError):
        make_bridge(3, [1.0, 1.0])


def test_isolated_vertex_rejected():
    with pytest.raises(InvalidGraphError):
        MetricGraph((0, 1, 2), (Edge(0, 1, 1.0),))


def test_infinite_finite_edge_rejected():
    with pytest.raises(InvalidGraphError):
        MetricGraph((0, 1), (Edge(0, 1, INF),))


def test_halfline_with_finite_length_rejected():
    with pytest.raises(InvalidGraphError):
        MetricGraph((0,), (Edge(0, None, 3.0),))


def test_star_needs_two_halflines():
    with pytest.raises(InvalidGraphError):
        make_star(1)


def test_bridge_count_rejects_other_shapes():
    with pytest.raises(InvalidGraphError):
        make_star_2plus1(1.0).bridge_count()


@pytest.mark.parametrize(
    "graph, expected",
    [
        (make_line(), True),
        (make_bridge(1, [1.0]), True),
        (make_bridge(2, [1.0, 1.0]), False),
        (make_bridge(3, [1.0, 1.0, 1.0]), True),
        (make_star(3), False),
        (make_star_2plus1(1.0), False),
        (make_exceptional_e3([1.0, 1.0, 1.0]), True),
        (make_halfline(), False),
        (make_tadpole(1.0), False),
        (make_interval(1.0), False),
    ],
)
def test_euler_unfoldable(graph, expected):
    assert euler_unfoldable(graph) is expected


def test_euler_path_on_three_bridges():
    g = make_bridge(3, [1.0, 2.0, 1.5])
    path = find_euler_path(g)
    assert validate_euler_path(g, path)
    assert sorted(path.edge_ids) == list(range(g.n_edges))
    assert g.is_halfline(path.steps[0][0]) and g.is_halfline(path.steps[-1][0])
    # the middle bridge is crossed from vertex 1 back to vertex 0
    assert sum(rev for j, rev in path.steps if j in g.finite_edges) == 1


def test_euler_path_with_selfloop():
    g = make_exceptional_e3([1.0, 2.0, 0.5])
    path = find_euler_path(g)
    assert validate_euler_path(g, path)
    assert len(path) == g.n_edges


def test_euler_path_not_unfoldable():
    with pytest.raises(NotUnfoldableError):
        find_euler_path(make_bridge(2, [1.0, 1.0]))


def test_validate_rejects_missing_edge():
    g = make_bridge(2, [1.0, 1.0])
    with pytest.raises(InvalidGraphError):
        validate_euler_path(g, EulerPath(((2, True), (0, False), (3, False))))


def test_validate_rejects_broken_chain():
    g = make_bridge(1, [1.0])
    with pytest.raises(InvalidGraphError):
        validate_euler_path(g, EulerPath(((1, True), (0, True), (2, False))))


def test_vertex_distances():
    g = make_bridge(2, [1.0, 2.0])
    assert vertex_distances(g, 0) == {0: 0.0, 1: 1.0}
    e3 = make_exceptional_e3([1.0, 2.0, 0.5])
    assert vertex_distances(e3, 0)[2] == pytest.approx(3.0)


def test_describe_and_spec_text():
    g = make_star_2plus1(2.0)
    info = g.describe()
    assert info["n_halflines"] == 2
    assert info["edges"][1] == [0, None, "inf"]
    text = g.to_spec_text()
    assert "edge 0 1 2.0" in text
    assert text.count("edge 0 - inf") == 2


def test_incident_ends_of_loop():
    g = make_tadpole(1.0)
    assert g.incident(0) == [(0, "L"), (0, "R"), (1, "L")]
    assert g.degree(0) == 3


@pytest.mark.parametrize("n", range(1, 10))
def test_bridge_unfoldable_iff_odd(n):
    g = make_bridge(n, [1.0 + 0.25 * k for k in range(n)])
    assert euler_unfoldable(g) is (n % 2 == 1)
    if n % 2:
        assert validate_euler_path(g, find_euler_path(g))


def _handshake_holds(g):
    total = sum(g.degree(v) for v in g.vertices)
    return total == 2 * len(g.finite_edges) + len(g.halflines)


@pytest.mark.parametrize(
    "graph",
    [
        make_line(),
        make_line([1.0, 2.0, 0.5]),
        make_halfline(),
        make_interval(2.0),
        make_star(4),
        make_bridge(2, [1.0, 1.0]),
        make_bridge(5, [1.0] * 5),
        make_star_2plus1(1.0),
        make_exceptional_e3([1.0, 0.5, 2.0]),
        make_tadpole(1.5),
    ],
    ids=lambda g: g.name,
)
def test_degree_sum_counts_edge_ends(graph):
    assert _handshake_holds(graph)


@pytest.mark.parametrize("path", sorted(GRAPHS_DIR.glob("*.graph")), ids=lambda p: p.stem)
def test_degree_sum_on_bundled_specs(path):
    assert _handshake_holds(load_graph_spec(path))
