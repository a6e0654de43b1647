import numpy as np
import pytest

from core.field import GridSpec
from core.graph_model import (
    make_bridge,
    make_halfline,
    make_line,
    make_star,
    make_star_2plus1,
)

FAMILIES = {
    "line": make_line,
    "halfline": make_halfline,
    "star3": lambda: make_star(3),
    "bridge2": lambda: make_bridge(2, [1.0, 1.5]),
    "bridge3": lambda: make_bridge(3, [1.0, 2.0, 1.5]),
    "star_2plus1": lambda: make_star_2plus1(1.0),
}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def coarse_spec():
    return GridSpec(0.25, 5.0)


@pytest.fixture(params=sorted(FAMILIES))
def family_graph(request):
    return FAMILIES[request.param]()


def bump_on_bridges(j, x, g):
    """B_n 위 연속 필드: 브리지 1 + 0.5 sin(pi x / l), 반직선 exp(-x)"""
    edge = g.edges[j]
    if edge.is_halfline:
        return np.exp(-x)
    return 1.0 + 0.5 * np.sin(np.pi * x / edge.length)
