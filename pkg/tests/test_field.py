import numpy as np
import pandas as pd
import pytest

from core.exceptions import (
    ContinuityError,
    GraphNLSError,
    InvalidGraphError,
    LayoutMismatchError,
    ZeroMassError,
)
from core.field import (
    FieldLayout,
    GraphField,
    GridSpec,
    dof_pack,
    dof_unpack,
    random_field,
    rescale_mass,
    sample,
)
from core.functionals import mass
from core.graph_model import make_bridge, make_interval, make_line


@pytest.mark.parametrize("h, L", [(0.0, 10.0), (-0.1, 10.0), (0.1, 0.5)])
def test_grid_spec_validation(h, L):
    with pytest.raises(InvalidGraphError):
        GridSpec(h, L)


def test_intervals_ignore_rounding_noise():
    assert GridSpec(0.05, 10.0).intervals_for(1.0) == 20
    assert GridSpec(0.3, 10.0).intervals_for(1.0) == 4


def test_bridge_layout_counts(coarse_spec):
    layout = FieldLayout.from_spec(make_bridge(2, [1.0, 1.0]), coarse_spec)
    assert layout.intervals == (4, 4, 20, 20)
    assert layout.n_dofs == 2 + 3 + 3 + 19 + 19
    assert layout.node_dofs(2)[0] == 0
    assert layout.node_dofs(2)[-1] == -1
    assert layout.node_dofs(1)[-1] == 1


def test_lumped_mass_drops_truncation_nodes(coarse_spec):
    layout = FieldLayout.from_spec(make_bridge(2, [1.0, 1.0]), coarse_spec)
    # total extent 12 minus the two far half weights
    assert layout.lumped_mass.sum() == pytest.approx(12.0 - 0.25)


def test_layout_rejects_wrong_extent():
    g = make_interval(1.0)
    with pytest.raises(LayoutMismatchError):
        FieldLayout(g, (2.0,), (4,))


def test_constant_field_on_bridge(coarse_spec):
    g = make_bridge(2, [1.0, 1.0])
    u = sample(g, coarse_spec, lambda j, x: np.ones_like(x))
    np.testing.assert_array_equal(u.vertex_values, [1.0, 1.0])
    for j in g.finite_edges:
        np.testing.assert_array_equal(u.edge_values(j), 1.0)
    for j in g.halflines:
        values = u.edge_values(j)
        assert values[-1] == 0.0
        np.testing.assert_array_equal(values[:-1], 1.0)


def test_sample_accepts_edge_function_list():
    g = make_interval(2.0)
    u = sample(g, GridSpec(0.5, 5.0), [lambda x: x])
    np.testing.assert_allclose(u.vertex_values, [0.0, 2.0])
    np.testing.assert_allclose(u.edge_values(0), [0.0, 0.5, 1.0, 1.5, 2.0])


def test_sample_detects_discontinuity(coarse_spec):
    g = make_bridge(2, [1.0, 1.0])
    with pytest.raises(ContinuityError):
        sample(g, coarse_spec, lambda j, x: np.full_like(x, float(j)))


def test_sample_wrong_function_count(coarse_spec):
    with pytest.raises(LayoutMismatchError):
        sample(make_line(), coarse_spec, [lambda x: x])


def test_field_validation(coarse_spec):
    layout = FieldLayout.from_spec(make_line(), coarse_spec)
    with pytest.raises(LayoutMismatchError):
        GraphField(layout, np.zeros(layout.n_dofs + 1))
    bad = np.zeros(layout.n_dofs)
    bad[3] = np.nan
    with pytest.raises(GraphNLSError):
        GraphField(layout, bad)


def test_field_is_read_only(coarse_spec, rng):
    u = random_field(make_line(), coarse_spec, rng)
    with pytest.raises(ValueError):
        u.dofs[0] = 1.0


def test_dof_pack_unpack(coarse_spec, rng):
    g = make_bridge(3, [1.0, 2.0, 0.5])
    u = random_field(g, coarse_spec, rng)
    v = dof_pack(u)
    v[0] += 1.0
    assert u.dofs[0] != v[0]
    w = dof_unpack(dof_pack(u), g, coarse_spec)
    np.testing.assert_array_equal(w.dofs, u.dofs)
    with pytest.raises(LayoutMismatchError):
        dof_unpack(np.zeros(3), g, coarse_spec)


def test_rescale_mass(coarse_spec, rng):
    u = random_field(make_bridge(2, [1.0, 2.0]), coarse_spec, rng)
    assert mass(rescale_mass(u, 3.0)) == pytest.approx(3.0, rel=1e-12)
    with pytest.raises(ZeroMassError):
        rescale_mass(u.scaled(0.0), 1.0)


def test_random_field_positive(coarse_spec, rng):
    u = random_field(make_line(), coarse_spec, rng, scale=2.0, positive=True)
    assert np.all(u.dofs >= 0.2)
    assert np.all(u.dofs <= 2.0)


def test_frame_and_csv_dump(tmp_path, coarse_spec, rng):
    u = random_field(make_bridge(2, [1.0, 1.0]), coarse_spec, rng)
    frame = u.to_frame()
    assert list(frame.columns) == ["edge", "x", "value"]
    assert len(frame) == u.layout.n_nodes
    path = u.dump_csv(tmp_path / "out" / "field.csv")
    loaded = pd.read_csv(path)
    np.testing.assert_allclose(loaded["value"], frame["value"], rtol=1e-11, atol=1e-300)
