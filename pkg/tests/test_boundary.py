import math

import numpy as np
import pytest

from swetbc import ConfigurationError, DryStateError, PhysicalParams, build_grid, make_boundary_case
from swetbc.boundary import SIDES, apply_velocity_bc


def boundary_nodes(N):
    out = set()
    for m in range(N + 1):
        out |= {(m, 0), (m, N), (0, m), (N, m)}
    return out


def test_case_i_all_dirichlet():
    grid = build_grid(1.0, 8)
    layout = make_boundary_case("i", grid)
    assert layout.n_transmission == 0
    assert layout.n_dirichlet == 4 * grid.N
    assert not layout.side_transmission.any()


def test_case_v_all_transmission_n4():
    grid = build_grid(1.0, 4)
    layout = make_boundary_case("v", grid)
    assert layout.n_transmission == 16
    assert layout.n_dirichlet == 0


def test_case_iii_n4_exact_node_set():
    # enumerated by hand: top interior + right interior + far corner
    grid = build_grid(1.0, 4)
    layout = make_boundary_case("iii", grid)
    trans = set(zip(*(a.tolist() for a in layout.transmission_idx)))
    assert trans == {(1, 4), (2, 4), (3, 4), (4, 1), (4, 2), (4, 3), (4, 4)}
    assert layout.n_transmission == 7


@pytest.mark.parametrize("case", ["i", "ii", "iii", "iv", "v"])
@pytest.mark.parametrize("N", [2, 4, 9])
def test_partition(case, N):
    grid = build_grid(1.0, N)
    layout = make_boundary_case(case, grid)
    assert layout.n_transmission + layout.n_dirichlet == 4 * N
    trans = set(zip(*(a.tolist() for a in layout.transmission_idx)))
    diri = set(zip(*(a.tolist() for a in layout.dirichlet_idx)))
    assert trans | diri == boundary_nodes(N)
    assert trans & diri == set()


def test_cases_i_and_v_are_complements():
    grid = build_grid(1.0, 7)
    li = make_boundary_case("i", grid)
    lv = make_boundary_case("v", grid)
    diri = set(zip(*(a.tolist() for a in li.dirichlet_idx)))
    trans = set(zip(*(a.tolist() for a in lv.transmission_idx)))
    assert diri == trans


def test_normals_unit_and_oriented():
    grid = build_grid(2.0, 5)
    layout = make_boundary_case("v", grid)
    norms = np.linalg.norm(layout.transmission_normals, axis=1)
    np.testing.assert_allclose(norms, 1.0, rtol=0, atol=1e-15)
    N = grid.N
    assert np.array_equal(layout.normal(2, N), [0.0, 1.0])
    assert np.array_equal(layout.normal(2, 0), [0.0, -1.0])
    assert np.array_equal(layout.normal(0, 2), [-1.0, 0.0])
    assert np.array_equal(layout.normal(N, 2), [1.0, 0.0])
    s = 1.0 / math.sqrt(2.0)
    np.testing.assert_allclose(layout.normal(N, N), [s, s], rtol=1e-15)
    np.testing.assert_allclose(layout.normal(0, 0), [-s, -s], rtol=1e-15)


def test_case_iv_corner_classification():
    grid = build_grid(1.0, 6)
    layout = make_boundary_case("iv", grid)
    N = grid.N
    assert layout.classification(N, N) == "transmission"
    assert layout.classification(0, N) == "transmission"
    assert layout.classification(0, 0) == "dirichlet"
    assert layout.classification(N, 0) == "dirichlet"
    assert list(layout.side_transmission) == [False, True, True, True]  # bottom,top,left,right
    with pytest.raises(ValueError):
        layout.normal(0, 0)
    with pytest.raises(ValueError):
        layout.classification(3, 3)


def test_unknown_case_rejected():
    grid = build_grid(1.0, 4)
    with pytest.raises(ConfigurationError):
        make_boundary_case("vi", grid)


def test_transmission_closure_includes_segment_endpoints():
    grid = build_grid(1.0, 5)
    layout = make_boundary_case("ii", grid)
    ci, cj = layout.transmission_closure_idx()
    closure = set(zip(ci.tolist(), cj.tolist()))
    # the open top edge is transmission; its closure picks up both corners
    assert closure == {(m, 5) for m in range(6)}


def test_apply_velocity_bc_values():
    a, g, c0 = 0.1, 9.8e-3, 0.9
    grid = build_grid(1.0, 4)
    params = PhysicalParams(g=g, depth=a, c0=c0)
    layout = make_boundary_case("iii", grid)
    shape = grid.shape
    eta0 = 0.001
    phi = np.full(shape, a + eta0)
    u1 = np.zeros(shape)
    u2 = np.zeros(shape)
    apply_velocity_bc(u1, u2, phi, layout, params, step=0)

    expected = c0 * math.sqrt(g * a) * (eta0 / (a + eta0))
    assert expected == pytest.approx(2.79e-4, rel=5e-3)  # reference magnitude
    # top-edge node: normal (0, 1)
    assert u1[2, 4] == 0.0
    assert u2[2, 4] == pytest.approx(expected, rel=1e-14)
    # right-edge node: normal (1, 0)
    assert u1[4, 2] == pytest.approx(expected, rel=1e-14)
    assert u2[4, 2] == 0.0
    # far corner: same magnitude along the averaged normal (1,1)/sqrt(2)
    s = 1.0 / math.sqrt(2.0)
    assert u1[4, 4] == pytest.approx(expected * s, rel=1e-14)
    assert u2[4, 4] == pytest.approx(expected * s, rel=1e-14)
    # Dirichlet nodes take the wall value
    assert u1[0, 2] == 0.0 and u2[0, 2] == 0.0


def test_apply_velocity_bc_zero_elevation_means_zero_outflow():
    grid = build_grid(1.0, 4)
    params = PhysicalParams(depth=0.1)
    layout = make_boundary_case("v", grid)
    phi = np.full(grid.shape, params.depth)
    u1 = np.ones(grid.shape)
    u2 = np.ones(grid.shape)
    apply_velocity_bc(u1, u2, phi, layout, params, step=3)
    ti, tj = layout.transmission_idx
    assert np.all(u1[ti, tj] == 0.0)
    assert np.all(u2[ti, tj] == 0.0)


def test_apply_velocity_bc_dry_transmission_raises():
    grid = build_grid(1.0, 4)
    params = PhysicalParams(depth=0.1)
    layout = make_boundary_case("v", grid)
    phi = np.full(grid.shape, params.depth)
    phi[0, 2] = 0.0
    with pytest.raises(DryStateError) as err:
        apply_velocity_bc(np.zeros(grid.shape), np.zeros(grid.shape), phi, layout, params, step=7)
    assert err.value.step == 7


def test_side_order_constant():
    assert SIDES == ("bottom", "top", "left", "right")
