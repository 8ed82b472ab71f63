import numpy as np
import pytest

from activeflux.equations import Euler, LinearAdvection
from activeflux.mesh import (AFState, BoundaryKind, Grid1D, InitialDataError, cell_averages, error_norms,
                             extend, init_state, scalar_bounds, total_mass)


def test_grid_geometry():
    g = Grid1D(-1.0, 1.0, 4)
    assert g.dx == pytest.approx(0.5)
    np.testing.assert_allclose(g.centers, [-0.75, -0.25, 0.25, 0.75])
    np.testing.assert_allclose(g.interfaces, [-1.0, -0.5, 0.0, 0.5, 1.0])


@pytest.mark.parametrize("args", [(0.0, 1.0, 0), (1.0, 1.0, 4), (1.0, 0.0, 4)])
def test_grid_rejects_bad_input(args):
    with pytest.raises(ValueError):
        Grid1D(*args)


def test_cell_averages_exact_for_polynomials():
    g = Grid1D(0.0, 1.0, 7)
    avg = cell_averages(g, lambda x: (x**4)[..., None])[:, 0]
    exact = (g.interfaces[1:] ** 5 - g.interfaces[:-1] ** 5) / (5 * g.dx)
    np.testing.assert_allclose(avg, exact, rtol=1e-14)


def test_init_state_shapes_and_periodic_identity():
    g = Grid1D(0.0, 1.0, 10)
    s = init_state(g, "periodic", lambda x: np.sin(2 * np.pi * x)[..., None])
    assert s.averages.shape == (10, 1) and s.points.shape == (11, 1)
    assert s.points[-1, 0] == s.points[0, 0]
    assert s.time == 0.0


def test_init_state_samples_points_exactly():
    g = Grid1D(0.0, 1.0, 5)
    s = init_state(g, "outflow", lambda x: (3.0 * x)[..., None])
    np.testing.assert_array_equal(s.points[:, 0], 3.0 * g.interfaces)


def test_init_state_reports_inadmissible_data():
    g = Grid1D(0.0, 1.0, 8)
    kind = Euler(1.4)
    bad = lambda x: kind.conserved(np.where(x > 0.5, -1.0, 1.0), 0.0, 1.0)
    with pytest.raises(InitialDataError, match="index"):
        init_state(g, "outflow", bad, kind=kind)


def test_scalar_bounds_cover_points_and_averages():
    s = AFState(np.array([[0.2], [0.5]]), np.array([[0.0], [0.3], [1.1]]))
    assert scalar_bounds(s) == (0.0, 1.1)


def _numbered(n, m=1):
    A = np.arange(n, dtype=float)[:, None] * np.ones(m)
    P = 100.0 + np.arange(n + 1, dtype=float)[:, None] * np.ones(m)
    return A, P


def test_periodic_extension():
    A, P = _numbered(4)
    P[-1] = P[0]
    Ae, Pe = extend(A, P, "periodic", 2)
    np.testing.assert_array_equal(Ae[:, 0], [2, 3, 0, 1, 2, 3, 0, 1])
    np.testing.assert_array_equal(Pe[:, 0], [102, 103, 100, 101, 102, 103, 100, 101, 102])


def test_outflow_extension_copies_edges():
    A, P = _numbered(4)
    Ae, Pe = extend(A, P, "outflow", 2)
    np.testing.assert_array_equal(Ae[:, 0], [0, 0, 0, 1, 2, 3, 3, 3])
    np.testing.assert_array_equal(Pe[:, 0], [100, 100, 100, 101, 102, 103, 104, 104, 104])


def test_reflective_extension_mirrors_and_flips_momentum():
    A, P = _numbered(4, 3)
    Ae, Pe = extend(A, P, "reflective", 2, Euler(1.4).reflection)
    np.testing.assert_array_equal(Ae[:, 0], [1, 0, 0, 1, 2, 3, 3, 2])
    np.testing.assert_array_equal(Pe[:, 0], [102, 101, 100, 101, 102, 103, 104, 103, 102])
    np.testing.assert_array_equal(Ae[:2, 1], [-1, -0.0])
    np.testing.assert_array_equal(Ae[2:6, 1], A[:, 1])
    np.testing.assert_array_equal(Pe[:2, 1], [-102, -101])
    np.testing.assert_array_equal(Pe[-2:, 2], [103, 102])


def test_extension_does_not_alias_inputs():
    A, P = _numbered(4, 3)
    Ae, Pe = extend(A, P, "reflective", 2, Euler(1.4).reflection)
    Ae[:] = -7.0
    Pe[:] = -7.0
    assert A.min() >= 0.0 and P.min() >= 100.0


def test_extension_limits_halo():
    A, P = _numbered(4)
    with pytest.raises(ValueError):
        extend(A, P, "outflow", 3)


def test_total_mass_and_error_norms():
    g = Grid1D(0.0, 2.0, 4)
    s = AFState(np.array([[1.0], [2.0], [3.0], [4.0]]), np.zeros((5, 1)))
    np.testing.assert_allclose(total_mass(s, g), [5.0])
    err = error_norms(s, g, lambda x: np.full(x.shape + (1,), 2.0))
    np.testing.assert_allclose(err, [(1 + 0 + 1 + 2) / 4])


def test_boundary_kind_accepts_strings():
    assert BoundaryKind("reflective") is BoundaryKind.REFLECTIVE
    with pytest.raises(ValueError):
        BoundaryKind("wall")
