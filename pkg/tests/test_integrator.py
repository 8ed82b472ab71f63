import numpy as np
import pytest

from activeflux.equations import Euler, LinearAdvection
from activeflux.integrator import BPAbort, StageRejected, StepController, advance, compute_dt, ssprk3_step
from activeflux.mesh import AFState, Grid1D, init_state
from activeflux.scheme import ActiveFluxSolver


def test_compute_dt_examples():
    assert compute_dt(1.0 / 0.01, 0.4, 1.0) == pytest.approx(0.004)
    a = Euler(1.4).max_speed(Euler(1.4).conserved(1.0, 0.0, 1.0 / 1.4))
    assert compute_dt(float(a) / 0.01, 0.18, 1.0) == pytest.approx(0.0018)
    assert compute_dt(200.0, 0.4, 1.0) == pytest.approx(0.5 * compute_dt(100.0, 0.4, 1.0))
    assert compute_dt(1.0, 0.5, 0.1) == pytest.approx(0.1)
    assert compute_dt(0.0, 0.5, 0.3) == pytest.approx(0.3)


def test_ssprk3_with_zero_operator_is_identity():
    u = (np.arange(3.0), np.ones(4))
    out = ssprk3_step(u, 0.1, lambda w, dt: w)
    for a, b in zip(out, u):
        np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize("h", [0.1, 0.5, 1.0, 2.0])
def test_ssprk3_stability_polynomial(h):
    out = ssprk3_step(np.array([1.0]), h, lambda w, dt: w - dt * w)
    assert out[0] == pytest.approx(1 - h + h * h / 2 - h**3 / 6, abs=1e-14)


@pytest.mark.parametrize("cfl", [0.0, 1.5, -0.1])
def test_controller_rejects_bad_cfl(cfl):
    with pytest.raises(ValueError):
        StepController(cfl, 1.0)


class _Decay:
    """u' = -u with stages rejected whenever dt exceeds ``dt_ok``."""

    limiting = True

    def __init__(self, dt_ok):
        self.dt_ok = dt_ok

    def speed_over_dx(self, state):
        return 1.0

    def pack(self, state):
        return state.averages

    def unpack(self, u, time):
        return AFState(u, u, time)

    def check(self, state):
        pass

    def stage(self, u, dt):
        if dt > self.dt_ok:
            raise StageRejected(f"dt={dt}")
        return u - dt * u


def test_halving_protocol_and_exact_final_time():
    ctrl = StepController(cfl=0.8, t_final=1.0)
    s = advance(AFState(np.ones(1), np.ones(1)), _Decay(0.25), ctrl)
    assert s.time == 1.0
    assert ctrl.n_halvings >= 2 and ctrl.n_rejections == ctrl.n_halvings
    assert all(dt <= 0.25 for dt in ctrl.dt_history)
    assert sum(ctrl.dt_history) == pytest.approx(1.0)


def test_abort_after_max_halvings():
    ctrl = StepController(cfl=0.8, t_final=1.0, max_halvings=3)
    with pytest.raises(BPAbort, match="3 halvings"):
        advance(AFState(np.ones(1), np.ones(1)), _Decay(1e-3), ctrl)


def test_smooth_advection_never_halves():
    grid = Grid1D(-1.0, 1.0, 40)
    kind = LinearAdvection(1.0)
    state = init_state(grid, "periodic", lambda x: (0.5 + 0.4 * np.sin(np.pi * x))[..., None])
    kind = kind.with_bounds(0.1, 0.9)
    from activeflux.scheme import LimiterConfig
    solver = ActiveFluxSolver(kind, grid, "periodic", "llf", LimiterConfig("global", "global"))
    _, ctrl = solver.run(state, 0.5, 0.4)
    assert ctrl.n_halvings == 0


def test_time_order_is_three():
    # compare against a tiny-dt run on the same grid, so only the temporal error remains
    grid = Grid1D(-1.0, 1.0, 40)
    kind = LinearAdvection(1.0)
    state = init_state(grid, "periodic", lambda x: np.sin(np.pi * x)[..., None])
    solver = ActiveFluxSolver(kind, grid, "periodic", "js")
    ref, _ = solver.run(state, 0.5, 0.0125)
    errs = []
    for cfl in (0.4, 0.2, 0.1):
        out, _ = solver.run(state, 0.5, cfl)
        errs.append(np.abs(out.averages - ref.averages).mean())
    slopes = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(slopes > 2.8), slopes
