"""Acceptance criteria, each run at its stated tolerance and time budget.

Every test records a one-line verdict through the ``report`` fixture; the
lines are printed in the terminal summary.
"""
import time

import numpy as np
import pytest

from activeflux.cli import RunConfig, convergence_table, execute
from activeflux.problems import get_problem
from activeflux.riemann import sample, shock_speed
from activeflux.verify import run_suites


def positive_throughout(res):
    return res.ok and res.stats.min_density > 0.0 and res.stats.min_pressure > 0.0


def test_criterion_1_euler_accuracy_orders(report):
    start = time.perf_counter()
    orders = {}
    for splitting in ("js", "llf", "sw", "vh"):
        rows = convergence_table(
            RunConfig(problem="euler_accuracy", splitting=splitting, cfl=0.18,
                      bp_average="global", bp_point="global"),
            [40, 80, 160, 320],
        )
        e_coarse, e_fine = np.array(rows[0]["error"]), np.array(rows[-1]["error"])
        orders[splitting] = np.log(e_coarse / e_fine) / np.log(8.0)
    elapsed = time.perf_counter() - start
    ok = all(np.all(orders[s] >= 2.7) for s in ("js", "llf", "vh"))
    ok &= bool(np.all((orders["sw"] >= 1.6) & (orders["sw"] <= 2.4)))
    ok &= elapsed < 60.0
    detail = ", ".join(f"{s} {np.round(o, 2).tolist()}" for s, o in orders.items())
    report(1, ok, f"orders {detail}; {elapsed:.1f}s")
    assert ok, detail


def test_criterion_2_advection_limiter_table(report):
    start = time.perf_counter()
    ranges = {}
    for label, avg, pt in (("both", "global", "global"), ("average only", "global", "off"),
                           ("point only", "off", "global")):
        res = execute(RunConfig(problem="advection", n_cells=400, cfl=0.1, t_final=2.0,
                                bp_average=avg, bp_point=pt))
        assert res.ok
        lo, hi = res.value_range()
        ranges[label] = (float(lo[0]), float(hi[0]))
    elapsed = time.perf_counter() - start
    lo, hi = ranges["both"]
    ok = lo >= 0.0 and hi <= 1.0
    for label in ("average only", "point only"):
        l, h = ranges[label]
        ok &= max(-l, h - 1.0) >= 1e-5
    ok &= elapsed < 30.0
    report(2, ok, f"ranges {ranges}; {elapsed:.1f}s")
    assert ok, ranges


def test_criterion_3_burgers_transonic_spike(report):
    start = time.perf_counter()
    spike = execute(RunConfig(problem="burgers_square", n_cells=200, splitting="js",
                              t_final=0.5, no_limiters=True))
    limited = execute(RunConfig(problem="burgers_square", n_cells=200, splitting="llf",
                                t_final=0.5, bp_average="local", bp_point="local"))
    elapsed = time.perf_counter() - start
    assert spike.ok and limited.ok
    spike_max = float(spike.value_range()[1][0])
    lo, hi = (float(v[0]) for v in limited.value_range())
    ok = spike_max >= 2.2 and hi <= 2.0 + 1e-12 and lo >= -1.0 - 1e-12 and elapsed < 10.0
    report(3, ok, f"JS max {spike_max:.3f}; limited LLF range [{lo:.15g}, {hi:.15g}]; {elapsed:.1f}s")
    assert ok


def test_criterion_4_double_rarefaction(report):
    start = time.perf_counter()
    on = execute(RunConfig(problem="double_rarefaction", n_cells=400, cfl=0.4, splitting="llf"))
    off = execute(RunConfig(problem="double_rarefaction", n_cells=400, cfl=0.4, splitting="llf",
                            no_limiters=True))
    elapsed = time.perf_counter() - start
    message = str(off.abort) if off.abort else ""
    ok = positive_throughout(on) and not off.ok and "negative" in message and elapsed < 20.0
    report(4, ok, f"min rho {on.stats.min_density:.4g}, min p {on.stats.min_pressure:.4g}; "
                  f"unlimited: {message!r}; {elapsed:.1f}s")
    assert ok


def _leblanc_front(res, rho_mid):
    rho, x = res.state.averages[:, 0], res.grid.centers
    i = np.flatnonzero(rho > rho_mid)[-1]
    return x[i] + (rho[i] - rho_mid) / (rho[i] - rho[i + 1]) * (x[i + 1] - x[i])


def test_criterion_5_leblanc(report):
    spec = get_problem("leblanc")
    left, right, x0 = spec.riemann_data
    speed = shock_speed(left, right, spec.kind.gamma)
    exact_front = x0 + speed * spec.t_final
    # density just behind the shock
    rho_star = float(sample(left, right, spec.kind.gamma, np.array([speed * (1.0 - 1e-9)]))[0][0])
    rho_mid = 0.5 * (rho_star + right[0])
    rho_exact = float(spec.exact_fn(np.array([0.9]), spec.t_final)[0, 0])

    errors, times, positive = [], [], True
    density_ok = False
    for n in (400, 1600, 6000):
        res = execute(RunConfig(problem="leblanc", n_cells=n, cfl=0.4, splitting="llf"))
        positive &= positive_throughout(res)
        if not res.ok:
            break
        times.append(res.wall_time)
        errors.append(abs(_leblanc_front(res, rho_mid) - exact_front))
        if n == 400:
            rho_num = float(np.interp(0.9, res.grid.centers, res.state.averages[:, 0]))
            density_ok = 0.5 <= rho_num / rho_exact <= 2.0
    monotone = len(errors) == 3 and errors[0] > errors[1] > errors[2]
    ok = positive and density_ok and monotone and times[-1] < 300.0
    report(5, ok, f"front errors {[f'{e:.3g}' for e in errors]}; rho(0.9) at N=400 "
                  f"{rho_num:.4g} vs exact {rho_exact:.4g}; N=6000 {times[-1]:.0f}s")
    assert ok


def test_criterion_6_sedov_symmetry(report):
    res = execute(RunConfig(problem="sedov", n_cells=801, cfl=0.4, splitting="llf"))
    assert res.ok, res.abort
    rho = res.state.averages[:, 0]
    n = rho.size
    half = n // 2
    i_left = int(np.argmax(rho[:half]))
    i_right = half + 1 + int(np.argmax(rho[half + 1:]))
    mirror_gap = abs(i_left - (n - 1 - i_right))
    ok = positive_throughout(res) and mirror_gap <= 1 and res.wall_time < 60.0
    report(6, ok, f"peaks at cells {i_left} and {i_right} (mirror gap {mirror_gap}); "
                  f"min rho {res.stats.min_density:.3g}; {res.wall_time:.1f}s")
    assert ok


def test_criterion_7_blast_wave(report):
    res = execute(RunConfig(problem="blast_wave", n_cells=800, cfl=0.4, splitting="llf"))
    assert res.ok, res.abort
    rho_max = float(res.state.averages[:, 0].max())
    ok = positive_throughout(res) and 4.0 <= rho_max <= 8.0 and res.wall_time < 60.0
    report(7, ok, f"max rho {rho_max:.4g}; min p {res.stats.min_pressure:.3g}; "
                  f"{res.controller.n_halvings} halvings; {res.wall_time:.1f}s")
    assert ok


def test_criterion_8_property_suites(report):
    start = time.perf_counter()
    results = run_suites()
    elapsed = time.perf_counter() - start
    ok = all(r.passed and r.cases >= 10_000 for r in results) and elapsed < 60.0
    summary = ", ".join(f"{r.name} {r.cases}/{r.failures}" for r in results)
    report(8, ok, f"cases/failures: {summary}; {elapsed:.1f}s")
    assert ok, [r.as_dict() for r in results if not r.passed]
