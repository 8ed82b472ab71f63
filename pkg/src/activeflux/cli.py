"""Command-line front end: single runs, convergence studies, the limiter sweep and property suites.

Exit codes: 0 success, 1 configuration error (or a failed property suite),
2 the bound-preserving step protocol gave up.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import List, Optional

import numpy as np

from .integrator import BPAbort, StepController
from .mesh import error_norms
from .problems import REGISTRY, get_problem
from .scheme import ActiveFluxSolver, LimiterConfig
from .verify import DEFAULT_CASES, DEFAULT_SEED, SUITES, run_suites

OUTPUT_ENV = "ACTIVEFLUX_OUTPUT_DIR"
EXIT_OK, EXIT_CONFIG, EXIT_ABORT = 0, 1, 2

# the sixteen rows of the advection limiter table, in table order:
# (label, bp_average, bp_point, power_law)
SWEEP_ROWS = [
    ("none", "off", "off", False),
    ("PLR", "off", "off", True),
    ("global MP for average", "global", "off", False),
    ("local MP for average", "local", "off", False),
    ("global MP for point", "off", "global", False),
    ("local MP for point", "off", "local", False),
    ("PLR + global MP for average", "global", "off", True),
    ("PLR + local MP for average", "local", "off", True),
    ("global MP for average + global MP for point", "global", "global", False),
    ("local MP for average + global MP for point", "local", "global", False),
    ("PLR + global MP for average + global MP for point", "global", "global", True),
    ("PLR + local MP for average + global MP for point", "local", "global", True),
    ("global MP for average + local MP for point", "global", "local", False),
    ("local MP for average + local MP for point", "local", "local", False),
    ("PLR + global MP for average + local MP for point", "global", "local", True),
    ("PLR + local MP for average + local MP for point", "local", "local", True),
]


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    problem: str
    n_cells: Optional[int] = None
    cfl: Optional[float] = None
    splitting: str = "llf"
    bp_average: Optional[str] = None     # None: the problem's default
    bp_point: Optional[str] = None
    power_law: bool = False
    no_limiters: bool = False
    t_final: Optional[float] = None
    output_dir: Optional[str] = None
    seed: int = DEFAULT_SEED

    def limiters(self, spec) -> LimiterConfig:
        if self.no_limiters:
            return LimiterConfig()
        default = "global" if spec.bp_default else "off"
        return LimiterConfig(self.bp_average or default, self.bp_point or default, self.power_law)


@dataclass
class RunResult:
    config: RunConfig
    state: object = None
    grid: object = None
    kind: object = None
    controller: object = None
    stats: object = None
    wall_time: float = 0.0
    abort: Optional[BPAbort] = None
    limiters: Optional[LimiterConfig] = None
    cfl: float = 0.0
    t_final: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.abort is None

    def value_range(self):
        """Component-wise (min, max) over the final averages and point values."""
        both = np.concatenate([self.state.averages, self.state.points], axis=0)
        return both.min(axis=0), both.max(axis=0)

    def meta(self) -> dict:
        c = self.controller
        stats = self.stats.as_dict() if self.stats is not None else {}
        meta = {
            "status": "ok" if self.ok else "aborted",
            "problem": self.config.problem,
            "n_cells": self.grid.n_cells if self.grid is not None else self.config.n_cells,
            "splitting": self.config.splitting,
            "cfl": self.cfl,
            "limiters": asdict(self.limiters) if self.limiters else None,
            "t_final": self.t_final,
            "seed": self.config.seed,
            "wall_time": self.wall_time,
            "n_steps": c.n_steps if c else 0,
            "n_halvings": c.n_halvings if c else 0,
            "n_rejections": c.n_rejections if c else 0,
            "dt_history": list(c.dt_history) if c else [],
            "min_density": stats.get("min_density"),
            "min_pressure": stats.get("min_pressure"),
            "range_over_run": {"min": stats.get("min_values"), "max": stats.get("max_values")},
            "limiter_counts": {k: stats.get(k) for k in (
                "stages", "average_limited_stages", "point_limited_stages",
                "average_limited_interfaces", "point_limited_points", "alpha_enlargements")},
        }
        if self.ok:
            lo, hi = self.value_range()
            meta["final_time"] = self.state.time
            meta["range"] = {"min": [float(x) for x in lo], "max": [float(x) for x in hi]}
        else:
            meta["abort"] = {"message": str(self.abort), "time": self.abort.time, "detail": self.abort.detail}
        meta.update(self.extra)
        return meta


def execute(config: RunConfig) -> RunResult:
    """Run one benchmark; configuration problems raise :class:`ConfigError`."""
    try:
        spec = get_problem(config.problem)
        lim = config.limiters(spec)
        grid, state, kind = spec.setup(config.n_cells)
        solver = ActiveFluxSolver(kind, grid, spec.boundary, config.splitting, lim)
        cfl = config.cfl if config.cfl is not None else spec.cfl(config.splitting)
        if cfl is None:
            raise ValueError(f"no default CFL number for {config.problem} with {config.splitting}")
        t_final = config.t_final if config.t_final is not None else spec.t_final
        # validates the CFL number and final time
        StepController(cfl, t_final)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    result = RunResult(config, grid=grid, kind=kind, limiters=lim, cfl=cfl, t_final=t_final,
                       stats=solver.stats)
    start = time.perf_counter()
    try:
        result.state, result.controller = solver.run(state, t_final, cfl, on_step=None)
    except BPAbort as exc:
        result.abort = exc
    result.wall_time = time.perf_counter() - start
    return result


def output_directory(flag: Optional[str], default: str) -> Path:
    """The --output-dir flag wins, then the environment variable, then ``default``."""
    path = Path(flag or os.environ.get(OUTPUT_ENV) or default)
    path.mkdir(parents=True, exist_ok=True)
    return path


def component_names(kind) -> List[str]:
    return ["u"] if kind.is_scalar else ["rho", "m", "E"]


def write_csv(path: Path, x, values, x_name, names):
    data = np.column_stack([x, values])
    np.savetxt(path, data, fmt="%.17g", delimiter=",", header=",".join([x_name] + names), comments="")


def write_run(result: RunResult, out: Path):
    if result.ok:
        names = component_names(result.kind)
        write_csv(out / "averages.csv", result.grid.centers, result.state.averages, "x_center", names)
        write_csv(out / "points.csv", result.grid.interfaces, result.state.points, "x_interface", names)
    (out / "meta.json").write_text(json.dumps(result.meta(), indent=2) + "\n")


def convergence_table(config: RunConfig, meshes) -> list:
    """Rows (N, l1 errors, orders) against the problem's exact solution."""
    spec = get_problem(config.problem)
    if spec.exact_fn is None:
        raise ConfigError(f"problem {config.problem!r} has no exact solution")
    rows = []
    for n in meshes:
        res = execute(replace(config, n_cells=n))
        if not res.ok:
            raise res.abort
        t = res.state.time
        err = error_norms(res.state, res.grid, lambda x: spec.exact_fn(x, t))
        rows.append({"n": n, "error": [float(e) for e in err], "order": None, "wall_time": res.wall_time})
    for prev, row in zip(rows, rows[1:]):
        ratio = row["n"] / prev["n"]
        row["order"] = [float(np.log(a / b) / np.log(ratio)) for a, b in zip(prev["error"], row["error"])]
    return rows


def sweep(config: RunConfig) -> list:
    rows = []
    for label, avg, pt, plr in SWEEP_ROWS:
        res = execute(replace(config, bp_average=avg, bp_point=pt, power_law=plr, no_limiters=False))
        if not res.ok:
            rows.append({"label": label, "status": "aborted", "message": str(res.abort)})
            continue
        lo, hi = res.value_range()
        lo0, hi0 = res.kind.bounds
        rows.append({
            "label": label, "status": "ok", "min": float(lo[0]), "max": float(hi[0]),
            "bounded": bool(lo[0] >= lo0 and hi[0] <= hi0), "wall_time": res.wall_time,
        })
    return rows


# -- argument parsing ----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_run_flags(p, problem_default=None):
    p.add_argument("--problem", required=problem_default is None, default=problem_default,
                   choices=sorted(REGISTRY))
    p.add_argument("--n", type=int, default=None, help="number of cells")
    p.add_argument("--cfl", type=float, default=None)
    p.add_argument("--splitting", default="llf", choices=["js", "llf", "sw", "vh"])
    p.add_argument("--bp-average", choices=["off", "global", "local"], default=None)
    p.add_argument("--bp-point", choices=["off", "global", "local"], default=None)
    p.add_argument("--power-law", action="store_true")
    p.add_argument("--no-limiters", action="store_true")
    p.add_argument("--t-final", type=float, default=None)
    p.add_argument("--output-dir", default=None)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="activeflux", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _add_run_flags(sub.add_parser("run", help="run one benchmark and write CSV and JSON output"))

    p = sub.add_parser("convergence", help="l1 errors and observed orders under mesh refinement")
    _add_run_flags(p, problem_default="euler_accuracy")
    p.add_argument("--meshes", type=int, nargs="+", default=[40, 80, 160, 320])

    p = sub.add_parser("sweep", help="all sixteen limiter combinations on the advection test")
    _add_run_flags(p, problem_default="advection")

    p = sub.add_parser("verify", help="randomized property suites")
    p.add_argument("--suite", action="append", choices=sorted(SUITES),
                   help="suite to run (repeatable); all suites by default")
    p.add_argument("--cases", type=int, default=DEFAULT_CASES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--output-dir", default=None)
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        problem=args.problem, n_cells=args.n, cfl=args.cfl, splitting=args.splitting,
        bp_average=args.bp_average, bp_point=args.bp_point, power_law=args.power_law,
        no_limiters=args.no_limiters, t_final=args.t_final, output_dir=args.output_dir, seed=args.seed,
    )


def _cmd_run(args) -> int:
    config = _config(args)
    result = execute(config)
    out = output_directory(config.output_dir, os.path.join("runs", config.problem))
    write_run(result, out)
    if not result.ok:
        print(f"aborted: {result.abort}", file=sys.stderr)
        return EXIT_ABORT
    lo, hi = result.value_range()
    print(f"{config.problem}: {result.controller.n_steps} steps in {result.wall_time:.2f} s, "
          f"range min {np.array2string(lo, precision=6)} max {np.array2string(hi, precision=6)}; "
          f"output in {out}")
    return EXIT_OK


def _cmd_convergence(args) -> int:
    config = _config(args)
    rows = convergence_table(config, args.meshes)
    out = output_directory(config.output_dir, os.path.join("runs", f"{config.problem}_convergence"))
    names = component_names(get_problem(config.problem).kind)
    header = ["n"] + [f"err_{c}" for c in names] + [f"order_{c}" for c in names]
    lines = [",".join(header)]
    print(" ".join(f"{h:>12}" for h in header))
    for row in rows:
        order = row["order"] or [float("nan")] * len(names)
        vals = [row["n"]] + row["error"] + order
        lines.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in vals))
        print(f"{row['n']:>12d} " + " ".join(f"{v:12.4e}" for v in row["error"])
              + " " + " ".join(f"{v:12.3f}" for v in order))
    (out / "convergence.csv").write_text("\n".join(lines) + "\n")
    (out / "convergence.json").write_text(json.dumps({"config": asdict(config), "rows": rows}, indent=2) + "\n")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    config = _config(args)
    rows = sweep(config)
    out = output_directory(config.output_dir, os.path.join("runs", f"{config.problem}_sweep"))
    (out / "sweep.json").write_text(json.dumps({"config": asdict(config), "rows": rows}, indent=2) + "\n")
    for row in rows:
        if row["status"] != "ok":
            print(f"{row['label']:<52} aborted: {row['message']}")
            continue
        mark = "bounded" if row["bounded"] else "violated"
        print(f"{row['label']:<52} [{row['min']: .3e}, 1{row['max'] - 1.0:+.3e}] {mark}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    results = run_suites(args.suite, seed=args.seed, cases=args.cases)
    report = {"seed": args.seed, "cases": args.cases, "suites": [r.as_dict() for r in results]}
    out = output_directory(args.output_dir, os.path.join("runs", "verify"))
    (out / "verify.json").write_text(json.dumps(report, indent=2) + "\n")
    for r in results:
        print(f"{r.name:<22} {'pass' if r.passed else 'FAIL'}  cases={r.cases}  "
              f"failures={r.failures}  worst={r.worst:.3g}  {r.seconds:.2f} s")
    return EXIT_OK if all(r.passed for r in results) else EXIT_CONFIG


COMMANDS = {"run": _cmd_run, "convergence": _cmd_convergence, "sweep": _cmd_sweep, "verify": _cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BPAbort as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT


if __name__ == "__main__":
    sys.exit(main())
