"""ADM and Picard iterations on an assembled :class:`~vadm.fem.DiscreteSystem`."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .adomian import ModeSeries, Reaction, adomian_field
from .fem import DiscreteSystem, residual

ADM = "adm"
PICARD = "picard"
DIVERGENCE_LIMIT = 1e6
PLATEAU_WINDOW = 10


@dataclass(frozen=True)
class SolverConfig:
    method: str = ADM
    tol: float = 1e-10
    max_iter: int = 200
    # "linear": start from the r = 0 solve (ADM's zeroth mode); or a full
    # nodal field / free-node vector to start Picard elsewhere
    picard_start: object = "linear"

    def __post_init__(self):
        if self.method not in (ADM, PICARD):
            raise ValueError(f"unknown method {self.method!r}")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass
class SolveReport:
    method: str
    iterations: int
    converged: bool
    residual_history: list
    final_field: np.ndarray
    l2_error: Optional[float] = None
    wall_time: float = 0.0
    linear_solves: int = 0
    diverged: bool = False
    plateau: Optional[float] = None
    message: str = ""

    @property
    def final_residual(self) -> float:
        return self.residual_history[-1]


class DivergenceError(RuntimeError):
    def __init__(self, msg, report):
        super().__init__(msg)
        self.report = report


def _plateau(history) -> float:
    """min residual over the last PLATEAU_WINDOW iterates divided by the overall min."""
    h = np.asarray(history)
    return float(h[-PLATEAU_WINDOW:].min() / h.min())


def _finish(report: SolveReport, sys, exact, t0):
    report.wall_time = time.perf_counter() - t0
    if exact is not None:
        report.l2_error = sys.l2_error(report.final_field, exact)
    if not report.converged and not report.diverged:
        report.plateau = _plateau(report.residual_history)
    return report


def solve_adm(sys: DiscreteSystem, r: Reaction, cfg: SolverConfig = SolverConfig(),
              exact: Callable | None = None, on_iterate=None):
    """Variational ADM.

    Mode 0 solves A psi_0 = beta + gamma - D alpha_D and carries the Dirichlet
    data; mode k >= 1 solves A psi_k = -F_{k-1}, F_{k-1} = int P_{k-1} phi,
    with homogeneous boundary values.  Stops on ||R(partial sum)||_inf <= tol.
    Returns ``(ModeSeries, SolveReport)``; ``iterations`` counts corrective modes.
    """
    t0 = time.perf_counter()
    F = sys.factor
    W = sys.space.integrate_basis[sys.dof.free]
    rhs0 = sys.rhs if sys.shift is None else sys.rhs + sys.shift

    series = ModeSeries()
    at_points = []
    alpha = F.solve(rhs0)
    series.append(sys.full(alpha))
    history = [float(np.max(np.abs(residual(sys, r, alpha)), initial=0.0))]
    if on_iterate:
        on_iterate(0, series.partial_sum(0))
    report = SolveReport(ADM, 0, history[0] <= cfg.tol, history, series[0], linear_solves=1)

    k = 0
    while not report.converged and k < cfg.max_iter:
        k += 1
        try:
            P = adomian_field(r, series, k - 1, sys.space, at_points)
        except FloatingPointError as exc:
            report.diverged, report.message = True, str(exc)
            break
        load = W @ P
        if k == 1 and sys.shift is not None:
            load = load + sys.shift
        mode = F.solve(-load)
        alpha = alpha + mode
        series.append(sys.homogeneous(mode))
        report.linear_solves += 1
        try:
            res = float(np.max(np.abs(residual(sys, r, alpha)), initial=0.0))
        except FloatingPointError as exc:
            res = float("inf")
            report.message = str(exc)
        history.append(res)
        report.iterations = k
        if on_iterate:
            on_iterate(k, sys.full(alpha))
        if res <= cfg.tol:
            report.converged = True
        elif not res < DIVERGENCE_LIMIT:
            report.diverged = True
            report.message = report.message or f"residual {res:.3e} exceeded {DIVERGENCE_LIMIT:g}"
            break

    report.final_field = sys.full(alpha)
    return series, _finish(report, sys, exact, t0)


def picard_initial(sys: DiscreteSystem, start) -> np.ndarray:
    if isinstance(start, str):
        if start != "linear":
            raise ValueError(f"unknown picard_start {start!r}")
        return sys.factor.solve(sys.rhs)
    start = np.asarray(start, dtype=float)
    if start.shape == (sys.dof.n_all,):
        return start[sys.dof.free]
    if start.shape == (sys.dof.n_free,):
        return start.copy()
    raise ValueError(f"picard_start has shape {start.shape}")


def solve_picard(sys: DiscreteSystem, r: Reaction, cfg: SolverConfig = SolverConfig(method=PICARD),
                 exact: Callable | None = None, on_iterate=None, raise_on_divergence: bool = True):
    """Picard sweeps A psi_k = beta + gamma - D alpha_D - B(psi_{k-1}).

    Iterate 0 is ``cfg.picard_start``; by default the r = 0 solve, i.e. the
    same field as ADM's zeroth mode.  A residual above 1e6 raises
    :class:`DivergenceError` (carrying the partial report) unless
    ``raise_on_divergence`` is false.
    """
    t0 = time.perf_counter()
    F = sys.factor
    alpha = picard_initial(sys, cfg.picard_start)
    solves = 1 if isinstance(cfg.picard_start, str) else 0
    B = sys.reaction(r, alpha)
    res = sys.A @ alpha + B - sys.rhs
    history = [float(np.max(np.abs(res), initial=0.0))]
    if on_iterate:
        on_iterate(0, sys.full(alpha))
    report = SolveReport(PICARD, 0, history[0] <= cfg.tol, history, sys.full(alpha),
                         linear_solves=solves)

    k = 0
    while not report.converged and k < cfg.max_iter:
        k += 1
        alpha = F.solve(sys.rhs - B)
        report.linear_solves += 1
        try:
            B = sys.reaction(r, alpha)
            res = float(np.max(np.abs(sys.A @ alpha + B - sys.rhs), initial=0.0))
        except FloatingPointError as exc:
            res = float("inf")
            report.message = str(exc)
        history.append(res)
        report.iterations = k
        if on_iterate:
            on_iterate(k, sys.full(alpha))
        if res <= cfg.tol:
            report.converged = True
        elif not res < DIVERGENCE_LIMIT:
            report.diverged = True
            report.message = report.message or f"residual {res:.3e} exceeded {DIVERGENCE_LIMIT:g}"
            break

    report.final_field = sys.full(alpha)
    _finish(report, sys, exact, t0)
    if report.diverged and raise_on_divergence:
        raise DivergenceError(f"Picard iteration diverged after {k} sweeps: {report.message}", report)
    return report


def solve(sys, r, cfg: SolverConfig, exact=None, **kw) -> SolveReport:
    if cfg.method == ADM:
        return solve_adm(sys, r, cfg, exact, **kw)[1]
    return solve_picard(sys, r, cfg, exact, **kw)


@dataclass
class MethodComparison:
    n: int
    adm: SolveReport
    picard: SolveReport
    series: ModeSeries = field(repr=False, default=None)


def compare_methods(problem, sizes, cfg: SolverConfig = SolverConfig(), solver_method="direct"):
    """Run ADM and Picard on the same assembled system for each mesh size."""
    from dataclasses import replace

    from .mesh import build_unit_square_mesh

    out = []
    for n in sizes:
        sys = problem.assemble(build_unit_square_mesh(n), solver_method=solver_method)
        series, adm = solve_adm(sys, problem.reaction, replace(cfg, method=ADM), problem.exact)
        pic = solve_picard(sys, problem.reaction, replace(cfg, method=PICARD), problem.exact,
                           raise_on_divergence=False)
        out.append(MethodComparison(n, adm, pic, series))
    return out
