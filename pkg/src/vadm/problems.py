"""Benchmark problems on the unit square.

Sources for the manufactured problems are closed forms of
f = -lap(psi) + r(psi), differentiated by hand:

* test1: psi = 10 p(x) p(y) g(x - y), p(s) = s - s^2, g(d) = arctan(100 d^6).
  With q = 1e4 d^12, g' = 600 d^5 / (1 + q) and
  g'' = 3000 d^4 / (1 + q) - 7.2e7 d^16 / (1 + q)^2, so
  lap(psi) = 10 [-2 (p(x) + p(y)) g + 2 g' (p'(x) p(y) - p(x) p'(y)) + 2 p(x) p(y) g''].
* test3: psi = w(x) w(y), w'' = -400 (exp(-20 s) + exp(20 (s - 1))).
* test4: the 1D Bratu profile solves -psi'' = 2 exp(psi) exactly, so f = 0.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .adomian import U, Reaction, exp, sin
from .fem import assemble_system
from .mesh import DIRICHLET, NEUMANN, BoundarySpec, TriMesh


@dataclass(frozen=True)
class Problem:
    name: str
    bc: BoundarySpec
    reaction: Reaction
    source: Callable
    exact: Optional[Callable] = None
    notes: str = ""
    shift: Optional[Callable] = None

    def assemble(self, mesh: TriMesh, **kw):
        return assemble_system(mesh, self.bc, self.source, shift_fn=self.shift, **kw)


def _zeros(x, y):
    return np.zeros(np.broadcast(x, y).shape)


def test1() -> Problem:
    def p(s):
        return s - s * s

    def g_parts(d):
        d4 = d ** 4
        q = 1e4 * d4 ** 3
        g = np.arctan(100.0 * d ** 6)
        g1 = 600.0 * d4 * d / (1.0 + q)
        g2 = 3000.0 * d4 / (1.0 + q) - 7.2e7 * d4 ** 4 / (1.0 + q) ** 2
        return g, g1, g2

    def exact(x, y):
        return 10.0 * p(x) * p(y) * np.arctan(100.0 * (x - y) ** 6)

    def laplacian(x, y):
        g, g1, g2 = g_parts(x - y)
        px, py = p(x), p(y)
        dpx, dpy = 1.0 - 2.0 * x, 1.0 - 2.0 * y
        return 10.0 * (-2.0 * (px + py) * g + 2.0 * g1 * (dpx * py - px * dpy) + 2.0 * px * py * g2)

    def source(x, y):
        return -laplacian(x, y) - np.sin(exact(x, y))

    return Problem("test1", BoundarySpec.all_dirichlet(), -sin(U), source, exact,
                   notes="sine-Gordon type, homogeneous Dirichlet")


def test2() -> Problem:
    tp = 2.0 * np.pi

    def exact(x, y):
        return np.cos(tp * x) * np.sin(tp * y)

    def dirichlet(x, y):
        return np.where(np.asarray(x) == 0.0, np.sin(tp * np.asarray(y)), 0.0)

    def source(x, y):
        return (8.0 * np.pi ** 2 - 1.0) * np.cos(tp * x) * np.sin(tp * y)

    bc = BoundarySpec({"L": DIRICHLET, "R": NEUMANN, "B": DIRICHLET, "T": DIRICHLET},
                      dirichlet=dirichlet)
    return Problem("test2", bc, -U, source, exact,
                   notes="Helmholtz type, linear reaction, Neumann on the right side")


def omega(s):
    s = np.asarray(s, dtype=float)
    return (1.0 - np.exp(-s / 0.05)) + (np.exp(-1.0 / 0.05) - np.exp((s - 1.0) / 0.05))


def _omega2(s):
    return -400.0 * (np.exp(-s / 0.05) + np.exp((s - 1.0) / 0.05))


def test3() -> Problem:
    def exact(x, y):
        return omega(x) * omega(y)

    def source(x, y):
        psi = exact(x, y)
        lap = _omega2(x) * omega(y) + omega(x) * _omega2(y)
        return -lap + psi - psi ** 3

    return Problem("test3", BoundarySpec.all_dirichlet(), U - U ** 3, source, exact,
                   notes="modified Ginzburg-Landau, boundary layers of width 0.05")


def bratu_theta(tol: float = 1e-14, max_iter: int = 100) -> float:
    """Smaller positive root of theta = 2 cosh(theta / 4), by damped Newton."""
    theta = 1.0
    for _ in range(max_iter):
        F = theta - 2.0 * np.cosh(0.25 * theta)
        dF = 1.0 - 0.5 * np.sinh(0.25 * theta)
        step = F / dF
        lam = 1.0
        while abs((theta - lam * step) - 2.0 * np.cosh(0.25 * (theta - lam * step))) > abs(F) and lam > 1e-4:
            lam *= 0.5
        theta -= lam * step
        if abs(step) < tol:
            break
    else:
        raise RuntimeError("Newton iteration for the Bratu parameter did not converge")
    if not abs(theta - 2.0 * np.cosh(0.25 * theta)) <= 1e-12:
        raise RuntimeError(f"Bratu parameter not resolved: theta = {theta}")
    return float(theta)


def test4() -> Problem:
    theta = bratu_theta()

    def exact(x, y):
        x = np.asarray(x, dtype=float)
        prof = -2.0 * np.log(np.cosh(0.25 * (2.0 * x - 1.0) * theta) / np.cosh(0.25 * theta))
        return prof + 0.0 * np.asarray(y)

    bc = BoundarySpec({"L": DIRICHLET, "R": DIRICHLET, "B": NEUMANN, "T": NEUMANN})
    return Problem("test4", bc, -2.0 * exp(U), _zeros, exact,
                   notes=f"Bratu, lower branch theta = {theta:.15g}; zero source")


def remark_case() -> Problem:
    return Problem("remark", BoundarySpec.all_dirichlet(), U ** 3 - U, _zeros, None,
                   notes="trivial-solution regression: every Adomian polynomial vanishes")


def split_source(problem: Problem, g: Callable) -> Problem:
    """Add g(x, y) to both the reaction and the source.

    The solution is unchanged, but the zeroth ADM mode now solves
    -lap(psi_0) = f + g and P_0 picks up +g.
    """
    prev = problem.shift

    def shift(x, y):
        base = prev(x, y) if prev is not None else 0.0
        return base + g(x, y)

    return replace(problem, name=f"{problem.name}+split", shift=shift)


PROBLEMS = {"test1": test1, "test2": test2, "test3": test3, "test4": test4, "remark": remark_case}


def get_problem(name: str) -> Problem:
    try:
        return PROBLEMS[name]()
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; choose from {sorted(PROBLEMS)}") from None
