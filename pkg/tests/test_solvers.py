from dataclasses import replace

import numpy as np
import pytest

from vadm import problems
from vadm.adomian import U, adomian_field, exp, sin
from vadm.fem import h1_seminorm
from vadm.mesh import build_unit_square_mesh
from vadm.problems import Problem, split_source
from vadm.solvers import (ADM, PICARD, DivergenceError, SolverConfig, compare_methods,
                          solve, solve_adm, solve_picard)


def zero_source(x, y):
    return np.zeros_like(x)


def system(problem, n):
    return problem.assemble(build_unit_square_mesh(n))


class TestConfig:
    def test_rejects_bad_method(self):
        with pytest.raises(ValueError):
            SolverConfig(method="newton")

    def test_rejects_bad_tol(self):
        with pytest.raises(ValueError):
            SolverConfig(tol=0.0)

    def test_rejects_bad_max_iter(self):
        with pytest.raises(ValueError):
            SolverConfig(max_iter=0)

    def test_bad_start(self):
        sys = system(problems.test2(), 4)
        with pytest.raises(ValueError):
            solve_picard(sys, -U, SolverConfig(method=PICARD, picard_start="zero"))
        with pytest.raises(ValueError):
            solve_picard(sys, -U, SolverConfig(method=PICARD, picard_start=np.zeros(3)))


class TestZeroReaction:
    def setup_method(self):
        p = problems.test2()
        self.p = replace(p, reaction=0 * U)
        self.sys = system(self.p, 8)

    def test_adm_needs_no_correction(self):
        series, rep = solve_adm(self.sys, self.p.reaction)
        assert rep.converged and rep.iterations == 0 and len(series) == 1

    def test_picard_default_start(self):
        rep = solve_picard(self.sys, self.p.reaction, SolverConfig(method=PICARD))
        assert rep.converged and rep.iterations == 0

    def test_picard_from_zero_takes_one_sweep(self):
        cfg = SolverConfig(method=PICARD, picard_start=np.zeros(self.sys.dof.n_free))
        rep = solve_picard(self.sys, self.p.reaction, cfg)
        assert rep.converged and rep.iterations == 1


def test_remark_case_zero_solution():
    p = problems.remark_case()
    sys = system(p, 8)
    series, rep = solve_adm(sys, p.reaction)
    assert rep.converged and rep.iterations == 0
    assert np.all(rep.final_field == 0.0)
    assert np.all(solve_picard(sys, p.reaction).final_field == 0.0)


@pytest.mark.parametrize("n", [8, 16, 32])
def test_linear_reaction_iterates_coincide(n):
    p = problems.test2()
    sys = system(p, n)
    adm_iterates, pic_iterates = [], []
    _, a = solve_adm(sys, p.reaction, on_iterate=lambda k, f: adm_iterates.append(f))
    b = solve_picard(sys, p.reaction, SolverConfig(method=PICARD),
                     on_iterate=lambda k, f: pic_iterates.append(f))
    assert a.iterations == b.iterations
    assert len(adm_iterates) == len(pic_iterates)
    for u, v in zip(adm_iterates, pic_iterates):
        assert np.max(np.abs(u - v)) <= 1e-9
    assert np.allclose(a.residual_history, b.residual_history, rtol=1e-6, atol=1e-13)


@pytest.mark.parametrize("name, lam1", [("test1", 2 * np.pi ** 2), ("test3", 2 * np.pi ** 2),
                                        ("test4", np.pi ** 2)])
def test_mode_energy_bound(name, lam1):
    p = problems.get_problem(name)
    sys = system(p, 16)
    series, rep = solve_adm(sys, p.reaction)
    assert rep.converged
    w = sys.space.point_weights
    cache = []
    for k in range(1, len(series)):
        P = adomian_field(p.reaction, series, k - 1, sys.space, cache)
        bound = np.sqrt(w @ (P * P)) / np.sqrt(lam1)
        assert h1_seminorm(sys.mesh, series[k]) <= bound * (1 + 1e-9) + 1e-15


def test_final_field_is_partial_sum():
    p = problems.test3()
    sys = system(p, 16)
    series, rep = solve_adm(sys, p.reaction)
    assert len(series) == rep.iterations + 1
    assert np.allclose(rep.final_field, series.partial_sum(rep.iterations), rtol=0, atol=1e-14)
    # every mode after the first vanishes on the Dirichlet boundary
    for k in range(1, len(series)):
        assert np.all(series[k][sys.dof.fixed] == 0.0)


def test_residual_history_reaches_tolerance():
    p = problems.test1()
    sys = system(p, 16)
    for method in (ADM, PICARD):
        rep = solve(sys, p.reaction, SolverConfig(method=method), p.exact)
        assert rep.converged
        assert rep.final_residual <= 1e-10
        assert len(rep.residual_history) == rep.iterations + 1
        assert rep.linear_solves == rep.iterations + 1
        assert rep.l2_error < 0.05


def test_picard_divergence_raises():
    p = Problem("blowup", problems.test1().bc, -50.0 * exp(U), zero_source)
    sys = system(p, 8)
    with pytest.raises(DivergenceError) as exc:
        solve_picard(sys, p.reaction, SolverConfig(method=PICARD))
    rep = exc.value.report
    assert rep.diverged and not rep.converged
    quiet = solve_picard(sys, p.reaction, SolverConfig(method=PICARD), raise_on_divergence=False)
    assert quiet.diverged


def test_adm_divergence_flagged():
    p = Problem("blowup", problems.test1().bc, -50.0 * exp(U), zero_source)
    _, rep = solve_adm(system(p, 8), p.reaction)
    assert rep.diverged and not rep.converged
    assert rep.plateau is None


def test_max_iter_reports_plateau():
    p = problems.test4()
    sys = system(p, 8)
    _, rep = solve_adm(sys, p.reaction, SolverConfig(max_iter=3))
    assert not rep.converged and rep.iterations == 3
    h = np.asarray(rep.residual_history)
    assert rep.plateau == pytest.approx(h[-10:].min() / h.min())


def test_source_splitting_same_solution():
    p = problems.test1()
    split = split_source(p, lambda x, y: 3.0 + x * y)
    a = solve_adm(system(p, 16), p.reaction)[1]
    b = solve_adm(system(split, 16), split.reaction)[1]
    assert a.converged and b.converged
    assert np.max(np.abs(a.final_field - b.final_field)) <= 1e-9
    # Picard ignores the shift entirely
    c = solve_picard(system(split, 16), split.reaction)
    assert np.max(np.abs(c.final_field - a.final_field)) <= 1e-9


def test_direct_and_cg_agree():
    p = problems.test3()
    mesh = build_unit_square_mesh(16)
    a = solve_adm(p.assemble(mesh), p.reaction)[1]
    b = solve_adm(p.assemble(mesh, solver_method="cg"), p.reaction)[1]
    assert a.iterations == b.iterations
    assert np.max(np.abs(a.final_field - b.final_field)) <= 1e-9


def test_compare_methods_converged_fields_agree():
    out = compare_methods(problems.test4(), [8, 16])
    for row in out:
        assert row.adm.converged and row.picard.converged
        assert np.max(np.abs(row.adm.final_field - row.picard.final_field)) <= 1e-8
        assert row.picard.iterations < row.adm.iterations


def test_sine_reaction_small_data():
    # small homogeneous problem with a sine reaction: both methods agree on the answer
    p = Problem("sine", problems.test1().bc, sin(U), lambda x, y: 1.0 + 0 * x)
    sys = system(p, 16)
    a = solve_adm(sys, p.reaction)[1]
    b = solve_picard(sys, p.reaction)
    assert a.converged and b.converged
    assert np.max(np.abs(a.final_field - b.final_field)) <= 1e-9
