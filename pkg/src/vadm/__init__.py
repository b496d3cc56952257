"""Variational Adomian decomposition and Picard iteration for semilinear
elliptic problems -lap(psi) + r(psi) = f on the unit square, with P1 elements."""

__version__ = "0.1.0"

from .adomian import U, ModeSeries, Reaction, adomian_coefficient, adomian_field, adomian_polynomials
from .adomian import arctan, cos, exp, sin
from .fem import DiscreteSystem, assemble_system, l2_error, residual
from .mesh import BoundarySpec, DofMap, TriMesh, build_dof_map, build_unit_square_mesh
from .problems import Problem, get_problem, split_source
from .solvers import SolverConfig, SolveReport, compare_methods, solve_adm, solve_picard

__all__ = [
    "U", "ModeSeries", "Reaction", "adomian_coefficient", "adomian_field", "adomian_polynomials",
    "arctan", "cos", "exp", "sin",
    "DiscreteSystem", "assemble_system", "l2_error", "residual",
    "BoundarySpec", "DofMap", "TriMesh", "build_dof_map", "build_unit_square_mesh",
    "Problem", "get_problem", "split_source",
    "SolverConfig", "SolveReport", "compare_methods", "solve_adm", "solve_picard",
]
