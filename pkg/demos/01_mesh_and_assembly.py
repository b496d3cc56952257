"""
Meshes and the assembled system
===============================

Build the structured triangulation, look at the free/fixed split and check
that the stiffness matrix behaves.
"""
import numpy as np
from scipy.linalg import eigh

from vadm import BoundarySpec, build_dof_map, build_unit_square_mesh, get_problem
from vadm.fem import assemble_stiffness

mesh = build_unit_square_mesh(4)
print(mesh.n_nodes, "nodes,", mesh.n_triangles, "triangles, h =", mesh.h)

# every cell is split along its bottom-left / top-right diagonal
print(mesh.triangles[:2])

dof = build_dof_map(mesh, BoundarySpec.all_dirichlet())
A, D = assemble_stiffness(mesh, dof)
print("free nodes:", dof.n_free, " A is", A.shape, " symmetric:", abs(A - A.T).max() == 0)

# smallest eigenvalue of the discrete Laplacian approaches 2 pi^2 from above
for n in (4, 8, 16):
    m = build_unit_square_mesh(n)
    d = build_dof_map(m, BoundarySpec.all_dirichlet())
    A = assemble_stiffness(m, d)[0].toarray()
    # mass matrix through the quadrature space of the assembled system
    sys = get_problem("test1").assemble(m)
    M = (sys.space.integrate_basis @ sys.space.interp).toarray()[np.ix_(d.free, d.free)]
    lam = eigh(A, M, eigvals_only=True)[0]
    print(f"n={n:3d}  lambda_1 = {lam:.4f}   (2 pi^2 = {2 * np.pi ** 2:.4f})")
