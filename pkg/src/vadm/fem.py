"""P1 Galerkin assembly for -lap(psi) + r(psi) = f with mixed boundary data.

Nodal fields are plain float arrays over all mesh nodes; free-node vectors
are their restriction through a :class:`~vadm.mesh.DofMap`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sps

from . import linalg
from .mesh import BoundarySpec, DofMap, TriMesh, build_dof_map
from .quadrature import DEGREE5, Quadrature, edge_gauss


def p1_gradients(mesh: TriMesh):
    """Constant barycentric gradients per triangle, shape (ntri, 3, 2), and areas."""
    p = mesh.nodes[mesh.triangles]
    x, y = p[..., 0], p[..., 1]
    b = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1)
    c = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1)
    signed = 0.5 * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
    bad = np.flatnonzero(np.abs(signed) <= 1e-300)
    if bad.size:
        raise ValueError(f"degenerate triangle {int(bad[0])} (zero area)")
    grads = np.stack([b, c], axis=-1) / (2.0 * signed)[:, None, None]
    return grads, np.abs(signed)


def local_stiffness(mesh: TriMesh) -> np.ndarray:
    grads, area = p1_gradients(mesh)
    return np.einsum("tid,tjd->tij", grads, grads) * area[:, None, None]


def full_stiffness(mesh: TriMesh) -> sps.csr_matrix:
    K = local_stiffness(mesh)
    rows = np.repeat(mesh.triangles, 3, axis=1).ravel()
    cols = np.tile(mesh.triangles, (1, 3)).ravel()
    n = mesh.n_nodes
    return sps.csr_matrix((K.ravel(), (rows, cols)), shape=(n, n))


def assemble_stiffness(mesh: TriMesh, dof: DofMap):
    """Stiffness restricted to free x free (A) and free x all nodes (D)."""
    S = full_stiffness(mesh)
    A = S[dof.free][:, dof.free].tocsc()
    D = S[dof.free].tocsr()
    return A, D


class QuadratureSpace:
    """Interpolation to, and weighted integration from, all quadrature points of a mesh."""

    def __init__(self, mesh: TriMesh, quad: Quadrature = DEGREE5):
        self.mesh = mesh
        self.quad = quad
        _, area = p1_gradients(mesh)
        self.areas = area
        nt, nq = mesh.n_triangles, len(quad.weights)
        lam = quad.points
        self.points = np.einsum("qi,tid->tqd", lam, mesh.nodes[mesh.triangles]).reshape(-1, 2)
        rows = np.repeat(np.arange(nt * nq), 3)
        cols = np.repeat(mesh.triangles, nq, axis=0).ravel()
        vals = np.tile(lam.ravel(), nt)
        self.interp = sps.csr_matrix((vals, (rows, cols)), shape=(nt * nq, mesh.n_nodes))
        self.point_weights = (area[:, None] * quad.weights[None, :]).ravel()
        self.integrate_basis = (self.interp.T @ sps.diags(self.point_weights)).tocsr()

    @property
    def shape(self):
        return self.mesh.n_triangles, len(self.quad.weights)

    def evaluate(self, fn, what="function") -> np.ndarray:
        vals = np.asarray(fn(self.points[:, 0], self.points[:, 1]), dtype=float)
        vals = np.broadcast_to(vals, (len(self.points),))
        _check_finite(vals, self, what)
        return vals

    def at_points(self, nodal: np.ndarray) -> np.ndarray:
        return self.interp @ nodal

    def integral(self, values: np.ndarray) -> float:
        return float(self.point_weights @ values)


def _check_finite(vals, space: QuadratureSpace, what: str):
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        k = int(bad[0])
        elem = k // space.shape[1]
        x, y = space.points[k]
        raise FloatingPointError(
            f"non-finite {what} value {vals[k]} in element {elem} at ({x:.6g}, {y:.6g})")


def assemble_load(mesh: TriMesh, dof: DofMap, f, space: QuadratureSpace | None = None) -> np.ndarray:
    space = space or QuadratureSpace(mesh)
    return (space.integrate_basis @ space.evaluate(f, "source"))[dof.free]


def assemble_neumann(mesh: TriMesh, dof: DofMap, bc: BoundarySpec, order: int = 3) -> np.ndarray:
    """Edge integrals of g * phi over the Neumann sides."""
    out = np.zeros(mesh.n_nodes)
    sel = np.isin(mesh.edge_sides, bc.neumann_sides)
    if sel.any():
        e = mesh.boundary_edges[sel]
        p0, p1 = mesh.nodes[e[:, 0]], mesh.nodes[e[:, 1]]
        length = np.linalg.norm(p1 - p0, axis=1)
        t, w = edge_gauss(order)
        pts = p0[:, None, :] + t[None, :, None] * (p1 - p0)[:, None, :]
        g = np.asarray(bc.neumann(pts[..., 0], pts[..., 1]), dtype=float)
        g = np.broadcast_to(g, pts.shape[:2])
        if not np.all(np.isfinite(g)):
            raise FloatingPointError("non-finite Neumann data on boundary edge")
        gw = g * w[None, :] * length[:, None]
        np.add.at(out, e[:, 0], gw @ (1.0 - t))
        np.add.at(out, e[:, 1], gw @ t)
    return out[dof.free]


def interpolate(mesh: TriMesh, fn) -> np.ndarray:
    return np.asarray(fn(mesh.nodes[:, 0], mesh.nodes[:, 1]), dtype=float) * np.ones(mesh.n_nodes)


def reaction_at_points(space: QuadratureSpace, r, field: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        vals = np.asarray(r(space.at_points(field)), dtype=float)
    vals = np.broadcast_to(vals, (len(space.points),))
    _check_finite(vals, space, "reaction")
    return vals


def assemble_reaction(mesh: TriMesh, dof: DofMap, r, field: np.ndarray,
                      space: QuadratureSpace | None = None) -> np.ndarray:
    """B(field)_z = int r(field_h) phi_z over free nodes z, by triangle quadrature."""
    space = space or QuadratureSpace(mesh)
    return (space.integrate_basis @ reaction_at_points(space, r, field))[dof.free]


def l2_error(mesh: TriMesh, field: np.ndarray, exact, space: QuadratureSpace | None = None) -> float:
    space = space or QuadratureSpace(mesh)
    diff = space.at_points(field) - space.evaluate(exact, "exact solution")
    return float(np.sqrt(space.integral(diff * diff)))


def h1_seminorm(mesh: TriMesh, field: np.ndarray) -> float:
    S = full_stiffness(mesh)
    return float(np.sqrt(max(field @ (S @ field), 0.0)))


@dataclass
class DiscreteSystem:
    """Assembled pieces of R(alpha) = A alpha + B(alpha) - beta - gamma + D alpha_D.

    ``shift`` is an optional extra term int g phi that is added to both the
    reaction and the load (the source-splitting transformation); it cancels
    in the residual but changes what the zeroth ADM mode sees.
    """

    mesh: TriMesh
    bc: BoundarySpec
    dof: DofMap
    space: QuadratureSpace
    A: sps.csc_matrix
    D: sps.csr_matrix
    alpha_d: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    shift: np.ndarray | None = None
    solver_method: str = "direct"
    _factor: linalg.Factorization | None = field(default=None, repr=False)

    @cached_property
    def lift(self) -> np.ndarray:
        return self.D @ self.alpha_d

    @property
    def factor(self) -> linalg.Factorization:
        if self._factor is None:
            self._factor = linalg.factor(self.A, method=self.solver_method)
        return self._factor

    @property
    def rhs(self) -> np.ndarray:
        """beta + gamma - D alpha_D: right-hand side of the r = 0 problem."""
        return self.beta + self.gamma - self.lift

    def full(self, alpha: np.ndarray) -> np.ndarray:
        return self.dof.extend(alpha, self.alpha_d)

    def homogeneous(self, alpha: np.ndarray) -> np.ndarray:
        return self.dof.extend(alpha, np.zeros(self.dof.n_all))

    def reaction(self, r, alpha: np.ndarray) -> np.ndarray:
        return assemble_reaction(self.mesh, self.dof, r, self.full(alpha), self.space)

    def l2_error(self, field: np.ndarray, exact) -> float:
        return l2_error(self.mesh, field, exact, self.space)


def assemble_system(mesh: TriMesh, bc: BoundarySpec, f, quad: Quadrature = DEGREE5,
                    solver_method: str = "direct", shift_fn=None) -> DiscreteSystem:
    dof = build_dof_map(mesh, bc)
    space = QuadratureSpace(mesh, quad)
    A, D = assemble_stiffness(mesh, dof)
    alpha_d = np.zeros(mesh.n_nodes)
    alpha_d[dof.fixed] = interpolate(mesh, bc.dirichlet)[dof.fixed]
    beta = assemble_load(mesh, dof, f, space)
    gamma = assemble_neumann(mesh, dof, bc)
    shift = None if shift_fn is None else assemble_load(mesh, dof, shift_fn, space)
    return DiscreteSystem(mesh, bc, dof, space, A, D, alpha_d, beta, gamma,
                          shift=shift, solver_method=solver_method)


def residual(sys: DiscreteSystem, r, alpha: np.ndarray) -> np.ndarray:
    """Free-node defect of the discrete weak form; zero at a Galerkin solution."""
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (sys.dof.n_free,):
        raise ValueError(f"alpha has shape {alpha.shape}, expected ({sys.dof.n_free},)")
    return sys.A @ alpha + sys.reaction(r, alpha) - sys.beta - sys.gamma + sys.lift
