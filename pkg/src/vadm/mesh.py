"""Structured triangulations of the unit square and degree-of-freedom maps."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

SIDES = ("L", "R", "B", "T")
DIRICHLET = "dirichlet"
NEUMANN = "neumann"

ScalarFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _zero(x, y):
    return np.zeros(np.broadcast(x, y).shape)


@dataclass(frozen=True)
class TriMesh:
    """Triangulation of [0, 1]^2.

    ``triangles`` are counterclockwise node triples; ``boundary_edges`` holds
    node pairs and ``edge_sides`` the matching side tag (one of ``SIDES``).
    """

    nodes: np.ndarray
    triangles: np.ndarray
    boundary_edges: np.ndarray
    edge_sides: np.ndarray
    n_per_side: int

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def signed_areas(self) -> np.ndarray:
        p = self.nodes[self.triangles]
        e1 = p[:, 1] - p[:, 0]
        e2 = p[:, 2] - p[:, 0]
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])

    def areas(self) -> np.ndarray:
        return np.abs(self.signed_areas())

    @property
    def h(self) -> float:
        """Mesh parameter: largest sqrt(|tau|) over all triangles."""
        return float(np.sqrt(self.areas().max()))

    def side_nodes(self, side: str) -> np.ndarray:
        return np.unique(self.boundary_edges[self.edge_sides == side])

    def dump(self, path) -> None:
        """Write a debug listing: one ``x y`` line per node, then one ``i j k`` per triangle."""
        with open(path, "w") as fh:
            fh.write(f"{self.n_nodes} {self.n_triangles}\n")
            for x, y in self.nodes:
                fh.write(f"{x!r} {y!r}\n")
            for i, j, k in self.triangles:
                fh.write(f"{i} {j} {k}\n")


def build_unit_square_mesh(n_per_side: int) -> TriMesh:
    """Split an n x n grid of square cells along the bottom-left/top-right diagonal."""
    n = int(n_per_side)
    if n != n_per_side or n < 1:
        raise ValueError(f"n_per_side must be a positive integer, got {n_per_side!r}")

    # exact grid coordinates: i/n rather than cumulative spacing
    s = np.arange(n + 1) / n
    X, Y = np.meshgrid(s, s, indexing="xy")
    nodes = np.column_stack([X.ravel(), Y.ravel()])

    def idx(i, j):
        return j * (n + 1) + i

    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="xy")
    i, j = i.ravel(), j.ravel()
    bl, br, tl, tr = idx(i, j), idx(i + 1, j), idx(i, j + 1), idx(i + 1, j + 1)
    lower = np.column_stack([bl, br, tr])
    upper = np.column_stack([bl, tr, tl])
    triangles = np.empty((2 * n * n, 3), dtype=np.int64)
    triangles[0::2] = lower
    triangles[1::2] = upper

    k = np.arange(n)
    edges = np.concatenate([
        np.column_stack([idx(0, k + 1), idx(0, k)]),      # L, top to bottom
        np.column_stack([idx(n, k), idx(n, k + 1)]),      # R
        np.column_stack([idx(k, 0), idx(k + 1, 0)]),      # B
        np.column_stack([idx(k + 1, n), idx(k, n)]),      # T
    ])
    sides = np.repeat(np.array(SIDES), n)
    return TriMesh(nodes, triangles, edges.astype(np.int64), sides, n)


@dataclass(frozen=True)
class BoundarySpec:
    """Per-side boundary condition with Dirichlet data and Neumann flux.

    ``neumann`` is the outward normal derivative n . grad(psi) on Neumann
    sides, entering the weak form as ``+ int g w dl``.
    """

    kinds: Mapping[str, str]
    dirichlet: ScalarFn = _zero
    neumann: ScalarFn = _zero

    def __post_init__(self):
        if set(self.kinds) != set(SIDES):
            raise ValueError(f"boundary kinds must cover exactly {SIDES}")
        bad = {k: v for k, v in self.kinds.items() if v not in (DIRICHLET, NEUMANN)}
        if bad:
            raise ValueError(f"unknown boundary kinds: {bad}")
        if not self.dirichlet_sides:
            raise ValueError("at least one side must be Dirichlet")

    @classmethod
    def all_dirichlet(cls, dirichlet: ScalarFn = _zero) -> "BoundarySpec":
        return cls({s: DIRICHLET for s in SIDES}, dirichlet=dirichlet)

    @property
    def dirichlet_sides(self) -> tuple:
        return tuple(s for s in SIDES if self.kinds[s] == DIRICHLET)

    @property
    def neumann_sides(self) -> tuple:
        return tuple(s for s in SIDES if self.kinds[s] == NEUMANN)


@dataclass(frozen=True)
class DofMap:
    n_all: int
    free: np.ndarray
    fixed: np.ndarray
    _position: np.ndarray = field(repr=False)

    @property
    def n_free(self) -> int:
        return len(self.free)

    def extend(self, alpha: np.ndarray, alpha_d: np.ndarray) -> np.ndarray:
        """Full nodal field from free values and full-length Dirichlet values."""
        u = np.array(alpha_d, dtype=float, copy=True)
        u[self.free] = alpha
        return u

    def restrict(self, field: np.ndarray) -> np.ndarray:
        return np.asarray(field)[self.free]


def build_dof_map(mesh: TriMesh, bc: BoundarySpec) -> DofMap:
    """Free nodes are those not touching any Dirichlet edge (corners go to Dirichlet)."""
    on_dirichlet = np.isin(mesh.edge_sides, bc.dirichlet_sides)
    fixed = np.unique(mesh.boundary_edges[on_dirichlet])
    mask = np.ones(mesh.n_nodes, dtype=bool)
    mask[fixed] = False
    free = np.flatnonzero(mask)
    position = np.full(mesh.n_nodes, -1, dtype=np.int64)
    position[free] = np.arange(len(free))
    return DofMap(mesh.n_nodes, free, fixed, position)
