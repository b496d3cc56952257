"""Quadrature rules on the reference triangle and on boundary edges."""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Quadrature:
    """Triangle rule in barycentric form; weights sum to 1 (multiply by |tau|)."""

    points: np.ndarray   # (nq, 3) barycentric coordinates
    weights: np.ndarray  # (nq,)
    degree: int


def _strang_fix_7() -> Quadrature:
    r = np.sqrt(15.0)
    a, b = (6.0 - r) / 21.0, (6.0 + r) / 21.0
    wa, wb = (155.0 - r) / 1200.0, (155.0 + r) / 1200.0
    pts = [(1 / 3, 1 / 3, 1 / 3)]
    wts = [9.0 / 40.0]
    for c, w in ((a, wa), (b, wb)):
        d = 1.0 - 2.0 * c
        pts += [(c, c, d), (c, d, c), (d, c, c)]
        wts += [w, w, w]
    return Quadrature(np.array(pts), np.array(wts), 5)


DEGREE5 = _strang_fix_7()
CENTROID = Quadrature(np.array([[1 / 3, 1 / 3, 1 / 3]]), np.array([1.0]), 1)


def collapsed_gauss(order: int) -> Quadrature:
    """Duffy-collapsed tensor Gauss-Legendre rule, exact to degree 2*order - 2."""
    t, w = np.polynomial.legendre.leggauss(order)
    t = 0.5 * (t + 1.0)
    w = 0.5 * w
    s, v = np.meshgrid(t, t, indexing="ij")
    ws, wv = np.meshgrid(w, w, indexing="ij")
    # (s, v) in unit square -> (x, y) = (s, (1 - s) v) in reference triangle
    x = s.ravel()
    y = ((1.0 - s) * v).ravel()
    weights = 2.0 * (ws * wv * (1.0 - s)).ravel()
    bary = np.column_stack([1.0 - x - y, x, y])
    return Quadrature(bary, weights, 2 * order - 2)


def edge_gauss(order: int = 3):
    """Gauss-Legendre nodes on [0, 1] with weights summing to 1."""
    t, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (t + 1.0), 0.5 * w
