"""Reaction expressions and Adomian polynomials.

A reaction r(u) is built from the identity ``U`` with arithmetic and the
elementary functions below, e.g. ``r = -sin(U)`` or ``r = U - U**3``.  The
same tree evaluates on floats/arrays and on :class:`~vadm.jet.Jet` objects,
so the Adomian polynomial P_k is just the lambda^k coefficient of
``r(psi_0 + lambda psi_1 + ... + lambda^k psi_k)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from numbers import Number

import numpy as np

from .jet import Jet


class Reaction:
    """Node of a reaction expression tree."""

    def __call__(self, u):
        return self.evaluate(u)

    def evaluate(self, u):
        raise NotImplementedError

    def taylor(self, u, order: int):
        """(r(u), r'(u), r''(u)/2!, ...) up to ``order``."""
        return self.evaluate(Jet.variable(u, order)).c

    def derivative(self, u):
        return self.taylor(u, 1)[1]

    def __add__(self, other):
        return Add(self, as_reaction(other))

    def __radd__(self, other):
        return Add(as_reaction(other), self)

    def __sub__(self, other):
        return Add(self, Neg(as_reaction(other)))

    def __rsub__(self, other):
        return Add(as_reaction(other), Neg(self))

    def __neg__(self):
        return Neg(self)

    def __mul__(self, other):
        return Mul(self, as_reaction(other))

    def __rmul__(self, other):
        return Mul(as_reaction(other), self)

    def __pow__(self, n):
        if int(n) != n or n < 0:
            raise ValueError("reaction powers must be non-negative integers")
        return Pow(self, int(n))


def as_reaction(x) -> Reaction:
    if isinstance(x, Reaction):
        return x
    if isinstance(x, Number):
        return Const(float(x))
    raise TypeError(f"cannot build a reaction from {type(x).__name__}")


@dataclass(frozen=True, eq=False)
class Const(Reaction):
    value: float

    def evaluate(self, u):
        # u * 0 keeps shape and type (array or jet); the constant lands in c_0
        return u * 0 + self.value

    def __repr__(self):
        return repr(self.value)


class Identity(Reaction):
    def evaluate(self, u):
        return u

    def __repr__(self):
        return "u"


@dataclass(frozen=True, eq=False)
class Add(Reaction):
    a: Reaction
    b: Reaction

    def evaluate(self, u):
        return self.a.evaluate(u) + self.b.evaluate(u)

    def __repr__(self):
        return f"({self.a!r} + {self.b!r})"


@dataclass(frozen=True, eq=False)
class Neg(Reaction):
    a: Reaction

    def evaluate(self, u):
        return -self.a.evaluate(u)

    def __repr__(self):
        return f"-{self.a!r}"


@dataclass(frozen=True, eq=False)
class Mul(Reaction):
    a: Reaction
    b: Reaction

    def evaluate(self, u):
        a = self.a
        if isinstance(a, Const):
            return self.b.evaluate(u) * a.value
        return a.evaluate(u) * self.b.evaluate(u)

    def __repr__(self):
        return f"{self.a!r}*{self.b!r}"


@dataclass(frozen=True, eq=False)
class Pow(Reaction):
    a: Reaction
    n: int

    def evaluate(self, u):
        v = self.a.evaluate(u)
        if isinstance(v, Jet):
            return v ** self.n
        return np.power(v, self.n)

    def __repr__(self):
        return f"{self.a!r}**{self.n}"


_NUMPY = {"exp": np.exp, "sin": np.sin, "cos": np.cos, "arctan": np.arctan}


@dataclass(frozen=True, eq=False)
class Fn(Reaction):
    name: str
    a: Reaction

    def evaluate(self, u):
        v = self.a.evaluate(u)
        if isinstance(v, Jet):
            return getattr(v, self.name)()
        return _NUMPY[self.name](v)

    def __repr__(self):
        return f"{self.name}({self.a!r})"


U = Identity()


def exp(a) -> Reaction:
    return Fn("exp", as_reaction(a))


def sin(a) -> Reaction:
    return Fn("sin", as_reaction(a))


def cos(a) -> Reaction:
    return Fn("cos", as_reaction(a))


def arctan(a) -> Reaction:
    return Fn("arctan", as_reaction(a))


def zero_reaction() -> Reaction:
    return Const(0.0)


def is_trivial(r: Reaction) -> bool:
    return isinstance(r, Const) and r.value == 0.0


def adomian_polynomials(r: Reaction, modes) -> list:
    """P_0 .. P_K for modes psi_0 .. psi_K (floats, arrays or ring elements)."""
    with np.errstate(over="ignore", invalid="ignore"):
        out = r.evaluate(Jet(list(modes)))
    return out.c if isinstance(out, Jet) else [out] + [out * 0] * (len(modes) - 1)


def adomian_coefficient(r: Reaction, point_modes) -> float:
    """P_k at one point, where k = len(point_modes) - 1."""
    p = adomian_polynomials(r, [float(m) for m in point_modes])[-1]
    if not np.isfinite(p):
        raise FloatingPointError(f"non-finite Adomian polynomial P_{len(point_modes) - 1}: {p}")
    return float(p)


class ModeSeries:
    """Append-only list of ADM modes as full nodal fields."""

    def __init__(self, modes=None):
        self.modes: list[np.ndarray] = list(modes or [])

    def append(self, mode: np.ndarray) -> None:
        self.modes.append(np.asarray(mode, dtype=float))

    def __len__(self):
        return len(self.modes)

    def __getitem__(self, k):
        return self.modes[k]

    def partial_sum(self, M: int) -> np.ndarray:
        if not 0 <= M < len(self.modes):
            raise IndexError(f"partial sum {M} needs modes 0..{M}, have {len(self.modes)}")
        s = self.modes[0].copy()
        for m in self.modes[1:M + 1]:
            s += m
        return s


def adomian_field(r: Reaction, series: ModeSeries, k: int, space, points_cache=None) -> np.ndarray:
    """P_k at every quadrature point of ``space`` from the P1-interpolated modes 0..k.

    ``points_cache`` may hold already-interpolated modes (list of arrays) and
    is extended in place.
    """
    if k >= len(series):
        raise ValueError(f"P_{k} needs modes 0..{k}, series holds {len(series)}")
    cache = points_cache if points_cache is not None else []
    while len(cache) <= k:
        cache.append(space.at_points(series[len(cache)]))
    vals = np.asarray(adomian_polynomials(r, cache[:k + 1])[k], dtype=float)
    vals = np.broadcast_to(vals, (len(space.points),))
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        elem = int(bad[0]) // space.shape[1]
        raise FloatingPointError(f"non-finite P_{k} in element {elem}")
    return vals
