"""ADM versus Picard on psi' = psi^2, psi(0) = 1, in exact rational arithmetic.

The exact solution is 1 / (1 - x).  ADM modes come out as the monomials
x^k; Picard iterates double their degree each sweep.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .adomian import U, adomian_polynomials


class RationalPoly:
    """Univariate polynomial with exact rational coefficients, ascending powers.

    Stored as integer numerators over one common positive denominator, which
    keeps products in fast integer arithmetic.
    """

    __slots__ = ("num", "den")

    def __init__(self, coeffs: Iterable = (0,)):
        c = [Fraction(v) for v in coeffs] or [Fraction(0)]
        den = math.lcm(*(q.denominator for q in c))
        self._set([q.numerator * (den // q.denominator) for q in c], den)

    def _set(self, num, den):
        while len(num) > 1 and num[-1] == 0:
            num.pop()
        g = math.gcd(den, *num)
        if g > 1:
            num = [v // g for v in num]
            den //= g
        self.num, self.den = num, den

    @classmethod
    def _raw(cls, num, den) -> "RationalPoly":
        p = cls.__new__(cls)
        p._set(num, den)
        return p

    @classmethod
    def monomial(cls, k: int, coeff=1) -> "RationalPoly":
        return cls([0] * k + [coeff])

    @property
    def coeffs(self) -> list[Fraction]:
        return [Fraction(v, self.den) for v in self.num]

    @property
    def degree(self) -> int:
        if len(self.num) == 1 and self.num[0] == 0:
            return -1
        return len(self.num) - 1

    def __repr__(self):
        terms = [f"{c}*x^{k}" for k, c in enumerate(self.coeffs) if c != 0]
        return "RationalPoly(" + (" + ".join(terms) or "0") + ")"

    def __eq__(self, other):
        if not isinstance(other, RationalPoly):
            other = RationalPoly([other])
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((tuple(self.num), self.den))

    def _lift(self, other) -> "RationalPoly":
        return other if isinstance(other, RationalPoly) else RationalPoly([other])

    def __add__(self, other):
        o = self._lift(other)
        den = math.lcm(self.den, o.den)
        a = [v * (den // self.den) for v in self.num]
        b = [v * (den // o.den) for v in o.num]
        if len(a) < len(b):
            a, b = b, a
        return RationalPoly._raw([x + y for x, y in zip(a, b)] + a[len(b):], den)

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly._raw([-v for v in self.num], self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, RationalPoly):
            q = Fraction(other)
            return RationalPoly._raw([v * q.numerator for v in self.num], self.den * q.denominator)
        a, b = self.num, other.num
        if other is self:
            return RationalPoly._raw(_square(a), self.den * self.den)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return RationalPoly._raw(out, self.den * other.den)

    __rmul__ = __mul__

    def integrate(self) -> "RationalPoly":
        """Antiderivative vanishing at 0."""
        L = math.lcm(*range(1, len(self.num) + 1))
        return RationalPoly._raw([0] + [v * (L // (k + 1)) for k, v in enumerate(self.num)],
                                 self.den * L)

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        acc = 0.0
        for v in reversed(self.num):
            acc = acc * x + v
        return acc / self.den


def _square(a):
    n = len(a)
    out = [0] * (2 * n - 1)
    for i in range(n):
        x = a[i]
        if not x:
            continue
        out[2 * i] += x * x
        x2 = 2 * x
        for j in range(i + 1, n):
            out[i + j] += x2 * a[j]
    return out


def adm_modes_1d(M: int) -> list[RationalPoly]:
    """psi_0 = 1, psi_k = int_0^x P_{k-1} for the reaction u^2."""
    if M < 0:
        raise ValueError("M must be >= 0")
    modes = [RationalPoly([1])]
    r = U ** 2
    for k in range(1, M + 1):
        P = adomian_polynomials(r, modes)[k - 1]
        modes.append(P.integrate())
    return modes


def partial_sum(modes: Sequence[RationalPoly], M: int) -> RationalPoly:
    s = RationalPoly([0])
    for m in modes[:M + 1]:
        s = s + m
    return s


def picard_iterates_1d(M: int) -> list[RationalPoly]:
    """psi~_0 = 1 (from psi~_{-1} = 0), psi~_k = 1 + int_0^x psi~_{k-1}^2."""
    if M < 0:
        raise ValueError("M must be >= 0")
    its = [RationalPoly([1])]
    for _ in range(M):
        prev = its[-1]
        its.append(1 + (prev * prev).integrate())
    return its


def _log_abs(q: Fraction) -> float:
    q = abs(q)
    return math.log(q.numerator) - math.log(q.denominator)


def adm_errors_1d(x, M_max: int) -> list[Fraction]:
    """Exact |psi^_M(x) - 1/(1 - x)| for M = 0..M_max."""
    xq = Fraction(x)
    if not 0 < xq < 1:
        raise ValueError("x must lie in (0, 1); the series diverges for |x| >= 1")
    exact = 1 / (1 - xq)
    errs, s = [], Fraction(0)
    for mode in adm_modes_1d(M_max):
        s += mode(xq)
        errs.append(abs(s - exact))
    return errs


def error_ratios_1d(x, M_max: int, alpha: float = 1.0) -> np.ndarray:
    """|psi^_{M+1} - psi| / |psi^_M - psi|^alpha for M = 0..M_max - 1."""
    logs = np.array([_log_abs(e) for e in adm_errors_1d(x, M_max)])
    return np.exp(logs[1:] - alpha * logs[:-1])


def convergence_order_1d(x, M_max: int = 30) -> dict:
    """Fit log e_{M+1} = alpha log e_M + log rate over the ADM errors at x."""
    errs = adm_errors_1d(x, M_max)
    logs = np.array([_log_abs(e) for e in errs])
    alpha, log_rate = np.polyfit(logs[:-1], logs[1:], 1)
    exact_ratios = [float(errs[k + 1] / errs[k]) for k in range(M_max)]
    return {"x": float(x), "alpha": float(alpha), "rate": float(np.exp(log_rate)),
            "ratios": exact_ratios}
