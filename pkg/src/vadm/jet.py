"""Truncated power series in a formal parameter.

A :class:`Jet` of order K holds c_0 .. c_K.  Coefficients can be floats,
numpy arrays (one jet per quadrature point, vectorised) or any exact ring
element supporting ``+``, ``-`` and ``*`` (e.g. ``Fraction`` or a rational
polynomial).  The elementary functions need ``numpy`` on c_0 and therefore
only make sense for float coefficients.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np


class Jet:
    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence):
        if len(coeffs) == 0:
            raise ValueError("a jet needs at least one coefficient")
        self.c = list(coeffs)

    @classmethod
    def variable(cls, value, order: int) -> "Jet":
        """Seed (value, 1, 0, ...): the Taylor coefficients of the identity at ``value``."""
        zero = value * 0
        return cls([value, zero + 1] + [zero] * (order - 1)) if order else cls([value])

    @property
    def order(self) -> int:
        return len(self.c) - 1

    def __len__(self):
        return len(self.c)

    def __getitem__(self, k):
        return self.c[k]

    def __repr__(self):
        return f"Jet({self.c!r})"

    def _zero(self):
        return self.c[0] * 0

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        return Jet([self._zero() + other] + [self._zero()] * self.order)

    def __add__(self, other):
        o = self._coerce(other)
        n = min(len(self), len(o))
        return Jet([a + b for a, b in zip(self.c[:n], o.c[:n])])

    __radd__ = __add__

    def __neg__(self):
        return Jet([-a for a in self.c])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet([a * other for a in self.c])
        n = min(len(self), len(other))
        a, b = self.c, other.c
        out = []
        for k in range(n):
            s = a[0] * b[k]
            for j in range(1, k + 1):
                s = s + a[j] * b[k - j]
            out.append(s)
        return Jet(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if int(n) != n or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = self._coerce(1)
        base = self
        n = int(n)
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def exp(self) -> "Jet":
        a = self.c
        e = [np.exp(a[0])]
        for k in range(1, len(a)):
            s = a[1] * e[k - 1]
            for j in range(2, k + 1):
                s = s + j * a[j] * e[k - j]
            e.append(s / k)
        return Jet(e)

    def sincos(self):
        a = self.c
        s, c = [np.sin(a[0])], [np.cos(a[0])]
        for k in range(1, len(a)):
            ss = a[1] * c[k - 1]
            cc = a[1] * s[k - 1]
            for j in range(2, k + 1):
                ss = ss + j * a[j] * c[k - j]
                cc = cc + j * a[j] * s[k - j]
            s.append(ss / k)
            c.append(-cc / k)
        return Jet(s), Jet(c)

    def sin(self) -> "Jet":
        return self.sincos()[0]

    def cos(self) -> "Jet":
        return self.sincos()[1]

    def arctan(self) -> "Jet":
        # a' (1 + u^2) = u'
        a = self.c
        w = (self * self + 1).c
        d = []  # d[m] = (m + 1) * coefficient m + 1 of arctan
        for m in range(len(a) - 1):
            s = (m + 1) * a[m + 1]
            for j in range(m):
                s = s - d[j] * w[m - j]
            d.append(s / w[0])
        return Jet([np.arctan(a[0])] + [d[m] / (m + 1) for m in range(len(d))])
