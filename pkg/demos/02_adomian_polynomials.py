"""
Adomian polynomials from truncated Taylor series
================================================

P_k is the k-th coefficient of r(psi_0 + lam psi_1 + lam^2 psi_2 + ...) in lam.
Propagating a truncated series through the reaction gives all of them at once.
"""
from fractions import Fraction

from vadm import U, adomian_polynomials, exp, sin

# u^2: P0 = p0^2, P1 = 2 p0 p1, P2 = p1^2 + 2 p0 p2
print(adomian_polynomials(U ** 2, [2.0, 3.0, 5.0]))

# the coefficients are exact when the modes are rationals
print(adomian_polynomials(U ** 2, [Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)]))

# Bratu reaction, psi_0 = 0
modes = [0.0, 0.1, 0.2, 0.3]
print([float(v) for v in adomian_polynomials(-2 * exp(U), modes)])

# expressions compose
r = sin(U) * exp(U) - 3 * U ** 4
print(r, [float(v) for v in adomian_polynomials(r, [0.3, -0.1, 0.2])])
