"""
psi' = psi^2, psi(0) = 1 in exact arithmetic
=============================================

ADM modes are the monomials x^k, so the partial sums are the geometric series
of 1/(1 - x) and the error shrinks by a factor x per mode.  Picard iterates
double their degree every sweep.
"""
from vadm.demo1d import adm_modes_1d, convergence_order_1d, picard_iterates_1d

print([str(m) for m in adm_modes_1d(4)])

for M, p in enumerate(picard_iterates_1d(4)):
    print(M, p.degree, [str(c) for c in p.coeffs[:8]])

fit = convergence_order_1d(0.5, 30)
print("order", round(fit["alpha"], 6), "rate", round(fit["rate"], 6))
print("last ratios", fit["ratios"][-3:])
