"""
Second-order convergence in L2
==============================

The same data ``bench conv`` writes, computed in-process.
"""
import numpy as np

from vadm import compare_methods, get_problem
from vadm.bench import convergence_slope

sizes = [8, 16, 32, 64]
for name in ("test1", "test2", "test3", "test4"):
    rows = compare_methods(get_problem(name), sizes)
    err = [r.adm.l2_error for r in rows]
    h = [1 / (n * np.sqrt(2)) for n in sizes]
    print(f"{name}: " + "  ".join(f"{e:.2e}" for e in err),
          f"  slope {convergence_slope(h, err):.2f}")
