"""Information-budget arithmetic: lengths, the log bound, Lambert W, crossovers."""

import numpy as np

from satinfolab import metrics

ns = np.array([4, 8, 16, 64, 256, 1024])
for n in ns.tolist():
    print(f"n={n:5d} log-length={metrics.logarithmic_length(n):9d} "
          f"15 n log2 n={metrics.bound15(n):11.1f} holds={metrics.bound15_holds(n)}")
print("first n from which the 15 n log2 n bound holds:", metrics.bound15_threshold())

print("d =", metrics.D)
for L in (10 ** 3, 10 ** 6, 10 ** 9):
    print(f"L={L:>10}  n >= {metrics.n_lower_bound(L)}   W(L)={metrics.lambert_w(float(L)):.6f}")

c = metrics.crossover(1000, 64, [0, 0, 0, 1])
print("crossover for a 1000-bit algorithm at rho=64, p(x)=x^3:", c)
print("permutation information:", [metrics.permutation_info(n) for n in (1, 2, 5, 10, 20)])
print("n=30 bracket:", metrics.permutation_info(30))
