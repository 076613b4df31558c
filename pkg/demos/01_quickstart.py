# # Differential network at one frequency
#
# Two small VAR(1) processes that differ in a single 3x3 block. We estimate
# their spectral densities at one Fourier frequency, solve the penalised
# D-trace problem along a penalty path and compare the selected estimate
# with the closed-form truth.

# + {"tags": ["parameters"]}
p = 9
n = 3000
freq = 0.8  # radians
seed = 11

# -
import numpy as np

from sddnet import SimSetting, build_setting, expanded_spectra, score, simulate_var1, tune_sdd
from sddnet.spectral import default_bandwidth, fourier_index_for_radians
from sddnet.varsim import condition_seeds, true_difference

# +
A1, A2 = build_setting(SimSetting(1, p=p))
s1, s2 = condition_seeds(seed)
x1 = simulate_var1(A1, n, seed=s1)
x2 = simulate_var1(A2, n, seed=s2)
print(x1.data.shape, x2.data.shape)

# -
# Smoothed periodograms, in the real 2p x 2p embedding.
j = fourier_index_for_radians(freq, n)
M = default_bandwidth(n)
S1 = expanded_spectra(x1, [j], M)[0]
S2 = expanded_spectra(x2, [j], M)[0]
print(f"index {j}, bandwidth {M}, condition numbers "
      f"{np.linalg.cond(S1.matrix):.1f} / {np.linalg.cond(S2.matrix):.1f}")

# +
path = tune_sdd(S1, S2, n, n)
for r in path.records:
    mark = "*" if r is path.selected else " "
    print(f"{mark} tau={r.tau:9.4g}  edges={r.edge_count:3d}  eBIC={r.ebic:9.2f}")

# -
# Only the last block differs, so the truth is supported on a 3x3 corner.
lam = 2 * np.pi * j / n
truth = true_difference(A1, A2, lam)
est = path.best
print(np.round(est.delta_complex[-3:, -3:], 2))
print(np.round(truth.matrix[p - 3:p, p - 3:p] + 1j * truth.matrix[2 * p - 3:, p - 3:p], 2))

# +
r = score(est, truth)
print(f"precision {r.precision:.2f}  recall {r.recall:.2f}  RRMSE {r.rrmse:.2f}")
