"""Estimating the integrated copula spectrum of a nonlinear series.

The integrated spectrum cumulates cross-periodograms of quantile indicator
processes up to a frequency cutoff, so it needs no smoothing bandwidth.
Its imaginary part is identically zero for time-reversible dynamics, which
makes it a direct probe of nonlinearity that ordinary spectra cannot see.
"""

import numpy as np

from copspec import FrequencyGrid, QuantileGrid, generate, iid_truth, integrated_spectrum

fgrid = FrequencyGrid(32)
qgrid = QuantileGrid((0.125, 0.5, 0.875))

# A quantile-autoregressive series: the AR coefficient depends on the
# innovation's quantile level, so lower and upper tails behave differently.
x = generate("M1", 1024, seed=7)
surface = integrated_spectrum(x, fgrid, qgrid)

print("integrated copula spectrum of a QAR(1) series, n = 1024")
print("frequency grid: 2*pi*ell/32, ell = 0..16")
print()
print("Re at the median pair (0.5, 0.5) against the independence line:")
i = qgrid.index_of(0.5)
for ell in (0, 4, 8, 12, 16):
    lam = fgrid.lam(ell)
    est = surface.entries[ell, i, i].real
    flat = iid_truth(lam, 0.5, 0.5)
    print(f"  lambda = {lam:5.3f}   estimate {est: .4f}   iid value {flat: .4f}")

print()
print("imaginary part at the cross-tail pair (0.125, 0.875):")
lo, hi = qgrid.index_of(0.125), qgrid.index_of(0.875)
for ell in (4, 8, 12, 16):
    print(f"  lambda = {fgrid.lam(ell):5.3f}   Im {surface.entries[ell, lo, hi].imag: .4f}")
print("nonzero imaginary parts signal time-irreversible dynamics")

# Rank invariance: any strictly increasing marginal transform leaves the
# estimate untouched, because only the ranks enter.
y = np.exp(x / 2)
same = integrated_spectrum(y, fgrid, qgrid)
print()
print("max |difference| after exp-transforming the data:",
      float(np.max(np.abs(surface.entries - same.entries))))
