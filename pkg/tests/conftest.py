"""Shared brute-force oracles, kept deliberately independent of the library
implementation: definitional double loops and direct DFT sums only."""

import cmath
import math

import numpy as np


def brute_ecdf(window):
    """Definitional double-loop empirical cdf values."""
    m = len(window)
    return np.array([sum(1 for xi in window if xi <= xt) / m for xt in window])


def brute_dft(bits, s):
    """Direct DFT sum of one indicator column at frequency 2*pi*s/m."""
    m = len(bits)
    return sum(bits[t] * cmath.exp(-2j * math.pi * s * t / m) for t in range(m))


def brute_surface_value(x, ell, d, tau1, tau2):
    """Definitional integrated estimator at one grid point (no FFT)."""
    m = len(x)
    ecdf = brute_ecdf(x)
    bits1 = [1.0 if e <= tau1 else 0.0 for e in ecdf]
    bits2 = [1.0 if e <= tau2 else 0.0 for e in ecdf]
    total = 0.0 + 0.0j
    for s in range(1, m):
        if s * d <= ell * m:
            total += brute_dft(bits1, s) * brute_dft(bits2, s).conjugate() / (2 * math.pi * m)
    return total * (2 * math.pi / m)


def brute_rank_cumulant(x, k, tau1, tau2):
    """Definitional lag covariance of centered indicators."""
    m = len(x)
    ecdf = brute_ecdf(x)
    total, count = 0.0, 0
    for t in range(m):
        if 0 <= t + k < m:
            total += (float(ecdf[t + k] <= tau1) - tau1) * (float(ecdf[t] <= tau2) - tau2)
            count += 1
    return total / count


def brute_tr_statistic(x, d, ells, pairs, weight_fn):
    """Direct evaluation of the time-reversibility statistic."""
    n = len(x)
    best = 0.0
    for ell in ells:
        for tau1, tau2 in pairs:
            value = brute_surface_value(x, ell, d, tau1, tau2)
            best = max(best, abs(value.imag) / weight_fn(tau1, tau2))
    return math.sqrt(n) * best


def brute_eq_statistic(x, d, ells, pairs, weight_fn):
    """Direct evaluation of the tail-symmetry statistic."""
    n = len(x)
    best = 0.0
    for ell in ells:
        for tau1, tau2 in pairs:
            lo = brute_surface_value(x, ell, d, tau1, tau2)
            hi = brute_surface_value(x, ell, d, 1.0 - tau1, 1.0 - tau2)
            best = max(best, abs(lo - hi) / weight_fn(tau1, tau2))
    return math.sqrt(n) * best


def brute_bs_statistic(x):
    """Direct sup-distance between the pair df and its swap."""
    n = len(x)
    pairs = [(x[t], x[t + 1]) for t in range(n - 1)]

    def fhat(a, b):
        return sum(1 for (u, v) in pairs if u <= a and v <= b) / (n - 1)

    best = 0.0
    for a in x:
        for b in x:
            best = max(best, abs(fhat(a, b) - fhat(b, a)))
    return best
