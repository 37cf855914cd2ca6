"""Shared coefficient tables for the double-precision dilogarithm kernels."""

import mpmath

# Power series Li2(z) = sum z^k / k^2: number of terms used at |z| <= 0.6.
SERIES_TERMS = 96

# Debye series Li2(z) = sum_k B_k u^(k+1) / (k+1)!, u = -log(1-z).
# BERN_COEF[k] = B_k / (k+1)! as a double; odd entries beyond k=1 vanish.
BERN_TERMS = 64
BERN_COEF = [
    float(mpmath.bernoulli(k) / mpmath.factorial(k + 1)) for k in range(BERN_TERMS)
]

PI2_6 = float(mpmath.pi**2 / 6)
