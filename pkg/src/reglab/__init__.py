"""reglab: Mahler measures, regulator forms, and L-value verification.

The package computes multivariate (logarithmic) Mahler measures, evaluates
the Deninger/Goncharov regulator differential forms, integrates them over
the boundary of the Deninger chain, certifies residue vanishing for the
exactness cocycle of the polynomial (x+1)(y+1)(z+1)+t, evaluates the
relevant L-values, and runs integer-relation detection on the resulting
constants.
"""

__version__ = "0.1.0"

__all__ = [
    "numerics",
    "symbolic",
    "residues",
    "forms",
    "quadrature",
    "lfunctions",
    "lattice",
    "k3",
    "cli",
]
