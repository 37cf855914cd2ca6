"""Backend selector for the double-precision dilogarithm kernels.

Prefers the compiled extension; falls back to the NumPy implementation with
an identical interface. ``BACKEND`` reports which one is active.
"""

import numpy as np

try:  # pragma: no cover - depends on build environment
    from . import _fastmath as _impl
except ImportError:  # pragma: no cover
    from . import _slowmath as _impl

BACKEND = _impl.BACKEND


def _apply(fn, z):
    arr = np.asarray(z, dtype=np.complex128)
    scalar = arr.ndim == 0
    out = fn(arr.reshape(-1))
    if scalar:
        return out[0]
    return out.reshape(arr.shape)


def li2(z):
    """Double-precision principal-branch dilogarithm, elementwise."""
    return _apply(_impl.li2_flat, z)


def bloch_wigner(z):
    """Double-precision Bloch-Wigner D(z), elementwise."""
    return _apply(_impl.bw_flat, z)


def clausen2(theta):
    """Cl2(theta) = D(exp(i theta)), elementwise on real input."""
    th = np.asarray(theta, dtype=np.float64)
    return bloch_wigner(np.exp(1j * th))
