"""Pointwise evaluation of the regulator differential forms.

Forms are built from log|g|, dlog|g|, d arg g and the Bloch-Wigner
dilogarithm, pulled back through a parametrization of (C*)^n by an open box
in R^k. First derivatives come from forward-mode dual numbers, so the only
numerical error at a point is double-precision roundoff. A k-form is
evaluated on an ordered k-tuple of tangent vectors as a determinant of
1-form values; d arg is computed as Im(dg/g), which never crosses a branch
cut. The alternation operator carries a leading minus sign:
Alt_n G = -sum_sigma sgn(sigma) G(sigma).
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from itertools import permutations
from typing import Callable, List, Sequence

import numpy as np

from .kernels import bloch_wigner


class Dual:
    """Complex value plus gradient with respect to the box parameters."""

    __slots__ = ("val", "grad")

    def __init__(self, val, grad):
        self.val = complex(val)
        self.grad = np.asarray(grad, dtype=np.complex128)

    @staticmethod
    def _lift(other, k):
        if isinstance(other, Dual):
            return other
        return Dual(complex(other), np.zeros(k, dtype=np.complex128))

    def __add__(self, other):
        o = Dual._lift(other, len(self.grad))
        return Dual(self.val + o.val, self.grad + o.grad)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.val, -self.grad)

    def __sub__(self, other):
        return self + (-Dual._lift(other, len(self.grad)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = Dual._lift(other, len(self.grad))
        return Dual(self.val * o.val, self.val * o.grad + o.val * self.grad)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Dual._lift(other, len(self.grad))
        inv = 1.0 / o.val
        return Dual(self.val * inv, (self.grad - self.val * inv * o.grad) * inv)

    def __rtruediv__(self, other):
        return Dual._lift(other, len(self.grad)) / self

    def __pow__(self, n: int):
        if n == 0:
            return Dual(1.0, np.zeros_like(self.grad))
        if n < 0:
            return (Dual(1.0, np.zeros_like(self.grad)) / self) ** (-n)
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def exp(self):
        e = cmath.exp(self.val)
        return Dual(e, e * self.grad)


class Parametrization:
    """Map from an open box in R^k to (C*)^n with exact first derivatives.

    ``coords`` is a sequence of n callables; each receives the k box
    parameters as Dual numbers and returns a Dual.
    """

    def __init__(self, n: int, k: int, coords: Sequence[Callable]):
        if len(coords) != n:
            raise ValueError("need one coordinate function per ambient dimension")
        self.n = n
        self.k = k
        self.coords = list(coords)

    def seeds(self, u: Sequence[float]) -> List[Dual]:
        if len(u) != self.k:
            raise ValueError("parameter point has wrong dimension")
        eye = np.eye(self.k, dtype=np.complex128)
        return [Dual(u[i], eye[i]) for i in range(self.k)]

    def point(self, u: Sequence[float]) -> List[Dual]:
        seeds = self.seeds(u)
        pt = [c(*seeds) for c in self.coords]
        for x in pt:
            if x.val == 0:
                raise ValueError("parametrization hit a coordinate zero")
        return pt


def coordinate(i: int) -> Callable:
    """The i-th ambient coordinate as a function of the point."""
    return lambda *xs: xs[i]


# -- 1-form ingredients ---------------------------------------------------------------


def _dg(g: Dual, v) -> complex:
    return complex(np.dot(g.grad, np.asarray(v, dtype=np.complex128)))


def dlog_abs(g: Dual, v) -> float:
    """dlog|g| on the tangent vector v."""
    return (_dg(g, v) / g.val).real


def darg(g: Dual, v) -> float:
    """d arg g on v, via Im(dg/g) (no branch cut)."""
    return (_dg(g, v) / g.val).imag


def diarg(g: Dual, v) -> complex:
    return 1j * darg(g, v)


def holo_dlog_abs(g: Dual, v) -> complex:
    """The (1,0) part of dlog|g| on v: (dg/g)/2."""
    return _dg(g, v) / (2.0 * g.val)


def antiholo_dlog_abs(g: Dual, v) -> complex:
    """The (0,1) part of dlog|g| on v (real tangents assumed)."""
    return (_dg(g, v) / (2.0 * g.val)).conjugate()


def log_abs(g: Dual) -> float:
    return math.log(abs(g.val))


def wedge_value(one_forms: Sequence[Callable], tangents) -> complex:
    """Evaluate omega_1 ^ ... ^ omega_k on (v_1, ..., v_k)."""
    k = len(one_forms)
    if k != len(tangents):
        raise ValueError("wedge degree must match number of tangents")
    if k == 0:
        return 1.0 + 0j
    m = np.array(
        [[one_forms[i](tangents[j]) for j in range(k)] for i in range(k)],
        dtype=np.complex128,
    )
    return complex(np.linalg.det(m))


def _perms_with_sign(n: int):
    base = list(range(n))
    for p in permutations(base):
        sign = 1
        q = list(p)
        for i in range(n):
            while q[i] != i:
                j = q[i]
                q[i], q[j] = q[j], q[i]
                sign = -sign
        yield p, sign


def _c(j: int, n: int) -> float:
    return 1.0 / (math.factorial(2 * j + 1) * math.factorial(n - 2 * j - 1))


# -- the forms --------------------------------------------------------------------------


def eta_eval(xs: Sequence[Dual], tangents) -> complex:
    """eta on explicit coordinate Duals (see eta_form)."""
    n = len(xs)
    if len(tangents) != n - 1:
        raise ValueError("eta is an (n-1)-form")
    eps = [log_abs(x) for x in xs]
    pre = 2.0 ** (n - 1) / math.factorial(n)
    total = 0.0 + 0j
    for p, sign in _perms_with_sign(n):
        for j in range(1, n + 1):
            scalar = eps[p[0]]
            if scalar == 0.0:
                continue
            forms = []
            for idx in p[1:j]:
                x = xs[idx]
                forms.append(lambda v, x=x: antiholo_dlog_abs(x, v))
            for idx in p[j:]:
                x = xs[idx]
                forms.append(lambda v, x=x: holo_dlog_abs(x, v))
            total += sign * (-1) ** (j - 1) * scalar * wedge_value(forms, tangents)
    return pre * total


def eta_form(param: Parametrization, u, tangents) -> complex:
    """The (n-1)-form eta(x_1, ..., x_n) on n-1 tangent vectors."""
    return eta_eval(param.point(u), tangents)


def rnn_eval(gs: Sequence[Dual], tangents) -> complex:
    """r_n(n) on explicit Dual values of g_1, ..., g_n (see rnn_form)."""
    n = len(gs)
    if len(tangents) != n - 1:
        raise ValueError("r_n(n) is an (n-1)-form")
    for g in gs:
        if g.val == 0:
            raise ValueError("a wedge entry vanishes at the point")
    total = 0.0 + 0j
    for p, sign in _perms_with_sign(n):
        inner = 0.0 + 0j
        scalar = log_abs(gs[p[0]])
        if scalar != 0.0:
            for j in range((n - 1) // 2 + 1):
                forms = []
                for idx in p[1 : 2 * j + 1]:
                    g = gs[idx]
                    forms.append(lambda v, g=g: dlog_abs(g, v))
                for idx in p[2 * j + 1 :]:
                    g = gs[idx]
                    forms.append(lambda v, g=g: diarg(g, v))
                inner += _c(j, n) * wedge_value(forms, tangents)
        total += sign * scalar * inner
    return -total  # Alt_n carries a leading minus


def rnn_form(param: Parametrization, g_list: Sequence[Callable], u, tangents) -> complex:
    """r_n(n)(g_1 ^ ... ^ g_n) on n-1 tangent vectors."""
    xs = param.point(u)
    return rnn_eval([g(*xs) for g in g_list], tangents)


def rho_eval(fv: Dual, gs: Sequence[Dual], tangents) -> complex:
    """rho on explicit Dual values of f and the g's (see rho_form)."""
    n = len(gs) + 2
    if len(tangents) != n - 2:
        raise ValueError("r_n(n-1) is an (n-2)-form")
    if fv.val in (0.0, 1.0):
        raise ValueError("Steinberg degeneracy: f in {0, 1} at the point")
    for g in gs:
        if g.val == 0:
            raise ValueError("a wedge entry vanishes at the point")
    m2 = n - 2

    d_part = 0.0 + 0j
    for p, sign in _perms_with_sign(m2):
        for q in range(m2 // 2 + 1):
            forms = []
            for idx in p[: 2 * q]:
                g = gs[idx]
                forms.append(lambda v, g=g: dlog_abs(g, v))
            for idx in p[2 * q :]:
                g = gs[idx]
                forms.append(lambda v, g=g: diarg(g, v))
            d_part += sign * _c(q, n - 1) * wedge_value(forms, tangents)
    d_part = -d_part  # Alt_(n-2)
    total = 1j * bloch_wigner(fv.val) * d_part

    # theta(1-f, f) = log|1-f| dlog|f| - log|f| dlog|1-f|, wedged in front
    one_minus = 1 - fv
    la, lb = log_abs(one_minus), log_abs(fv)

    def theta(v):
        return la * dlog_abs(fv, v) - lb * dlog_abs(one_minus, v)

    t_part = 0.0 + 0j
    for p, sign in _perms_with_sign(m2):
        scalar = log_abs(gs[p[0]])
        if scalar == 0.0:
            continue
        for m in range(1, (n - 1) // 2 + 1):
            forms = [theta]
            for idx in p[1 : 2 * m - 1]:
                g = gs[idx]
                forms.append(lambda v, g=g: dlog_abs(g, v))
            for idx in p[2 * m - 1 :]:
                g = gs[idx]
                forms.append(lambda v, g=g: diarg(g, v))
            coef = _c(m - 1, n - 2) / (2 * m + 1)
            t_part += sign * coef * scalar * wedge_value(forms, tangents)
    total += -t_part  # Alt_(n-2) again
    # Global sign fixed so that d(rho({f}_2 (x) g...)) = r_n(n)(f ^ (1-f) ^ g...),
    # i.e. the n = 4 value is iD(f)(diarg g1 ^ diarg g2 + (1/3) dlog|g1| ^ dlog|g2|)
    # + (1/3) theta(1-f,f) ^ (log|g1| diarg g2 - log|g2| diarg g1).
    return -total


def rho_form(
    param: Parametrization, f: Callable, g_list: Sequence[Callable], u, tangents
) -> complex:
    """r_n(n-1)({f}_2 (x) g_1 ^ ... ^ g_(n-2)) on n-2 tangent vectors."""
    xs = param.point(u)
    return rho_eval(f(*xs), [g(*xs) for g in g_list], tangents)


# -- bridging the exact layer -------------------------------------------------------


def factored_callable(fe) -> Callable:
    """Turn a FactoredElement into a point function for the forms above."""

    def fn(*xs):
        values = dict(zip(fe.basis.vars, xs))
        out = fe.evaluate(values)
        if not isinstance(out, Dual):
            out = Dual(complex(out), np.zeros_like(xs[0].grad))
        return out

    return fn


def rho_of_element_at(xi, xs: Sequence[Dual], tangents) -> complex:
    """rho applied termwise to a B2WedgeElement at explicit coordinate Duals
    (one Dual per basis variable; wedge labels must be basis polynomials)."""
    values = dict(zip(xi.basis.vars, xs))
    total = 0.0 + 0j
    for c, f, labels in xi.terms_list():
        gs = []
        for kind, key in labels:
            if kind != "b":
                raise ValueError("prime labels have no pointwise value")
            gs.append(xi.basis.polys[key].eval(values))
        fv = f.evaluate(values)
        if not isinstance(fv, Dual):
            fv = Dual(complex(fv), np.zeros_like(xs[0].grad))
        total += float(c) * rho_eval(fv, gs, tangents)
    return total


def rho_of_element(param: Parametrization, xi, u, tangents) -> complex:
    """rho applied termwise to a B2WedgeElement through a parametrization."""
    return rho_of_element_at(xi, param.point(u), tangents)
