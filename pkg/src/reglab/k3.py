"""Invariants of elliptic surfaces over Q(t): Weierstrass quantities,
Kodaira fiber types at the places of Q(t) (including t = infinity),
Shioda-Tate Picard rank, the transcendental-lattice determinant

    |det T| = prod_s m_s^(1) / torsion^2,

and the weight-3 newform level attached to a singular K3 surface
(level D from the imaginary quadratic field Q(sqrt(-d)), d = |det T|).

The base field has characteristic 0, so the Kodaira type is read off the
minimalized vanishing orders (v(c4), v(c6), v(Delta)); no wild ramification
cases arise.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import sympy

from .symbolic import parse_poly

_t = sympy.Symbol("t")
_s = sympy.Symbol("s")


def _to_sympy(text_or_poly):
    if isinstance(text_or_poly, str):
        p = parse_poly(text_or_poly, ["t"])
    else:
        p = text_or_poly
    expr = sympy.Integer(0)
    for exps, c in p.terms.items():
        e = exps[0] if exps else 0
        if e < 0:
            raise ValueError("curve coefficients must be polynomials in t")
        expr += sympy.Rational(c) * _t**e
    return sympy.expand(expr)


class WeierstrassCurveQt:
    """y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6 with a_i in Q[t]."""

    def __init__(self, a1, a2, a3, a4, a6):
        self.a1, self.a2, self.a3, self.a4, self.a6 = (
            _to_sympy(a) for a in (a1, a2, a3, a4, a6)
        )
        if self.discriminant()[0] == 0:
            raise ValueError("discriminant is identically zero (singular curve)")

    @classmethod
    def from_string(cls, text: str) -> "WeierstrassCurveQt":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 5:
            raise ValueError("expected 5 comma-separated polynomials a1,a2,a3,a4,a6")
        return cls(*parts)

    def discriminant(self):
        """(Delta, c4, c6); the identity c4^3 - c6^2 = 1728 Delta is verified."""
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = a1**2 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3**2 + 4 * a6
        b8 = a1**2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3**2 - a4**2
        c4 = sympy.expand(b2**2 - 24 * b4)
        c6 = sympy.expand(-(b2**3) + 36 * b2 * b4 - 216 * b6)
        disc = sympy.expand(-(b2**2) * b8 - 8 * b4**3 - 27 * b6**2 + 9 * b2 * b4 * b6)
        if sympy.expand(c4**3 - c6**2 - 1728 * disc) != 0:
            raise RuntimeError("internal error: c4^3 - c6^2 != 1728 Delta")
        return disc, c4, c6


@dataclass
class FiberData:
    place: str
    v_c4: float
    v_c6: float
    v_delta: int
    kodaira: str
    components: int  # m_s
    simple_components: int  # m_s^(1)
    degree: int = 1  # degree of the place: number of conjugate geometric fibers

    def to_dict(self) -> dict:
        return {
            "place": self.place,
            "v_c4": None if math.isinf(self.v_c4) else int(self.v_c4),
            "v_c6": None if math.isinf(self.v_c6) else int(self.v_c6),
            "v_delta": self.v_delta,
            "kodaira": self.kodaira,
            "m": self.components,
            "m_simple": self.simple_components,
            "degree": self.degree,
        }


def _minimalize(vc4, vc6, vd):
    """Strip u-transforms (a_i -> u^i a_i shifts orders by (4, 6, 12))."""
    while vc4 >= 4 and vc6 >= 6 and vd >= 12:
        vc4 -= 4
        vc6 -= 6
        vd -= 12
    return vc4, vc6, vd


def kodaira_type(v_c4, v_c6, v_delta, place: str = "?", degree: int = 1) -> FiberData:
    """Characteristic-0 Kodaira classification from minimal vanishing orders."""
    vc4, vc6, vd = _minimalize(v_c4, v_c6, v_delta)
    if vd == 0:
        return FiberData(place, vc4, vc6, 0, "I0", 1, 1, degree)
    if vc4 == 0:
        n = vd
        return FiberData(place, vc4, vc6, vd, f"I{n}", n, n, degree)
    if vd == 2:
        return FiberData(place, vc4, vc6, vd, "II", 1, 1, degree)
    if vd == 3:
        return FiberData(place, vc4, vc6, vd, "III", 2, 2, degree)
    if vd == 4:
        return FiberData(place, vc4, vc6, vd, "IV", 3, 3, degree)
    if vd == 6 and (vc4 >= 3 or vc6 >= 4):
        return FiberData(place, vc4, vc6, vd, "I0*", 5, 4, degree)
    if vc4 == 2 and vc6 == 3 and vd >= 6:
        n = vd - 6
        label = "I0*" if n == 0 else f"I{n}*"
        return FiberData(place, vc4, vc6, vd, label, n + 5, 4, degree)
    if vd == 8:
        return FiberData(place, vc4, vc6, vd, "IV*", 7, 3, degree)
    if vd == 9:
        return FiberData(place, vc4, vc6, vd, "III*", 8, 2, degree)
    if vd == 10:
        return FiberData(place, vc4, vc6, vd, "II*", 9, 1, degree)
    raise ValueError(f"inconsistent vanishing orders ({v_c4}, {v_c6}, {v_delta})")


def _order(poly, factor) -> float:
    """Order of vanishing of poly along the irreducible factor."""
    if poly == 0:
        return math.inf
    p = sympy.Poly(poly, _t)
    f = sympy.Poly(factor, _t)
    k = 0
    while True:
        q, r = sympy.div(p, f)
        if r != 0:
            return k
        p = q
        k += 1


def finite_fibers(curve: WeierstrassCurveQt) -> List[FiberData]:
    disc, c4, c6 = curve.discriminant()
    _, factors = sympy.factor_list(sympy.Poly(disc, _t))
    out = []
    for f, mult in factors:
        place = sympy.sstr(f.as_expr())
        vc4 = _order(c4, f.as_expr())
        vc6 = _order(c6, f.as_expr())
        out.append(kodaira_type(vc4, vc6, int(mult), place, degree=int(sympy.degree(f, _t))))
    return out


def fiber_at_infinity(curve: WeierstrassCurveQt) -> Optional[FiberData]:
    """Type at t = infinity via t -> 1/s and the weight twist a_i -> s^{m i} a_i."""
    degs = []
    for i, a in ((1, curve.a1), (2, curve.a2), (3, curve.a3), (4, curve.a4), (6, curve.a6)):
        if a != 0:
            degs.append(-(-sympy.degree(a, _t) // i))  # ceil
    m = max(degs) if degs else 0
    twisted = []
    for i, a in ((1, curve.a1), (2, curve.a2), (3, curve.a3), (4, curve.a4), (6, curve.a6)):
        b = sympy.expand(sympy.cancel(_s ** (m * i) * a.subs(_t, 1 / _s)))
        twisted.append(sympy.Poly(b, _s).as_expr().subs(_s, _t) if b != 0 else sympy.Integer(0))
    cv = WeierstrassCurveQt.__new__(WeierstrassCurveQt)
    cv.a1, cv.a2, cv.a3, cv.a4, cv.a6 = twisted
    disc, c4, c6 = cv.discriminant()
    vd = _order(disc, _t)
    if vd == 0:
        return None
    return kodaira_type(_order(c4, _t), _order(c6, _t), int(vd), "t = oo")


def all_fibers(curve: WeierstrassCurveQt) -> List[FiberData]:
    out = [f for f in finite_fibers(curve) if f.v_delta > 0]
    inf = fiber_at_infinity(curve)
    if inf is not None:
        out.append(inf)
    return out


def shioda_tate_rho(mw_rank: int, fibers: List[FiberData]) -> int:
    """rho = r + 2 + sum_s (m_s - 1), over geometric fibers (place degree counts)."""
    return mw_rank + 2 + sum(f.degree * (f.components - 1) for f in fibers)


def transcendental_det(fibers: List[FiberData], torsion_order: int) -> Fraction:
    """prod m_s^(1) / torsion^2 over geometric fibers, flagged if non-integral."""
    num = 1
    for f in fibers:
        num *= f.simple_components**f.degree
    d = Fraction(num, torsion_order**2)
    if d.denominator != 1:
        raise ValueError(f"transcendental determinant {d} is not integral")
    return d


def _squarefree_core(n: int) -> int:
    core = 1
    for p, e in sympy.factorint(n).items():
        if e % 2:
            core *= p
    return core


class ExcludedDiscriminantError(ValueError):
    pass


def schuett_level(d: int) -> Tuple[int, int, int]:
    """(squarefree d, fundamental discriminant d_K of Q(sqrt(-d)), level D)."""
    if d <= 0:
        raise ValueError("determinant must be positive")
    d0 = _squarefree_core(d)
    dK = -d0 if (-d0) % 4 == 1 else -4 * d0
    if dK in (-3, -4):
        raise ExcludedDiscriminantError(
            f"d_K = {dK} is excluded (extra units in Q(sqrt({-d0})))"
        )
    D = -dK if dK % 4 != 0 else -dK // 4
    return d0, dK, D


@dataclass
class SurfaceInvariants:
    mw_rank: int
    torsion_order: int
    rho: int
    det_T: int
    d: int
    d_K: int
    level: int
    fibers: List[FiberData] = field(default_factory=list)
    euler_sum: int = 0

    def to_dict(self) -> dict:
        return {
            "mw_rank": self.mw_rank,
            "torsion_order": self.torsion_order,
            "rho": self.rho,
            "detT": self.det_T,
            "d": self.d,
            "d_K": self.d_K,
            "level": self.level,
            "sum_v_delta": self.euler_sum,
            "fibers": [f.to_dict() for f in self.fibers],
        }


def surface_invariants(
    curve: WeierstrassCurveQt,
    mw_rank: int = 0,
    torsion_order: int = 1,
    require_k3: bool = True,
) -> SurfaceInvariants:
    fibers = all_fibers(curve)
    rho = shioda_tate_rho(mw_rank, fibers)
    if require_k3 and rho > 20:
        raise ValueError(f"rho = {rho} > 20: not a K3 configuration")
    det = int(transcendental_det(fibers, torsion_order))
    d0, dK, D = schuett_level(det)
    return SurfaceInvariants(
        mw_rank=mw_rank,
        torsion_order=torsion_order,
        rho=rho,
        det_T=det,
        d=d0,
        d_K=dK,
        level=D,
        fibers=fibers,
        euler_sum=sum(f.degree * f.v_delta for f in fibers),
    )


def data_dir() -> str:
    env = os.environ.get("REGLAB_DATA_DIR")
    if env:
        return env
    return os.path.join(os.path.dirname(__file__), "data")


def load_curve(path: Optional[str] = None):
    """The shipped pencil (a_i, Mordell-Weil rank, torsion order)."""
    path = path or os.path.join(data_dir(), "k3_curve.json")
    with open(path) as fh:
        doc = json.load(fh)
    curve = WeierstrassCurveQt(doc["a1"], doc["a2"], doc["a3"], doc["a4"], doc["a6"])
    return curve, doc.get("mw_rank", 0), doc.get("torsion_order", 1)
