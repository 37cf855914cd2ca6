import os
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from reglab.k3 import data_dir
from reglab.symbolic import (
    B2WedgeElement,
    LaurentError,
    MultiPoly,
    MultiplicativeBasis,
    NotFactorable,
    ParseError,
    apply_tau,
    build_xi,
    check_decomposition,
    factor_over_basis,
    load_decomposition,
    parse_poly,
    wedge_normalize,
)

VARS3 = ["x", "y", "z"]


def test_parse_roundtrip():
    p = parse_poly("(1+x)*(1+y)*(1+z)+t", ["x", "y", "z", "t"])
    q = parse_poly("1 + x + y + z + x*y + x*z + y*z + x*y*z + t", ["x", "y", "z", "t"])
    assert p == q


def test_parse_rational_and_power():
    p = parse_poly("3/2*x^2 - x + 1/2", ["x"])
    assert p.eval({"x": Fraction(2)}) == Fraction(3, 2) * 4 - 2 + Fraction(1, 2)


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_poly("1 + * x", ["x"])
    with pytest.raises(ParseError):
        parse_poly("w + 1", ["x"])


def test_laurent_terms():
    p = parse_poly("x^-1 + x", ["x"])
    assert p.is_laurent()
    num, den = p.split_laurent()
    assert num == parse_poly("1 + x^2", ["x"])
    assert den == parse_poly("x", ["x"])


@st.composite
def small_polys(draw):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        e = (draw(st.integers(0, 3)), draw(st.integers(0, 3)))
        terms[e] = Fraction(draw(st.integers(-9, 9)), draw(st.integers(1, 4)))
    return MultiPoly(["x", "y"], terms)


@given(small_polys(), small_polys(), small_polys())
@settings(max_examples=100, deadline=None)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


def _basis(entries, variables):
    return MultiplicativeBasis([parse_poly(e, variables) for e in entries], variables)


def test_factor_over_basis_flagship():
    basis = _basis(["x", "y", "z", "1+x", "1+y", "1+z"], VARS3)
    t = parse_poly("-(1+x)*(1+y)*(1+z)", VARS3)
    fe = factor_over_basis(t, basis)
    assert fe.const == -1
    num, den = fe.expand()
    assert num == t * den
    with pytest.raises(NotFactorable):
        factor_over_basis(parse_poly("1+x+y", VARS3), basis)


def test_factored_inverse_and_pow():
    basis = _basis(["x", "1+x"], ["x"])
    fe = factor_over_basis(parse_poly("x^2", ["x"]), basis)
    inv = fe.inverse()
    num, den = (fe * inv).expand()
    assert num == den


def test_wedge_antisymmetry():
    basis = _basis(["x", "y", "1+x", "1+y"], ["x", "y"])
    x = factor_over_basis(parse_poly("x", ["x", "y"]), basis)
    y = factor_over_basis(parse_poly("y", ["x", "y"]), basis)
    w1 = wedge_normalize([(Fraction(1), [x, y])], basis)
    w2 = wedge_normalize([(Fraction(1), [y, x])], basis)
    assert (w1 + w2).is_zero()
    # f ^ f = 0
    assert wedge_normalize([(Fraction(1), [x, x])], basis).is_zero()


def test_wedge_multilinearity():
    basis = _basis(["x", "y", "1+x", "1+y"], ["x", "y"])
    x = factor_over_basis(parse_poly("x", ["x", "y"]), basis)
    y = factor_over_basis(parse_poly("y", ["x", "y"]), basis)
    xy = factor_over_basis(parse_poly("x*y", ["x", "y"]), basis)
    lhs = wedge_normalize([(Fraction(1), [xy, y])], basis)
    rhs = wedge_normalize([(Fraction(1), [x, y])], basis)
    assert lhs == rhs  # (xy) ^ y = x ^ y + y ^ y = x ^ y


def _load(n):
    name = f"decomposition_n{n}.json"
    return load_decomposition(os.path.join(data_dir(), name))


def test_decomposition_n4_exact():
    doc = _load(4)
    equal, diff = check_decomposition(doc)
    assert equal, str(diff)


def test_decomposition_n3_exact():
    doc = _load(3)
    equal, diff = check_decomposition(doc)
    assert equal, str(diff)


def test_decomposition_corruption_detected():
    doc = _load(4)
    import json

    with open(os.path.join(data_dir(), "decomposition_n4.json")) as fh:
        raw = json.load(fh)
    raw["terms"][0][0] = 2  # corrupt one coefficient
    bad = load_decomposition(raw)
    equal, diff = check_decomposition(bad)
    assert not equal
    assert not diff.is_zero()


def test_xi_tau_symmetry_n4():
    doc = _load(4)
    xi, xi_star, lam = build_xi(doc)
    # tau pullback acts as -1 on the n = 4 cocycle
    assert (xi + xi_star).is_zero()
    assert lam == xi
    # involution
    assert apply_tau(xi_star) == xi


def test_xi_tau_symmetry_n3():
    doc = _load(3)
    xi, xi_star, lam = build_xi(doc)
    assert xi_star == xi
    assert lam == xi


def test_b2_inversion_relation():
    # {1/f}_2 = -{f}_2 under the canonical-representative normalization
    doc = _load(4)
    basis = doc.basis
    fe = factor_over_basis(parse_poly("x", doc.variables), basis)
    ge = factor_over_basis(parse_poly("y", doc.variables), basis)
    w = wedge_normalize([(Fraction(1), [ge])], basis)
    e1 = B2WedgeElement(basis, 1)
    e1.add_term(Fraction(1), fe, w)
    e2 = B2WedgeElement(basis, 1)
    e2.add_term(Fraction(1), fe.inverse(), w)
    assert (e1 + e2).is_zero()
