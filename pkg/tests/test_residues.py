import copy
import json
import os
from fractions import Fraction

import pytest
import sympy

from reglab.k3 import data_dir
from reglab.residues import (
    ROOT_OF_UNITY,
    UNDECIDABLE,
    UNKNOWN_POSITIVE,
    DivisorData,
    FunctionRecord,
    B2Residue,
    certify_all_residues,
    load_divisors,
    recheck_certificate,
    residue_43,
    tame_symbol,
)
from reglab.symbolic import build_xi, load_decomposition

S = sympy.Symbol("s")


def rec(order, value):
    v = sympy.sympify(value) if value is not None else None
    return FunctionRecord(order, v)


def test_tame_symbol_spec_cases():
    # both orders 0: exponents vanish
    assert tame_symbol(rec(0, 5), rec(0, 7)) == 1
    # f a uniformizer (leading coefficient 1), g restricting to c: 1/c
    assert tame_symbol(rec(1, 1), rec(0, 7)) == sympy.Rational(1, 7)
    # f = g with order 1: (-1)^{1*1} * 1
    assert tame_symbol(rec(1, 1), rec(1, 1)) == -1


def test_tame_symbol_antisymmetry():
    cases = [
        (rec(0, 3), rec(2, 5)),
        (rec(1, 2), rec(0, S + 1)),
        (rec(2, 3), rec(3, 7)),
    ]
    for f, g in cases:
        a = tame_symbol(f, g)
        b = tame_symbol(g, f)
        assert sympy.simplify(a * b - 1) == 0


def test_tame_symbol_bimultiplicative():
    # f1 ~ 2 s, f2 ~ 3 s^2, f1 f2 ~ 6 s^3 against g of order 0
    f1 = rec(1, 2)
    f2 = rec(2, 3)
    g = rec(0, 5)
    f12 = rec(3, 6)
    lhs = tame_symbol(f12, g)
    rhs = tame_symbol(f1, g) * tame_symbol(f2, g)
    assert sympy.simplify(lhs - rhs) == 0


def test_tame_symbol_unknown_order_root_of_unity():
    # other order 0, base value -1: (-1)^(+-k) is a root of unity regardless
    out = tame_symbol(rec(UNKNOWN_POSITIVE, 0), rec(0, -1))
    assert out is ROOT_OF_UNITY
    # base value 2: depends on the unknown order
    out = tame_symbol(rec(UNKNOWN_POSITIVE, 0), rec(0, 2))
    assert out is UNDECIDABLE


def _xi():
    doc = load_decomposition(os.path.join(data_dir(), "decomposition_n4.json"))
    xi, _, _ = build_xi(doc)
    return xi


def _divisors():
    return load_divisors(os.path.join(data_dir(), "divisors_n4.json"))


def test_residue_steinberg_kill():
    # x = 0 on the divisor makes {-x}_2 = {0}_2 = 0 for the first term,
    # and the constructed records make the rest trivial too
    xi = _xi()
    d = DivisorData(
        "test",
        "s",
        {
            "x": FunctionRecord(0, sympy.Integer(-1)),
            "y": FunctionRecord(0, sympy.Integer(-1)),
            "z": FunctionRecord(0, S - 1),
        },
    )
    res = residue_43(xi, d)
    assert not res.terms
    assert not res.undecidable


def test_all_shipped_certificates_trivial():
    xi = _xi()
    report = certify_all_residues(xi, _divisors())
    assert report["overall"] == "trivial"
    assert len(report["divisors"]) == 48
    for cert in report["divisors"]:
        assert cert["verdict"] == "trivial"
        assert cert["reasons"], cert["divisor"]
        assert set(cert["reasons"]) <= {
            "steinberg_degenerate",
            "torsion_tensor_factor",
            "exact_cancellation",
        }


def test_certificate_recheck_roundtrip():
    xi = _xi()
    divisors = _divisors()
    report = certify_all_residues(xi, divisors)
    assert recheck_certificate(xi, divisors, report)
    tampered = copy.deepcopy(report)
    tampered["divisors"][0]["verdict"] = "nontrivial"
    assert not recheck_certificate(xi, divisors, tampered)


def test_nontrivial_control_case():
    # {s}_2 (x) T{x, z} with ord x = 1, z = 2: residue survives
    xi = _xi()
    d = DivisorData(
        "control",
        "s",
        {
            "x": FunctionRecord(1, sympy.Integer(0)),
            "y": FunctionRecord(0, S),
            "z": FunctionRecord(0, sympy.Integer(2)),
        },
    )
    report = certify_all_residues(xi, [d])
    assert report["overall"] == "nontrivial"


def test_residue_linearity():
    xi = _xi()
    xi2 = xi.scale(Fraction(3))
    d = DivisorData(
        "lin",
        "s",
        {
            "x": FunctionRecord(1, sympy.Integer(0)),
            "y": FunctionRecord(0, S),
            "z": FunctionRecord(0, sympy.Integer(2)),
        },
    )
    r1 = residue_43(xi, d)
    r3 = residue_43(xi2, d)
    t1 = {(sympy.sstr(a), sympy.sstr(t)): c for c, a, t in r1.terms}
    t3 = {(sympy.sstr(a), sympy.sstr(t)): c for c, a, t in r3.terms}
    assert set(t1) == set(t3)
    for k in t1:
        assert t3[k] == 3 * t1[k]


def test_zero_xi_trivial():
    xi = _xi()
    zero = xi - xi
    report = certify_all_residues(zero, _divisors())
    assert report["overall"] == "trivial"


def test_missing_function_record_errors():
    xi = _xi()
    d = DivisorData("incomplete", "s", {"x": FunctionRecord(0, sympy.Integer(2))})
    with pytest.raises(KeyError):
        residue_43(xi, d)


def test_divisor_loader_validates():
    with pytest.raises((ValueError, KeyError)):
        load_divisors([{"name": "bad", "parameter": "s", "functions": {"x": {"order": "weird", "value": "1"}}}])
