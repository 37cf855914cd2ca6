"""Factored field elements, exterior algebra over Q, B2-with-wedge elements.

A FactoredElement is a rational function written multiplicatively over a
declared basis of polynomials plus rational primes; wedges live in the
exterior algebra with -1 and roots of unity dropped as torsion (the algebra
is over Q). This realizes a finite-rank piece of the multiplicative group of
the function field, enough for exactness decompositions and their tau
pullbacks.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import sympy

from .poly import LaurentError, MultiPoly, parse_poly

Label = Tuple[str, object]  # ("b", basis index) or ("p", prime)


class NotFactorable(ValueError):
    """A factor outside the declared multiplicative basis remained."""

    def __init__(self, remainder: MultiPoly):
        super().__init__(f"factor not in basis: {remainder}")
        self.remainder = remainder


def _prime_factors(n: int) -> dict:
    return {int(p): int(e) for p, e in sympy.factorint(n).items()}


class MultiplicativeBasis:
    """Ordered list of declared-irreducible, pairwise non-associate polynomials.

    Rational primes are implicit extra basis vectors. A cheap sanity layer
    rejects obviously reducible degree <= 2 univariate entries and any pair
    where one entry exactly divides the other.
    """

    def __init__(self, polys: Sequence[MultiPoly], variables: Sequence[str]):
        self.vars = tuple(variables)
        self.polys = [p.extend(self.vars) for p in polys]
        for p in self.polys:
            if p.is_constant():
                raise ValueError("basis entries must be non-constant")
            if p.is_laurent():
                raise ValueError("basis entries must be polynomials")
            self._sanity_irreducible(p)
        for i, p in enumerate(self.polys):
            for q in self.polys[i + 1 :]:
                if p.divides_into(q) is not None or q.divides_into(p) is not None:
                    raise ValueError(f"basis entries {p} and {q} are associates or nested")

    @staticmethod
    def _sanity_irreducible(p: MultiPoly) -> None:
        live = [v for v in p.vars if p.degree_in(v) > 0]
        if len(live) != 1:
            return
        v = live[0]
        deg = p.degree_in(v)
        if deg != 2:
            return
        i = p.vars.index(v)
        c = {k: Fraction(0) for k in range(3)}
        for exps, coef in p.terms.items():
            c[exps[i]] = coef
        disc = c[1] * c[1] - 4 * c[2] * c[0]
        if disc >= 0:
            root = sympy.sqrt(sympy.Rational(disc.numerator, disc.denominator))
            if root.is_rational:
                raise ValueError(f"basis entry {p} factors over Q")

    def __len__(self):
        return len(self.polys)

    def index_of(self, p: MultiPoly) -> Optional[int]:
        p = p.extend(self.vars)
        for i, b in enumerate(self.polys):
            if b == p:
                return i
        return None

    def label_name(self, label: Label) -> str:
        kind, key = label
        if kind == "b":
            return str(self.polys[key])
        return str(key)


class FactoredElement:
    """constant * prod(basis_i ^ e_i): an element of the field written
    multiplicatively over the basis."""

    __slots__ = ("basis", "const", "exps")

    def __init__(self, basis: MultiplicativeBasis, const=1, exps: dict | None = None):
        self.basis = basis
        self.const = Fraction(const)
        if self.const == 0:
            raise ValueError("FactoredElement must be a nonzero field element")
        self.exps = {int(i): int(e) for i, e in (exps or {}).items() if e != 0}

    def __mul__(self, other: "FactoredElement") -> "FactoredElement":
        exps = dict(self.exps)
        for i, e in other.exps.items():
            exps[i] = exps.get(i, 0) + e
        return FactoredElement(self.basis, self.const * other.const, exps)

    def inverse(self) -> "FactoredElement":
        return FactoredElement(self.basis, 1 / self.const, {i: -e for i, e in self.exps.items()})

    def __pow__(self, n: int) -> "FactoredElement":
        return FactoredElement(
            self.basis, self.const**n, {i: e * n for i, e in self.exps.items()}
        )

    def is_constant(self) -> bool:
        return not self.exps

    def key(self) -> tuple:
        return (self.const, tuple(sorted(self.exps.items())))

    def __eq__(self, other):
        return isinstance(other, FactoredElement) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def expand(self) -> Tuple[MultiPoly, MultiPoly]:
        """Multiply out to a (numerator, denominator) pair of polynomials."""
        num = MultiPoly.const(self.const.numerator, self.basis.vars)
        den = MultiPoly.const(self.const.denominator, self.basis.vars)
        for i, e in self.exps.items():
            if e > 0:
                num = num * self.basis.polys[i] ** e
            else:
                den = den * self.basis.polys[i] ** (-e)
        return num, den

    def evaluate(self, values: dict):
        """Numeric evaluation (values keyed by variable name)."""
        out = self.const.numerator / self.const.denominator if self.const.denominator != 1 else self.const.numerator
        for i, e in self.exps.items():
            out = out * self.basis.polys[i].eval(values) ** e
        return out

    def torsion_free_labels(self) -> dict:
        """Exponent vector over wedge labels, dropping the sign (torsion)."""
        vec = {("b", i): Fraction(e) for i, e in self.exps.items()}
        c = abs(self.const)
        if c != 1:
            for p, e in _prime_factors(c.numerator).items():
                vec[("p", p)] = vec.get(("p", p), Fraction(0)) + e
            for p, e in _prime_factors(c.denominator).items():
                vec[("p", p)] = vec.get(("p", p), Fraction(0)) - e
        return {k: v for k, v in vec.items() if v != 0}

    def __str__(self):
        parts = [] if self.const == 1 and self.exps else [str(self.const)]
        if self.const == -1 and self.exps:
            parts = ["-1"]
        elif self.const != 1 and self.exps:
            parts = [str(self.const)]
        for i, e in sorted(self.exps.items()):
            name = f"({self.basis.polys[i]})"
            parts.append(name if e == 1 else f"{name}^{e}")
        return " * ".join(parts) if parts else "1"

    def __repr__(self):
        return f"FactoredElement({self})"


def factor_over_basis(f, basis: MultiplicativeBasis) -> FactoredElement:
    """Factor a polynomial / rational function / rational over the basis.

    Accepts a MultiPoly (possibly Laurent), a (numerator, denominator) pair,
    or a plain rational. Raises NotFactorable when trial exact division
    leaves a non-constant remainder.
    """
    if isinstance(f, (int, Fraction)):
        return FactoredElement(basis, Fraction(f))
    if isinstance(f, tuple):
        num, den = f
        return factor_over_basis(num, basis) * factor_over_basis(den, basis).inverse()
    if not isinstance(f, MultiPoly):
        raise TypeError(f"cannot factor {type(f).__name__}")
    f = f.extend(basis.vars)
    if f.is_zero():
        raise ValueError("cannot factor the zero element")
    num, mono = f.split_laurent()
    out = FactoredElement(basis, 1)
    if not mono.is_constant():
        out = out * factor_over_basis(mono, basis).inverse()
    rem = num
    exps = {}
    for i, b in enumerate(basis.polys):
        while True:
            q = b.divides_into(rem)
            if q is None or rem.is_constant():
                break
            exps[i] = exps.get(i, 0) + 1
            rem = q
    if not rem.is_constant():
        raise NotFactorable(rem)
    return out * FactoredElement(basis, rem.constant_value(), exps)


# -- exterior algebra -------------------------------------------------------------


class WedgeElement:
    """Q-linear combination of strictly increasing label tuples of fixed degree."""

    __slots__ = ("basis", "degree", "terms")

    def __init__(self, basis: MultiplicativeBasis, degree: int, terms: dict | None = None):
        self.basis = basis
        self.degree = degree
        self.terms = {}
        if terms:
            for key, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    self.terms[tuple(key)] = c

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "WedgeElement") -> "WedgeElement":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, Fraction(0)) + c
        return WedgeElement(self.basis, self.degree, terms)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "WedgeElement":
        c = Fraction(c)
        return WedgeElement(self.basis, self.degree, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        return (
            isinstance(other, WedgeElement)
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for key in sorted(self.terms):
            c = self.terms[key]
            body = " ^ ".join(self.basis.label_name(l) for l in key)
            bits.append(f"({c})·{body}")
        return " + ".join(bits)

    def __repr__(self):
        return f"WedgeElement({self})"


def _sorted_with_sign(labels: Sequence[Label]) -> Optional[Tuple[tuple, int]]:
    """Sort labels, tracking permutation sign; None if a label repeats."""
    labels = list(labels)
    sign = 1
    for i in range(1, len(labels)):
        j = i
        while j > 0 and labels[j] < labels[j - 1]:
            labels[j], labels[j - 1] = labels[j - 1], labels[j]
            sign = -sign
            j -= 1
    for a, b in zip(labels, labels[1:]):
        if a == b:
            return None
    return tuple(labels), sign


def _wedge_of_vectors(basis, coeff: Fraction, vectors: List[dict]) -> dict:
    """Expand coeff * v1 ^ ... ^ vk multilinearly into sorted-tuple terms."""
    out = {}

    def rec(i, chosen, c):
        if c == 0:
            return
        if i == len(vectors):
            s = _sorted_with_sign(chosen)
            if s is None:
                return
            key, sign = s
            out[key] = out.get(key, Fraction(0)) + sign * c
            return
        for label, e in vectors[i].items():
            rec(i + 1, chosen + [label], c * e)

    rec(0, [], Fraction(coeff))
    return {k: v for k, v in out.items() if v != 0}


def wedge_normalize(
    terms: Iterable[Tuple[object, Sequence[FactoredElement]]],
    basis: MultiplicativeBasis | None = None,
) -> WedgeElement:
    """Canonical form of a sum of wedge products of FactoredElements.

    Multilinear over Q; repeated basis vectors kill a term; the sign part of
    constants is dropped (torsion); prime parts expand as extra basis labels.
    """
    terms = list(terms)
    if basis is None:
        if not terms:
            raise ValueError("empty input needs an explicit basis")
        basis = terms[0][1][0].basis
    degree = None
    acc: dict = {}
    for coeff, elts in terms:
        if degree is None:
            degree = len(elts)
        elif len(elts) != degree:
            raise ValueError("all wedge tuples must have equal length")
        vecs = [e.torsion_free_labels() for e in elts]
        for key, c in _wedge_of_vectors(basis, Fraction(coeff), vecs).items():
            acc[key] = acc.get(key, Fraction(0)) + c
    return WedgeElement(basis, degree if degree is not None else 0, acc)


# -- B2 (x) wedge ------------------------------------------------------------------


class B2WedgeElement:
    """Formal sum of c * ({f}_2 (x) g_1 ^ ... ^ g_(n-2)) with B2 normalization.

    Normalization applied on insert: {0}_2 = {1}_2 = {infinity}_2 = 0 and
    {1/f}_2 = -{f}_2 (f and its inverse share one canonical representative).
    """

    def __init__(self, basis: MultiplicativeBasis, wedge_degree: int):
        self.basis = basis
        self.wedge_degree = wedge_degree
        self.coeffs: dict = {}  # (fkey, labels) -> Fraction
        self._reps: dict = {}  # fkey -> FactoredElement

    @staticmethod
    def _canonical_f(f: FactoredElement) -> Tuple[Optional[FactoredElement], int]:
        """Canonical representative of {f}_2 modulo inversion; None if it dies."""
        if f.is_constant() and f.const == 1:
            return None, 1
        inv = f.inverse()
        if inv.key() < f.key():
            return inv, -1
        return f, 1

    def add_term(self, coeff, f: FactoredElement, wedge: WedgeElement) -> None:
        coeff = Fraction(coeff)
        if coeff == 0 or wedge.is_zero():
            return
        rep, sign = self._canonical_f(f)
        if rep is None:
            return
        fkey = rep.key()
        self._reps[fkey] = rep
        for labels, c in wedge.terms.items():
            key = (fkey, labels)
            self.coeffs[key] = self.coeffs.get(key, Fraction(0)) + sign * coeff * c
        self._prune()

    def _prune(self):
        self.coeffs = {k: v for k, v in self.coeffs.items() if v != 0}

    def terms_list(self) -> List[Tuple[Fraction, FactoredElement, tuple]]:
        """Iterate as (coefficient, f, wedge label tuple) triples."""
        return [
            (c, self._reps[fkey], labels) for (fkey, labels), c in sorted(self.coeffs.items())
        ]

    def is_zero(self) -> bool:
        return not self.coeffs

    def scale(self, c) -> "B2WedgeElement":
        out = B2WedgeElement(self.basis, self.wedge_degree)
        c = Fraction(c)
        if c != 0:
            out.coeffs = {k: v * c for k, v in self.coeffs.items()}
            out._reps = dict(self._reps)
        return out

    def __add__(self, other: "B2WedgeElement") -> "B2WedgeElement":
        out = B2WedgeElement(self.basis, self.wedge_degree)
        out.coeffs = dict(self.coeffs)
        out._reps = dict(self._reps)
        for (fkey, labels), c in other.coeffs.items():
            out.coeffs[(fkey, labels)] = out.coeffs.get((fkey, labels), Fraction(0)) + c
            out._reps.setdefault(fkey, other._reps[fkey])
        out._prune()
        return out

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, B2WedgeElement) and self.coeffs == other.coeffs

    def __str__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for c, f, labels in self.terms_list():
            body = " ^ ".join(self.basis.label_name(l) for l in labels)
            bits.append(f"({c})·{{{f}}}_2 (x) {body}")
        return " + ".join(bits)

    def __repr__(self):
        return f"B2WedgeElement({self})"


# -- tau ---------------------------------------------------------------------------


def _tau_rational_function(p: MultiPoly) -> Tuple[MultiPoly, MultiPoly]:
    """p(1/x_1, ..., 1/x_n) written as numerator / monomial."""
    degs = [p.degree_in(v) for v in p.vars]
    terms = {}
    for exps, c in p.terms.items():
        terms[tuple(d - e for d, e in zip(degs, exps))] = c
    num = MultiPoly(p.vars, terms)
    mono = MultiPoly(p.vars, {tuple(degs): Fraction(1)})
    return num, mono


class _TauClosure:
    """Cached tau-images of basis polynomials as FactoredElements."""

    def __init__(self, basis: MultiplicativeBasis):
        self.basis = basis
        self.images = []
        for b in basis.polys:
            num, mono = _tau_rational_function(b)
            try:
                img = factor_over_basis((num, mono), basis)
            except NotFactorable as exc:
                raise ValueError(
                    f"basis is not tau-closed: tau({b}) needs factor {exc.remainder}"
                ) from exc
            self.images.append(img)

    def of_factored(self, f: FactoredElement) -> FactoredElement:
        out = FactoredElement(self.basis, f.const)
        for i, e in f.exps.items():
            out = out * self.images[i] ** e
        return out

    def of_label_vector(self, label: Label) -> dict:
        if label[0] == "p":
            return {label: Fraction(1)}
        return self.images[label[1]].torsion_free_labels()


_tau_cache: dict = {}


def _closure_for(basis: MultiplicativeBasis) -> _TauClosure:
    key = id(basis)
    if key not in _tau_cache:
        _tau_cache[key] = _TauClosure(basis)
    return _tau_cache[key]


def apply_tau(e: Union[FactoredElement, WedgeElement, B2WedgeElement]):
    """Pullback by the involution x_i -> 1/x_i (all variables at once)."""
    if isinstance(e, FactoredElement):
        return _closure_for(e.basis).of_factored(e)
    if isinstance(e, WedgeElement):
        closure = _closure_for(e.basis)
        acc: dict = {}
        for labels, c in e.terms.items():
            vecs = [closure.of_label_vector(l) for l in labels]
            for key, v in _wedge_of_vectors(e.basis, c, vecs).items():
                acc[key] = acc.get(key, Fraction(0)) + v
        return WedgeElement(e.basis, e.degree, acc)
    if isinstance(e, B2WedgeElement):
        closure = _closure_for(e.basis)
        out = B2WedgeElement(e.basis, e.wedge_degree)
        for c, f, labels in e.terms_list():
            tf = closure.of_factored(f)
            vecs = [closure.of_label_vector(l) for l in labels]
            acc = _wedge_of_vectors(e.basis, Fraction(1), vecs)
            out.add_term(c, tf, WedgeElement(e.basis, e.wedge_degree, acc))
        return out
    raise TypeError(f"apply_tau does not handle {type(e).__name__}")


# -- decompositions ------------------------------------------------------------------


class DecompositionDocument:
    """Parsed form of the structured decomposition JSON.

    Fields: the variable list, the multiplicative basis, substitutions that
    eliminate dependent variables (e.g. the last coordinate on the zero
    locus), and the Steinberg-shaped right-hand side terms (c, f, g-list).
    """

    def __init__(self, variables, basis_polys, substitutions, terms, lhs=None, name=""):
        self.name = name
        self.variables = tuple(variables)
        self.basis = MultiplicativeBasis(basis_polys, variables)
        self.substitutions = dict(substitutions)  # var name -> MultiPoly
        self.terms = list(terms)  # (Fraction, MultiPoly f, [MultiPoly g...])
        self.lhs_names = tuple(lhs) if lhs else self.variables

    @property
    def n(self) -> int:
        return len(self.lhs_names)

    def lhs_factored(self) -> List[FactoredElement]:
        out = []
        for v in self.lhs_names:
            if v in self.substitutions:
                p = self.substitutions[v]
            else:
                p = MultiPoly.var(v, self.variables)
            out.append(factor_over_basis(p, self.basis))
        return out

    def lhs_wedge(self) -> WedgeElement:
        return wedge_normalize([(Fraction(1), self.lhs_factored())], self.basis)

    def rhs_terms_factored(self):
        out = []
        for c, f, gs in self.terms:
            fe = factor_over_basis(f, self.basis)
            num, den = fe.expand()
            one_minus = factor_over_basis((den - num, den), self.basis)
            ges = [factor_over_basis(g, self.basis) for g in gs]
            out.append((Fraction(c), fe, one_minus, ges))
        return out


def load_decomposition(path_or_dict) -> DecompositionDocument:
    if isinstance(path_or_dict, dict):
        doc = path_or_dict
    else:
        with open(path_or_dict) as fh:
            doc = json.load(fh)
    variables = doc["variables"]
    basis_polys = [parse_poly(s, variables) for s in doc["basis"]]
    subs = {v: parse_poly(s, variables) for v, s in doc.get("substitutions", {}).items()}
    terms = [
        (Fraction(str(c)), parse_poly(f, variables), [parse_poly(g, variables) for g in gs])
        for c, f, gs in doc["terms"]
    ]
    return DecompositionDocument(
        variables, basis_polys, subs, terms, doc.get("lhs"), doc.get("name", "")
    )


def check_decomposition(doc: DecompositionDocument):
    """Verify lhs = sum c_j f_j ^ (1 - f_j) ^ g_j1 ^ ... exactly.

    Returns (equal: bool, difference: WedgeElement).
    """
    lhs = doc.lhs_wedge()
    rhs_terms = []
    for c, fe, one_minus, ges in doc.rhs_terms_factored():
        rhs_terms.append((c, [fe, one_minus] + ges))
    rhs = wedge_normalize(rhs_terms, doc.basis)
    diff = lhs - rhs
    return diff.is_zero(), diff


def build_xi(doc: DecompositionDocument):
    """Build (xi, xi*, lambda) from a verified decomposition.

    xi = sum c_j {f_j}_2 (x) g_j1 ^ ... ^ g_j(n-2); xi* is its tau pullback;
    lambda = (xi + (-1)^(n-1) xi*) / 2.
    """
    equal, diff = check_decomposition(doc)
    if not equal:
        raise ValueError(f"decomposition does not hold; difference = {diff}")
    n = doc.n
    xi = B2WedgeElement(doc.basis, n - 2)
    for c, fe, _one_minus, ges in doc.rhs_terms_factored():
        w = wedge_normalize([(Fraction(1), ges)], doc.basis) if ges else WedgeElement(
            doc.basis, 0, {(): Fraction(1)}
        )
        xi.add_term(c, fe, w)
    xi_star = apply_tau(xi)
    lam = (xi + xi_star.scale(Fraction((-1) ** (n - 1)))).scale(Fraction(1, 2))
    return xi, xi_star, lam
