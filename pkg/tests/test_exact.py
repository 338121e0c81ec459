from fractions import Fraction as Q

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from sl2loc.exact import (
    ETA,
    K,
    T,
    Chart,
    ChartMismatch,
    IndexPoly,
    Laurent,
    as_scalar,
    indexpoly_eval,
    laurent_invert_coordinate,
    laurent_mul,
    render_rational,
)

from oracles import laurent_to_sym, sym_scalar, w, z

Z, W = Chart.ZERO, Chart.INF


def lz(terms):
    return Laurent(Z, terms)


# laurent_mul ------------------------------------------------------------------


def test_inverse_exponents_cancel():
    assert laurent_mul(lz({1: 1}), lz({-1: 1})) == Laurent.const(Z, 1)


def test_product_matches_hand_expansion():
    # (z^2 - z)(z + 1) = z^3 + z^2 - z^2 - z
    assert laurent_mul(lz({2: 1, 1: -1}), lz({1: 1, 0: 1})) == lz({3: 1, 1: -1})


def test_zero_annihilates():
    assert laurent_mul(Laurent(Z), lz({5: 1})) == Laurent(Z)
    assert not laurent_mul(Laurent(Z), lz({5: 1}))


def test_mixed_charts_rejected():
    with pytest.raises(ChartMismatch):
        laurent_mul(lz({1: 1}), Laurent(W, {1: 1}))
    with pytest.raises(ChartMismatch):
        lz({1: 1}) + Laurent(W, {1: 1})


def test_symbolic_coefficients_multiply():
    a = Laurent(Z, {1: T - 1})
    b = Laurent(Z, {-1: K})
    assert laurent_mul(a, b) == Laurent.const(Z, K * T - K)


# coordinate inversion ----------------------------------------------------------


def test_inversion_moves_chart_and_negates_exponents():
    assert laurent_invert_coordinate(Laurent(W, {2: 1})) == lz({-2: 1})
    assert laurent_invert_coordinate(Laurent.const(W, 1)) == Laurent.const(Z, 1)
    assert laurent_invert_coordinate(Laurent(W, {1: 3, -1: -2})) == lz({-1: 3, 1: -2})


def test_inversion_agrees_with_substitution():
    f = Laurent(W, {3: Q(1, 2), -2: 7, 0: -1})
    expected = laurent_to_sym(f).subs(w, 1 / z)
    assert sp.simplify(laurent_to_sym(laurent_invert_coordinate(f)) - expected) == 0


# IndexPoly --------------------------------------------------------------------


def test_indexpoly_evaluation():
    assert indexpoly_eval(-T - K, 2, 3, 0) == -5
    assert indexpoly_eval(K + Q(1, 2), 0, 1, 0) == Q(1, 2)
    assert indexpoly_eval(IndexPoly(), 4, 9, Q(3, 2)) == 0


def test_indexpoly_parse_and_render():
    p = IndexPoly.parse("-t + 1/2 - k")
    assert p == -T + Q(1, 2) - K
    assert IndexPoly.parse(str(p)) == p
    assert str(IndexPoly.parse("(t-1)^2 + 2*(t-1)")) == "t^2 - 1"


def test_partial_substitution_keeps_symbols():
    p = K * T + ETA
    assert p.subs(t=2) == 2 * K + ETA
    assert p.subs(k=1, t=2, eta=Q(-1, 3)) == Q(5, 3)


def test_constant_polys_collapse_to_fractions():
    assert as_scalar(T - T + 3) == 3
    assert isinstance(as_scalar(T - T + 3), Q)


def test_render_rational():
    assert render_rational(Q(-3, 2)) == "-3/2"
    assert render_rational(Q(4)) == "4"


# properties -------------------------------------------------------------------

rationals = st.builds(Q, st.integers(-19, 19), st.integers(1, 6))
laurents = st.dictionaries(st.integers(-4, 4), rationals, max_size=4).map(lambda d: Laurent(Z, d))
polys = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 1)), rationals, max_size=4
).map(IndexPoly)


@settings(max_examples=60, deadline=None)
@given(laurents, laurents, laurents)
def test_laurent_ring_axioms(a, b, c):
    assert laurent_mul(a, b) == laurent_mul(b, a)
    assert laurent_mul(laurent_mul(a, b), c) == laurent_mul(a, laurent_mul(b, c))
    assert laurent_mul(a, b + c) == laurent_mul(a, b) + laurent_mul(a, c)
    assert a - a == Laurent(Z)


@settings(max_examples=60, deadline=None)
@given(laurents, laurents)
def test_laurent_product_agrees_with_sympy(a, b):
    assert sp.expand(laurent_to_sym(laurent_mul(a, b)) - laurent_to_sym(a) * laurent_to_sym(b)) == 0


@settings(max_examples=60, deadline=None)
@given(laurents, laurents)
def test_inversion_is_ring_homomorphism_and_involution(a, b):
    inv = laurent_invert_coordinate
    assert inv(inv(a)) == a
    assert inv(laurent_mul(a, b)) == laurent_mul(inv(a), inv(b))


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_indexpoly_ring_axioms(p, q, s):
    assert p * q == q * p
    assert (p * q) * s == p * (q * s)
    assert p * (q + s) == p * q + p * s
    assert p - p == 0


@settings(max_examples=60, deadline=None)
@given(polys, polys, st.integers(-5, 5), st.integers(1, 6), rationals)
def test_evaluation_is_homomorphism(p, q, k, t, eta):
    ev = lambda f: indexpoly_eval(f, k, t, eta)  # noqa: E731
    assert ev(p * q) == ev(p) * ev(q)
    assert ev(p + q) == ev(p) + ev(q)
    kk, tt, ee = sp.symbols("k t eta")
    assert sym_scalar(p).subs({kk: k, tt: t, ee: sp.Rational(eta.numerator, eta.denominator)}) == sp.Rational(
        ev(p).numerator, ev(p).denominator
    )


@settings(max_examples=60, deadline=None)
@given(polys)
def test_indexpoly_text_round_trip(p):
    assert IndexPoly.parse(str(p)) == p
