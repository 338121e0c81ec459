from fractions import Fraction as Q

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from sl2loc.exact import T, Chart, ChartMismatch, Laurent
from sl2loc.weyl import (
    WeylOp,
    chart_rewrite,
    conjugate_by_power,
    parse_weyl,
    render_weyl,
    twist_psi,
    weyl_commutator,
    weyl_mul,
    weyl_transpose,
)

from oracles import same_operator, weyl_to_callable, w, z

Z, W = Chart.ZERO, Chart.INF


def op(text, chart=Z):
    return parse_weyl(text, chart)


# multiplication -----------------------------------------------------------------


def test_derivative_past_coordinate():
    assert weyl_mul(op("d"), op("z")) == op("z*d + 1")


def test_functions_commute():
    assert weyl_mul(op("z"), op("z")) == op("z^2")
    assert weyl_commutator(op("z"), op("z^2")) == WeylOp(Z)


def test_normal_ordering_by_hand():
    # (z^2 d - 2z)(-d) = -z^2 d^2 + 2 z d
    assert weyl_mul(op("z^2*d - 2*z"), op("-d")) == op("-z^2*d^2 + 2*z*d")


def test_product_against_composition_oracle():
    a, b = op("z^2*d - 2*z"), op("-d")
    assert same_operator(weyl_mul(a, b), lambda f: weyl_to_callable(a)(weyl_to_callable(b)(f)), "zero")


def test_canonical_commutator():
    assert weyl_commutator(op("d"), op("z")) == WeylOp.const(Z, 1)


def test_e_f_commutator_is_h_symbolically():
    e = op("z^2*d - (t-1)*z")
    f = op("-d")
    assert weyl_commutator(e, f) == op("2*z*d - (t-1)")


def test_chart_mismatch():
    with pytest.raises(ChartMismatch):
        weyl_mul(op("d"), op("d", W))


def test_negative_powers_of_coordinate():
    assert weyl_mul(op("d"), op("z^-1")) == op("z^-1*d - z^-2")


# transpose ----------------------------------------------------------------------


def test_transpose_examples():
    assert weyl_transpose(op("d")) == op("-d")
    assert weyl_transpose(op("z*d")) == op("-z*d - 1")
    assert weyl_transpose(op("z^3")) == op("z^3")


# chart rewrite ------------------------------------------------------------------


def test_rewrite_examples():
    assert chart_rewrite(op("d", W)) == op("-z^2*d")
    assert chart_rewrite(op("w", W)) == op("z^-1")
    assert chart_rewrite(op("w^2*d - (t-1)*w", W)) == op("-d - (t-1)*z^-1")


def test_rewrite_against_substitution_oracle():
    a = op("w^2*d^2 - 3*w*d + 5", W)
    b = chart_rewrite(a)
    # pull back: (a g)(w) with g(w) = f(1/w), then w -> 1/z
    ref = lambda f: weyl_to_callable(a)(f.subs(z, 1 / w)).subs(w, 1 / z)  # noqa: E731
    assert same_operator(b, ref, "zero")


# twist ----------------------------------------------------------------------------


def test_twist_examples():
    assert twist_psi(op("d"), 4) == op("d - 3*z^-1")
    assert twist_psi(op("z"), 7) == op("z")
    assert twist_psi(op("z^2*d"), T) == op("z^2*d - (t-1)*z")


def test_twist_is_conjugation():
    for t in range(1, 6):
        a = op("z^2*d^2 + z*d - 4")
        assert twist_psi(a, t) == conjugate_by_power(a, t - 1)


def test_twist_inverse():
    a = op("z^3*d^2 - d + z^-1")
    assert twist_psi(twist_psi(a, T), T, inverse=True) == a


def test_twist_requires_z_chart():
    with pytest.raises(ChartMismatch):
        twist_psi(op("d", W), 2)


def test_conjugation_examples():
    assert conjugate_by_power(op("d"), 4) == op("d - 4*z^-1")
    assert conjugate_by_power(op("z"), -3) == op("z")
    assert conjugate_by_power(op("d^2"), 1) == op("d^2 - 2*z^-1*d + 2*z^-2")


# text format ----------------------------------------------------------------------


def test_render_format():
    assert render_weyl(op("z^2*d - (t-1)*z")) == "z^2*d - (t - 1)*z"
    assert render_weyl(op("-2*w*d + 1", W)) == "-2*w*d + 1"
    assert render_weyl(WeylOp(Z)) == "0"


def test_apply_to_laurent():
    assert op("z^2*d - 2*z").apply(Laurent(Z, {3: 1})) == Laurent(Z, {4: 1})
    assert op("d", W).apply(Laurent(W, {3: 1})) == Laurent(W, {2: 3})


# properties -------------------------------------------------------------------------

coeffs = st.builds(Q, st.integers(-6, 6), st.integers(1, 3))


def weyl_ops(chart=Z):
    terms = st.dictionaries(
        st.integers(0, 2),
        st.dictionaries(st.integers(-2, 2), coeffs, max_size=2),
        max_size=2,
    )
    return terms.map(lambda d: WeylOp(chart, {i: Laurent(chart, c) for i, c in d.items()}))


@settings(max_examples=40, deadline=None)
@given(weyl_ops(), weyl_ops(), weyl_ops())
def test_multiplication_associative_and_distributive(a, b, c):
    assert weyl_mul(weyl_mul(a, b), c) == weyl_mul(a, weyl_mul(b, c))
    assert weyl_mul(a, b + c) == weyl_mul(a, b) + weyl_mul(a, c)


@settings(max_examples=25, deadline=None)
@given(weyl_ops(), weyl_ops())
def test_product_acts_as_composition(a, b):
    ab = weyl_mul(a, b)
    f = z**3 + sp.exp(z)
    assert sp.simplify(weyl_to_callable(ab)(f) - weyl_to_callable(a)(weyl_to_callable(b)(f))) == 0


@settings(max_examples=40, deadline=None)
@given(weyl_ops(), weyl_ops(), st.integers(1, 6))
def test_twist_is_homomorphism(a, b, t):
    assert twist_psi(weyl_mul(a, b), t) == weyl_mul(twist_psi(a, t), twist_psi(b, t))


@settings(max_examples=40, deadline=None)
@given(weyl_ops(W), weyl_ops(W))
def test_rewrite_is_homomorphism_and_involution(a, b):
    assert chart_rewrite(chart_rewrite(a)) == a
    assert chart_rewrite(weyl_mul(a, b)) == weyl_mul(chart_rewrite(a), chart_rewrite(b))


@settings(max_examples=40, deadline=None)
@given(weyl_ops(), weyl_ops())
def test_transpose_is_anti_automorphism(a, b):
    assert weyl_transpose(weyl_mul(a, b)) == weyl_mul(weyl_transpose(b), weyl_transpose(a))
    assert weyl_transpose(weyl_transpose(a)) == a


@settings(max_examples=40, deadline=None)
@given(weyl_ops(), weyl_ops(W))
def test_text_round_trip(a, b):
    assert parse_weyl(render_weyl(a), Z) == a
    assert parse_weyl(render_weyl(b), W) == b
