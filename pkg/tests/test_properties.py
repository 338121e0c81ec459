"""Randomized checks of the structural invariants across modules and operators."""

from fractions import Fraction as Q

from hypothesis import given, settings, strategies as st

from sl2loc.exact import Chart, IndexPoly, Laurent
from sl2loc.reps import Family, act_lie, casimir_scalar, global_module, make_local
from sl2loc.tdo import LieWord, TracelessMatrix, beta, chart_operator, derive_chart_operator, glue_check
from sl2loc.weyl import WeylOp, conjugate_by_power, twist_psi, weyl_mul

PAIRS = [
    (Family.FINITE, Chart.INF),
    (Family.FINITE, Chart.ZERO),
    (Family.VERMA, Chart.ZERO),
    (Family.DUAL_VERMA, Chart.INF),
    (Family.DUAL_VERMA, Chart.ZERO),
    (Family.DELTA_INF, Chart.INF),
    (Family.PRINCIPAL_EVEN, Chart.INF),
    (Family.PRINCIPAL_EVEN, Chart.ZERO),
    (Family.PRINCIPAL_ODD, Chart.INF),
    (Family.PRINCIPAL_ODD, Chart.ZERO),
    (Family.WHITTAKER, Chart.INF),
    (Family.WHITTAKER, Chart.ZERO),
]
ETAS = [Q(0), Q(1), Q(-2), Q(3, 2)]

ts = st.integers(1, 6)
etas = st.sampled_from(ETAS)
indices = st.integers(-30, 30)


def eta_for(family, eta):
    return eta if family is Family.WHITTAKER else Q(0)


def nearest_basis(m, k):
    lo, hi = m.domain.lo, m.domain.hi
    if lo is not None and k < lo:
        k = lo
    if hi is not None and k > hi:
        k = hi
    return m.basis(k)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(PAIRS), ts, etas, indices)
def test_derivative_and_coordinate_satisfy_heisenberg(pair, t, eta, k):
    family, chart = pair
    m = make_local(family, chart, t, eta_for(family, eta))
    v = nearest_basis(m, k)
    assert m.deriv(m.coord(v)) - m.coord(m.deriv(v)) == v


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(PAIRS), ts, etas, indices)
def test_local_sl2_relations(pair, t, eta, k):
    family, chart = pair
    m = make_local(family, chart, t, eta_for(family, eta))
    v = nearest_basis(m, k)
    act = lambda x, u: act_lie(m, x, u)  # noqa: E731
    assert act("E", act("F", v)) - act("F", act("E", v)) == act("H", v)
    assert act("H", act("E", v)) - act("E", act("H", v)) == 2 * act("E", v)
    assert act("H", act("F", v)) - act("F", act("H", v)) == -2 * act("F", v)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(list(Family)), ts, etas, indices)
def test_global_sl2_relations_and_casimir(family, t, eta, k):
    M = global_module(family, t, eta_for(family, eta))
    lo, hi = M.domain.lo, M.domain.hi
    if lo is not None:
        k = max(k, lo)
    if hi is not None:
        k = min(k, hi)
    v = M.basis(k)
    ef = M.act_word(LieWord.parse("E*F - F*E"), v)
    assert ef == M.act("H", v)
    omega = M.act_word(LieWord.parse("H*H + 2*E*F + 2*F*E"), v)
    assert omega == ((t - 1) ** 2 + 2 * (t - 1)) * v


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(list(Family)), ts, etas)
def test_support_is_closed(family, t, eta):
    M = global_module(family, t, eta_for(family, eta))
    for k in M.window(12):
        for x in "EFH":
            assert all(j in M.domain for j in M.act(x, M.basis(k)).terms)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([Family.VERMA, Family.DELTA_INF]), st.integers(0, 12))
def test_singular_point_relations(family, k):
    M = global_module(family, 0, singular=True)
    v = M.basis(k)
    assert M.act_word(LieWord.parse("E*F - F*E"), v) == M.act("H", v)
    assert M.act_word(LieWord.parse("H*E - E*H"), v) == 2 * M.act("E", v)
    assert M.act_word(LieWord.parse("H*H + 2*E*F + 2*F*E"), v) == -1 * v


@settings(max_examples=30, deadline=None)
@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6), st.sampled_from(list(Chart)))
def test_derived_operators_are_first_order(a, b, c, chart):
    X = TracelessMatrix(x11=a, x12=b, x21=c)
    op = derive_chart_operator(X, chart, 3)
    assert op.order() <= 1
    # linear in the matrix
    expected = a * chart_operator("H", chart, 3) + b * chart_operator("E", chart, 3) + c * chart_operator("F", chart, 3)
    assert op == expected


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=-5, max_value=5, max_denominator=4), st.sampled_from("EFH"))
def test_gluing_for_rational_twist(t, letter):
    assert glue_check(beta(LieWord.letter(letter), t))


@settings(max_examples=40, deadline=None)
@given(st.integers(-4, 8), st.dictionaries(st.integers(0, 2), st.dictionaries(st.integers(-2, 2), st.integers(-5, 5), max_size=2), max_size=2))
def test_twist_equals_conjugation_for_integer_shift(t, coeffs):
    a = WeylOp(Chart.ZERO, {i: Laurent(Chart.ZERO, c) for i, c in coeffs.items()})
    assert twist_psi(a, t) == conjugate_by_power(a, t - 1)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(-2, 2), st.integers(-4, 4)), max_size=5))
def test_normal_form_independent_of_construction_order(terms):
    def build(seq):
        out = WeylOp(Chart.ZERO)
        for i, e, c in seq:
            out = out + weyl_mul(WeylOp.function(Laurent(Chart.ZERO, {e: c})), WeylOp.d(Chart.ZERO, i))
        return out

    a, b = build(terms), build(list(reversed(terms)))
    assert a == b and a.coeffs == b.coeffs


@settings(max_examples=100, deadline=None)
@given(st.integers(-50, 50), st.integers(1, 30), st.integers(-50, 50), st.integers(1, 30))
def test_rational_sum_by_cross_multiplication(a, b, c, d):
    s = Q(a, b) + Q(c, d)
    assert s.numerator * b * d == (a * d + c * b) * s.denominator
    assert s.denominator > 0


def test_casimir_symbolic_constant():
    g = beta(LieWord.parse("H*H + 2*E*F + 2*F*E"))
    assert g.op0.scalar_value() == IndexPoly.parse("(t-1)^2 + 2*(t-1)")
    assert casimir_scalar(global_module("FiniteO", 5), 10) == 24
