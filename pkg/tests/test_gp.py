"""Generalized-polynomial evaluation, rewrites, and Bohr windows."""

import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from nilbohr import gp
from nilbohr.verify import rand_gp_expr


# ---------------------------------------------------------------------------
# fractional norm and nearest integer
# ---------------------------------------------------------------------------

def test_frac_norm_examples():
    assert gp.frac_norm(0.3) == pytest.approx(0.3)
    assert gp.frac_norm(-1.2) == pytest.approx(0.2)
    assert gp.frac_norm(2.5) == 0.5
    assert gp.frac_norm(F(7, 3)) == F(1, 3)


def test_frac_norm_rejects_non_finite():
    with pytest.raises(ValueError):
        gp.frac_norm(float("inf"))
    with pytest.raises(ValueError):
        gp.frac_norm(float("nan"))


def test_nearest_int_tie_rule_exact():
    # ties resolve to the smaller integer
    assert gp.nearest_int(F(1, 2)) == 0
    assert gp.nearest_int(F(-1, 2)) == -1
    assert gp.nearest_int(F(5, 2)) == 2
    assert gp.nearest_int(0.3) == 0
    assert gp.nearest_int(7) == 7


def test_nearest_int_float_tie_guard():
    with pytest.raises(gp.BoundaryAmbiguous):
        gp.nearest_int(0.5)
    with pytest.raises(gp.BoundaryAmbiguous):
        gp.nearest_int(2.5 + 1e-14)
    # outside the guard the tie rule is moot
    assert gp.nearest_int(0.5 + 1e-9) == 1


@given(st.fractions(min_value=-50, max_value=50, max_denominator=97))
def test_norm_is_distance_to_nearest_int(a):
    assert gp.frac_norm(a) == abs(a - gp.nearest_int(a)) or a % 1 == F(1, 2)
    r = gp.residual(a)
    assert -F(1, 2) < r <= F(1, 2)
    assert gp.frac_norm(a) == min(abs(a - m) for m in
                                  (math.floor(a), math.ceil(a)))


# ---------------------------------------------------------------------------
# nested brackets
# ---------------------------------------------------------------------------

def test_eval_L_examples():
    assert gp.eval_L([0.4]) == 0.4
    assert gp.eval_L([0.4, 1.6]) == pytest.approx(0.8)
    assert gp.eval_L([F(1, 2), F(3, 10), F(12, 5)]) == F(1, 2)


def test_eval_L_rejects_empty():
    with pytest.raises(ValueError):
        gp.eval_L([])


def test_eval_sgp():
    term = gp.SgpTerm((1, 1), (F(1, 10), F(2, 5)))
    assert gp.eval_sgp(term, 3) == F(3, 10)
    single = gp.SgpTerm((1,), (F(5, 7),))
    for n in range(-6, 7):
        assert gp.eval_sgp(single, n) == n * F(5, 7)
    assert gp.eval_sgp(gp.SgpTerm((2, 3), (F(1, 3), F(2, 9))), 0) == 0


def test_sgp_term_validation():
    with pytest.raises(ValueError):
        gp.SgpTerm((), ())
    with pytest.raises(ValueError):
        gp.SgpTerm((0,), (F(1),))
    with pytest.raises(ValueError):
        gp.SgpTerm((1, 2), (F(1),))


def test_sgp_to_gp_round_trip_values():
    rng = random.Random(11)
    for _ in range(40):
        ell = rng.randint(1, 3)
        exps = tuple(rng.randint(1, 2) for _ in range(ell))
        coeffs = tuple(F(rng.randint(-9, 9), rng.randint(1, 12)) for _ in range(ell))
        term = gp.SgpTerm(exps, coeffs)
        expr = gp.sgp_to_gp(term)
        assert expr.degree == term.total_degree
        for n in range(-10, 11):
            assert gp.eval_sgp(term, n) == gp.gp_eval(expr, n)


def test_sgp_degree_stays_within_budget():
    # every nested form of total degree <= d converts inside degree d
    rng = random.Random(5)
    for _ in range(60):
        d = rng.randint(1, 4)
        parts = []
        left = d
        while left and (not parts or rng.random() < 0.7):
            j = rng.randint(1, left)
            parts.append(j)
            left -= j
        term = gp.SgpTerm(tuple(parts),
                          tuple(F(rng.randint(1, 5), 7) for _ in parts))
        assert gp.sgp_to_gp(term).degree <= d


# ---------------------------------------------------------------------------
# the alternating composition sum
# ---------------------------------------------------------------------------

def test_compositions_order():
    assert gp.compositions(1) == [(1,)]
    comps = gp.compositions(3)
    assert comps[0] == (3,) and comps[-1] == (1, 1, 1)
    assert comps == sorted(comps, reverse=True)
    assert sum(1 for _ in gp.compositions(5)) == 16


def test_eval_P_first_order():
    for n in range(-10, 11):
        assert gp.eval_P(n, (F(3, 11),)) == n * F(3, 11)


def test_eval_P_second_order_closed_form():
    a1, a2 = F(4, 9), F(7, 13)
    for n in range(-25, 26):
        expect = F(n * n, 2) * a1 * a2 - n * a1 * gp.nearest_int(n * a2)
        assert gp.eval_P(n, (a1, a2)) == expect


def test_eval_P_vanishes_at_zero():
    rng = random.Random(2)
    for r in range(1, 5):
        alphas = [F(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(r)]
        assert gp.eval_P(0, alphas) == 0


def test_eval_P_rejects_empty():
    with pytest.raises(ValueError):
        gp.eval_P(3, ())


# ---------------------------------------------------------------------------
# expression trees
# ---------------------------------------------------------------------------

def test_gp_eval_examples():
    assert gp.gp_eval(gp.Linear(0.25), 4) == 1.0
    assert gp.gp_eval(gp.Scale(3, gp.Round(gp.Linear(0.4))), 2) == 3
    mono = gp.Monomial(0.5, 1, (gp.Round(gp.Linear(0.3)),))
    assert gp.gp_eval(mono, 2) == 1.0


def test_degree_bookkeeping():
    assert gp.gp_degree(gp.Linear(F(1, 2))) == 1
    # b n <c n> has degree 2
    prod = gp.Monomial(F(1, 3), 1, (gp.Round(gp.Linear(F(2, 5))),))
    assert gp.gp_degree(prod) == 2
    mix = gp.Sum((gp.Linear(1), gp.Monomial(F(1), 3)))
    assert gp.gp_degree(mix) == 3
    assert gp.gp_degree(gp.Round(prod)) == 2
    assert gp.gp_degree(gp.Scale(F(7), prod)) == 2


def test_expr_validation():
    with pytest.raises(ValueError):
        gp.Sum(())
    with pytest.raises(ValueError):
        gp.Monomial(F(1), 0, ())
    with pytest.raises(ValueError):
        gp.Monomial(F(1), -1, ())


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 3))
def test_gp_eval_vanishes_at_zero(seed, degree_bump):
    rng = random.Random(seed)
    expr = rand_gp_expr(rng, 1 + degree_bump)
    assert gp.gp_eval(expr, 0) == 0


def test_boundary_flag_propagates_through_round():
    expr = gp.Scale(2.0, gp.Round(gp.Linear(0.25)))
    with pytest.raises(gp.BoundaryAmbiguous):
        gp.gp_eval(expr, 2)  # 0.25 * 2 = 0.5 exactly
    assert gp.gp_eval(expr, 4) == 2.0


# ---------------------------------------------------------------------------
# rewrites
# ---------------------------------------------------------------------------

def test_scaled_bracket_rewrite_matches():
    e = gp.Scale(F(3, 7), gp.Round(gp.Linear(F(5, 9))))
    s = gp.gp_simplify(e)
    assert s != e
    for n in range(-30, 31):
        assert gp.gp_eval(e, n) == gp.gp_eval(s, n)
    assert gp.gp_eval(s, 0) == 0


def test_bracket_product_rewrite_matches():
    rng = random.Random(23)
    for _ in range(200):
        c = F(rng.randint(-9, 9), rng.randint(1, 9))
        k = rng.randint(1, 3)
        fs = tuple(gp.Round(gp.Linear(F(rng.randint(-9, 9), rng.randint(1, 9))))
                   for _ in range(k))
        e = gp.Monomial(c, 0, fs)
        s = gp.gp_simplify(e)
        n = rng.randint(-50, 50)
        assert gp.gp_eval(e, n) == gp.gp_eval(s, n)


def test_mixed_product_rewrite_matches():
    rng = random.Random(29)
    for _ in range(200):
        k = rng.randint(2, 3)
        lead = gp.Linear(F(rng.randint(-9, 9), rng.randint(1, 9)))
        fs = tuple(gp.Round(gp.Linear(F(rng.randint(-9, 9), rng.randint(1, 9))))
                   for _ in range(k - 1))
        e = gp.Monomial(1, 0, (lead, *fs))
        s = gp.gp_simplify(e)
        n = rng.randint(-50, 50)
        assert gp.gp_eval(e, n) == gp.gp_eval(s, n)


@settings(max_examples=250, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-100, 100))
def test_simplify_preserves_evaluation(seed, n):
    rng = random.Random(seed)
    expr = rand_gp_expr(rng, 3)
    assert gp.gp_eval(expr, n) == gp.gp_eval(gp.gp_simplify(expr), n)


def test_simplify_keeps_degree_bound():
    rng = random.Random(31)
    for _ in range(100):
        expr = rand_gp_expr(rng, 3)
        assert gp.gp_simplify(expr).degree <= expr.degree


# ---------------------------------------------------------------------------
# windowed Bohr sets
# ---------------------------------------------------------------------------

def test_bohr_window_quarter_rotation():
    spec = gp.BohrSpec(((gp.Linear(F(1, 4)), F(1, 10)),), (0, 12))
    assert gp.bohr_window(spec).members == (0, 4, 8, 12)


def test_bohr_window_zero_always_member():
    rng = random.Random(41)
    for _ in range(20):
        e = rand_gp_expr(rng, 3)
        spec = gp.BohrSpec(((e, F(1, 50)),), (-5, 5))
        assert 0 in gp.bohr_window(spec).members


def test_bohr_window_intersection_of_constraints():
    c1 = (gp.Linear(F(1, 4)), F(1, 10))
    c2 = (gp.Linear(F(1, 6)), F(1, 10))
    both = gp.bohr_window(gp.BohrSpec((c1, c2), (0, 60)))
    only1 = gp.bohr_window(gp.BohrSpec((c1,), (0, 60)))
    only2 = gp.bohr_window(gp.BohrSpec((c2,), (0, 60)))
    assert set(both.members) == set(only1.members) & set(only2.members)


def test_bohr_window_monotone_in_eps():
    e = gp.Linear(F(3, 7))
    small = gp.bohr_window(gp.BohrSpec(((e, F(1, 20)),), (-40, 40)))
    large = gp.bohr_window(gp.BohrSpec(((e, F(1, 5)),), (-40, 40)))
    assert set(small.members) <= set(large.members)


def test_bohr_window_commutes_with_restriction():
    e = gp.Linear(F(3, 7))
    whole = gp.bohr_window(gp.BohrSpec(((e, F(1, 8)),), (-60, 60)))
    part = gp.bohr_window(gp.BohrSpec(((e, F(1, 8)),), (-10, 25)))
    assert whole.restrict(-10, 25) == part


def test_bohr_window_boundary_listed_not_member():
    # 0.25 n hits exactly 0.1? no; use 0.5n with eps 1/2: n odd gives 0.5
    spec = gp.BohrSpec(((gp.Linear(0.5), 0.49),), (0, 6))
    ws = gp.bohr_window(spec)
    assert ws.boundary == ()  # no Round nodes, no ambiguity
    spec2 = gp.BohrSpec(((gp.Scale(1.0, gp.Round(gp.Linear(0.25))), 0.4),), (0, 8))
    ws2 = gp.bohr_window(spec2)
    # n = 2, 6 put 0.25n exactly on a half-integer
    assert ws2.boundary == (2, 6)
    assert not set(ws2.boundary) & set(ws2.members)


def test_bohr_spec_rejects_bad_eps():
    with pytest.raises(ValueError):
        gp.BohrSpec(((gp.Linear(F(1, 2)), F(3, 5)),), (0, 10))
    with pytest.raises(ValueError):
        gp.BohrSpec(((gp.Linear(F(1, 2)), 0),), (0, 10))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_expr_json_round_trip():
    rng = random.Random(53)
    for _ in range(50):
        e = rand_gp_expr(rng, 3)
        assert gp.gp_from_json(gp.gp_to_json(e)) == e


def test_bohr_spec_json_round_trip():
    spec = gp.BohrSpec(((gp.Linear(F(1, 4)), F(1, 10)),
                        (gp.Monomial(F(2, 3), 2), F(1, 3))), (-5, 12))
    assert gp.bohr_spec_from_json(gp.bohr_spec_to_json(spec)) == spec
