"""Unipotent coordinates: group laws, closed-form powers, reduction."""

import random
from fractions import Fraction as F
from itertools import product

import pytest

from nilbohr import gp, nilmatrix as nm
from nilbohr.verify import rand_nilcoords


def dense_mul(a, b):
    """Plain (d+1)x(d+1) matrix product; the oracle for mat_mul."""
    n = len(a)
    return [[sum(a[r][k] * b[k][c] for k in range(n)) for c in range(n)]
            for r in range(n)]


def test_binom_int_negative_arguments():
    assert nm.binom_int(5, 2) == 10
    assert nm.binom_int(-1, 3) == -1
    assert nm.binom_int(-4, 2) == 10
    assert nm.binom_int(0, 0) == 1
    assert nm.binom_int(3, 5) == 0


def test_mat_mul_identity_and_example():
    a = nm.NilCoords(2, ((1, 2), (0,)))
    z = nm.NilCoords.zero(2)
    assert nm.mat_mul(a, z).levels == a.levels
    assert nm.mat_mul(z, a).levels == a.levels
    b = nm.NilCoords(2, ((3, 4), (0,)))
    assert nm.mat_mul(a, b).levels == ((4, 6), (4,))


def test_mat_mul_dimension_mismatch():
    with pytest.raises(ValueError):
        nm.mat_mul(nm.NilCoords.zero(2), nm.NilCoords.zero(3))


def test_mat_mul_matches_dense_product():
    rng = random.Random(3)
    for _ in range(50):
        d = rng.randint(1, 5)
        a, b = rand_nilcoords(rng, d), rand_nilcoords(rng, d)
        assert nm.mat_mul(a, b).to_matrix() == dense_mul(a.to_matrix(), b.to_matrix())


def test_mat_mul_associative():
    rng = random.Random(5)
    for _ in range(40):
        d = rng.randint(1, 5)
        a, b, c = (rand_nilcoords(rng, d) for _ in range(3))
        left = nm.mat_mul(nm.mat_mul(a, b), c)
        right = nm.mat_mul(a, nm.mat_mul(b, c))
        assert left.levels == right.levels


def test_mat_inv_examples_and_involution():
    assert nm.mat_inv(nm.NilCoords.zero(3)).levels == nm.NilCoords.zero(3).levels
    a = nm.NilCoords(2, ((1, 2), (0,)))
    assert nm.mat_inv(a).levels == ((-1, -2), (2,))
    rng = random.Random(7)
    for _ in range(40):
        d = rng.randint(1, 5)
        x = rand_nilcoords(rng, d)
        inv = nm.mat_inv(x)
        assert nm.mat_mul(x, inv).levels == nm.NilCoords.zero(d).levels
        assert nm.mat_mul(inv, x).levels == nm.NilCoords.zero(d).levels
        assert nm.mat_inv(inv).levels == x.levels


def test_pow_closed_small_cases():
    rng = random.Random(9)
    for d in (2, 3, 4, 5):
        x = rand_nilcoords(rng, d)
        assert nm.mat_pow_closed(x, 0).levels == nm.NilCoords.zero(d).levels
        assert nm.mat_pow_closed(x, 1).levels == x.levels


def test_pow_closed_vs_iterated_both_signs():
    rng = random.Random(11)
    for d in (2, 3, 4):
        x = rand_nilcoords(rng, d)
        inv = nm.mat_inv(x)
        acc = nm.NilCoords.zero(d)
        acc_neg = nm.NilCoords.zero(d)
        for n in range(1, 16):
            acc = nm.mat_mul(acc, x)
            acc_neg = nm.mat_mul(acc_neg, inv)
            assert nm.mat_pow_closed(x, n).levels == acc.levels
            assert nm.mat_pow_closed(x, -n).levels == acc_neg.levels


def test_pow_closed_superdiagonal_formula():
    alphas = (F(2, 7), F(3, 11), F(4, 13), F(5, 17))
    x = nm.superdiag(alphas)
    for n in (-9, -2, 0, 1, 6, 23):
        p = nm.mat_pow_closed(x, n)
        for i, k, v in p.entries():
            prod = F(1)
            for t in range(i - 1, i - 1 + k):
                prod *= alphas[t]
            assert v == nm.binom_int(n, k) * prod
        assert nm.superdiag_pow(alphas, n).levels == p.levels


def test_power_law_additivity():
    rng = random.Random(13)
    for _ in range(10):
        d = rng.randint(2, 4)
        x = rand_nilcoords(rng, d)
        table = nm.composition_products(x)
        for m, n in ((3, 4), (-5, 2), (-7, -8), (15, -15)):
            lhs = nm.mat_pow_from_table(d, table, m + n)
            rhs = nm.mat_mul(nm.mat_pow_from_table(d, table, m),
                             nm.mat_pow_from_table(d, table, n))
            assert lhs.levels == rhs.levels


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------

def test_lattice_reduce_integer_input():
    x = nm.NilCoords(3, ((2, -3, 5), (7, 0), (-4,)))
    red = nm.lattice_reduce(x)
    assert red.h.levels == x.levels
    assert red.z.levels == nm.NilCoords.zero(3).levels


def test_lattice_reduce_d1():
    red = nm.lattice_reduce(nm.NilCoords(1, ((F(7, 10),),)))
    assert red.h.levels == ((1,),)
    assert red.z.levels == ((F(-3, 10),),)


def test_lattice_reduce_d2_unrolled():
    # z_1^2 = u - <u> with u = binom(n,2) a1 a2 - n a1 <n a2>
    a1, a2 = F(3, 7), F(5, 11)
    for n in range(-40, 41):
        x = nm.superdiag_pow((a1, a2), n)
        red = nm.lattice_reduce(x)
        u = nm.binom_int(n, 2) * a1 * a2 - n * a1 * gp.nearest_int(n * a2)
        assert red.z.get(1, 2) == u - gp.nearest_int(u)


def test_lattice_reduce_contract():
    rng = random.Random(17)
    half = F(1, 2)
    for _ in range(200):
        d = rng.randint(1, 4)
        x = rand_nilcoords(rng, d)
        red = nm.lattice_reduce(x)
        assert all(abs(v) <= half for _, _, v in red.z.entries())
        assert nm.mat_mul(x, nm.neg(red.h)).levels == red.z.levels
        assert isinstance(red.h, nm.LatticeElem)


def test_lattice_elem_requires_ints():
    with pytest.raises(ValueError):
        nm.LatticeElem(1, ((F(1, 2),),))


# ---------------------------------------------------------------------------
# return sets
# ---------------------------------------------------------------------------

def test_nil_return_d1_equals_circle_rotation():
    ws = nm.nil_return_set((F(1, 4),), F(1, 10), (0, 12))
    assert ws.members == (0, 4, 8, 12)
    spec = gp.BohrSpec(((gp.Linear(F(1, 4)), F(1, 10)),), (0, 12))
    assert gp.bohr_window(spec).members == ws.members


def test_nil_return_zero_rotation_is_whole_window():
    ws = nm.nil_return_set((F(0), F(0)), F(1, 3), (-7, 7))
    assert ws.members == tuple(range(-7, 8))


def test_nil_return_rejects_large_eta():
    with pytest.raises(ValueError):
        nm.nil_return_set((F(1, 3),), F(3, 5), (0, 10))


def test_nil_return_d2_analytic_characterisation():
    a1, a2 = F(13, 37), F(8, 23)
    eta = F(1, 8)
    got = nm.nil_return_set((a1, a2), eta, (-120, 120))
    expect = []
    for n in range(-120, 121):
        u = nm.binom_int(n, 2) * a1 * a2 - n * a1 * gp.nearest_int(n * a2)
        if (gp.frac_norm(n * a1) < eta and gp.frac_norm(n * a2) < eta
                and gp.frac_norm(u) < eta):
            expect.append(n)
    assert list(got.members) == expect


def _lattice_box_search(x, eta):
    """Is there any integer lattice element B with ||M(x)M(B) - I|| < eta?

    Exhaustive over entries bounded by the magnitudes of x plus one; the
    independent soundness oracle for the greedy reduction claim.
    """
    d = x.d
    coords = list(x.entries())
    bounds = []
    for i, k, v in coords:
        m = int(abs(v)) + 1
        bounds.append(range(-m, m + 1))
    for combo in product(*bounds):
        vals = {(i, k): c for (i, k, _), c in zip(coords, combo)}
        b = nm.from_entries(d, vals)
        y = nm.mat_mul(x, b)
        if nm.inf_dist_to_identity(y) < eta:
            return True
    return False


def test_nil_return_soundness_brute_force():
    a1, a2 = F(2, 7), F(3, 5)
    eta = F(1, 4)
    ws = nm.nil_return_set((a1, a2), eta, (0, 10))
    for n in range(0, 11):
        assert (n in ws.member_set()) == _lattice_box_search(
            nm.superdiag_pow((a1, a2), n), eta), n


def test_z1d_sequence_d1_and_zero():
    zs = nm.z1d_sequence((F(1, 3),), (0, 4))
    assert [v for _, v in zs] == [0, F(1, 3), F(-1, 3), 0, F(1, 3)]
    z0 = dict(nm.z1d_sequence((F(3, 7), F(2, 5)), (0, 0)))
    assert z0[0] == 0


def test_z1d_bridge_d2():
    a1, a2 = F(5, 13), F(7, 19)
    for n, z in nm.z1d_sequence((a1, a2), (-60, 60)):
        diff = gp.eval_P(n, (a1, a2)) - F(n, 2) * a1 * a2 - z
        assert gp.frac_norm(diff) == 0


def test_float_mode_boundary_reporting():
    # 0.25 * 2 = 0.5 exactly: reduction of the n=2 power is ambiguous
    ws = nm.nil_return_set((0.25,), 0.3, (0, 8))
    assert 2 in ws.boundary and 6 in ws.boundary
    assert not set(ws.boundary) & set(ws.members)


def test_nilcoords_json_round_trip():
    x = nm.NilCoords(3, ((F(1, 3), 2, F(-7, 2)), (5, F(2, 9)), (0,)))
    assert nm.NilCoords.from_json(x.to_json()).levels == x.levels
    big = nm.NilCoords(1, ((3 ** 40,),))
    assert nm.NilCoords.from_json(big.to_json()).levels == big.levels


def test_validation_errors():
    with pytest.raises(ValueError):
        nm.NilCoords(2, ((1,), (2,)))
    with pytest.raises(ValueError):
        nm.NilCoords(0, ())
