"""Executable verification suites.

Each suite checks one contract of the library against an independent
oracle -- iterated multiplication against the closed-form power, pattern
brute force against the dynamic program, direct scans against the analytic
characterisations -- on deterministic pseudo-random inputs.  The CLI
`verify` subcommand and the acceptance tests both run these.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from . import dynsim, gp, nilmatrix, setfamilies
from .windows import WindowSet, from_members

DEFAULT_SEED = 0x5EED


@dataclass
class CriterionResult:
    key: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.key}: {self.detail} [{self.seconds:.2f}s]"


# ---------------------------------------------------------------------------
# random input generators
# ---------------------------------------------------------------------------

def rand_fraction(rng: random.Random, num: int = 50, den: int = 20) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def rand_small_fraction(rng: random.Random) -> Fraction:
    # magnitudes <= 1/2 keep float comparisons of iterated products tame
    return Fraction(rng.randint(-4, 4), rng.randint(8, 12))


def rand_nilcoords(rng: random.Random, d: int, small: bool = False) -> nilmatrix.NilCoords:
    gen = rand_small_fraction if small else rand_fraction
    return nilmatrix.NilCoords(
        d, tuple(tuple(gen(rng) for _ in range(d - k + 1)) for k in range(1, d + 1)))


def rand_alpha(rng: random.Random) -> Fraction:
    # odd denominators: no value of n*alpha or of the reduced residuals can
    # land exactly on a half-integer, so float runs stay away from ties
    q = 2 * rng.randint(50, 249) + 1
    return Fraction(rng.randint(1, q - 1), q)


def rand_window_set(rng: random.Random, min_len: int = 40, max_len: int = 240) -> WindowSet:
    lo = rng.randint(-100, 100)
    hi = lo + rng.randint(min_len, max_len)
    density = rng.uniform(0.05, 0.6)
    members = [n for n in range(lo, hi + 1) if rng.random() < density]
    return WindowSet(lo, hi, tuple(members))


def rand_gp_expr(rng: random.Random, max_degree: int = 3, depth: int = 0) -> gp.GPExpr:
    """Random expression tree of degree <= max_degree, rational coefficients.

    Biased toward bracket sites so that the expansion rewrites fire often.
    """
    coef = lambda: rand_fraction(rng, 12, 8)
    if depth >= 3 or (max_degree == 1 and rng.random() < 0.5):
        return gp.Linear(coef())
    kind = rng.choice(("lin", "sum", "scale_round", "round", "mono", "mixed_mono"))
    if kind == "lin":
        return gp.Linear(coef())
    if kind == "sum":
        return gp.Sum(tuple(rand_gp_expr(rng, max_degree, depth + 1)
                            for _ in range(rng.randint(2, 3))))
    if kind == "scale_round":
        return gp.Scale(coef(), gp.Round(rand_gp_expr(rng, max_degree, depth + 1)))
    if kind == "round":
        return gp.Round(rand_gp_expr(rng, max_degree, depth + 1))
    # monomial a0 n^p0 <f1>...<fk> with degrees adding up within budget
    p0 = rng.randint(0, max(0, max_degree - 1)) if kind == "mono" else rng.randint(1, max_degree)
    k = rng.randint(1 if p0 == 0 else 0, 2)
    budget = max_degree - p0
    factors = []
    for _ in range(k):
        if budget < 1:
            break
        deg = rng.randint(1, budget)
        inner = rand_gp_expr(rng, deg, depth + 1)
        factors.append(gp.Round(inner))
        budget -= inner.degree
    if p0 == 0 and not factors:
        return gp.Linear(coef())
    if kind == "mixed_mono" and factors:
        # first factor unrounded
        return gp.Monomial(coef(), 0, (factors[0].child, *factors[1:]))
    return gp.Monomial(coef(), p0, tuple(factors))


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def check_closed_power(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Closed-form powers equal iterated products, exactly and in floats."""
    t0 = time.perf_counter()
    rng = random.Random(seed ^ 0x01)
    bad = 0
    checked = 0
    for d in (2, 3, 4, 5):
        for _ in range(25):
            x = rand_nilcoords(rng, d, small=True)
            xf = nilmatrix.NilCoords(
                d, tuple(tuple(float(v) for v in level) for level in x.levels))
            table = nilmatrix.composition_products(x)
            table_f = nilmatrix.composition_products(xf)
            inv = nilmatrix.mat_inv(x)
            inv_f = nilmatrix.mat_inv(xf)
            acc_pos = nilmatrix.NilCoords.zero(d)
            acc_neg = nilmatrix.NilCoords.zero(d)
            acc_pos_f = nilmatrix.NilCoords.zero(d)
            acc_neg_f = nilmatrix.NilCoords.zero(d)
            for n in range(0, 31):
                if n > 0:
                    acc_pos = nilmatrix.mat_mul(acc_pos, x)
                    acc_neg = nilmatrix.mat_mul(acc_neg, inv)
                    acc_pos_f = nilmatrix.mat_mul(acc_pos_f, xf)
                    acc_neg_f = nilmatrix.mat_mul(acc_neg_f, inv_f)
                for sign, acc, acc_f in ((1, acc_pos, acc_pos_f),
                                         (-1, acc_neg, acc_neg_f)):
                    closed = nilmatrix.mat_pow_from_table(d, table, sign * n)
                    if closed.levels != acc.levels:
                        bad += 1
                    closed_f = nilmatrix.mat_pow_from_table(d, table_f, sign * n)
                    for (_, _, a), (_, _, b) in zip(closed_f.entries(), acc_f.entries()):
                        if abs(a - b) > 1e-8:
                            bad += 1
                    checked += 1
    return CriterionResult(
        "closed-power", bad == 0,
        f"{checked} (d, x, n) cases, exact + 1e-8 float agreement, {bad} mismatches",
        time.perf_counter() - t0)


def check_reduction(seed: int = DEFAULT_SEED) -> CriterionResult:
    """|z| <= 1/2 and x * M(-h) = M(z), exactly, on random coordinates."""
    t0 = time.perf_counter()
    rng = random.Random(seed ^ 0x02)
    half = Fraction(1, 2)
    bad = 0
    for _ in range(1000):
        d = rng.randint(1, 4)
        x = rand_nilcoords(rng, d)
        red = nilmatrix.lattice_reduce(x)
        if any(abs(v) > half for _, _, v in red.z.entries()):
            bad += 1
        recombined = nilmatrix.mat_mul(x, nilmatrix.neg(red.h))
        if recombined.levels != red.z.levels:
            bad += 1
    return CriterionResult(
        "reduction", bad == 0,
        f"1000 random coordinates (d <= 4), residual box + exact recombination, {bad} failures",
        time.perf_counter() - t0)


def check_bridge_d2(seed: int = DEFAULT_SEED) -> CriterionResult:
    """The alternating bracket sum matches the top reduction residual at
    d = 2 after the (n/2) a1 a2 correction, mod 1."""
    t0 = time.perf_counter()
    rng = random.Random(seed ^ 0x03)
    bad = 0
    float_worst = 0.0
    for _ in range(50):
        a1, a2 = rand_alpha(rng), rand_alpha(rng)
        zs = nilmatrix.z1d_sequence((a1, a2), (-200, 200))
        zs_f = nilmatrix.z1d_sequence((float(a1), float(a2)), (-200, 200))
        for (n, z), (_, zf) in zip(zs, zs_f):
            diff = gp.eval_P(n, (a1, a2)) - Fraction(n, 2) * a1 * a2 - z
            if gp.frac_norm(diff) != 0:
                bad += 1
            diff_f = gp.eval_P(n, (float(a1), float(a2))) \
                - (n / 2) * float(a1) * float(a2) - zf
            err = gp.frac_norm(diff_f)
            float_worst = max(float_worst, err)
            if err >= 1e-6:
                bad += 1
    return CriterionResult(
        "bridge-d2", bad == 0,
        f"50 pairs x n in [-200,200]: exact residue 0, float worst {float_worst:.2e}",
        time.perf_counter() - t0)


def check_heisenberg_return(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Return set of the 2-step nilrotation equals its analytic description."""
    t0 = time.perf_counter()
    rng = random.Random(seed ^ 0x04)
    eta = Fraction(1, 10)
    bad = 0
    for _ in range(20):
        a1, a2 = rand_alpha(rng), rand_alpha(rng)
        got = nilmatrix.nil_return_set((a1, a2), eta, (0, 5000))
        expect = []
        for n in range(0, 5001):
            if gp.frac_norm(n * a1) >= eta:
                continue
            if gp.frac_norm(n * a2) >= eta:
                continue
            u = nilmatrix.binom_int(n, 2) * a1 * a2 - n * a1 * gp.nearest_int(n * a2)
            if gp.frac_norm(u) < eta:
                expect.append(n)
        if list(got.members) != expect or got.boundary:
            bad += 1
    return CriterionResult(
        "heisenberg-return", bad == 0,
        f"20 random (a1, a2), window [0,5000], eta 1/10: {bad} set mismatches",
        time.perf_counter() - t0)


def check_multi_return_containment(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Members of the grid-certified multi-return set obey the weighted
    power bound ||a n^2|| < 2 K (2 eps1)."""
    t0 = time.perf_counter()
    rng = random.Random(seed ^ 0x05)
    sol = dynsim.vandermonde_lambda(2)
    ok_lambda = sol.lambdas == (-2, 1) and sol.lam == 2 and sol.K == 6
    eps = 0.2
    eps1 = 1 / 125  # 2 * K * eps1 = 0.096 < eps / 2
    bound = 2 * sol.K * (2 * eps1)
    assert bound < eps
    box = dynsim.origin_box(2, eps1)
    violations = 0
    uncertified = 0
    total = 0
    nontrivial = 0
    for _ in range(3):
        alpha2 = rng.uniform(0.05, 0.95)
        sys = dynsim.TorusSystem(2, alpha2 / sol.lam)
        pairs = dynsim.multi_return_scan(sys, box, 2, (0, 2000), grid=512)
        total += len(pairs)
        for n, w in pairs:
            if n != 0:
                nontrivial += 1
            if w not in box:
                uncertified += 1
            for i in (1, 2):
                if dynsim.step_oracle(sys, w, i * n) not in box:
                    uncertified += 1
            if gp.frac_norm(alpha2 * n * n) >= bound:
                violations += 1
    passed = (ok_lambda and violations == 0 and uncertified == 0
              and nontrivial >= 1)
    return CriterionResult(
        "multi-return-containment", passed,
        f"{total} members ({nontrivial} nontrivial) over 3 draws on [0,2000] "
        f"at grid 512, all witnesses re-certified, {violations} bound violations",
        time.perf_counter() - t0)


def check_ramsey_partition(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Powers of 3: no sum-closed triple in any partition block, yet the
    whole gap-2 sum set contains one."""
    t0 = time.perf_counter()
    terms = [3 ** i for i in range(1, 9)]
    if not setfamilies.is_lacunary(terms):
        return CriterionResult("ramsey-partition", False,
                               "lacunarity precondition failed",
                               time.perf_counter() - t0)
    b0, b1, b2 = setfamilies.ramsey_sg2_partition(terms)
    whole = setfamilies.sg_d(terms, 2)
    in_blocks = [setfamilies.find_star_pattern(b) for b in (b0, b1, b2)]
    in_whole = setfamilies.find_star_pattern(whole)
    whole_set = set(whole)
    p_family_ok = all(v in whole_set for v in
                      (terms[0], terms[1], terms[2],
                       terms[0] + terms[1], terms[1] + terms[2], terms[0] + terms[2]))
    partition_ok = sorted(b0 + b1 + b2) == whole and not (set(b1) & set(b2))
    passed = (all(r is None for r in in_blocks) and in_whole is not None
              and p_family_ok and partition_ok)
    return CriterionResult(
        "ramsey-partition", passed,
        f"blocks star-free: {[r is None for r in in_blocks]}, "
        f"whole set triple: {in_whole}",
        time.perf_counter() - t0)


def check_sgd_oracle(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Dynamic program equals pattern brute force; hand sets match."""
    t0 = time.perf_counter()
    rng = random.Random(seed ^ 0x07)
    bad = 0
    for _ in range(30):
        m = rng.randint(1, 12)
        terms = [rng.randint(-40, 40) for _ in range(m)]
        for d in range(1, 5):
            if setfamilies.sg_d(terms, d) != setfamilies.sg_d_bruteforce(terms, d):
                bad += 1
    hand = [1, 10, 100]
    ok_hand = (setfamilies.sg_d(hand, 1) == [1, 10, 11, 100, 110, 111]
               and setfamilies.sg_d(hand, 2) == [1, 10, 11, 100, 101, 110, 111]
               and setfamilies.fs(hand) == setfamilies.sg_d(hand, 3))
    return CriterionResult(
        "sgd-oracle", bad == 0 and ok_hand,
        f"30 random sequences x d <= 4 vs 2^m enumeration, {bad} mismatches; "
        f"hand-derived sets {'ok' if ok_hand else 'WRONG'}",
        time.perf_counter() - t0)


def check_set_identities(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Order-1 common differences equal the difference set; windowed
    correspondence between common differences and shift multi-returns."""
    t0 = time.perf_counter()
    rng = random.Random(seed ^ 0x08)
    bad = 0
    for _ in range(100):
        s = rand_window_set(rng)
        cds = setfamilies.common_diff_set(s, 1)
        if cds.members != setfamilies.diff_set(s).members:
            bad += 1
    for _ in range(50):
        s = rand_window_set(rng, min_len=60, max_len=200)
        d_rec = rng.randint(1, 3)
        margin = ((s.hi - s.lo) // 2 // d_rec) * d_rec
        if not dynsim.shift_correspondence_check(s, d_rec, margin):
            bad += 1
    return CriterionResult(
        "set-identities", bad == 0,
        f"100 difference-set + 50 shift-correspondence checks, {bad} failures",
        time.perf_counter() - t0)


def check_gp_rewrites(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Bracket-expansion rewrites preserve evaluation exactly."""
    t0 = time.perf_counter()
    rng = random.Random(seed ^ 0x09)
    bad = 0
    for _ in range(1000):
        expr = rand_gp_expr(rng, max_degree=3)
        n = rng.randint(-100, 100)
        if gp.gp_eval(expr, n) != gp.gp_eval(gp.gp_simplify(expr), n):
            bad += 1
    return CriterionResult(
        "gp-rewrites", bad == 0,
        f"1000 random (expr, n) pairs, exact equality after rewrite, {bad} failures",
        time.perf_counter() - t0)


def check_bohr_cross_module(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Torus return set equals the two-constraint Bohr window."""
    t0 = time.perf_counter()
    rng = random.Random(seed ^ 0x0A)
    bad = 0
    for _ in range(3):
        alpha = rand_alpha(rng)
        eps = Fraction(rng.randint(2, 10), 100)
        sys = dynsim.TorusSystem(2, alpha)
        rset = dynsim.return_set(sys, dynsim.zero_state(2),
                                 dynsim.origin_box(2, eps), (0, 5000))
        half_a = alpha / 2
        quad = gp.Sum((gp.Monomial(half_a, 2), gp.Linear(-half_a)))
        spec = gp.BohrSpec(((gp.Linear(alpha), eps), (quad, eps)), (0, 5000))
        bset = gp.bohr_window(spec)
        if rset.members != bset.members:
            bad += 1
    return CriterionResult(
        "bohr-cross-module", bad == 0,
        f"3 random alpha/eps on [0,5000], exact set equality, {bad} mismatches",
        time.perf_counter() - t0)


def check_vandermonde(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Power-sum identities hold exactly up to d = 8; d = 2 is (-2, 1; 2)."""
    t0 = time.perf_counter()
    ok = True
    for d in range(1, 9):
        sol = dynsim.vandermonde_lambda(d)
        if not dynsim.lambda_identity_holds(sol) or sol.lam <= 0:
            ok = False
    sol2 = dynsim.vandermonde_lambda(2)
    ok = ok and sol2.lambdas == (-2, 1) and sol2.lam == 2 and sol2.K == 6
    return CriterionResult(
        "vandermonde", ok,
        "exact power sums for d <= 8; d=2 equals (-2, 1; 2), K=6",
        time.perf_counter() - t0)


SUITES = {
    "closed-power": check_closed_power,
    "reduction": check_reduction,
    "bridge-d2": check_bridge_d2,
    "heisenberg-return": check_heisenberg_return,
    "multi-return-containment": check_multi_return_containment,
    "ramsey-partition": check_ramsey_partition,
    "sgd-oracle": check_sgd_oracle,
    "set-identities": check_set_identities,
    "gp-rewrites": check_gp_rewrites,
    "bohr-cross-module": check_bohr_cross_module,
    "vandermonde": check_vandermonde,
}


def run_suite(name: str, seed: int = DEFAULT_SEED) -> list[CriterionResult]:
    """Run one named suite, or all of them for name == 'all'."""
    if name == "all":
        return [fn(seed) for fn in SUITES.values()]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from "
                         f"{', '.join(SUITES)} or 'all'")
    return [SUITES[name](seed)]
