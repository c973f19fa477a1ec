"""Generalized (bracket) polynomials on the integers.

A generalized polynomial of degree <= d is built from the linear maps
n -> a*n by finite sums, scalar multiples, nearest-integer brackets <.>,
and degree-tracked monomial products a0 * n^p0 * <f1(n)> ... <fk(n)>.
Every such function vanishes at n = 0.

The nearest-integer bracket uses the convention <a> = the *smallest*
integer m with |a - m| = ||a||, where ||a|| is the distance from a to the
nearest integer; ties at half-integers therefore resolve downward
(<1/2> = 0, <-1/2> = -1).

Arithmetic runs in one of two modes, selected by the type of the
coefficients:

* exact mode  -- int / fractions.Fraction coefficients; evaluation is
  bit-exact and the half-integer tie rule applies literally;
* float mode  -- float coefficients; evaluations landing within a tie
  guard of a half-integer raise BoundaryAmbiguous instead of silently
  picking a side, since the tie rule is an exact-arithmetic notion.

Window scans (bohr_window) catch BoundaryAmbiguous and report the affected
n separately in WindowSet.boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _cartesian
from typing import Union

from .windows import WindowSet

Number = Union[int, Fraction, float]

#: Floating evaluations closer than this to a half-integer are refused.
DEFAULT_TIE_GUARD = 1e-12

_HALF = Fraction(1, 2)


class BoundaryAmbiguous(ArithmeticError):
    """A float value sits within the tie guard of a half-integer.

    The nearest-integer bracket is discontinuous exactly at half-integers,
    so the result would be decided by rounding noise.
    """


def _check_finite(a: Number) -> None:
    if isinstance(a, float) and not math.isfinite(a):
        raise ValueError(f"non-finite value: {a!r}")


def frac_norm(a: Number) -> Number:
    """Distance from a to the nearest integer, in [0, 1/2]."""
    _check_finite(a)
    if isinstance(a, float):
        r = a % 1.0
        return min(r, 1.0 - r)
    r = a % 1
    return min(r, 1 - r)


def nearest_int(a: Number, tau: float = DEFAULT_TIE_GUARD) -> int:
    """Nearest integer to a; exact ties resolve to the smaller integer.

    In float mode, raises BoundaryAmbiguous when a lies within tau of a
    half-integer.
    """
    _check_finite(a)
    if isinstance(a, float):
        half = a - 0.5
        if abs(half - round(half)) < tau:
            raise BoundaryAmbiguous(f"{a!r} is within {tau} of a half-integer")
        return math.ceil(half)
    # ceil(a - 1/2) realises the downward tie rule exactly.
    return math.ceil(a - _HALF)


def residual(a: Number, tau: float = DEFAULT_TIE_GUARD) -> Number:
    """a - <a>, always in (-1/2, 1/2]."""
    return a - nearest_int(a, tau)


def eval_L(coeffs, tau: float = DEFAULT_TIE_GUARD) -> Number:
    """Nested bracket product L(a1, ..., al) = a1 * <L(a2, ..., al)>, L(a) = a."""
    coeffs = list(coeffs)
    if not coeffs:
        raise ValueError("eval_L needs at least one coefficient")
    for a in coeffs:
        _check_finite(a)
    acc = coeffs[-1]
    for a in reversed(coeffs[:-1]):
        acc = a * nearest_int(acc, tau)
    return acc


# ---------------------------------------------------------------------------
# expression trees
# ---------------------------------------------------------------------------

class GPExpr:
    """Base class for generalized-polynomial syntax trees."""

    degree: int

    def __call__(self, n: int, tau: float = DEFAULT_TIE_GUARD) -> Number:
        return gp_eval(self, n, tau)


@dataclass(frozen=True)
class Linear(GPExpr):
    """n -> a * n."""

    a: Number

    def __post_init__(self):
        _check_finite(self.a)

    @property
    def degree(self) -> int:
        return 1


@dataclass(frozen=True)
class Sum(GPExpr):
    children: tuple[GPExpr, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValueError("Sum needs at least one child")

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.children)


@dataclass(frozen=True)
class Scale(GPExpr):
    c: Number
    child: GPExpr

    def __post_init__(self):
        _check_finite(self.c)

    @property
    def degree(self) -> int:
        return self.child.degree


@dataclass(frozen=True)
class Round(GPExpr):
    """Nearest-integer bracket <child>."""

    child: GPExpr

    @property
    def degree(self) -> int:
        return self.child.degree


@dataclass(frozen=True)
class Monomial(GPExpr):
    """a0 * n^p0 * f1(n) * ... * fk(n).

    In the generating forms of the class the factors are Round-wrapped
    (a0 * n^p0 * <g1> ... <gk>); arbitrary factor expressions are allowed so
    that the bracket-expansion rewrites below stay representable.  Degree is
    p0 plus the factor degrees.
    """

    a0: Number
    p0: int
    factors: tuple[GPExpr, ...] = ()

    def __post_init__(self):
        _check_finite(self.a0)
        object.__setattr__(self, "factors", tuple(self.factors))
        if self.p0 < 0:
            raise ValueError("monomial exponent must be >= 0")
        if self.p0 == 0 and not self.factors:
            raise ValueError("constant monomial would not vanish at n=0")

    @property
    def degree(self) -> int:
        return self.p0 + sum(f.degree for f in self.factors)


def gp_eval(expr: GPExpr, n: int, tau: float = DEFAULT_TIE_GUARD) -> Number:
    """Evaluate a generalized polynomial at integer n."""
    if isinstance(expr, Linear):
        return expr.a * n
    if isinstance(expr, Sum):
        return sum(gp_eval(c, n, tau) for c in expr.children)
    if isinstance(expr, Scale):
        return expr.c * gp_eval(expr.child, n, tau)
    if isinstance(expr, Round):
        return nearest_int(gp_eval(expr.child, n, tau), tau)
    if isinstance(expr, Monomial):
        v = expr.a0 * n ** expr.p0
        for f in expr.factors:
            v = v * gp_eval(f, n, tau)
        return v
    raise TypeError(f"not a GPExpr: {expr!r}")


def gp_degree(expr: GPExpr) -> int:
    return expr.degree


# ---------------------------------------------------------------------------
# special generalized polynomials and the key alternating sum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SgpTerm:
    """The special form L(n^j1 * a1, ..., n^jl * al)."""

    exponents: tuple[int, ...]
    coeffs: tuple[Number, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(self.exponents))
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if not self.exponents:
            raise ValueError("SgpTerm needs at least one stage")
        if len(self.exponents) != len(self.coeffs):
            raise ValueError("exponents and coeffs must pair up")
        if any(j < 1 for j in self.exponents):
            raise ValueError("stage exponents must be positive")

    @property
    def total_degree(self) -> int:
        return sum(self.exponents)


def eval_sgp(term: SgpTerm, n: int, tau: float = DEFAULT_TIE_GUARD) -> Number:
    return eval_L([a * n ** j for j, a in zip(term.exponents, term.coeffs)], tau)


def sgp_to_gp(term: SgpTerm) -> GPExpr:
    """Lossless conversion into the monomial/bracket tree.

    L(n^j1 a1, ..., n^jl al) = a1 n^j1 <a2 n^j2 <...>>, a nest of monomials
    with a single rounded factor each; the total degree is preserved.
    """
    expr: GPExpr = Monomial(term.coeffs[-1], term.exponents[-1])
    for j, a in zip(term.exponents[-2::-1], term.coeffs[-2::-1]):
        expr = Monomial(a, j, (Round(expr),))
    return expr


def compositions(r: int) -> list[tuple[int, ...]]:
    """All ordered tuples of positive integers summing to r, largest first.

    The order is descending lexicographic, so (r) comes first and
    (1, 1, ..., 1) last; term-by-term logs of the alternating sum below are
    reproducible under this fixed order.
    """
    if r < 1:
        raise ValueError("compositions need r >= 1")
    out: list[tuple[int, ...]] = []

    def rec(rest: int, prefix: tuple[int, ...]):
        if rest == 0:
            out.append(prefix)
            return
        for j in range(rest, 0, -1):
            rec(rest - j, prefix + (j,))

    rec(r, ())
    return out


def eval_P(n: int, alphas, tau: float = DEFAULT_TIE_GUARD) -> Number:
    """Alternating sum of nested brackets attached to (alpha_1, ..., alpha_r).

    Over every composition (j1, ..., jl) of r the stage coefficients are
    n^(jt)/jt! times the product of the jt consecutive alphas belonging to
    that stage, and the stages feed the nested bracket L; the composition of
    length l enters with sign (-1)^(l-1).  For r = 1 this is n*alpha_1, for
    r = 2 it is n^2 a1 a2 / 2 - n a1 <n a2>.
    """
    alphas = list(alphas)
    if not alphas:
        raise ValueError("eval_P needs at least one alpha")
    r = len(alphas)
    exact = not any(isinstance(a, float) for a in alphas)
    total: Number = 0
    for comp in compositions(r):
        args = []
        pos = 0
        for j in comp:
            block = alphas[pos:pos + j]
            prod: Number = 1
            for a in block:
                prod = prod * a
            if exact:
                coeff = Fraction(n ** j, math.factorial(j))
            else:
                coeff = n ** j / math.factorial(j)
            args.append(coeff * prod)
            pos += j
        sign = -1 if len(comp) % 2 == 0 else 1
        total = total + sign * eval_L(args, tau)
    return total


# ---------------------------------------------------------------------------
# bracket-expansion rewrites
# ---------------------------------------------------------------------------

def _residual_expr(f: GPExpr) -> GPExpr:
    """f - <f> as a tree."""
    return Sum((f, Scale(-1, Round(f))))


def _expand_scaled_bracket(c: Number, f: GPExpr) -> GPExpr:
    """c<f> = c f - c (f - <f>)."""
    return Sum((Scale(c, f), Scale(-c, _residual_expr(f))))


def _sign_patterns(k: int, skip: tuple[int, ...]):
    """All (i1..ik) in {1,*}^k except `skip`; 1 encoded as 1, * as 0."""
    for bits in _cartesian((1, 0), repeat=k):
        if bits != skip:
            yield bits


def _pattern_factors(bits, fs) -> tuple[GPExpr, ...]:
    # f^1 = f, f^* = -<f>
    return tuple(f if b else Scale(-1, Round(f)) for b, f in zip(bits, fs))


def _expand_bracket_product(c: Number, fs) -> GPExpr:
    """c<f1>...<fk> expanded into residual products and mixed terms."""
    fs = tuple(fs)
    k = len(fs)
    sign = (-1) ** k
    lead = Monomial(c * sign, 0, tuple(_residual_expr(f) for f in fs))
    tail = [Monomial(-c * sign, 0, _pattern_factors(bits, fs))
            for bits in _sign_patterns(k, (0,) * k)]
    return Sum((lead, *tail))


def _expand_mixed_product(fs) -> GPExpr:
    """f1<f2>...<fk> expanded; the first factor enters unrounded."""
    fs = tuple(fs)
    k = len(fs)
    lead = Monomial((-1) ** (k - 1), 0, tuple(_residual_expr(f) for f in fs))
    skip = (1,) + (0,) * (k - 1)
    tail = [Monomial((-1) ** k, 0, _pattern_factors(bits, fs))
            for bits in _sign_patterns(k, skip)]
    return Sum((lead, *tail))


def gp_simplify(expr: GPExpr) -> GPExpr:
    """One bottom-up pass of the bracket-expansion identities.

    Applies, at each matching node, the expansion of c<f>, of a product of
    brackets c<f1>...<fk>, or of a mixed product f1<f2>...<fk>.  This is a
    single application per node, not a normalization; the output evaluates
    identically to the input at every n (exactly so in exact mode).
    """
    if isinstance(expr, Linear):
        return expr
    if isinstance(expr, Sum):
        return Sum(tuple(gp_simplify(c) for c in expr.children))
    if isinstance(expr, Scale):
        if isinstance(expr.child, Round):
            return _expand_scaled_bracket(expr.c, gp_simplify(expr.child.child))
        return Scale(expr.c, gp_simplify(expr.child))
    if isinstance(expr, Round):
        return _expand_scaled_bracket(1, gp_simplify(expr.child))
    if isinstance(expr, Monomial):
        if not expr.factors:
            return expr
        rounded = [isinstance(f, Round) for f in expr.factors]
        inner = [gp_simplify(f.child) if isinstance(f, Round) else gp_simplify(f)
                 for f in expr.factors]
        if all(rounded):
            if expr.p0 == 0:
                return _expand_bracket_product(expr.a0, inner)
            # a0 n^p0 <g1>...<gk>: the power part is the unrounded lead factor.
            return _expand_mixed_product([Monomial(expr.a0, expr.p0)] + inner)
        if not rounded[0] and all(rounded[1:]) and len(expr.factors) >= 2:
            lead = inner[0]
            if expr.p0 > 0 or expr.a0 != 1:
                lead = Monomial(expr.a0, expr.p0, (lead,)) if expr.p0 > 0 \
                    else Scale(expr.a0, lead)
                return _expand_mixed_product([lead] + inner[1:])
            return _expand_mixed_product(inner)
        return Monomial(expr.a0, expr.p0,
                        tuple(Round(g) if r else g for r, g in zip(rounded, inner)))
    raise TypeError(f"not a GPExpr: {expr!r}")


# ---------------------------------------------------------------------------
# windowed Bohr sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BohrSpec:
    """Finitely many constraints ||P_i(n)|| < eps_i on a window."""

    constraints: tuple[tuple[GPExpr, Number], ...]
    window: tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(
            (e, eps) for e, eps in self.constraints))
        if not self.constraints:
            raise ValueError("BohrSpec needs at least one constraint")
        lo, hi = self.window
        if lo > hi:
            raise ValueError("empty window")
        for _, eps in self.constraints:
            if not (0 < eps <= _HALF):
                raise ValueError(f"eps must lie in (0, 1/2], got {eps}")


def bohr_window(spec: BohrSpec, tau: float = DEFAULT_TIE_GUARD) -> WindowSet:
    """Exact member list of the windowed generalized-polynomial Bohr set.

    n is a member iff ||P_i(n)|| < eps_i holds strictly for every
    constraint.  Float-mode evaluations that hit the tie guard put n on the
    boundary list instead of deciding membership.
    """
    lo, hi = spec.window
    members: list[int] = []
    boundary: list[int] = []
    for n in range(lo, hi + 1):
        try:
            if all(frac_norm(gp_eval(e, n, tau)) < eps
                   for e, eps in spec.constraints):
                members.append(n)
        except BoundaryAmbiguous:
            boundary.append(n)
    return WindowSet(lo, hi, tuple(members), tuple(boundary))


# ---------------------------------------------------------------------------
# JSON trees
# ---------------------------------------------------------------------------

def _num_to_json(v: Number):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, int) and abs(v) >= 2 ** 53:
        return str(v)
    return v


def _num_from_json(v) -> Number:
    if isinstance(v, str):
        return Fraction(v) if "/" in v else int(v)
    if isinstance(v, float):
        return v
    return int(v)


def gp_to_json(expr: GPExpr) -> dict:
    if isinstance(expr, Linear):
        return {"t": "lin", "a": _num_to_json(expr.a)}
    if isinstance(expr, Sum):
        return {"t": "sum", "fs": [gp_to_json(c) for c in expr.children]}
    if isinstance(expr, Scale):
        return {"t": "scale", "c": _num_to_json(expr.c), "f": gp_to_json(expr.child)}
    if isinstance(expr, Round):
        return {"t": "round", "f": gp_to_json(expr.child)}
    if isinstance(expr, Monomial):
        return {"t": "mono", "a0": _num_to_json(expr.a0), "p0": expr.p0,
                "fs": [gp_to_json(f) for f in expr.factors]}
    raise TypeError(f"not a GPExpr: {expr!r}")


def gp_from_json(obj: dict) -> GPExpr:
    tag = obj["t"]
    if tag == "lin":
        return Linear(_num_from_json(obj["a"]))
    if tag == "sum":
        return Sum(tuple(gp_from_json(c) for c in obj["fs"]))
    if tag == "scale":
        return Scale(_num_from_json(obj["c"]), gp_from_json(obj["f"]))
    if tag == "round":
        return Round(gp_from_json(obj["f"]))
    if tag == "mono":
        return Monomial(_num_from_json(obj["a0"]), int(obj["p0"]),
                        tuple(gp_from_json(f) for f in obj["fs"]))
    raise ValueError(f"unknown node tag {tag!r}")


def bohr_spec_to_json(spec: BohrSpec) -> dict:
    return {
        "constraints": [{"expr": gp_to_json(e), "eps": _num_to_json(eps)}
                        for e, eps in spec.constraints],
        "window": list(spec.window),
    }


def bohr_spec_from_json(obj: dict) -> BohrSpec:
    return BohrSpec(
        tuple((gp_from_json(c["expr"]), _num_from_json(c["eps"]))
              for c in obj["constraints"]),
        (int(obj["window"][0]), int(obj["window"][1])),
    )
