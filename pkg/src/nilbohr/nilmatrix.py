"""Exact computation in the full upper-triangular unipotent group.

Group elements are (d+1) x (d+1) matrices with unit diagonal, encoded by
their d(d+1)/2 strictly-upper coordinates a_i^k (superdiagonal k, row i):
row i, column i+k holds a_i^k.  Multiplication, inversion, closed-form
integer powers, greedy reduction modulo the integer-entry lattice, and the
resulting nilrotation return-time sets all run exactly on Fraction
coordinates; float coordinates run with the tie guard of the gp module.

The closed-form power expands each coordinate of the n-th power as a sum
binom(n,1) P_1 + ... + binom(n,k) P_k, where P_l collects the products of
coordinates along compositions of k into l parts; binom(n,l) is the falling
factorial polynomial, valid for negative n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .gp import BoundaryAmbiguous, DEFAULT_TIE_GUARD, nearest_int
from .windows import WindowSet

Number = Union[int, Fraction, float]

_HALF = Fraction(1, 2)


def binom_int(n: int, k: int) -> int:
    """binom(n, k) = n(n-1)...(n-k+1)/k! for any integer n, k >= 0."""
    if k < 0:
        raise ValueError("k must be >= 0")
    num = 1
    for j in range(k):
        num *= n - j
    return num // math.factorial(k)  # the falling factorial is divisible by k!


@dataclass(frozen=True)
class NilCoords:
    """Strictly-upper coordinates of a unipotent (d+1)x(d+1) matrix.

    levels[k-1][i-1] = a_i^k for 1 <= k <= d, 1 <= i <= d-k+1.
    """

    d: int
    levels: tuple[tuple[Number, ...], ...]

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be >= 1")
        object.__setattr__(self, "levels",
                           tuple(tuple(level) for level in self.levels))
        if len(self.levels) != self.d:
            raise ValueError("need one level per superdiagonal")
        for k, level in enumerate(self.levels, start=1):
            if len(level) != self.d - k + 1:
                raise ValueError(f"level {k} must have {self.d - k + 1} entries")

    def get(self, i: int, k: int) -> Number:
        """a_i^k with the convention a_i^0 = 1."""
        if k == 0:
            return 1
        return self.levels[k - 1][i - 1]

    def entries(self):
        """Iterate (i, k, value) over all coordinates."""
        for k, level in enumerate(self.levels, start=1):
            for i, v in enumerate(level, start=1):
                yield i, k, v

    def is_integral(self) -> bool:
        return all(isinstance(v, int) or (isinstance(v, Fraction) and v.denominator == 1)
                   for _, _, v in self.entries())

    def to_matrix(self) -> list[list[Number]]:
        """Dense (d+1)x(d+1) unipotent matrix (oracle-friendly)."""
        m = self.d + 1
        mat = [[1 if r == c else 0 for c in range(m)] for r in range(m)]
        for i, k, v in self.entries():
            mat[i - 1][i + k - 1] = v
        return mat

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return f"{v.numerator}/{v.denominator}"
            if isinstance(v, int) and abs(v) >= 2 ** 53:
                return str(v)
            return v
        return {"d": self.d,
                "entries": [[k, i, enc(v)] for i, k, v in self.entries()]}

    @classmethod
    def from_json(cls, obj: dict) -> "NilCoords":
        d = int(obj["d"])
        vals = {}
        for k, i, v in obj["entries"]:
            if isinstance(v, str):
                vals[(int(i), int(k))] = Fraction(v) if "/" in v else int(v)
            elif isinstance(v, float):
                vals[(int(i), int(k))] = v
            else:
                vals[(int(i), int(k))] = int(v)
        return from_entries(d, vals)

    @classmethod
    def zero(cls, d: int) -> "NilCoords":
        return cls(d, tuple(tuple(0 for _ in range(d - k + 1)) for k in range(1, d + 1)))


class LatticeElem(NilCoords):
    """NilCoords with integer entries: an element of the integer lattice."""

    def __post_init__(self):
        super().__post_init__()
        for _, _, v in self.entries():
            if not isinstance(v, int):
                raise ValueError("lattice coordinates must be Python ints")


@dataclass(frozen=True)
class ReducedPoint:
    """Residual z and reducing lattice element h with x * M(-h) = M(z)."""

    z: NilCoords
    h: LatticeElem


def from_entries(d: int, values: dict[tuple[int, int], Number]) -> NilCoords:
    """Build NilCoords from a {(i, k): value} mapping; missing entries are 0."""
    levels = tuple(tuple(values.get((i, k), 0) for i in range(1, d - k + 2))
                   for k in range(1, d + 1))
    return NilCoords(d, levels)


def from_matrix(mat) -> NilCoords:
    m = len(mat)
    d = m - 1
    vals = {}
    for r in range(m):
        if mat[r][r] != 1:
            raise ValueError("matrix is not unipotent")
        for c in range(r):
            if mat[r][c] != 0:
                raise ValueError("matrix is not upper triangular")
        for c in range(r + 1, m):
            vals[(r + 1, c - r)] = mat[r][c]
    return from_entries(d, vals)


def neg(a: NilCoords) -> NilCoords:
    """Entrywise negation of the coordinates (not the group inverse)."""
    cls = LatticeElem if isinstance(a, LatticeElem) else NilCoords
    return cls(a.d, tuple(tuple(-v for v in level) for level in a.levels))


def inf_dist_to_identity(a: NilCoords) -> Number:
    """Max-entry norm of M(a) - I, i.e. the largest |a_i^k| (0 if d trivial)."""
    worst: Number = 0
    for _, _, v in a.entries():
        worst = max(worst, abs(v))
    return worst


def mat_mul(a: NilCoords, b: NilCoords) -> NilCoords:
    """Coordinates of M(a) M(b): c_i^k = sum_j a_i^{k-j} b_{i+k-j}^j."""
    if a.d != b.d:
        raise ValueError(f"dimension mismatch: {a.d} vs {b.d}")
    d = a.d
    levels = []
    for k in range(1, d + 1):
        level = []
        for i in range(1, d - k + 2):
            c = a.get(i, k) + b.get(i, k)
            for j in range(1, k):
                c = c + a.get(i, k - j) * b.get(i + k - j, j)
            level.append(c)
        levels.append(tuple(level))
    return NilCoords(d, tuple(levels))


def mat_inv(a: NilCoords) -> NilCoords:
    """Group inverse, solved level by level from the product formula."""
    d = a.d
    inv: dict[tuple[int, int], Number] = {}
    for k in range(1, d + 1):
        for i in range(1, d - k + 2):
            c = -a.get(i, k)
            for j in range(1, k):
                c = c - a.get(i, k - j) * inv[(i + k - j, j)]
            inv[(i, k)] = c
    return from_entries(d, inv)


def composition_products(x: NilCoords) -> dict[tuple[int, int], list[Number]]:
    """P_1..P_k for each coordinate (i, k).

    P_l(x; i, k) sums, over compositions (s_1, ..., s_l) of k into l positive
    parts, the chained products x_i^{s_1} x_{i+s_1}^{s_2} ... ; P_1 = x_i^k
    and P_k is the product of the k superdiagonal entries starting at row i.
    """
    d = x.d
    table: dict[tuple[int, int], list[Number]] = {}
    for k in range(1, d + 1):
        comps_by_len: dict[int, list[tuple[int, ...]]] = {}

        def rec(rest, prefix):
            if rest == 0:
                comps_by_len.setdefault(len(prefix), []).append(prefix)
                return
            for s in range(1, rest + 1):
                rec(rest - s, prefix + (s,))

        rec(k, ())
        for i in range(1, d - k + 2):
            ps = []
            for ell in range(1, k + 1):
                total: Number = 0
                for comp in comps_by_len.get(ell, []):
                    prod: Number = 1
                    row = i
                    for s in comp:
                        prod = prod * x.get(row, s)
                        row += s
                    total = total + prod
                ps.append(total)
            table[(i, k)] = ps
    return table


def mat_pow_from_table(d: int, table, n: int) -> NilCoords:
    """Assemble M(x)^n from a composition_products table."""
    vals = {}
    for (i, k), ps in table.items():
        acc: Number = 0
        for ell, p in enumerate(ps, start=1):
            if p != 0:
                acc = acc + binom_int(n, ell) * p
        vals[(i, k)] = acc
    return from_entries(d, vals)


def mat_pow_closed(x: NilCoords, n: int) -> NilCoords:
    """Coordinates of M(x)^n via the binomial closed form, any n in Z."""
    return mat_pow_from_table(x.d, composition_products(x), n)


def superdiag(alphas) -> NilCoords:
    """The matrix with first superdiagonal alphas and zeros above."""
    alphas = tuple(alphas)
    d = len(alphas)
    return from_entries(d, {(i, 1): a for i, a in enumerate(alphas, start=1)})


def superdiag_pow(alphas, n: int) -> NilCoords:
    """Closed-form power of superdiag(alphas): entry (i,k) of the n-th power
    is binom(n,k) * alpha_i ... alpha_{i+k-1}."""
    alphas = tuple(alphas)
    d = len(alphas)
    vals = {}
    for k in range(1, d + 1):
        b = binom_int(n, k)
        for i in range(1, d - k + 2):
            prod: Number = 1
            for t in range(i - 1, i - 1 + k):
                prod = prod * alphas[t]
            vals[(i, k)] = b * prod
    return from_entries(d, vals)


def lattice_reduce(x: NilCoords, tau: float = DEFAULT_TIE_GUARD) -> ReducedPoint:
    """Greedy reduction of x modulo the integer lattice.

    Level by level (k ascending, rows ascending) take
    u_i^k = x_i^k - sum_{j<k} x_i^{k-j} h_{i+k-j}^j, round h_i^k = <u_i^k>,
    and keep the residual z_i^k = u_i^k - h_i^k.  Every |z_i^k| <= 1/2 and
    M(x) M(-h)  =  M(z) exactly in exact mode.
    """
    d = x.d
    h: dict[tuple[int, int], int] = {}
    z: dict[tuple[int, int], Number] = {}
    for k in range(1, d + 1):
        for i in range(1, d - k + 2):
            u = x.get(i, k)
            for j in range(1, k):
                u = u - x.get(i, k - j) * h[(i + k - j, j)]
            m = nearest_int(u, tau)
            h[(i, k)] = m
            z[(i, k)] = u - m
    levels_h = tuple(tuple(h[(i, k)] for i in range(1, d - k + 2))
                     for k in range(1, d + 1))
    return ReducedPoint(from_entries(d, z), LatticeElem(d, levels_h))


def nil_return_set(alphas, eta: Number, window: tuple[int, int],
                   tau: float = DEFAULT_TIE_GUARD) -> WindowSet:
    """Return times of the nilrotation by superdiag(alphas) into the eta-box.

    n is a member iff every residual of the greedy reduction of the n-th
    power satisfies |z_i^k(n)| < eta.  For eta <= 1/2 this is exactly the
    set of n whose power admits *some* lattice translate within eta of the
    identity in the max-entry norm, because any translate that close forces
    the greedy choice level by level; eta > 1/2 is refused.
    """
    if not (0 < eta <= _HALF):
        raise ValueError("eta must lie in (0, 1/2] for the reduction to certify membership")
    alphas = tuple(alphas)
    d = len(alphas)
    if d < 1:
        raise ValueError("need at least one rotation coordinate")
    lo, hi = window
    members: list[int] = []
    boundary: list[int] = []
    for n in range(lo, hi + 1):
        x = superdiag_pow(alphas, n)
        try:
            if _reduced_within(x, eta, tau):
                members.append(n)
        except BoundaryAmbiguous:
            boundary.append(n)
    return WindowSet(lo, hi, tuple(members), tuple(boundary))


def _reduced_within(x: NilCoords, eta: Number, tau: float) -> bool:
    # lattice_reduce with an early exit once some residual leaves the box
    d = x.d
    h: dict[tuple[int, int], int] = {}
    for k in range(1, d + 1):
        for i in range(1, d - k + 2):
            u = x.get(i, k)
            for j in range(1, k):
                u = u - x.get(i, k - j) * h[(i + k - j, j)]
            m = nearest_int(u, tau)
            if abs(u - m) >= eta:
                return False
            h[(i, k)] = m
    return True


def z1d_sequence(alphas, window: tuple[int, int],
                 tau: float = DEFAULT_TIE_GUARD) -> list[tuple[int, Number]]:
    """Top-right residual z_1^d(n) of the reduced n-th power, for each n.

    This is the bracket-polynomial shadow of the nilrotation; at d = 2 it
    matches the alternating bracket sum of gp.eval_P up to the degree-one
    correction (n/2) alpha_1 alpha_2 plus an integer.
    """
    alphas = tuple(alphas)
    d = len(alphas)
    lo, hi = window
    out: list[tuple[int, Number]] = []
    for n in range(lo, hi + 1):
        x = superdiag_pow(alphas, n)
        red = lattice_reduce(x, tau)
        out.append((n, red.z.get(1, d)))
    return out
