"""Skew-product torus maps and their return-time sets.

The d-dimensional skew product with parameter alpha sends
(t1, t2, ..., td) to (t1 + alpha, t2 + t1, ..., td + t_{d-1}); its n-th
iterate has the binomial closed form whose j-th coordinate is
sum_{i=0}^{j} binom(n, j-i) t_i with t0 = alpha.  On top of the closed-form
orbit this module computes return-time sets into box neighbourhoods,
grid-certified multi-return sets {n : U and its n, 2n, ..., kn preimages
intersect}, the integer weight vector that isolates the top coordinate of a
progression of iterates, and a windowed correspondence check between
common-difference sets and multi-returns of the associated shift orbit.

Arithmetic follows the coefficient types (Fraction = exact, float = fast),
as in the gp module.  All torus coordinates are kept reduced to [0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .gp import frac_norm
from .nilmatrix import binom_int
from .setfamilies import common_diff_set
from .windows import WindowSet

Number = Union[int, Fraction, float]

_HALF = Fraction(1, 2)


def _mod1(v: Number) -> Number:
    return v % 1.0 if isinstance(v, float) else v % 1


@dataclass(frozen=True)
class TorusSystem:
    d: int
    alpha: Number

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be >= 1")


@dataclass(frozen=True)
class TorusState:
    """A point of the d-torus; coordinates stored in [0, 1)."""

    coords: tuple[Number, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(_mod1(c) for c in self.coords))

    @property
    def d(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class BoxNbhd:
    """Product of arcs (center_j - eps_j, center_j + eps_j) on the torus."""

    center: TorusState
    radii: tuple[Number, ...]

    def __post_init__(self):
        object.__setattr__(self, "radii", tuple(self.radii))
        if len(self.radii) != self.center.d:
            raise ValueError("one radius per coordinate")
        for eps in self.radii:
            if not (0 < eps <= _HALF):
                raise ValueError(f"radii must lie in (0, 1/2], got {eps}")

    def __contains__(self, x: TorusState) -> bool:
        return all(frac_norm(c - m) < eps
                   for c, m, eps in zip(x.coords, self.center.coords, self.radii))


def zero_state(d: int) -> TorusState:
    return TorusState((0,) * d)


def origin_box(d: int, eps: Number) -> BoxNbhd:
    return BoxNbhd(zero_state(d), (eps,) * d)


def torus_orbit(sys: TorusSystem, x0: TorusState, n: int) -> TorusState:
    """n-th iterate via the binomial closed form, any n in Z."""
    if x0.d != sys.d:
        raise ValueError("state dimension mismatch")
    theta = (sys.alpha,) + x0.coords  # theta_0 is the rotation parameter
    coords = []
    for j in range(1, sys.d + 1):
        v: Number = 0
        for i in range(j + 1):
            v = v + binom_int(n, j - i) * theta[i]
        coords.append(_mod1(v))
    return TorusState(tuple(coords))


def step_oracle(sys: TorusSystem, x: TorusState, n: int) -> TorusState:
    """n-th iterate by stepping the one-step map |n| times; the brute-force
    cross-check for torus_orbit."""
    if x.d != sys.d:
        raise ValueError("state dimension mismatch")
    coords = list(x.coords)
    if n >= 0:
        for _ in range(n):
            # the one-step map reads the pre-step coordinates
            coords = [_mod1(coords[0] + sys.alpha)] + \
                [_mod1(coords[j] + coords[j - 1]) for j in range(1, sys.d)]
    else:
        for _ in range(-n):
            prev: Number = sys.alpha
            for j in range(sys.d):
                new = _mod1(coords[j] - prev)
                prev = new
                coords[j] = new
    return TorusState(tuple(coords))


def return_set(sys: TorusSystem, x0: TorusState, U: BoxNbhd,
               window: tuple[int, int]) -> WindowSet:
    """{n in window : the n-th iterate of x0 lies in U}, by closed form."""
    if U.center.d != sys.d:
        raise ValueError("neighbourhood dimension mismatch")
    lo, hi = window
    members = [n for n in range(lo, hi + 1)
               if torus_orbit(sys, x0, n) in U]
    return WindowSet(lo, hi, tuple(members))


def _grid_values(center: Number, eps: Number, grid: int) -> list[Number]:
    # interior lattice: center - eps + 2 eps t / grid, t = 1 .. grid-1.
    # Nested under divisibility of grid, so refining can only add witnesses.
    if isinstance(center, float) or isinstance(eps, float):
        lo = float(center) - float(eps)
        h = 2.0 * float(eps) / grid
        return [_mod1(lo + h * t) for t in range(1, grid)]
    lo_q = Fraction(center) - Fraction(eps)
    h_q = 2 * Fraction(eps) / grid
    return [_mod1(lo_q + h_q * t) for t in range(1, grid)]


def default_grid(d: int) -> int:
    return 512 if d <= 2 else 64


def multi_return_witness(sys: TorusSystem, U: BoxNbhd, d_rec: int, n: int,
                         grid: int) -> Optional[TorusState]:
    """A grid point u strictly inside U with the iterates at n, 2n, ...,
    d_rec*n all in U, or None if no grid point certifies n.

    The grid is scanned coordinate by coordinate: the j-th coordinate of the
    m-th iterate depends only on u_1..u_j, so partial assignments that
    already violate some arc are pruned.  Any returned point is a genuine
    witness; returning None only means the grid saw none.
    """
    if grid < 2:
        raise ValueError("need at least 2 grid cells per dimension")
    if d_rec < 1:
        raise ValueError("recurrence order must be >= 1")
    d = sys.d
    ms = [i * n for i in range(1, d_rec + 1)]
    # binomial weights binom(m, t) for each tested iterate
    weights = [[binom_int(m, t) for t in range(d + 1)] for m in ms]
    centers = U.center.coords
    radii = U.radii

    def extend(j: int, partial: tuple[Number, ...],
               bases: list[Number]) -> Optional[tuple[Number, ...]]:
        # bases[q] = coordinate j of iterate ms[q] minus the u_j term
        for val in _grid_values(centers[j - 1], radii[j - 1], grid):
            if all(frac_norm(b + val - centers[j - 1]) < radii[j - 1]
                   for b in bases):
                cand = partial + (val,)
                if j == d:
                    return cand
                nxt = [_coord_base(weights[q], sys.alpha, cand, j + 1)
                       for q in range(len(ms))]
                hit = extend(j + 1, cand, nxt)
                if hit is not None:
                    return hit
        return None

    first = [_coord_base(weights[q], sys.alpha, (), 1) for q in range(len(ms))]
    hit = extend(1, (), first)
    return TorusState(hit) if hit is not None else None


def _coord_base(w: list, alpha: Number, partial: tuple[Number, ...],
                j: int) -> Number:
    # sum_{i=0}^{j-1} binom(m, j-i) theta_i: everything but the u_j term
    v = w[j] * alpha
    for i, u in enumerate(partial, start=1):
        v = v + w[j - i] * u
    return _mod1(v)


def multi_return_scan(sys: TorusSystem, U: BoxNbhd, d_rec: int,
                      window: tuple[int, int], grid: Optional[int] = None
                      ) -> list[tuple[int, TorusState]]:
    """(n, witness) pairs for every window n certified by some grid point."""
    if U.center.d != sys.d:
        raise ValueError("neighbourhood dimension mismatch")
    g = default_grid(sys.d) if grid is None else grid
    lo, hi = window
    out: list[tuple[int, TorusState]] = []
    for n in range(lo, hi + 1):
        w = multi_return_witness(sys, U, d_rec, n, g)
        if w is not None:
            out.append((n, w))
    return out


def multi_return_set(sys: TorusSystem, U: BoxNbhd, d_rec: int,
                     window: tuple[int, int], grid: Optional[int] = None
                     ) -> WindowSet:
    """One-sided grid certification of {n : U meets all of its n, 2n, ...,
    d_rec*n preimages}.

    Every reported n has an explicit interior grid witness (so it is a true
    member); members whose witnesses fall between grid points can be missed.
    Finer grids that are multiples of the current one only add members.
    """
    lo, hi = window
    members = tuple(n for n, _ in multi_return_scan(sys, U, d_rec, window, grid))
    return WindowSet(lo, hi, members)


# ---------------------------------------------------------------------------
# the integer weights that isolate the top coordinate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LambdaSolution:
    """Integer weights with sum_m lambdas[m-1] m^j = 0 for j < d and = lam
    for j = d; K = d! * sum |lambdas|."""

    lambdas: tuple[int, ...]
    lam: int
    K: int

    @property
    def d(self) -> int:
        return len(self.lambdas)

    def to_json(self) -> dict:
        return {"lambdas": list(self.lambdas), "lambda": self.lam, "K": self.K}


def vandermonde_lambda(d: int) -> LambdaSolution:
    """Smallest positive integer solution of the power-sum system.

    Solves the d x d Vandermonde system sending (lambda_1, ..., lambda_d) to
    (0, ..., 0, lambda) by exact elimination, scales to coprime integers,
    and normalises lambda > 0.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    # augmented system over Fractions with right side e_d
    rows = [[Fraction(m ** j) for m in range(1, d + 1)] for j in range(1, d + 1)]
    rhs = [Fraction(0)] * (d - 1) + [Fraction(1)]
    for col in range(d):
        piv = next(r for r in range(col, d) if rows[r][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1 / rows[col][col]
        rows[col] = [v * inv for v in rows[col]]
        rhs[col] = rhs[col] * inv
        for r in range(d):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
                rhs[r] = rhs[r] - f * rhs[col]
    sol = rhs  # solution for lambda = 1
    scale = math.lcm(*(v.denominator for v in sol)) if d > 0 else 1
    lambdas = [int(v * scale) for v in sol]
    lam = scale
    g = math.gcd(lam, *(abs(v) for v in lambdas))
    lambdas = [v // g for v in lambdas]
    lam //= g
    if lam < 0:
        lambdas = [-v for v in lambdas]
        lam = -lam
    K = math.factorial(d) * sum(abs(v) for v in lambdas)
    return LambdaSolution(tuple(lambdas), lam, K)


def lambda_identity_holds(sol: LambdaSolution) -> bool:
    """Exact check of the defining power sums."""
    d = sol.d
    for j in range(1, d):
        if sum(l * m ** j for l, m in zip(sol.lambdas, range(1, d + 1))) != 0:
            return False
    return sum(l * m ** d for l, m in zip(sol.lambdas, range(1, d + 1))) == sol.lam


# ---------------------------------------------------------------------------
# correspondence between difference sets and shift multi-returns
# ---------------------------------------------------------------------------

def shift_multi_return(S: WindowSet, d_rec: int, nmax: int) -> list[int]:
    """Multi-return times of the cylinder through the indicator word of S
    under the shift: n with some m, m+n, ..., m+d_rec*n all in S.

    Scanned directly on the indicator word, independently of
    common_diff_set's slice arithmetic.
    """
    lo, hi = S.lo, S.hi
    word = [False] * (hi - lo + 1)
    for m in S.members:
        word[m - lo] = True
    out = []
    for n in range(-nmax, nmax + 1):
        hit = False
        for idx in range(len(word)):
            if not word[idx]:
                continue
            last = idx + d_rec * n
            if last < 0 or last >= len(word):
                continue
            if all(word[idx + i * n] for i in range(1, d_rec + 1)):
                hit = True
                break
        if hit:
            out.append(n)
    return out


def shift_correspondence_check(S: WindowSet, d_rec: int, margin: int) -> bool:
    """Windowed correspondence of common differences and shift multi-returns.

    Compares common_diff_set(S, d_rec) with the direct indicator-word scan
    on the n-range [-margin//d_rec, margin//d_rec]; the margin keeps every
    tested progression away from feasibility edge effects.  The two
    computations must coincide identically there.
    """
    if d_rec < 1:
        raise ValueError("recurrence order must be >= 1")
    nmax = margin // d_rec
    if nmax < 1:
        raise ValueError("margin too small to test any n")
    feasible = (S.hi - S.lo) // d_rec
    if nmax > feasible:
        raise ValueError("margin exceeds the feasible progression range")
    cds = common_diff_set(S, d_rec)
    left = [n for n in cds.members if -nmax <= n <= nmax]
    right = shift_multi_return(S, d_rec, nmax)
    return left == right
