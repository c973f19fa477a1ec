"""Windowed combinatorics on subsets of the integers.

Sums with gaps, finite subset sums, common-difference sets of arithmetic
progressions, syndeticity, a windowed surrogate of upper Banach density,
bounded searches for higher-order intersectivity witnesses, and the
three-block partition showing that the sums-with-gap-2 family is not
partition regular.  All sums run in arbitrary precision; lacunary inputs
like 3^40 are routine.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Optional, Sequence

import numpy as np

from .windows import WindowSet, from_members


@dataclass(frozen=True)
class GapSeq:
    """A finite sequence p_1, ..., p_m of integers."""

    terms: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(int(t) for t in self.terms))

    def __len__(self) -> int:
        return len(self.terms)

    def to_json(self) -> dict:
        return {"terms": [str(t) if abs(t) >= 2 ** 53 else t for t in self.terms]}

    @classmethod
    def from_json(cls, obj: dict) -> "GapSeq":
        return cls(tuple(int(t) for t in obj["terms"]))


def _terms(P) -> tuple[int, ...]:
    if isinstance(P, GapSeq):
        return P.terms
    return tuple(int(t) for t in P)


def is_lacunary(P) -> bool:
    """p_{i+1} > 2 (p_1 + ... + p_i) for every i; forces unique pattern sums."""
    terms = _terms(P)
    total = 0
    for t in terms:
        if t <= 2 * total:
            return False
        total += t
    return True


def _admissible(bits: tuple[int, ...], d: int) -> bool:
    # gaps of 0's between consecutive 1's must be shorter than d
    support = [i for i, b in enumerate(bits) if b]
    if not support:
        return False
    return all(b - a - 1 < d for a, b in zip(support, support[1:]))


def sg_d_bruteforce(P, d: int) -> list[int]:
    """Sums with gaps < d by enumerating all 2^m - 1 selection patterns.

    The independent oracle for sg_d; capped at 24 terms.
    """
    terms = _terms(P)
    if d < 1:
        raise ValueError("gap bound d must be >= 1")
    m = len(terms)
    if m > 24:
        raise ValueError("brute-force enumeration capped at 24 terms")
    found: set[int] = set()
    for mask in range(1, 1 << m):
        bits = tuple((mask >> i) & 1 for i in range(m))
        if _admissible(bits, d):
            found.add(sum(t for t, b in zip(terms, bits) if b))
    return sorted(found)


def sg_d(P, d: int) -> list[int]:
    """Sums with gaps < d: all sums eps_1 p_1 + ... + eps_m p_m over 0/1
    patterns whose runs of 0's between chosen terms are shorter than d.

    Dynamic program over the last chosen index; equals the pattern brute
    force, but scales to sequences far beyond 24 terms when the value sets
    stay manageable.
    """
    terms = _terms(P)
    if d < 1:
        raise ValueError("gap bound d must be >= 1")
    m = len(terms)
    if m == 0:
        return []
    # by_last[i] = sums of admissible patterns whose last chosen index is i
    by_last: list[set[int]] = [set() for _ in range(m)]
    for i, t in enumerate(terms):
        sums = {t}
        for j in range(max(0, i - d), i):
            sums.update(s + t for s in by_last[j])
        by_last[i] = sums
    out: set[int] = set()
    for sums in by_last:
        out.update(sums)
    return sorted(out)


def fs(P) -> list[int]:
    """All finite nonempty subset sums (the IP structure of P); <= 24 terms."""
    terms = _terms(P)
    if len(terms) > 24:
        raise ValueError("subset-sum enumeration capped at 24 terms")
    sums: set[int] = set()
    for t in terms:
        sums |= {s + t for s in sums} | {t}
    return sorted(sums)


def common_diff_set(S: WindowSet, d: int) -> WindowSet:
    """Common differences n of (d+1)-term arithmetic progressions inside S.

    n is a member iff some m has m, m+n, ..., m+dn all in S; the witness
    progression must fit inside S's window, so the feasible n range is
    |n| <= (hi-lo)//d.  The set is symmetric in n (reverse the progression).
    """
    if d < 1:
        raise ValueError("progression order d must be >= 1")
    if S.hi - S.lo < d:
        raise ValueError("window too short for a (d+1)-term progression")
    L = S.hi - S.lo + 1
    ind = np.zeros(L, dtype=bool)
    if S.members:
        ind[np.asarray(S.members, dtype=np.int64) - S.lo] = True
    nmax = (S.hi - S.lo) // d
    positives: list[int] = []
    zero_in = bool(ind.any())
    for n in range(1, nmax + 1):
        span = L - d * n
        acc = ind[:span].copy()
        for i in range(1, d + 1):
            acc &= ind[i * n: i * n + span]
            if not acc.any():
                break
        else:
            positives.append(n)
    members = [-n for n in reversed(positives)] + ([0] if zero_in else []) + positives
    return WindowSet(-nmax, nmax, tuple(members))


def diff_set(S: WindowSet) -> WindowSet:
    """The windowed difference set {a - b : a, b in S} (order-1 differences)."""
    nmax = S.hi - S.lo
    diffs = {a - b for a in S.members for b in S.members}
    return from_members(-nmax, nmax, diffs)


def is_syndetic_window(S: WindowSet, N: int) -> bool:
    """True iff every block {i, ..., i+N} inside the window meets S."""
    if N < 0:
        raise ValueError("gap bound N must be >= 0")
    if S.hi - S.lo < N:
        raise ValueError("window shorter than a single length-(N+1) block")
    L = S.hi - S.lo + 1
    ind = np.zeros(L, dtype=bool)
    if S.members:
        ind[np.asarray(S.members, dtype=np.int64) - S.lo] = True
    # cumulative counts make every block query O(1)
    csum = np.concatenate(([0], np.cumsum(ind)))
    counts = csum[N + 1:] - csum[:L - N]
    return bool((counts > 0).all())


def banach_upper_density(S: WindowSet, L: int) -> float:
    """Windowed surrogate of upper Banach density: the best density of S
    over blocks of L consecutive integers inside the window."""
    if L < 1:
        raise ValueError("block length must be >= 1")
    window_len = S.hi - S.lo + 1
    if L > window_len:
        raise ValueError("block length exceeds the window")
    ind = np.zeros(window_len, dtype=np.int64)
    if S.members:
        ind[np.asarray(S.members, dtype=np.int64) - S.lo] = 1
    csum = np.concatenate(([0], np.cumsum(ind)))
    counts = csum[L:] - csum[:window_len - L + 1]
    return float(counts.max()) / L


def _fs_of_tuple(ns: Sequence[int]) -> set[int]:
    sums: set[int] = set()
    for t in ns:
        sums |= {s + t for s in sums} | {t}
    return sums


def intersective_witness(P: WindowSet, F: WindowSet, d: int, bound: int
                         ) -> Optional[tuple[int, tuple[int, ...]]]:
    """Bounded search for an order-d intersectivity witness.

    Looks for gaps n_1, ..., n_d (nonzero, |n_i| <= bound) with all finite
    subset sums of {n_i} inside P, and a point a in F whose translates
    a + FS({n_i}) stay in F.  Returns (a, (n_1, ..., n_d)) for the first
    witness in a fixed deterministic order, or None if none exists within
    the bound -- absence within the bound is not a disproof.
    """
    if d < 1:
        raise ValueError("order d must be >= 1")
    if bound < 1:
        raise ValueError("bound must be >= 1")
    p_set = P.member_set()
    f_set = F.member_set()
    # candidate gap values ordered by magnitude, positives first
    values: list[int] = []
    for v in range(1, bound + 1):
        values.extend((v, -v))
    for ns in combinations_with_replacement(values, d):
        fs_vals = _fs_of_tuple(ns)
        if not fs_vals <= p_set:
            continue
        for a in F.members:
            if all(a + s in f_set for s in fs_vals):
                return a, tuple(ns)
    return None


def ramsey_sg2_partition(P) -> tuple[list[int], list[int], list[int]]:
    """Three-way partition (B0, B1, B2) of the gap-2 sums of a lacunary P.

    B1 collects consecutive sums of the odd-indexed terms, B2 of the
    even-indexed terms, and B0 is the rest.  Lacunarity
    (p_{i+1} > 2(p_1+...+p_i)) is required: it makes every gap-2 sum have a
    unique selection pattern, so the three blocks really partition the set.
    None of the three blocks contains a sum-closed triple (see
    find_star_pattern), although the un-partitioned set does.
    """
    terms = _terms(P)
    if not is_lacunary(terms):
        raise ValueError("sequence is not lacunary: need p_{i+1} > 2(p_1+...+p_i)")
    whole = sg_d(terms, 2)
    b1 = sg_d(terms[0::2], 1)
    b2 = sg_d(terms[1::2], 1)
    b0 = sorted(set(whole) - set(b1) - set(b2))
    return b0, b1, b2


def find_star_pattern(B) -> Optional[tuple[int, int, int]]:
    """First triple a1 <= a2 <= a3 with all of a1, a2, a3 and the three
    pairwise sums inside B; None if the exhaustive search finds none."""
    arr = sorted(set(int(b) for b in B))
    bs = set(arr)
    for i1, a1 in enumerate(arr):
        for i2 in range(i1, len(arr)):
            a2 = arr[i2]
            if a1 + a2 not in bs:
                continue
            for i3 in range(i2, len(arr)):
                a3 = arr[i3]
                if a2 + a3 in bs and a1 + a3 in bs:
                    return a1, a2, a3
    return None
