"""Finite window sets.

Every infinite-set notion in this package (Bohr sets, return-time sets,
common-difference sets, ...) is computed exactly on a declared integer
interval [lo, hi].  A WindowSet records that interval together with the
members found on it; membership outside the window is undefined.  Scans in
floating-point mode may additionally produce a list of window points whose
membership could not be decided because a nearest-integer evaluation landed
on a rounding tie; those are reported separately, never silently included.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class WindowSet:
    lo: int
    hi: int
    members: tuple[int, ...]
    boundary: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty window: lo > hi")
        object.__setattr__(self, "members", tuple(self.members))
        object.__setattr__(self, "boundary", tuple(self.boundary))
        for seq, what in ((self.members, "members"), (self.boundary, "boundary")):
            for a, b in zip(seq, seq[1:]):
                if a >= b:
                    raise ValueError(f"{what} must be strictly increasing")
            if seq and (seq[0] < self.lo or seq[-1] > self.hi):
                raise ValueError(f"{what} outside window [{self.lo},{self.hi}]")
        if set(self.members) & set(self.boundary):
            raise ValueError("members and boundary overlap")

    def __contains__(self, n: int) -> bool:
        return n in set(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    def restrict(self, lo: int, hi: int) -> "WindowSet":
        """Restriction to [lo, hi] (must lie inside the original window)."""
        if lo < self.lo or hi > self.hi:
            raise ValueError("restriction exceeds the exact window")
        return WindowSet(
            lo,
            hi,
            tuple(n for n in self.members if lo <= n <= hi),
            tuple(n for n in self.boundary if lo <= n <= hi),
        )

    def to_json(self) -> dict:
        return {
            "window": [self.lo, self.hi],
            "members": list(self.members),
            "boundary": list(self.boundary),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "WindowSet":
        lo, hi = obj["window"]
        return cls(int(lo), int(hi), tuple(int(m) for m in obj["members"]),
                   tuple(int(b) for b in obj.get("boundary", ())))


def from_members(lo: int, hi: int, members) -> WindowSet:
    """WindowSet from an unsorted iterable of members."""
    return WindowSet(lo, hi, tuple(sorted(set(members))))


def merge_adjacent(pieces: list[WindowSet]) -> WindowSet:
    """Concatenate scans of consecutive subwindows into one WindowSet.

    Pieces must tile an interval: each piece starts right after the previous
    one ends.  Used to reassemble partitioned window scans deterministically.
    """
    if not pieces:
        raise ValueError("nothing to merge")
    pieces = sorted(pieces, key=lambda w: w.lo)
    for a, b in zip(pieces, pieces[1:]):
        if b.lo != a.hi + 1:
            raise ValueError("subwindows do not tile an interval")
    members: list[int] = []
    boundary: list[int] = []
    for p in pieces:
        members.extend(p.members)
        boundary.extend(p.boundary)
    return WindowSet(pieces[0].lo, pieces[-1].hi, tuple(members), tuple(boundary))
