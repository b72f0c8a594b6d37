"""Slow reference implementations used to cross-check the fast kernel.

Two independent routes: an exhaustive gap-set search that never touches the
tree construction, and a from-scratch recomputation of every invariant from
a membership bitmap alone.  Both are deliberately definitional; they may be
orders of magnitude slower than the kernel.
"""

from __future__ import annotations

import numpy as np

from . import state as _state
from .state import SemigroupState, ValidationError, gap_set

GAPSET_ENUM_MAX = 12
RECOMPUTE_MAX = 22


class OracleSemigroup:
    """A semigroup rebuilt from its gap set by the raw definitions.

    Members are materialized up to 2g+2, which covers every primitive: a
    primitive p has p-s outside the semigroup for every member 0 < s < p,
    so the g gaps dominate the members below p, giving p <= 2g+1.
    """

    def __init__(self, gaps):
        self.gaps = tuple(sorted(gaps))
        g = len(self.gaps)
        self.limit = 2 * g + 2
        if self.gaps and (self.gaps[0] < 1 or self.gaps[-1] > self.limit):
            raise ValidationError(f"gap set out of range: {self.gaps}")
        gapset = set(self.gaps)
        if len(gapset) != g:
            raise ValidationError(f"duplicate gaps: {gaps}")
        self.members = [x for x in range(self.limit + 1) if x not in gapset]
        memberset = set(self.members)
        for x in self.members:
            for y in self.members:
                if 0 < x <= y and x + y <= self.limit and x + y in gapset:
                    raise ValidationError(
                        f"complement not closed: {x}+{y}={x + y} is a gap")
        self.primitives = [
            a for a in self.members
            if a > 0 and not any(
                s in memberset and (a - s) in memberset
                for s in range(1, a))
        ]
        self.frobenius = self.gaps[-1] if self.gaps else -1
        self.conductor = self.frobenius + 1
        self.genus = g
        self.m = next(a for a in self.members if a > 0)
        self.e = len(self.primitives)
        self.e_l = sum(1 for p in self.primitives if p < self.frobenius)
        self.e_r = self.e - self.e_l
        self.left_size = sum(1 for a in self.members if a < self.frobenius)
        self.wilf = self.e * self.left_size - self.conductor


def enumerate_gapsets(g_max: int) -> dict[int, list[tuple[int, ...]]]:
    """All gap sets of genus <= g_max, found by direct search.

    Gaps are chosen in increasing order from {1, ..., 2g-1}; a candidate is
    admissible iff it is not forced into the semigroup as a sum of two
    smaller members.  Completely independent of the tree construction.
    """
    if g_max > GAPSET_ENUM_MAX:
        raise ValueError(
            f"gap-set enumeration is exponential; refusing g_max={g_max} > "
            f"{GAPSET_ENUM_MAX}")
    out: dict[int, list[tuple[int, ...]]] = {g: [] for g in range(g_max + 1)}
    memb = bytearray([1]) * (2 * g_max + 2)
    gaps: list[int] = []

    def forced(y):
        return any(memb[s] and memb[y - s] for s in range(1, y // 2 + 1))

    def rec(next_min):
        out[len(gaps)].append(tuple(gaps))
        if len(gaps) == g_max:
            return
        for y in range(next_min, 2 * len(gaps) + 2):
            if not forced(y):
                memb[y] = 0
                gaps.append(y)
                rec(y + 1)
                gaps.pop()
                memb[y] = 1

    rec(1)
    for sets in out.values():
        sets.sort()
        for gs in sets:
            OracleSemigroup(gs)  # self-validation: closure must hold
    return out


def recompute_state(membership, genus_bound: int) -> SemigroupState:
    """Rebuild every state field from the bitmap alone, by definition.

    The two-summand representation counts come from an exact integer
    self-convolution of the bitmap, so no incremental shortcut of the kernel
    is shared.  Used to cross-check incrementally built states.
    """
    memb = np.ascontiguousarray(membership, dtype=np.uint8)
    if len(memb) != 3 * genus_bound + 2:
        raise ValidationError(
            f"bitmap length {len(memb)} does not fit genus bound {genus_bound}")
    if memb[0] != 1:
        raise ValidationError("membership must contain 0")
    star = memb.astype(np.int32)
    star[0] = 0
    sums = np.convolve(star, star)[: len(memb)]
    bad = np.flatnonzero((sums > 0) & (memb == 0))
    if len(bad):
        z = int(bad[0])
        for x in range(1, z // 2 + 1):
            if star[x] and star[z - x]:
                raise ValidationError(
                    f"complement not closed: {x}+{z - x}={z} is missing")
    zeros = np.flatnonzero(memb == 0)
    frobenius = int(zeros[-1]) if len(zeros) else -1
    genus = len(zeros)
    if genus > genus_bound:
        raise ValidationError(
            f"genus {genus} exceeds the configured bound {genus_bound}")
    nonzero = np.flatnonzero(star)
    m = int(nonzero[0])
    c = frobenius + 1
    primitives = [int(p) for p in nonzero[sums[nonzero] == 0]]
    out = memb.copy()
    out.setflags(write=False)
    return SemigroupState(
        membership=out,
        m=m,
        frobenius=frobenius,
        genus=genus,
        left_primitive_count=sum(1 for p in primitives if p < c),
        right_primitives=tuple(p for p in primitives if p >= max(c, m)),
    )


def compare_with_recomputation(s: SemigroupState) -> list[str]:
    """Field-by-field discrepancies between s and its from-scratch rebuild."""
    try:
        fresh = recompute_state(s.membership, s.genus_bound)
    except ValidationError as exc:
        return [f"{gap_set(s)}: invalid membership: {exc}"]
    diffs = []
    for field in ("m", "frobenius", "genus", "left_primitive_count",
                  "right_primitives"):
        got, want = getattr(s, field), getattr(fresh, field)
        if got != want:
            diffs.append(f"{gap_set(s)}: {field}: state has {got}, "
                         f"recomputation gives {want}")
    return diffs


def assert_equivalence(g_max: int) -> list[str]:
    """Cross-check the tree against both oracle routes; empty on success.

    Walks the untrimmed tree to genus g_max, rebuilding every node from
    scratch, and compares the per-genus gap sets with the independent
    gap-set search (up to its own cap).  Discrepancies are returned as
    strings, not raised, so a harness can print all of them.
    """
    if g_max > RECOMPUTE_MAX:
        raise ValueError(
            f"recomputation sweep capped at genus {RECOMPUTE_MAX}, "
            f"got {g_max}")
    gap_leg = min(g_max, GAPSET_ENUM_MAX)
    discrepancies: list[str] = []
    seen: dict[int, list[tuple[int, ...]]] = {g: [] for g in range(g_max + 1)}
    stack = [_state.root(max(g_max, 1))]
    while stack:
        s = stack.pop()
        discrepancies.extend(compare_with_recomputation(s))
        if s.genus <= gap_leg:
            seen[s.genus].append(gap_set(s))
        if s.genus < g_max:
            stack.extend(_state.children(s))
    expected = enumerate_gapsets(gap_leg)
    for g in range(gap_leg + 1):
        if sorted(seen[g]) != expected[g]:
            tree_only = set(seen[g]) - set(expected[g])
            search_only = set(expected[g]) - set(seen[g])
            discrepancies.append(
                f"genus {g}: tree and gap-set search disagree "
                f"(tree extra: {sorted(tree_only)}, "
                f"search extra: {sorted(search_only)}, "
                f"tree count {len(seen[g])} vs search count {len(expected[g])})")
    return discrepancies
