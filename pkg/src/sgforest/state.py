"""Numerical semigroup states with incrementally maintained invariants.

A state is a bounded membership bitmap over [0, B], B = 3*G+1 for the
configured genus bound G, together with the invariants needed by the
enumeration: multiplicity m, Frobenius number F, genus g, the count of left
primitives and the sorted list of right primitives.  The bound is safe
because m <= g+1 and c <= 2g for every semigroup other than the naturals,
so every primitive of a node of genus <= G is at most 3G.

States are immutable; tree descent produces fresh children.
"""

from __future__ import annotations

import dataclasses
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _kernels

# sanity cap on the configurable genus bound; per-genus counters are
# additionally overflow-checked at every increment
MAX_GENUS_BOUND = 500


class ConfigurationError(ValueError):
    """Rejected run configuration (bad genus bound, bad flag combination)."""


class ValidationError(ValueError):
    """Malformed input data (gap set whose complement is not closed, etc.)."""


class OutOfBoundError(ValueError):
    """A child construction would exceed the configured genus bound."""


class InvariantRecord(NamedTuple):
    """Full invariant tuple of a node, for reporting and oracle comparison."""

    m: int
    e: int
    e_l: int
    e_r: int
    F: int
    c: int
    g: int
    left_size: int
    wilf: int


@dataclasses.dataclass(frozen=True, eq=False)
class SemigroupState:
    """One node of the semigroup tree.

    membership[x] is 1 iff x belongs to the semigroup, for 0 <= x <= B.
    frobenius is -1 for the naturals (no gaps), so conductor = frobenius+1
    and left_size = conductor - genus hold without special cases.
    """

    membership: np.ndarray
    m: int
    frobenius: int
    genus: int
    left_primitive_count: int
    right_primitives: tuple[int, ...]

    @property
    def conductor(self) -> int:
        return self.frobenius + 1

    @property
    def bound(self) -> int:
        return len(self.membership) - 1

    @property
    def genus_bound(self) -> int:
        return (self.bound - 1) // 3

    @property
    def is_ordinary(self) -> bool:
        # the unique semigroups with conductor <= multiplicity
        return self.frobenius < self.m

    @property
    def is_special(self) -> bool:
        return self.conductor % self.m == 0

    def __eq__(self, other):
        if not isinstance(other, SemigroupState):
            return NotImplemented
        return (
            self.m == other.m
            and self.frobenius == other.frobenius
            and self.genus == other.genus
            and self.left_primitive_count == other.left_primitive_count
            and self.right_primitives == other.right_primitives
            and np.array_equal(self.membership, other.membership)
        )

    def __repr__(self):
        return (
            f"SemigroupState(gaps='{format_gap_set(gap_set(self))}', m={self.m}, "
            f"F={self.frobenius}, g={self.genus}, e_l={self.left_primitive_count}, "
            f"P_r={list(self.right_primitives)})"
        )


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _check_genus_bound(genus_bound: int) -> None:
    if not 1 <= genus_bound <= MAX_GENUS_BOUND:
        raise ConfigurationError(
            f"genus bound must be in [1, {MAX_GENUS_BOUND}], got {genus_bound}")


def root(genus_bound: int) -> SemigroupState:
    """State of the naturals, the tree root: no gaps, single primitive 1."""
    _check_genus_bound(genus_bound)
    membership = _freeze(np.ones(3 * genus_bound + 2, dtype=np.uint8))
    return SemigroupState(
        membership=membership,
        m=1,
        frobenius=-1,
        genus=0,
        left_primitive_count=0,
        right_primitives=(1,),
    )


def child(s: SemigroupState, a: int) -> SemigroupState:
    """Child obtained by deleting the right primitive a from s.

    The update is incremental: the deleted element becomes the new Frobenius
    number, primitives below a move to the left side, and a+m is the only
    candidate for a new primitive.  Deleting the multiplicity itself (only
    possible for an ordinary semigroup) yields the next ordinary semigroup,
    which gains two right primitives and is built directly.
    """
    if a not in s.right_primitives:
        raise ValueError(f"{a} is not a right primitive of {s!r}")
    if s.genus + 1 > s.genus_bound:
        raise OutOfBoundError(
            f"child of genus {s.genus + 1} exceeds the configured bound "
            f"{s.genus_bound}")
    prp = np.asarray(s.right_primitives, dtype=np.int32)
    idx = s.right_primitives.index(a)
    crp = np.empty(s.m + 2, dtype=np.int32)
    cm, cel, crpn = _kernels.child_update(
        s.membership, s.m, s.left_primitive_count, prp, len(prp), idx, crp)
    membership = s.membership.copy()
    membership[a] = 0
    cg = s.genus + 1
    assert cm <= cg + 1 and a + 1 <= 2 * cg  # classical bounds keep B = 3G+1 safe
    return SemigroupState(
        membership=_freeze(membership),
        m=int(cm),
        frobenius=a,
        genus=cg,
        left_primitive_count=int(cel),
        right_primitives=tuple(int(x) for x in crp[:crpn]),
    )


def children(s: SemigroupState) -> list[SemigroupState]:
    """All children, in increasing order of the deleted right primitive."""
    return [child(s, a) for a in s.right_primitives]


def invariants(s: SemigroupState) -> InvariantRecord:
    e = s.left_primitive_count + len(s.right_primitives)
    c = s.conductor
    left_size = c - s.genus
    return InvariantRecord(
        m=s.m,
        e=e,
        e_l=s.left_primitive_count,
        e_r=len(s.right_primitives),
        F=s.frobenius,
        c=c,
        g=s.genus,
        left_size=left_size,
        wilf=e * left_size - c,
    )


def euclid_split(s: SemigroupState) -> tuple[int, int, bool]:
    """Unique (q, rho) with conductor = q*m - rho, 0 <= rho < m.

    The state is special exactly when rho = 0, i.e. m divides the conductor.
    """
    c = s.conductor
    q = -(-c // s.m)
    rho = q * s.m - c
    return q, rho, rho == 0


def _closure_violation(membership: Sequence[int]) -> tuple[int, int] | None:
    """Smallest (x, y), x <= y, both members with x+y <= B not a member."""
    memb = np.asarray(membership, dtype=np.int32)
    bound = len(memb) - 1
    star = memb.copy()
    star[0] = 0
    sums = np.convolve(star, star)[: bound + 1]
    bad = np.flatnonzero((sums > 0) & (memb == 0))
    if len(bad) == 0:
        return None
    z = int(bad[0])
    for x in range(1, z // 2 + 1):
        if star[x] and star[z - x]:
            return x, z - x
    raise AssertionError("unreachable")


def primitives_by_sieve(membership: Sequence[int]) -> list[int]:
    """From-scratch primitive list of a membership bitmap.

    A nonzero member x is primitive iff no member s with m <= s <= x/2 has
    x-s a nonzero member.  Primitives can only lie in [m, c+m-1] (for the
    naturals this window degenerates to {1}).  This is the reference the
    incremental maintenance is checked against.
    """
    memb = np.asarray(membership, dtype=np.uint8)
    pair = _closure_violation(memb)
    if pair is not None:
        raise ValidationError(
            f"membership is not additively closed: {pair[0]}+{pair[1]}="
            f"{pair[0] + pair[1]} is missing")
    if memb[0] != 1:
        raise ValidationError("membership must contain 0")
    nz = np.flatnonzero(memb[1:]) + 1
    if len(nz) == 0:
        raise ValidationError("membership has no nonzero element")
    m = int(nz[0])
    zeros = np.flatnonzero(memb == 0)
    c = int(zeros[-1]) + 1 if len(zeros) else 0
    out = []
    for x in range(m, max(c + m - 1, m) + 1):
        if not memb[x]:
            continue
        for s in range(m, x // 2 + 1):
            if memb[s] and memb[x - s]:
                break
        else:
            out.append(x)
    return out


def from_gaps(gaps: Iterable[int], genus_bound: int) -> SemigroupState:
    """State whose gap set is the given collection of positive integers.

    Raises ValidationError when the complement is not additively closed,
    naming a violating pair.
    """
    _check_genus_bound(genus_bound)
    gaps = tuple(sorted(gaps))
    if len(set(gaps)) != len(gaps):
        raise ValidationError(f"duplicate gaps in {gaps}")
    if len(gaps) > genus_bound:
        raise ValidationError(
            f"{len(gaps)} gaps exceed the genus bound {genus_bound}")
    size = 3 * genus_bound + 2
    if gaps and (gaps[0] < 1 or gaps[-1] >= size):
        raise ValidationError(f"gaps must lie in [1, {size - 1}], got {gaps}")
    membership = np.ones(size, dtype=np.uint8)
    membership[list(gaps)] = 0
    primitives = primitives_by_sieve(membership)  # validates closure
    frobenius = gaps[-1] if gaps else -1
    c = frobenius + 1
    genus = len(gaps)
    m = primitives[0]
    if genus:
        assert m <= genus + 1 and c <= 2 * genus
    return SemigroupState(
        membership=_freeze(membership),
        m=m,
        frobenius=frobenius,
        genus=genus,
        left_primitive_count=sum(1 for p in primitives if p < c),
        right_primitives=tuple(p for p in primitives if p >= max(c, m)),
    )


def gap_set(s: SemigroupState) -> tuple[int, ...]:
    return tuple(int(x) for x in np.flatnonzero(s.membership == 0))


def format_gap_set(gaps: Sequence[int]) -> str:
    """Canonical textual form: comma-separated sorted gaps; '' is the naturals."""
    return ",".join(str(g) for g in gaps)


def parse_gap_set(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        gaps = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"malformed gap set {text!r}") from exc
    if any(g < 1 for g in gaps) or list(gaps) != sorted(set(gaps)):
        raise ValidationError(
            f"gap set must be sorted distinct positive integers, got {text!r}")
    return gaps


def validate_state(s: SemigroupState) -> None:
    """Assert every structural invariant of a state; test/debug helper."""
    memb = s.membership
    c = s.conductor
    assert memb[0] == 1, "0 must be a member"
    assert np.all(memb[c:] == 1), "everything from the conductor on is a member"
    zeros = np.flatnonzero(memb == 0)
    assert s.frobenius == (int(zeros[-1]) if len(zeros) else -1)
    assert s.genus == len(zeros)
    nz = np.flatnonzero(memb[1:]) + 1
    assert s.m == int(nz[0])
    assert _closure_violation(memb) is None
    primitives = primitives_by_sieve(memb)
    lo = max(c, s.m)
    assert list(s.right_primitives) == [p for p in primitives if p >= lo]
    assert s.left_primitive_count == sum(1 for p in primitives if p < c)
    for p in s.right_primitives:
        assert lo <= p <= max(c + s.m - 1, s.m)
    if s.genus:
        assert s.m <= s.genus + 1 and c <= 2 * s.genus
