"""Subtree cut rules.

Each predicate decides whether the whole subtree below a node can be dropped
without losing any node that still needs its Wilf inequality checked (or,
for the special rule, without losing any special node).  All comparisons are
exact 64-bit integer arithmetic; the rational inequalities e_l >= m/d etc.
are evaluated in cross-multiplied form.
"""

from __future__ import annotations

import dataclasses

from .state import MAX_GENUS_BOUND, ConfigurationError, SemigroupState


def _check_denominator(d: int) -> None:
    if d < 3:
        raise ValueError(f"trim denominator must be >= 3, got {d}")


@dataclasses.dataclass(frozen=True)
class TrimPolicy:
    """Which cut rules run, with which denominator, against which bound.

    genus_bound is the G inside the inequalities; it may exceed the depth an
    exploration actually descends to (the retained prefix is unaffected).
    trim_ordinary_embedding controls whether the embedding-dimension rule is
    applied to ordinary nodes as well (on by default; the rule stays sound
    there because a child of an ordinary node loses at most one primitive).
    """

    genus_bound: int
    denominator: int | None = None
    left_size_rule: bool = False
    special_rule: bool = False
    trim_ordinary_embedding: bool = True

    def __post_init__(self):
        if not 1 <= self.genus_bound <= MAX_GENUS_BOUND:
            raise ConfigurationError(
                f"genus bound must be in [1, {MAX_GENUS_BOUND}], "
                f"got {self.genus_bound}")
        if self.denominator is not None:
            _check_denominator(self.denominator)

    def descriptor(self) -> str:
        """Stable textual encoding, used in reports and checkpoint files."""
        d = "none" if self.denominator is None else str(self.denominator)
        return (
            f"d={d};G={self.genus_bound};left_size={int(self.left_size_rule)};"
            f"special={int(self.special_rule)};"
            f"ordinary_embedding={int(self.trim_ordinary_embedding)}"
        )


def cut_left_primitive(s: SemigroupState, d: int) -> bool:
    """Cut when e_l >= m/d: every descendant keeps e >= e_l >= m/d and m."""
    _check_denominator(d)
    return not s.is_ordinary and d * s.left_primitive_count >= s.m


def cut_embedding(s: SemigroupState, d: int, genus_bound: int) -> bool:
    """Cut when e >= m/d + (G-g): e drops by at most 1 per generation."""
    _check_denominator(d)
    e = s.left_primitive_count + len(s.right_primitives)
    return d * e >= s.m + d * (genus_bound - s.genus)


def cut_left_size(s: SemigroupState, genus_bound: int) -> bool:
    """Cut when |L| >= G/3: every descendant then has conductor >= 4g/3."""
    return 3 * (s.conductor - s.genus) >= genus_bound


def cut_special(s: SemigroupState) -> bool:
    """Cut when s is non-special and no right primitive is -1 mod m.

    Children then inherit both properties (the new Frobenius a gives
    conductor a+1 with a not -1 mod m, and the only possible new primitive
    a+m keeps its residue), so no descendant is special.
    """
    if s.is_special:
        return False
    m = s.m
    return all((b + 1) % m != 0 for b in s.right_primitives)


def cut_special_lone(s: SemigroupState) -> bool:
    """Cut a special node that is the last special node in its subtree.

    With no right primitive -1 mod m, every child of s is non-special with
    the same property, so no proper descendant of s is special.  The node
    itself still needs its Wilf inequality verified: the explorer checks it
    at the cut boundary (without counting it), so the subtree can be
    dropped from the counted tree without losing any special node.
    """
    if not s.is_special:
        return False
    m = s.m
    return all((b + 1) % m != 0 for b in s.right_primitives)


def retain(s: SemigroupState, policy: TrimPolicy) -> bool:
    """True when no enabled cut rule fires for the node."""
    if s.genus > policy.genus_bound:
        raise ValueError(
            f"node of genus {s.genus} is beyond the policy bound "
            f"{policy.genus_bound}")
    d = policy.denominator
    if d is not None:
        if cut_left_primitive(s, d):
            return False
        if ((policy.trim_ordinary_embedding or not s.is_ordinary)
                and cut_embedding(s, d, policy.genus_bound)):
            return False
    if policy.left_size_rule and cut_left_size(s, policy.genus_bound):
        return False
    if policy.special_rule and (cut_special(s) or cut_special_lone(s)):
        return False
    return True
