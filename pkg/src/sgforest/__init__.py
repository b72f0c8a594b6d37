"""Genus-bounded enumeration of the numerical semigroup tree.

The tree is rooted at the naturals; each child deletes one right primitive
from its parent, so all semigroups of genus g sit at depth g.  The package
maintains every invariant incrementally, supports sound subtree trimming,
checks the Wilf inequality e*|L| >= c on every retained node, and reproduces
the known per-genus count tables.
"""

from ._numba import USING_NUMBA
from .explore import (
    Checkpoint,
    CheckpointError,
    CounterOverflowError,
    ExplorationReport,
    WorkerError,
    explore_parallel,
    explore_seq,
    load_checkpoint,
    merge,
    save_checkpoint,
    split_frontier,
    zero_report,
)
from .state import (
    ConfigurationError,
    InvariantRecord,
    OutOfBoundError,
    SemigroupState,
    ValidationError,
    child,
    children,
    euclid_split,
    format_gap_set,
    from_gaps,
    gap_set,
    invariants,
    parse_gap_set,
    primitives_by_sieve,
    root,
    validate_state,
)
from .trim import (
    TrimPolicy,
    cut_embedding,
    cut_left_primitive,
    cut_left_size,
    cut_special,
    retain,
)

__version__ = "0.1.0"

__all__ = [
    "Checkpoint",
    "CheckpointError",
    "ConfigurationError",
    "CounterOverflowError",
    "ExplorationReport",
    "InvariantRecord",
    "OutOfBoundError",
    "SemigroupState",
    "TrimPolicy",
    "USING_NUMBA",
    "ValidationError",
    "WorkerError",
    "child",
    "children",
    "cut_embedding",
    "cut_left_primitive",
    "cut_left_size",
    "cut_special",
    "euclid_split",
    "explore_parallel",
    "explore_seq",
    "format_gap_set",
    "from_gaps",
    "gap_set",
    "invariants",
    "load_checkpoint",
    "merge",
    "parse_gap_set",
    "primitives_by_sieve",
    "retain",
    "root",
    "save_checkpoint",
    "split_frontier",
    "validate_state",
    "zero_report",
]
