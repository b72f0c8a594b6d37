"""Bounded depth-first exploration with trimming, counting and Wilf checks.

The tree is explored with an explicit stack; every frame owns a full copy of
its membership bitmap (about 3*depth bits), so states never share mutable
data.  Multi-worker runs split the tree at a frontier genus g0: every
retained node of genus g0 becomes an independent subtree task, contiguous
chunks of tasks are consumed from a shared queue by worker threads into
private reports, and reports are merged.  The kernels release the GIL when
numba is active, so threads scale; with the pure-Python kernels the same
code path stays correct, only slower.

Reports are deterministic: counts are exact sums and the violation list is
sorted canonically, so any (workers, g0) choice reproduces the sequential
run bit for bit.
"""

from __future__ import annotations

import dataclasses
import os
import queue
import threading
import time

import numpy as np

from . import _kernels
from .state import (
    SemigroupState,
    format_gap_set,
    from_gaps,
    gap_set,
    parse_gap_set,
    root,
)
from .trim import TrimPolicy, retain

U64_LIMIT = 1 << 64
U64MAX_HEADROOM = np.uint64(U64_LIMIT - 1)
CHECKPOINT_MAGIC = "sgforest-checkpoint v1"
VIOLATION_CAPACITY = 1024
DEFAULT_FRONTIER_GENUS = 22
_CHUNKS_PER_WORKER = 64


class CounterOverflowError(OverflowError):
    """A 64-bit per-genus counter would wrap."""


class WorkerError(RuntimeError):
    """A worker task failed; carries the gap set of the offending subtree root."""

    def __init__(self, gaps, cause):
        super().__init__(
            f"worker failed on subtree '{format_gap_set(gaps)}': {cause!r}")
        self.gap_set = tuple(gaps)
        self.cause = cause


class CheckpointError(ValueError):
    """Unreadable or mismatched checkpoint file."""


@dataclasses.dataclass
class ExplorationReport:
    """Per-genus counters plus Wilf violations for one exploration.

    genus_bound is the maximum explored genus (the run depth); counts has
    one entry per genus 0..genus_bound.  Violations are gap sets, sorted.
    """

    genus_bound: int
    policy_descriptor: str
    counts: list[int]
    violations: list[tuple[int, ...]]
    nodes_visited: int

    def validate(self) -> None:
        assert len(self.counts) == self.genus_bound + 1
        assert self.nodes_visited == sum(self.counts)
        assert all(0 <= c < U64_LIMIT for c in self.counts)
        assert self.violations == sorted(self.violations)


def zero_report(depth: int, policy_descriptor: str) -> ExplorationReport:
    return ExplorationReport(depth, policy_descriptor, [0] * (depth + 1), [], 0)


def merge(r1: ExplorationReport, r2: ExplorationReport) -> ExplorationReport:
    """Pointwise-summed counts, concatenated (re-sorted) violations."""
    if (r1.genus_bound != r2.genus_bound
            or r1.policy_descriptor != r2.policy_descriptor):
        raise ValueError(
            f"cannot merge reports for different runs: "
            f"({r1.genus_bound}, {r1.policy_descriptor!r}) vs "
            f"({r2.genus_bound}, {r2.policy_descriptor!r})")
    counts = [a + b for a, b in zip(r1.counts, r2.counts)]
    if any(c >= U64_LIMIT for c in counts):
        raise CounterOverflowError("per-genus counter exceeds 64 bits")
    return ExplorationReport(
        genus_bound=r1.genus_bound,
        policy_descriptor=r1.policy_descriptor,
        counts=counts,
        violations=sorted(r1.violations + r2.violations),
        nodes_visited=sum(counts),
    )


class _Workspace:
    """Preallocated frame stacks for one worker; reused across tasks."""

    def __init__(self, depth):
        levels = depth + 2
        width = 3 * depth + 2
        self.depth = depth
        self.width = width
        self.memb = np.ones((levels, width), dtype=np.uint8)
        self.ms = np.zeros(levels, dtype=np.int64)
        self.Fs = np.zeros(levels, dtype=np.int64)
        self.gs = np.zeros(levels, dtype=np.int64)
        self.els = np.zeros(levels, dtype=np.int64)
        self.rpns = np.zeros(levels, dtype=np.int64)
        self.idxs = np.zeros(levels, dtype=np.int64)
        self.rps = np.zeros((levels, depth + 3), dtype=np.int32)
        self.counts = np.zeros(depth + 1, dtype=np.uint64)
        self.viol = np.zeros((VIOLATION_CAPACITY, width), dtype=np.uint8)

    def load(self, s: SemigroupState) -> None:
        w = min(self.width, len(s.membership))
        self.memb[0, :w] = s.membership[:w]
        self.memb[0, w:] = 1  # anything past the source bound is a member
        self.ms[0] = s.m
        self.Fs[0] = s.frobenius
        self.gs[0] = s.genus
        self.els[0] = s.left_primitive_count
        n = len(s.right_primitives)
        self.rps[0, :n] = s.right_primitives
        self.rpns[0] = n


class _Frontier:
    """Subtree roots packed as flat arrays, shared read-only by workers."""

    def __init__(self, depth, size):
        width = 3 * depth + 2
        self.memb = np.ones((size, width), dtype=np.uint8)
        self.ms = np.zeros(size, dtype=np.int64)
        self.Fs = np.zeros(size, dtype=np.int64)
        self.gs = np.zeros(size, dtype=np.int64)
        self.els = np.zeros(size, dtype=np.int64)
        self.rps = np.zeros((size, depth + 3), dtype=np.int32)
        self.rpns = np.zeros(size, dtype=np.int64)

    def __len__(self):
        return len(self.ms)

    def put(self, i, s: SemigroupState):
        w = min(self.memb.shape[1], len(s.membership))
        self.memb[i, :w] = s.membership[:w]
        self.memb[i, w:] = 1
        self.ms[i] = s.m
        self.Fs[i] = s.frobenius
        self.gs[i] = s.genus
        self.els[i] = s.left_primitive_count
        n = len(s.right_primitives)
        self.rps[i, :n] = s.right_primitives
        self.rpns[i] = n

    def state(self, i) -> SemigroupState:
        memb = self.memb[i].copy()
        memb.setflags(write=False)
        return SemigroupState(
            membership=memb,
            m=int(self.ms[i]),
            frobenius=int(self.Fs[i]),
            genus=int(self.gs[i]),
            left_primitive_count=int(self.els[i]),
            right_primitives=tuple(int(x) for x in self.rps[i, :self.rpns[i]]),
        )

    def gaps(self, i) -> tuple[int, ...]:
        return tuple(int(x) for x in np.flatnonzero(self.memb[i] == 0))


def _frontier_from_states(states, depth) -> _Frontier:
    fr = _Frontier(depth, len(states))
    for i, s in enumerate(states):
        fr.put(i, s)
    return fr


def _policy_args(policy: TrimPolicy):
    d = 0 if policy.denominator is None else policy.denominator
    return (d, policy.genus_bound, policy.left_size_rule,
            policy.special_rule, policy.trim_ordinary_embedding)


def _extract_violations(ws: _Workspace, violn: int) -> list[tuple[int, ...]]:
    if violn > VIOLATION_CAPACITY:
        raise RuntimeError(
            f"more than {VIOLATION_CAPACITY} Wilf violations in one task; "
            f"raise VIOLATION_CAPACITY to record them all")
    return [tuple(int(x) for x in np.flatnonzero(ws.viol[i] == 0))
            for i in range(violn)]


def _run_task(s: SemigroupState, policy: TrimPolicy, depth: int,
              ws: _Workspace):
    """Count the retained subtree of s; returns (counts copy, violations)."""
    ws.counts[:] = 0
    ws.load(s)
    status, violn = _kernels.run_subtree(
        ws.memb, ws.ms, ws.Fs, ws.gs, ws.els, ws.rps, ws.rpns, ws.idxs,
        depth, *_policy_args(policy), ws.counts, ws.viol)
    if status == _kernels.STATUS_COUNTER_OVERFLOW:
        raise CounterOverflowError("per-genus counter exceeds 64 bits")
    return ws.counts.copy(), _extract_violations(ws, violn)


def explore_seq(start: SemigroupState, policy: TrimPolicy,
                depth: int) -> ExplorationReport:
    """Sequential DFS over the retained subtree of start, down to genus depth."""
    if start.genus > depth:
        raise ValueError(f"start genus {start.genus} exceeds depth {depth}")
    if not retain(start, policy):
        raise ValueError("start node is cut by the policy")
    ws = _Workspace(depth)
    counts, violations = _run_task(start, policy, depth, ws)
    return ExplorationReport(
        genus_bound=depth,
        policy_descriptor=policy.descriptor(),
        counts=[int(c) for c in counts],
        violations=sorted(violations),
        nodes_visited=int(counts.sum(dtype=np.uint64)),
    )


def _split_frontier_raw(policy: TrimPolicy, depth: int, g0: int):
    if not 0 <= g0 <= depth:
        raise ValueError(f"frontier genus {g0} not in [0, {depth}]")
    start = root(max(depth, 1))  # depth-0 runs still start from the naturals
    prefix = zero_report(depth, policy.descriptor())
    if g0 == 0:
        return _frontier_from_states([start], depth), prefix
    ws = _Workspace(depth)
    cap = 4096
    while True:
        fr = _Frontier(depth, cap)
        ws.counts[:] = 0
        ws.load(start)
        status, violn, fn = _kernels.build_frontier(
            ws.memb, ws.ms, ws.Fs, ws.gs, ws.els, ws.rps, ws.rpns, ws.idxs,
            g0, *_policy_args(policy), ws.counts, ws.viol,
            fr.memb, fr.ms, fr.Fs, fr.gs, fr.els, fr.rps, fr.rpns)
        if status == _kernels.STATUS_FRONTIER_OVERFLOW:
            cap *= 4
            continue
        if status == _kernels.STATUS_COUNTER_OVERFLOW:
            raise CounterOverflowError("per-genus counter exceeds 64 bits")
        break
    fr.memb = fr.memb[:fn]
    fr.ms = fr.ms[:fn]
    fr.Fs = fr.Fs[:fn]
    fr.gs = fr.gs[:fn]
    fr.els = fr.els[:fn]
    fr.rps = fr.rps[:fn]
    fr.rpns = fr.rpns[:fn]
    prefix.counts = [int(c) for c in ws.counts]
    prefix.violations = sorted(_extract_violations(ws, violn))
    prefix.nodes_visited = sum(prefix.counts)
    return fr, prefix


def split_frontier(policy: TrimPolicy, depth: int, g0: int):
    """Retained nodes of genus exactly g0, in DFS order, plus the prefix report.

    The prefix report counts (and Wilf-checks) the retained nodes of genus
    < g0; frontier nodes themselves are left to their subtree tasks.
    """
    fr, prefix = _split_frontier_raw(policy, depth, g0)
    return [fr.state(i) for i in range(len(fr))], prefix


def _worker(task_q, result_q, fr: _Frontier, policy, depth):
    ws = _Workspace(depth)
    pargs = _policy_args(policy)
    while True:
        item = task_q.get()
        if item is None:
            return
        cid, i0, i1 = item
        ws.counts[:] = 0
        try:
            status, violn = _kernels.run_chunk(
                fr.memb, fr.ms, fr.Fs, fr.gs, fr.els, fr.rps, fr.rpns, i0, i1,
                ws.memb, ws.ms, ws.Fs, ws.gs, ws.els, ws.rps, ws.rpns, ws.idxs,
                depth, *pargs, ws.counts, ws.viol)
            if status == _kernels.STATUS_COUNTER_OVERFLOW:
                raise CounterOverflowError("per-genus counter exceeds 64 bits")
            violations = _extract_violations(ws, violn)
        except Exception as exc:  # surfaced as WorkerError by the owner
            result_q.put((cid, None, exc))
            continue
        result_q.put((cid, ws.counts.copy(), violations))


def _isolate_failure(fr: _Frontier, i0, i1, policy, depth, fallback):
    """Rerun a failed chunk task by task to name the offending subtree."""
    ws = _Workspace(depth)
    for i in range(i0, i1):
        try:
            _run_task(fr.state(i), policy, depth, ws)
        except Exception as exc:
            return WorkerError(fr.gaps(i), exc)
    return WorkerError(fr.gaps(i0), fallback)


def explore_parallel(policy: TrimPolicy, depth: int, workers: int = 1,
                     frontier_genus: int | None = None,
                     checkpoint_path: str | None = None,
                     checkpoint_interval: float = 60.0,
                     resume_path: str | None = None) -> ExplorationReport:
    """Frontier-split exploration on a shared task queue.

    Produces exactly the explore_seq(root, policy, depth) report for any
    worker count and any frontier genus.  With checkpoint_path set, progress
    is written atomically every checkpoint_interval seconds; with
    resume_path set, completed work recorded in that checkpoint is skipped.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    descriptor = policy.descriptor()
    if frontier_genus is None:
        frontier_genus = min(depth, DEFAULT_FRONTIER_GENUS)

    if resume_path is not None:
        cp = load_checkpoint(resume_path)
        if cp.policy_descriptor != descriptor:
            raise CheckpointError(
                f"checkpoint policy {cp.policy_descriptor!r} does not match "
                f"the requested {descriptor!r}")
        if cp.partial.genus_bound != depth:
            raise CheckpointError(
                f"checkpoint depth {cp.partial.genus_bound} does not match "
                f"the requested {depth}")
        base = cp.partial
        fr = _frontier_from_states(
            [from_gaps(g, max(depth, 1)) for g in cp.pending], depth)
    else:
        fr, base = _split_frontier_raw(policy, depth, frontier_genus)

    acc = np.array(base.counts, dtype=np.uint64)
    violations = list(base.violations)

    ntasks = len(fr)
    chunk = max(1, -(-ntasks // (workers * _CHUNKS_PER_WORKER)))
    chunks = [(cid, lo, min(lo + chunk, ntasks))
              for cid, lo in enumerate(range(0, ntasks, chunk))]

    task_q = queue.SimpleQueue()
    result_q = queue.SimpleQueue()
    for item in chunks:
        task_q.put(item)
    nworkers = max(1, min(workers, len(chunks)))
    threads = [
        threading.Thread(target=_worker,
                         args=(task_q, result_q, fr, policy, depth),
                         daemon=True)
        for _ in range(nworkers)
    ]
    for t in threads:
        task_q.put(None)
        t.start()

    done = set()
    failure = None
    next_checkpoint = time.monotonic() + checkpoint_interval
    while len(done) < len(chunks):
        cid, counts, payload = result_q.get()
        done.add(cid)
        if counts is None:
            if failure is None:
                _, i0, i1 = chunks[cid]
                failure = _isolate_failure(fr, i0, i1, policy, depth, payload)
            continue
        if np.any(acc > U64MAX_HEADROOM - counts):
            failure = failure or CounterOverflowError(
                "per-genus counter exceeds 64 bits")
            continue
        acc += counts
        violations.extend(payload)
        if (checkpoint_path is not None and failure is None and not violations
                and time.monotonic() >= next_checkpoint):
            _write_checkpoint_snapshot(
                checkpoint_path, descriptor, acc, fr, chunks, done)
            next_checkpoint = time.monotonic() + checkpoint_interval
    for t in threads:
        t.join()
    if failure is not None:
        raise failure

    counts = [int(c) for c in acc]
    return ExplorationReport(
        genus_bound=depth,
        policy_descriptor=descriptor,
        counts=counts,
        violations=sorted(violations),
        nodes_visited=sum(counts),
    )


@dataclasses.dataclass
class Checkpoint:
    """Snapshot of a partially completed run: what is done, what remains."""

    policy_descriptor: str
    pending: list[tuple[int, ...]]
    partial: ExplorationReport


def _write_checkpoint_snapshot(path, descriptor, acc, fr, chunks, done):
    partial = ExplorationReport(
        genus_bound=len(acc) - 1,
        policy_descriptor=descriptor,
        counts=[int(c) for c in acc],
        violations=[],
        nodes_visited=int(acc.sum(dtype=np.uint64)),
    )
    pending = [fr.gaps(i)
               for cid, i0, i1 in chunks if cid not in done
               for i in range(i0, i1)]
    save_checkpoint(path, pending, partial)


def save_checkpoint(path, pending, partial: ExplorationReport) -> None:
    """Atomically write a line-oriented checkpoint (UTF-8, LF endings)."""
    if partial.violations:
        raise CheckpointError(
            "the checkpoint format cannot carry Wilf violations; "
            "rerun the affected subtrees instead")
    lines = [
        CHECKPOINT_MAGIC,
        partial.policy_descriptor,
        ",".join(str(c) for c in partial.counts),
        str(partial.nodes_visited),
    ]
    lines.extend(format_gap_set(g) for g in pending)
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def load_checkpoint(path) -> Checkpoint:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 4:
        raise CheckpointError(f"{path}: truncated checkpoint ({len(lines)} lines)")
    if lines[0] != CHECKPOINT_MAGIC:
        raise CheckpointError(f"{path}: line 1: expected {CHECKPOINT_MAGIC!r}")
    descriptor = lines[1]
    try:
        counts = [int(part) for part in lines[2].split(",")]
    except ValueError as exc:
        raise CheckpointError(f"{path}: line 3: malformed counts") from exc
    try:
        nodes = int(lines[3])
    except ValueError as exc:
        raise CheckpointError(f"{path}: line 4: malformed node total") from exc
    if nodes != sum(counts):
        raise CheckpointError(
            f"{path}: line 4: node total {nodes} does not match counts")
    pending = []
    for i, line in enumerate(lines[4:], start=5):
        try:
            pending.append(parse_gap_set(line))
        except ValueError as exc:
            raise CheckpointError(f"{path}: line {i}: {exc}") from exc
    partial = ExplorationReport(
        genus_bound=len(counts) - 1,
        policy_descriptor=descriptor,
        counts=counts,
        violations=[],
        nodes_visited=nodes,
    )
    return Checkpoint(descriptor, pending, partial)
