import pytest

import sgforest as sg
from sgforest import _kernels
from sgforest.trim import TrimPolicy

from _tables import N_G, T3_100, T4_120SP


def walk(depth):
    """Python-level DFS over the full tree, yielding every state."""
    stack = [sg.root(depth)]
    while stack:
        s = stack.pop()
        yield s
        if s.genus < depth:
            stack.extend(sg.children(s))


def test_no_trim_counts_small():
    r = sg.explore_seq(sg.root(6), TrimPolicy(genus_bound=6), 6)
    assert r.counts == [1, 1, 2, 4, 7, 12, 23]
    assert r.violations == []
    assert r.nodes_visited == 50
    r.validate()


def test_trimmed_counts_small():
    r = sg.explore_seq(sg.root(6), TrimPolicy(genus_bound=100, denominator=3), 6)
    assert r.counts == [1, 1, 1, 1, 2, 3, 4]
    r = sg.explore_seq(
        sg.root(5),
        TrimPolicy(genus_bound=120, denominator=4, special_rule=True), 5)
    assert r.counts == [1, 1, 1, 1, 1, 2]
    assert r.violations == []


def test_no_trim_matches_reference_to_16():
    r = sg.explore_seq(sg.root(16), TrimPolicy(genus_bound=16), 16)
    assert tuple(r.counts) == N_G[:17]


def test_trimmed_match_reference_to_20():
    r = sg.explore_seq(sg.root(20), TrimPolicy(genus_bound=100, denominator=3), 20)
    assert tuple(r.counts) == T3_100[:21]
    r = sg.explore_seq(
        sg.root(20),
        TrimPolicy(genus_bound=120, denominator=4, special_rule=True), 20)
    assert tuple(r.counts) == T4_120SP[:21]


def test_depth_zero_run():
    r = sg.explore_parallel(TrimPolicy(genus_bound=1), 0)
    assert r.counts == [1]
    assert r.nodes_visited == 1


def test_explore_seq_rejects_bad_start():
    pol = TrimPolicy(genus_bound=10, denominator=3)
    cut = sg.from_gaps({1, 3}, 10)  # m=2, e_l=1: cut by d=3
    with pytest.raises(ValueError):
        sg.explore_seq(cut, pol, 10)
    with pytest.raises(ValueError):
        sg.explore_seq(sg.from_gaps({1, 2, 4}, 10), TrimPolicy(genus_bound=10), 2)


def test_split_frontier_no_trim():
    states, prefix = sg.split_frontier(TrimPolicy(genus_bound=6), 6, 4)
    assert len(states) == 7
    assert prefix.counts == [1, 1, 2, 4, 0, 0, 0]
    assert sorted(sg.gap_set(s) for s in states) == [
        (1, 2, 3, 4), (1, 2, 3, 5), (1, 2, 3, 6), (1, 2, 3, 7),
        (1, 2, 4, 5), (1, 2, 4, 7), (1, 3, 5, 7)]
    for s in states:
        sg.validate_state(s)


def test_split_frontier_trimmed():
    states, prefix = sg.split_frontier(
        TrimPolicy(genus_bound=100, denominator=3), 10, 4)
    assert [sg.gap_set(s) for s in states] == [(1, 2, 3, 4), (1, 2, 3, 5)]
    assert prefix.counts[:4] == [1, 1, 1, 1]


def test_split_frontier_at_zero():
    states, prefix = sg.split_frontier(TrimPolicy(genus_bound=5), 5, 0)
    assert len(states) == 1
    assert states[0] == sg.root(5)
    assert prefix.counts == [0] * 6


def test_split_frontier_validates_g0():
    with pytest.raises(ValueError):
        sg.split_frontier(TrimPolicy(genus_bound=5), 5, 6)


def test_frontier_order_is_dfs_deterministic():
    a, _ = sg.split_frontier(TrimPolicy(genus_bound=8), 8, 5)
    b, _ = sg.split_frontier(TrimPolicy(genus_bound=8), 8, 5)
    assert [sg.gap_set(s) for s in a] == [sg.gap_set(s) for s in b]


def test_merge_identity_and_commutativity():
    pol = TrimPolicy(genus_bound=8)
    r = sg.explore_seq(sg.root(8), pol, 8)
    zero = sg.zero_report(8, pol.descriptor())
    assert sg.merge(r, zero) == r
    r2 = sg.explore_seq(sg.root(8), pol, 8)
    assert sg.merge(r, r2) == sg.merge(r2, r)


def test_merge_rejects_mismatched_reports():
    a = sg.zero_report(8, "d=none;x")
    b = sg.zero_report(8, "d=3;x")
    with pytest.raises(ValueError):
        sg.merge(a, b)
    c = sg.zero_report(9, "d=none;x")
    with pytest.raises(ValueError):
        sg.merge(a, c)


def test_merge_checks_counter_overflow():
    a = sg.zero_report(2, "p")
    b = sg.zero_report(2, "p")
    a.counts = [2**63, 0, 0]
    b.counts = [2**63, 0, 0]
    with pytest.raises(sg.CounterOverflowError):
        sg.merge(a, b)


def test_frontier_subtree_reports_merge_to_full_run():
    pol = TrimPolicy(genus_bound=6)
    states, prefix = sg.split_frontier(pol, 6, 4)
    total = prefix
    for s in states:
        total = sg.merge(total, sg.explore_seq(s, pol, 6))
    assert total == sg.explore_seq(sg.root(6), pol, 6)
    assert total.counts[4:] == [7, 12, 23]


@pytest.mark.parametrize("workers", [1, 2, 8])
@pytest.mark.parametrize("g0", [0, 3, 7, 14])
def test_parallel_equals_sequential(workers, g0):
    pol = TrimPolicy(genus_bound=14)
    seq = sg.explore_seq(sg.root(14), pol, 14)
    par = sg.explore_parallel(pol, 14, workers=workers, frontier_genus=g0)
    assert par == seq


@pytest.mark.parametrize("workers", [1, 4])
def test_parallel_equals_sequential_trimmed(workers):
    pol = TrimPolicy(genus_bound=100, denominator=3)
    seq = sg.explore_seq(sg.root(18), pol, 18)
    par = sg.explore_parallel(pol, 18, workers=workers, frontier_genus=9)
    assert par == seq
    pol = TrimPolicy(genus_bound=120, denominator=4, special_rule=True)
    seq = sg.explore_seq(sg.root(18), pol, 18)
    par = sg.explore_parallel(pol, 18, workers=workers, frontier_genus=9)
    assert par == seq


def test_nodes_counted_exactly_once():
    depth = 8
    seen = {}
    for s in walk(depth):
        seen[sg.gap_set(s)] = seen.get(sg.gap_set(s), 0) + 1
    assert all(v == 1 for v in seen.values())
    r = sg.explore_seq(sg.root(depth), TrimPolicy(genus_bound=depth), depth)
    assert r.nodes_visited == len(seen) == sum(r.counts)
    by_genus = [0] * (depth + 1)
    for gaps in seen:
        by_genus[len(gaps)] += 1
    assert by_genus == r.counts


def test_descent_never_exceeds_depth():
    r = sg.explore_seq(sg.root(9), TrimPolicy(genus_bound=9), 9)
    assert len(r.counts) == 10
    assert max(len(sg.gap_set(s)) for s in walk(9)) == 9


def test_fibonacci_growth_informational():
    r = sg.explore_seq(sg.root(20), TrimPolicy(genus_bound=20), 20)
    for g in range(2, 21):
        assert r.counts[g] >= r.counts[g - 1] + r.counts[g - 2]


def test_worker_failure_reports_offending_gap_set(monkeypatch):
    def boom(*args, **kwargs):
        raise RuntimeError("injected fault")

    monkeypatch.setattr(_kernels, "run_chunk", boom)
    monkeypatch.setattr(_kernels, "run_subtree", boom)
    pol = TrimPolicy(genus_bound=6)
    with pytest.raises(sg.WorkerError) as info:
        sg.explore_parallel(pol, 6, workers=2, frontier_genus=3)
    # canonical DFS order puts the ordinary chain first
    assert info.value.gap_set == (1, 2, 3)
    assert isinstance(info.value.cause, RuntimeError)


def test_report_validate_catches_corruption():
    r = sg.explore_seq(sg.root(5), TrimPolicy(genus_bound=5), 5)
    r.nodes_visited += 1
    with pytest.raises(AssertionError):
        r.validate()


def test_kernel_task_counts_match_python_walk():
    # the frontier subtree attached to the first genus-3 node, counted both ways
    pol = TrimPolicy(genus_bound=9)
    states, _ = sg.split_frontier(pol, 9, 3)
    s = states[0]
    rep = sg.explore_seq(s, pol, 9)
    by_genus = [0] * 10
    stack = [s]
    while stack:
        t = stack.pop()
        by_genus[t.genus] += 1
        if t.genus < 9:
            stack.extend(sg.children(t))
    assert rep.counts == by_genus
