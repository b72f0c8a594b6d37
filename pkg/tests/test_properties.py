import numpy as np
from hypothesis import given, settings, strategies as st

import sgforest as sg
from sgforest import _kernels
from sgforest.trim import TrimPolicy

BOUND = 14


def random_descent(data, max_steps=12):
    """Walk down the tree by deleting drawn right primitives; yield each edge."""
    s = sg.root(BOUND)
    steps = data.draw(st.integers(0, max_steps), label="steps")
    for _ in range(steps):
        if not s.right_primitives:
            break
        idx = data.draw(
            st.integers(0, len(s.right_primitives) - 1), label="child")
        a = s.right_primitives[idx]
        child = sg.child(s, a)
        yield s, a, child
        s = child


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_child_step_relations(data):
    for parent, a, child in random_descent(data):
        assert child.frobenius == a
        assert child.genus == parent.genus + 1
        e_parent = parent.left_primitive_count + len(parent.right_primitives)
        e_child = child.left_primitive_count + len(child.right_primitives)
        if not parent.is_ordinary:
            assert child.m == parent.m
            assert child.left_primitive_count >= parent.left_primitive_count
            assert e_parent - 1 <= e_child <= e_parent
            p_parent = set(sg.primitives_by_sieve(parent.membership))
            p_child = set(sg.primitives_by_sieve(child.membership))
            assert p_child in (
                p_parent - {a}, (p_parent - {a}) | {a + parent.m})


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_states_survive_full_validation(data):
    for _, _, child in random_descent(data):
        sg.validate_state(child)
        assert sg.invariants(child).wilf >= 0


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_euclid_split_law(data):
    for _, _, s in random_descent(data):
        q, rho, special = sg.euclid_split(s)
        assert s.conductor == q * s.m - rho
        assert 0 <= rho < s.m
        assert special == (s.conductor % s.m == 0)


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_gap_set_round_trip(data):
    for _, _, s in random_descent(data):
        gaps = sg.gap_set(s)
        assert sg.from_gaps(gaps, BOUND) == s
        assert sg.parse_gap_set(sg.format_gap_set(gaps)) == gaps


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_kernel_retained_matches_python_retain(data):
    d = data.draw(st.sampled_from([None, 3, 4, 5, 6]), label="d")
    policy = TrimPolicy(
        genus_bound=BOUND,
        denominator=d,
        left_size_rule=data.draw(st.booleans(), label="lsr"),
        special_rule=data.draw(st.booleans(), label="spr"),
        trim_ordinary_embedding=data.draw(st.booleans(), label="toe"),
    )
    for _, _, s in random_descent(data):
        rp = np.asarray(s.right_primitives, dtype=np.int32)
        code = _kernels.retained(
            s.m, s.frobenius, s.genus, s.left_primitive_count, len(rp), rp,
            0 if d is None else d, policy.genus_bound, policy.left_size_rule,
            policy.special_rule, policy.trim_ordinary_embedding)
        assert (code == _kernels.RETAIN_KEEP) == sg.retain(s, policy)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_right_primitive_window(data):
    for _, _, s in random_descent(data):
        lo = max(s.conductor, s.m)
        hi = max(s.conductor + s.m - 1, s.m)
        assert all(lo <= p <= hi for p in s.right_primitives)
        # sorted, duplicate-free
        assert list(s.right_primitives) == sorted(set(s.right_primitives))
