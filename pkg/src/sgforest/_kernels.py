"""Hot enumeration loops, shared by the jitted and the pure-Python paths.

Every kernel operates on preallocated numpy arrays ("workspace") so that the
depth-first search never allocates.  A search frame at recursion level
``lvl`` consists of one row of ``memb`` (the membership bitmap), one row of
``rps`` (the right primitives, sorted), and the scalar stacks ``ms``/``Fs``/
``gs``/``els``/``rpns``/``idxs``.

The DFS drivers first run the O(1) cut checks that need no child
construction (left-primitive, left-size) and only then build the child's
primitive list; the full ``retained`` predicate remains the single source
of truth and is re-evaluated on every constructed child.

The ``*_py`` names are the uncompiled sources; the public names are the
jitted versions (identical objects when numba is disabled, see _numba.py).
All arithmetic is integer-only; counters are uint64 with explicit overflow
checks.
"""

import numpy as np

from ._numba import USING_NUMBA, njit

U64MAX = np.uint64(0xFFFFFFFFFFFFFFFF)

STATUS_OK = 0
STATUS_COUNTER_OVERFLOW = 1
STATUS_VIOLATION_OVERFLOW = 2
STATUS_FRONTIER_OVERFLOW = 3


def _child_update_py(pmemb, pm, pel, prp, prpn, idx, crp):
    """Incremental invariants of the child obtained by deleting prp[idx].

    Fills crp with the child's right primitives and returns
    (multiplicity, left primitive count, right primitive count).
    Membership is NOT copied here; callers that descend do that themselves.
    """
    a = prp[idx]
    if a == pm:
        # removing the multiplicity of {0, m, m+1, ...} yields {0, m+1, m+2, ...}
        m2 = pm + 1
        for i in range(m2):
            crp[i] = m2 + i
        return m2, 0, m2
    n = 0
    for j in range(idx + 1, prpn):
        crp[n] = prp[j]
        n += 1
    # a+m is primitive in the child iff it has no two-part sum left; the
    # summand a itself only occurs in the pair (m, a), excluded by s >= m+1.
    x = a + pm
    half = x // 2
    prim = True
    for s in range(pm + 1, half + 1):
        if pmemb[s] != 0 and pmemb[x - s] != 0:
            prim = False
            break
    if prim:
        crp[n] = x
        n += 1
    return pm, pel + idx, n


RETAIN_CUT = 0
RETAIN_KEEP = 1
RETAIN_CUT_AFTER_CHECK = 2


def _retained_py(m, F, g, el, er, rp, d, gbound, left_size, special, trim_ord):
    """Cut decision for one node (all-integer tests).

    RETAIN_KEEP: node stays in the counted tree.  RETAIN_CUT: node and its
    subtree are dropped, nothing left to verify there.  RETAIN_CUT_AFTER_CHECK:
    the node is the last special node in its subtree; the caller must verify
    its Wilf inequality at the boundary, then the subtree is dropped.
    """
    c = F + 1
    ordinary = F < m
    if d > 0:
        if not ordinary and d * el >= m:
            return RETAIN_CUT
        if (trim_ord or not ordinary) and d * (el + er) >= m + d * (gbound - g):
            return RETAIN_CUT
    if left_size and 3 * (c - g) >= gbound:
        return RETAIN_CUT
    if special:
        found = False
        for i in range(er):
            if (rp[i] + 1) % m == 0:
                found = True
                break
        if not found:
            # no special node strictly below; the node itself matters only
            # if it is special, and then one boundary check settles it
            if c % m == 0:
                return RETAIN_CUT_AFTER_CHECK
            return RETAIN_CUT
    return RETAIN_KEEP


def _make_run_subtree(child_update, retained):
    def run_subtree(memb, ms, Fs, gs, els, rps, rpns, idxs, depth,
                    d, gbound, left_size, special, trim_ord,
                    counts, viol):
        """DFS below the preloaded frame 0, counting every retained node.

        Frame 0 itself is counted unconditionally (callers only start from
        retained nodes).  Nodes of genus == depth are counted but not
        expanded.  Wilf failures are recorded as membership rows in viol.
        Returns (status, violation_count).
        """
        violcap = viol.shape[0]
        violn = 0
        g = gs[0]
        if counts[g] == U64MAX:
            return STATUS_COUNTER_OVERFLOW, violn
        counts[g] += np.uint64(1)
        c = Fs[0] + 1
        if (els[0] + rpns[0]) * (c - g) - c < 0:
            if violn < violcap:
                viol[violn, :] = memb[0, :]
            violn += 1
        lvl = 0
        idxs[0] = 0
        while lvl >= 0:
            if gs[lvl] >= depth or idxs[lvl] >= rpns[lvl]:
                lvl -= 1
                continue
            i = idxs[lvl]
            idxs[lvl] += 1
            a = rps[lvl, i]
            pm = ms[lvl]
            cg = gs[lvl] + 1
            # construction-free cuts: a != pm means the child is not ordinary,
            # keeps multiplicity pm, and has left primitive count els+i
            if d > 0 and a != pm and d * (els[lvl] + i) >= pm:
                continue
            if left_size and 3 * (a + 1 - cg) >= gbound:
                continue
            nl = lvl + 1
            cm, cel, crpn = child_update(
                memb[lvl], pm, els[lvl], rps[lvl], rpns[lvl], i, rps[nl])
            code = retained(cm, a, cg, cel, crpn, rps[nl],
                            d, gbound, left_size, special, trim_ord)
            if code != RETAIN_KEEP:
                if code == RETAIN_CUT_AFTER_CHECK:
                    # lone special node at a cut boundary: verify, don't count
                    c = a + 1
                    if (cel + crpn) * (c - cg) - c < 0:
                        if violn < violcap:
                            viol[violn, :] = memb[lvl, :]
                            viol[violn, a] = 0
                        violn += 1
                continue
            if counts[cg] == U64MAX:
                return STATUS_COUNTER_OVERFLOW, violn
            counts[cg] += np.uint64(1)
            c = a + 1
            if (cel + crpn) * (c - cg) - c < 0:
                if violn < violcap:
                    viol[violn, :] = memb[lvl, :]
                    viol[violn, a] = 0
                violn += 1
            if cg < depth:
                ms[nl] = cm
                Fs[nl] = a
                gs[nl] = cg
                els[nl] = cel
                rpns[nl] = crpn
                memb[nl, :] = memb[lvl, :]
                memb[nl, a] = 0
                idxs[nl] = 0
                lvl = nl
        if violn > violcap:
            return STATUS_VIOLATION_OVERFLOW, violn
        return STATUS_OK, violn

    return run_subtree


def _make_run_chunk(run_subtree):
    def run_chunk(fmemb, fms, fFs, fgs, fels, frps, frpns, i0, i1,
                  memb, ms, Fs, gs, els, rps, rpns, idxs, depth,
                  d, gbound, left_size, special, trim_ord,
                  counts, viol):
        """Run run_subtree for each frontier row in [i0, i1).

        Counts accumulate across the chunk; violations append to viol.
        Returns (status, violation_count).
        """
        violn = 0
        for t in range(i0, i1):
            memb[0, :] = fmemb[t, :]
            ms[0] = fms[t]
            Fs[0] = fFs[t]
            gs[0] = fgs[t]
            els[0] = fels[t]
            n = frpns[t]
            for j in range(n):
                rps[0, j] = frps[t, j]
            rpns[0] = n
            status, nviol = run_subtree(
                memb, ms, Fs, gs, els, rps, rpns, idxs, depth,
                d, gbound, left_size, special, trim_ord,
                counts, viol[violn:])
            violn += nviol
            if status != STATUS_OK:
                return status, violn
        return STATUS_OK, violn

    return run_chunk


def _make_build_frontier(child_update, retained):
    def build_frontier(memb, ms, Fs, gs, els, rps, rpns, idxs, g0,
                       d, gbound, left_size, special, trim_ord,
                       counts, viol,
                       fmemb, fms, fFs, fgs, fels, frps, frpns):
        """DFS counting retained nodes of genus < g0 and collecting the
        retained nodes of genus exactly g0 (in DFS order) into the f* buffers.

        Frame 0 must have genus < g0.  Frontier nodes are collected, not
        counted.  Returns (status, violation_count, frontier_count).
        """
        violcap = viol.shape[0]
        fcap = fms.shape[0]
        violn = 0
        fn = 0
        g = gs[0]
        if counts[g] == U64MAX:
            return STATUS_COUNTER_OVERFLOW, violn, fn
        counts[g] += np.uint64(1)
        c = Fs[0] + 1
        if (els[0] + rpns[0]) * (c - g) - c < 0:
            if violn < violcap:
                viol[violn, :] = memb[0, :]
            violn += 1
        lvl = 0
        idxs[0] = 0
        while lvl >= 0:
            if idxs[lvl] >= rpns[lvl]:
                lvl -= 1
                continue
            i = idxs[lvl]
            idxs[lvl] += 1
            a = rps[lvl, i]
            pm = ms[lvl]
            cg = gs[lvl] + 1
            if d > 0 and a != pm and d * (els[lvl] + i) >= pm:
                continue
            if left_size and 3 * (a + 1 - cg) >= gbound:
                continue
            nl = lvl + 1
            cm, cel, crpn = child_update(
                memb[lvl], pm, els[lvl], rps[lvl], rpns[lvl], i, rps[nl])
            code = retained(cm, a, cg, cel, crpn, rps[nl],
                            d, gbound, left_size, special, trim_ord)
            if code != RETAIN_KEEP:
                if code == RETAIN_CUT_AFTER_CHECK:
                    c = a + 1
                    if (cel + crpn) * (c - cg) - c < 0:
                        if violn < violcap:
                            viol[violn, :] = memb[lvl, :]
                            viol[violn, a] = 0
                        violn += 1
                continue
            if cg == g0:
                if fn >= fcap:
                    return STATUS_FRONTIER_OVERFLOW, violn, fn
                fmemb[fn, :] = memb[lvl, :]
                fmemb[fn, a] = 0
                fms[fn] = cm
                fFs[fn] = a
                fgs[fn] = cg
                fels[fn] = cel
                for j in range(crpn):
                    frps[fn, j] = rps[nl, j]
                frpns[fn] = crpn
                fn += 1
                continue
            if counts[cg] == U64MAX:
                return STATUS_COUNTER_OVERFLOW, violn, fn
            counts[cg] += np.uint64(1)
            c = a + 1
            if (cel + crpn) * (c - cg) - c < 0:
                if violn < violcap:
                    viol[violn, :] = memb[lvl, :]
                    viol[violn, a] = 0
                violn += 1
            ms[nl] = cm
            Fs[nl] = a
            gs[nl] = cg
            els[nl] = cel
            rpns[nl] = crpn
            memb[nl, :] = memb[lvl, :]
            memb[nl, a] = 0
            idxs[nl] = 0
            lvl = nl
        if violn > violcap:
            return STATUS_VIOLATION_OVERFLOW, violn, fn
        return STATUS_OK, violn, fn

    return build_frontier


child_update = njit(cache=True, nogil=True)(_child_update_py)
retained = njit(cache=True, nogil=True)(_retained_py)
# the closure over the jitted helpers rules out on-disk caching for the DFS
# drivers; they compile once per process (see warmup)
run_subtree = njit(nogil=True)(_make_run_subtree(child_update, retained))
run_chunk = njit(nogil=True)(_make_run_chunk(run_subtree))
build_frontier = njit(nogil=True)(_make_build_frontier(child_update, retained))

# uncompiled twins, kept for benchmarking the two paths against each other
child_update_py = _child_update_py
retained_py = _retained_py
run_subtree_py = _make_run_subtree(_child_update_py, _retained_py)
run_chunk_py = _make_run_chunk(run_subtree_py)
build_frontier_py = _make_build_frontier(_child_update_py, _retained_py)


def warmup():
    """Trigger JIT compilation on a tiny run so timed runs exclude it."""
    if not USING_NUMBA:
        return
    from . import explore, state, trim

    policy = trim.TrimPolicy(genus_bound=4, denominator=3)
    explore.explore_seq(state.root(4), policy, 4)
    explore.explore_parallel(trim.TrimPolicy(genus_bound=4), 4,
                             workers=1, frontier_genus=2)
