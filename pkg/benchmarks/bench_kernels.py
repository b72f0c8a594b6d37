"""Benchmark the jitted enumeration kernels against their pure-Python twins.

Runs the same depth-first workloads through sgforest._kernels.run_subtree
(numba) and run_subtree_py (uncompiled source) and prints nodes/second for
both paths.  With SGFOREST_NO_NUMBA=1 the two rows coincide.

Usage: python benchmarks/bench_kernels.py [--depth 18] [--skip-pure]
"""

import argparse
import time

from sgforest import USING_NUMBA, _kernels, root
from sgforest.explore import _policy_args, _Workspace
from sgforest.trim import TrimPolicy


def run_once(kernel, depth, policy):
    ws = _Workspace(depth)
    ws.counts[:] = 0
    ws.load(root(max(depth, 1)))
    t0 = time.perf_counter()
    status, violn = kernel(
        ws.memb, ws.ms, ws.Fs, ws.gs, ws.els, ws.rps, ws.rpns, ws.idxs,
        depth, *_policy_args(policy), ws.counts, ws.viol)
    elapsed = time.perf_counter() - t0
    assert status == _kernels.STATUS_OK and violn == 0
    return int(ws.counts.sum()), elapsed


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--depth", type=int, default=18,
                        help="exploration depth for the untrimmed workload")
    parser.add_argument("--skip-pure", action="store_true",
                        help="only time the jitted path")
    args = parser.parse_args()

    workloads = [
        ("full tree", TrimPolicy(genus_bound=args.depth), args.depth),
        ("d=3 trimmed", TrimPolicy(genus_bound=100, denominator=3),
         args.depth + 8),
        ("d=4 + special", TrimPolicy(genus_bound=120, denominator=4,
                                     special_rule=True), args.depth + 10),
    ]

    print(f"numba active: {USING_NUMBA}")
    if USING_NUMBA:
        _kernels.warmup()

    print(f"{'workload':<16} {'path':<7} {'nodes':>10} {'seconds':>9} "
          f"{'nodes/s':>12}")
    for name, policy, depth in workloads:
        rows = [("jit", _kernels.run_subtree)]
        if not args.skip_pure:
            rows.append(("pure", _kernels.run_subtree_py))
        timings = {}
        for label, kernel in rows:
            nodes, elapsed = run_once(kernel, depth, policy)
            timings[label] = elapsed
            print(f"{name:<16} {label:<7} {nodes:>10} {elapsed:>9.3f} "
                  f"{nodes / elapsed:>12.0f}")
        if len(timings) == 2 and timings["jit"] > 0:
            print(f"{name:<16} speedup x{timings['pure'] / timings['jit']:.1f}")


if __name__ == "__main__":
    main()
