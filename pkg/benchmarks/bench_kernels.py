"""Time the numba kernels against the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Each case runs the full depth-first search for one constant with both
backends and checks they return the same answer.
"""

import argparse
import time

import numpy as np

from wzsconst import _kernels as K
from wzsconst.algebra import ModuleSpec
from wzsconst.checker import compile_problem
from wzsconst.search import ConstantKind, _kernel_mode, default_cap, root_masks
from wzsconst.weights import ones, pm_one

CASES = [
    ("D", ModuleSpec(6), pm_one(6)),
    ("D", ModuleSpec(8), pm_one(8, with_b=False)),
    ("E", ModuleSpec(5), pm_one(5)),
    ("C", ModuleSpec(3), ones(3)),
    ("D", ModuleSpec(2, 3), ones(2)),
    ("E", ModuleSpec(7), pm_one(7)),
    ("D", ModuleSpec(10), pm_one(10)),
    ("C", ModuleSpec(4), ones(4)),
]


def dfs_args(kind, module, cfg):
    kind = ConstantKind(kind)
    comp = compile_problem(module, cfg)
    kmode, ncount, target_c = _kernel_mode(kind, module)
    mask0, mask1, _ = root_masks(module, cfg, True)
    init = np.zeros((ncount, comp.nstates), dtype=np.bool_)
    init[0, 0] = True
    return (
        comp.trans, comp.nopt, ncount, *K.mode_flags(kmode), target_c,
        default_cap(kind, module), kind is not ConstantKind.C,
        mask0, mask1, np.zeros(0, dtype=np.int64), init, -1,
    )


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'case':<22}{'nodes':>10}{'numpy s':>10}{'numba s':>10}{'speedup':>9}")
    for kind, module, cfg in CASES:
        a = dfs_args(kind, module, cfg)
        K.dfs_numba(*a)  # compile outside the timing
        t_np, r_np = best_of(K.dfs_numpy, a, args.repeat)
        t_nb, r_nb = best_of(K.dfs_numba, a, args.repeat)
        assert r_np[0] == r_nb[0] and r_np[2] == r_nb[2], "backends disagree"
        name = f"{kind} {module} {cfg.label()}"
        print(f"{name:<22}{r_nb[2]:>10}{t_np:>10.3f}{t_nb:>10.4f}{t_np / t_nb:>8.0f}x")


if __name__ == "__main__":
    main()
