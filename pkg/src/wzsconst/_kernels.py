"""Hot loops: layered reachability over (count, module sum, weight sum) states.

A state is ``s = e * m2 + t`` where ``e`` is the code of a module element and
``t`` the running value of sum(b_i a_i) in Z_m (``m2 = 1`` without B).
Each sequence term contributes one of its options, a permutation of states
stored as ``trans[term, option, s]``. Count handling is set per mode:

=========  ===========  ============  =========
mode       skip c=0     skip c>0      overflow
=========  ===========  ============  =========
FULL       no           no            saturate
ANY        yes          yes           saturate
EXACT      yes          yes           drop
CONSEC     yes          no            saturate
=========  ===========  ============  =========

Set ``WZS_DISABLE_NUMBA=1`` to force the pure numpy path. Both paths are
importable as ``*_numpy`` / ``*_numba`` for cross-checks and benchmarks.
"""

from __future__ import annotations

import os

import numpy as np

FULL, ANY, EXACT, CONSEC = 0, 1, 2, 3

_MODE_FLAGS = {
    # mode: (skip_zero, skip_rest, saturate)
    FULL: (False, False, True),
    ANY: (True, True, True),
    EXACT: (True, True, False),
    CONSEC: (True, False, True),
}


def mode_flags(mode: int) -> tuple[bool, bool, bool]:
    return _MODE_FLAGS[mode]


try:  # pragma: no cover - exercised implicitly
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("WZS_DISABLE_NUMBA", "").strip() not in ("1", "true", "yes")


# ---------------------------------------------------------------------------
# pure numpy path


def step_numpy(layer, trans_e, nopt, skip_zero, skip_rest, saturate, out):
    """Apply one term to ``layer`` (shape ``(ncount, S)``), writing into ``out``."""
    out[:] = False
    if skip_rest:
        out |= layer
    elif skip_zero:
        out[0] |= layer[0]
    shifted = np.zeros_like(layer)
    for o in range(nopt):
        shifted[:, trans_e[o]] |= layer
    out[1:] |= shifted[:-1]
    if saturate:
        out[-1] |= shifted[-1]
    return out


def layers_numpy(terms, trans, nopt, ncount, skip_zero, skip_rest, saturate, nstates):
    k = len(terms)
    lay = np.zeros((k + 1, ncount, nstates), dtype=np.bool_)
    lay[0, 0, 0] = True
    for i in range(k):
        e = terms[i]
        step_numpy(lay[i], trans[e], nopt[e], skip_zero, skip_rest, saturate, lay[i + 1])
    return lay


def dfs_numpy(
    trans, nopt, ncount, skip_zero, skip_rest, saturate, target_c, cap,
    multiset, mask0, mask1, prefix, init_layer, node_limit,
):
    """Depth-first enumeration of free extensions of ``prefix``.

    Returns ``(best_len, best_seq, nodes, hit_cap, aborted)``. ``best_seq``
    holds ``best_len`` codes (prefix included) followed by padding.
    """
    n_elem = trans.shape[0]
    nstates = trans.shape[2]
    plen = len(prefix)
    stack = np.zeros((cap + 1, ncount, nstates), dtype=np.bool_)
    seq = np.zeros(cap, dtype=np.int64)
    seq[:plen] = prefix
    cursor = np.zeros(cap + 1, dtype=np.int64)
    stack[plen] = init_layer
    best_len = plen
    best_seq = seq.copy()
    nodes = 0
    hit_cap = plen >= cap
    aborted = False
    if hit_cap:
        return best_len, best_seq, nodes, hit_cap, aborted
    depth = plen
    cursor[depth] = seq[depth - 1] if (multiset and depth > 0) else 0
    while depth >= plen:
        e = cursor[depth]
        if depth == 0:
            while e < n_elem and not mask0[e]:
                e += 1
        elif depth == 1:
            while e < n_elem and not mask1[e]:
                e += 1
        if e >= n_elem:
            depth -= 1
            continue
        cursor[depth] = e + 1
        if node_limit >= 0 and nodes >= node_limit:
            aborted = True
            break
        nodes += 1
        nxt = stack[depth + 1]
        step_numpy(stack[depth], trans[e], nopt[e], skip_zero, skip_rest, saturate, nxt)
        if nxt[target_c, 0]:
            continue
        seq[depth] = e
        if depth + 1 > best_len:
            best_len = depth + 1
            best_seq[:] = seq
        if depth + 1 >= cap:
            hit_cap = True
            continue
        depth += 1
        cursor[depth] = e if multiset else 0
    return best_len, best_seq, nodes, hit_cap, aborted


# ---------------------------------------------------------------------------
# numba path

if HAVE_NUMBA:

    @numba.njit(cache=True, nogil=True)
    def step_numba(layer, trans_e, nopt, skip_zero, skip_rest, saturate, out):
        ncount, nstates = layer.shape
        for c in range(ncount):
            if (c == 0 and skip_zero) or (c > 0 and skip_rest):
                for s in range(nstates):
                    out[c, s] = layer[c, s]
            else:
                for s in range(nstates):
                    out[c, s] = False
        for c in range(ncount):
            nc = c + 1
            if nc >= ncount:
                if not saturate:
                    continue
                nc = ncount - 1
            row = layer[c]
            dst = out[nc]
            for o in range(nopt):
                perm = trans_e[o]
                for s in range(nstates):
                    if row[s]:
                        dst[perm[s]] = True
        return out

    @numba.njit(cache=True, nogil=True)
    def layers_numba(terms, trans, nopt, ncount, skip_zero, skip_rest, saturate, nstates):
        k = terms.shape[0]
        lay = np.zeros((k + 1, ncount, nstates), dtype=np.bool_)
        lay[0, 0, 0] = True
        for i in range(k):
            e = terms[i]
            step_numba(lay[i], trans[e], nopt[e], skip_zero, skip_rest, saturate, lay[i + 1])
        return lay

    @numba.njit(cache=True, nogil=True)
    def dfs_numba(
        trans, nopt, ncount, skip_zero, skip_rest, saturate, target_c, cap,
        multiset, mask0, mask1, prefix, init_layer, node_limit,
    ):
        n_elem = trans.shape[0]
        nstates = trans.shape[2]
        plen = prefix.shape[0]
        stack = np.zeros((cap + 1, ncount, nstates), dtype=np.bool_)
        seq = np.zeros(cap, dtype=np.int64)
        for i in range(plen):
            seq[i] = prefix[i]
        cursor = np.zeros(cap + 1, dtype=np.int64)
        stack[plen] = init_layer
        best_len = plen
        best_seq = seq.copy()
        nodes = 0
        hit_cap = plen >= cap
        aborted = False
        if hit_cap:
            return best_len, best_seq, nodes, hit_cap, aborted
        depth = plen
        if multiset and depth > 0:
            cursor[depth] = seq[depth - 1]
        else:
            cursor[depth] = 0
        while depth >= plen:
            e = cursor[depth]
            if depth == 0:
                while e < n_elem and not mask0[e]:
                    e += 1
            elif depth == 1:
                while e < n_elem and not mask1[e]:
                    e += 1
            if e >= n_elem:
                depth -= 1
                continue
            cursor[depth] = e + 1
            if node_limit >= 0 and nodes >= node_limit:
                aborted = True
                break
            nodes += 1
            nxt = stack[depth + 1]
            step_numba(stack[depth], trans[e], nopt[e], skip_zero, skip_rest, saturate, nxt)
            if nxt[target_c, 0]:
                continue
            seq[depth] = e
            if depth + 1 > best_len:
                best_len = depth + 1
                for i in range(cap):
                    best_seq[i] = seq[i]
            if depth + 1 >= cap:
                hit_cap = True
                continue
            depth += 1
            if multiset:
                cursor[depth] = e
            else:
                cursor[depth] = 0
        return best_len, best_seq, nodes, hit_cap, aborted

else:  # pragma: no cover
    step_numba = layers_numba = dfs_numba = None


if USE_NUMBA:
    step, layers, dfs = step_numba, layers_numba, dfs_numba
else:
    step, layers, dfs = step_numpy, layers_numpy, dfs_numpy


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
