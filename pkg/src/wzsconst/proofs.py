"""Executable constructions: lower-bound sequences and witness extractors.

Every extractor re-validates its output with :func:`verify_witness` and raises
:class:`InternalProofViolation` instead of falling back, so running them over
many inputs doubles as a mechanical check of the arguments they implement.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from typing import Optional

import numpy as np

from . import _kernels as K
from .algebra import ModuleSpec, Sequence
from .checker import (
    ANY_NONEMPTY,
    Witness,
    _backtrack,
    compile_problem,
    exact_length,
    find_subsequence,
    verify_witness,
)
from .errors import InputNotFree, InternalProofViolation, Overflow, PreconditionViolated
from .search import ConstantKind, compute_constant, is_free
from .weights import WeightConfig, ones, pm_one


def _check_output(module, seq, cfg, w, constraint=None) -> Witness:
    if w is None or not verify_witness(module, seq, cfg, w, constraint):
        raise InternalProofViolation(f"constructed witness {w} does not certify {seq}")
    return w


def _lower_bound_applies(module: ModuleSpec, cfg: WeightConfig) -> bool:
    return cfg.a_units_only() or cfg.b_units_only()


# ---------------------------------------------------------------------------
# lower-bound constructions


def build_interleaved(module: ModuleSpec, s_free: Sequence, cfg: WeightConfig) -> Sequence:
    """(0, x_1, 0, x_2, ..., 0, x_k, 0) from a consecutive-free sequence.

    ``s_free`` must be C-free for A alone; when A or B consists of units the
    result is checked to be C-free for (A, B).
    """
    s_free = module.sequence(s_free)
    if s_free and not is_free(module, s_free, cfg.classical(), ConstantKind.C):
        raise InputNotFree(f"{s_free} has an A-weighted zero-sum window")
    z = module.zero
    out = [z]
    for x in s_free:
        out += [x, z]
    out = tuple(out)
    if _lower_bound_applies(module, cfg) and not is_free(module, out, cfg, ConstantKind.C):
        raise InternalProofViolation(f"interleaved sequence {out} is not consecutive-free")
    return out


def build_appended(module: ModuleSpec, s_free: Sequence, cfg: WeightConfig) -> Sequence:
    """``s_free`` followed by a single 0; D-free for (A, B) when A or B are units."""
    s_free = module.sequence(s_free)
    if s_free and not is_free(module, s_free, cfg.classical(), ConstantKind.D):
        raise InputNotFree(f"{s_free} has an A-weighted zero-sum subsequence")
    out = s_free + (module.zero,)
    if _lower_bound_applies(module, cfg) and not is_free(module, out, cfg, ConstantKind.D):
        raise InternalProofViolation(f"appended sequence {out} is not free")
    return out


# ---------------------------------------------------------------------------
# pigeonhole on equal-sum halves


def binom_exceeds(k: int, max_k: int = 30) -> bool:
    """Whether C(2k, k) > 2^k. False at k = 1, where both sides are 2."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > max_k:
        raise Overflow(f"k={k} is beyond the checked range k <= {max_k}")
    return math.comb(2 * k, k) > 2**k


def _signed_witness(m, plus, minus) -> Witness:
    """+1 on ``plus`` and -1 on ``minus`` (disjoint, equal size), B-weights 1."""
    signs = {i: 1 for i in plus}
    signs.update({i: m - 1 for i in minus})
    idx = tuple(sorted(signs))
    return Witness(idx, tuple(signs[i] for i in idx), (1,) * len(idx))


def pigeonhole_witness(module: ModuleSpec, seq: Sequence) -> Witness:
    """(±1, 1)-weighted zero-sum from two equal-sum halves of size k.

    Needs ``len(seq) == 2k`` with k >= 2 and 2^k >= |M|. Two distinct k-index
    sets with the same sum exist since C(2k, k) > 2^k >= |M|; dropping their
    common indices leaves equal-size, equal-sum disjoint parts, signed +1/-1.
    """
    seq = module.sequence(seq)
    if len(seq) % 2:
        raise PreconditionViolated("sequence length must be even")
    k = len(seq) // 2
    if k < 2:
        raise PreconditionViolated("k >= 2 required (C(2,1) > 2 fails)")
    if 2**k < module.cardinality:
        raise PreconditionViolated(f"2^{k} < |M| = {module.cardinality}")
    seen: dict = {}
    for sub in itertools.combinations(range(2 * k), k):
        s = module.total(seq[i] for i in sub)
        other = seen.get(s)
        if other is None:
            seen[s] = sub
            continue
        common = set(sub) & set(other)
        plus = [i for i in other if i not in common]
        minus = [i for i in sub if i not in common]
        w = _signed_witness(module.modulus, plus, minus)
        return _check_output(module, seq, pm_one(module.modulus), w)
    raise InternalProofViolation(f"no equal-sum k-subsets found in {seq}")


# ---------------------------------------------------------------------------
# even-length extraction


def repeated_pairs(seq: Sequence) -> list[tuple[int, int]]:
    """A maximum set of disjoint index pairs holding equal terms."""
    where = defaultdict(list)
    for i, x in enumerate(seq):
        where[x].append(i)
    pairs = []
    for x in sorted(where):
        pos = where[x]
        pairs += [(pos[j], pos[j + 1]) for j in range(0, len(pos) - 1, 2)]
    return pairs


def _enlarge(module, seq, cfg, core: Witness) -> Optional[Witness]:
    """A weighted zero-sum subsequence strictly containing ``core``'s indices.

    The core terms are taken with no skip option (their weights may change);
    the remaining terms with skip, requiring at least one of them chosen.
    """
    comp = compile_problem(module, cfg)
    forced = list(core.indices)
    rest = [i for i in range(len(seq)) if i not in set(forced)]
    if not rest:
        return None
    fcodes = np.array([module.encode(seq[i]) for i in forced], dtype=np.int64)
    rcodes = np.array([module.encode(seq[i]) for i in rest], dtype=np.int64)
    full = K.layers(fcodes, comp.trans, comp.nopt, 1, *K.mode_flags(K.FULL), comp.nstates)
    flags = K.mode_flags(K.ANY)
    lay = np.zeros((len(rest) + 1, 2, comp.nstates), dtype=np.bool_)
    lay[0, 0] = full[-1, 0]
    for j, e in enumerate(rcodes):
        K.step(lay[j], comp.trans[e], comp.nopt[e], *flags, lay[j + 1])
    if not lay[-1, 1, 0]:
        return None
    w_rest, mid = _backtrack_from(comp, rcodes, lay, K.ANY, 2, 1)
    w_core = _backtrack(comp, fcodes, full, K.FULL, 1, 0, start_state=mid)
    weights = {}
    for j, a, b in zip(w_core.indices, w_core.a_weights, w_core.b_weights):
        weights[forced[j]] = (a, b)
    for j, a, b in zip(w_rest.indices, w_rest.a_weights, w_rest.b_weights):
        weights[rest[j]] = (a, b)
    idx = tuple(sorted(weights))
    return Witness(idx, tuple(weights[i][0] for i in idx), tuple(weights[i][1] for i in idx))


def _backtrack_from(comp, codes, lay, kmode, ncount, target_c):
    """Backtrack to count 0, returning the partial witness and the state reached."""
    skip_zero, skip_rest, saturate = K.mode_flags(kmode)
    c, s = target_c, 0
    picked = []
    for i in range(len(codes) - 1, -1, -1):
        if c == 0:
            break
        e = int(codes[i])
        prev = lay[i]
        if skip_rest and prev[c, s]:
            continue
        for pc in (1, 0):
            hit = None
            for o in range(int(comp.nopt[e])):
                p = int(comp.inv[e, o, s])
                if prev[pc, p]:
                    hit = (o, p)
                    break
            if hit is not None:
                picked.append((i, hit[0]))
                c, s = pc, hit[1]
                break
        else:  # pragma: no cover
            raise AssertionError("lost reachable path")
    picked.reverse()
    ab = [comp.options[int(codes[i])][o] for i, o in picked]
    w = Witness(tuple(i for i, _ in picked), tuple(a for a, _ in ab), tuple(b for _, b in ab))
    return w, s


def maximal_wzs(module: ModuleSpec, seq: Sequence, cfg: WeightConfig) -> Optional[Witness]:
    """A weighted zero-sum subsequence not strictly contained in another one."""
    w = find_subsequence(module, seq, cfg, ANY_NONEMPTY)
    if w is None:
        return None
    while True:
        bigger = _enlarge(module, seq, cfg, w)
        if bigger is None:
            return w
        w = bigger


def extract_even_length(
    module: ModuleSpec, seq: Sequence, m_target: int, d_value: Optional[int] = None
) -> Witness:
    """(±1, 1)-weighted zero-sum subsequence of exactly ``m_target`` terms.

    Requires even modulus, even ``m_target >= |M|`` and
    ``len(seq) >= m_target - 2 + D``, with D the (±1, 1) Davenport-type
    constant (computed when ``d_value`` is None). Pairs of repeated terms are
    collected first; if too few, a maximal weighted zero-sum subsequence of the
    leftover terms is padded with repeated pairs.
    """
    seq = module.sequence(seq)
    m = module.modulus
    cfg = pm_one(m)
    if m % 2:
        raise PreconditionViolated("modulus must be even")
    if m_target % 2 or m_target < module.cardinality:
        raise PreconditionViolated(f"m_target={m_target} must be even and >= |M|")
    if d_value is None:
        d_value = compute_constant(cfg, module, ConstantKind.D).value
    if len(seq) < m_target - 2 + d_value:
        raise PreconditionViolated(f"need length >= {m_target - 2 + d_value}, got {len(seq)}")

    pairs = repeated_pairs(seq)
    target = exact_length(m_target)
    if 2 * len(pairs) >= m_target:
        w = _signed_witness(m, [p[0] for p in pairs[: m_target // 2]], [p[1] for p in pairs[: m_target // 2]])
        return _check_output(module, seq, cfg, w, target)

    used = {i for p in pairs for i in p}
    left = [i for i in range(len(seq)) if i not in used]
    if len(left) < d_value:
        raise InternalProofViolation(f"only {len(left)} leftover terms, expected >= {d_value}")
    sub = tuple(seq[i] for i in left)
    core = maximal_wzs(module, sub, cfg)
    if core is None:
        raise InternalProofViolation(f"leftover {sub} of length >= D has no weighted zero-sum")
    l = len(core)
    if l % 2:
        raise InternalProofViolation(f"odd-length weighted zero-sum {core} with even modulus")
    if l > m_target or 2 * len(pairs) < m_target - l:
        raise InternalProofViolation(
            f"core length {l} with {len(pairs)} repeated pairs cannot reach {m_target}"
        )
    weights = {left[j]: (a, b) for j, a, b in zip(core.indices, core.a_weights, core.b_weights)}
    for i, j in pairs[: (m_target - l) // 2]:
        weights[i] = (1, 1)
        weights[j] = (m - 1, 1)
    idx = tuple(sorted(weights))
    w = Witness(idx, tuple(weights[i][0] for i in idx), tuple(weights[i][1] for i in idx))
    return _check_output(module, seq, cfg, w, target)


# ---------------------------------------------------------------------------
# Z_2 symmetric difference


def extract_z2(module: ModuleSpec, seq: Sequence, davenport: Optional[int] = None) -> Witness:
    """Even-length zero-sum subsequence of a sequence over Z_2^r.

    Requires ``len(seq) >= D + 1`` with D the classical Davenport constant
    (computed when not given). Finds a zero-sum T, drops one of its terms,
    finds a zero-sum T' in the rest; if both are odd their symmetric
    difference is even and zero-sum.
    """
    if module.modulus != 2:
        raise PreconditionViolated("extract_z2 works over Z_2^r only")
    seq = module.sequence(seq)
    classical = ones(2, with_b=False)
    cfg = ones(2)
    if davenport is None:
        davenport = compute_constant(classical, module, ConstantKind.D).value
    if len(seq) < davenport + 1:
        raise PreconditionViolated(f"need length >= {davenport + 1}, got {len(seq)}")

    def as_witness(indices):
        idx = tuple(sorted(indices))
        return _check_output(module, seq, cfg, Witness(idx, (1,) * len(idx), (1,) * len(idx)))

    t = find_subsequence(module, seq, classical, ANY_NONEMPTY)
    if t is None:
        raise InternalProofViolation(f"no zero-sum subsequence in {seq}")
    if len(t) % 2 == 0:
        return as_witness(t.indices)
    drop = t.indices[0]
    keep = [i for i in range(len(seq)) if i != drop]
    t2 = find_subsequence(module, tuple(seq[i] for i in keep), classical, ANY_NONEMPTY)
    if t2 is None:
        raise InternalProofViolation(f"no zero-sum subsequence after dropping index {drop}")
    t2_idx = {keep[j] for j in t2.indices}
    if len(t2_idx) % 2 == 0:
        return as_witness(t2_idx)
    return as_witness(set(t.indices) ^ t2_idx)
