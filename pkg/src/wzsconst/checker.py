"""Deciding (A,B)-weighted zero-sums in sequences, with witness extraction."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from . import _kernels as K
from .algebra import ModuleSpec, Sequence
from .errors import BadConstraint, BudgetExceeded, EmptySequence
from .weights import WeightConfig


class Mode(enum.Enum):
    ANY = "any"
    EXACT = "exact"
    FULL = "full"
    CONSECUTIVE = "consecutive"


@dataclass(frozen=True)
class SubseqConstraint:
    mode: Mode
    length: Optional[int] = None

    def validate(self, k: int) -> None:
        if self.mode is Mode.EXACT:
            if self.length is None or not 1 <= self.length <= k:
                raise BadConstraint(f"exact length {self.length} invalid for a sequence of length {k}")
        elif self.length is not None:
            raise BadConstraint(f"mode {self.mode.value} takes no length")


ANY_NONEMPTY = SubseqConstraint(Mode.ANY)
FULL_SEQUENCE = SubseqConstraint(Mode.FULL)
CONSECUTIVE = SubseqConstraint(Mode.CONSECUTIVE)


def exact_length(n: int) -> SubseqConstraint:
    return SubseqConstraint(Mode.EXACT, n)


@dataclass(frozen=True)
class Witness:
    """Positions into a host sequence and the weights certifying a zero-sum."""

    indices: tuple[int, ...]
    a_weights: tuple[int, ...]
    b_weights: Optional[tuple[int, ...]] = None

    def __len__(self) -> int:
        return len(self.indices)

    def to_json(self) -> dict:
        return {
            "indices": list(self.indices),
            "a_weights": list(self.a_weights),
            "b_weights": None if self.b_weights is None else list(self.b_weights),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Witness":
        b = data.get("b_weights")
        return cls(tuple(data["indices"]), tuple(data["a_weights"]), None if b is None else tuple(b))


def verify_witness(
    module: ModuleSpec,
    seq: Sequence,
    cfg: WeightConfig,
    w: Witness,
    constraint: SubseqConstraint | None = None,
) -> bool:
    """Re-check a witness with plain modular arithmetic."""
    m = module.modulus
    if not w.indices or len(w.a_weights) != len(w.indices):
        return False
    if any(j <= i for i, j in zip(w.indices, w.indices[1:])):
        return False
    if w.indices[0] < 0 or w.indices[-1] >= len(seq):
        return False
    if any(a % m not in cfg.a_set for a in w.a_weights):
        return False
    total = [0] * module.rank
    for i, a in zip(w.indices, w.a_weights):
        for c, v in enumerate(seq[i]):
            total[c] += a * v
    if any(t % m for t in total):
        return False
    if cfg.b_set is not None:
        if w.b_weights is None or len(w.b_weights) != len(w.indices):
            return False
        if any(b % m not in cfg.b_set for b in w.b_weights):
            return False
        if sum(a * b for a, b in zip(w.a_weights, w.b_weights)) % m:
            return False
    elif w.b_weights is not None:
        return False
    if constraint is not None:
        k = len(w.indices)
        if constraint.mode is Mode.EXACT and k != constraint.length:
            return False
        if constraint.mode is Mode.FULL and w.indices != tuple(range(len(seq))):
            return False
        if constraint.mode is Mode.CONSECUTIVE and w.indices[-1] - w.indices[0] != k - 1:
            return False
    return True


# ---------------------------------------------------------------------------
# compiled transition tables


@dataclass(frozen=True)
class Compiled:
    """Per-(module, weights) transition tables shared by checker and search."""

    module: ModuleSpec
    cfg: WeightConfig
    m2: int
    nstates: int
    trans: np.ndarray  # (n_elem, max_opt, nstates) int64
    inv: np.ndarray  # inverse permutations of trans
    nopt: np.ndarray  # (n_elem,) int64
    options: tuple  # options[e][o] = (a, b)


@lru_cache(maxsize=64)
def compile_problem(module: ModuleSpec, cfg: WeightConfig) -> Compiled:
    if cfg.modulus != module.modulus:
        raise ValueError(f"weights are mod {cfg.modulus} but the module is {module}")
    m = module.modulus
    n = module.cardinality
    m2 = m if cfg.has_b else 1
    nstates = n * m2
    add = module.addition_table
    states = np.arange(nstates, dtype=np.int64)
    s1, s2 = states // m2, states % m2
    per_elem = []
    for e in range(n):
        x = module.decode(e)
        seen = {}
        for a, b in cfg.pairs():
            d1 = module.encode(module.smul(a, x))
            d2 = (a * b) % m if cfg.has_b else 0
            seen.setdefault((d1, d2), (a, b))
        per_elem.append(seen)
    max_opt = max(len(s) for s in per_elem)
    trans = np.zeros((n, max_opt, nstates), dtype=np.int64)
    nopt = np.zeros(n, dtype=np.int64)
    options = []
    for e, seen in enumerate(per_elem):
        opts = []
        for o, ((d1, d2), ab) in enumerate(seen.items()):
            trans[e, o] = add[s1, d1] * m2 + (s2 + d2) % m2
            opts.append(ab)
        nopt[e] = len(opts)
        for o in range(len(opts), max_opt):
            trans[e, o] = trans[e, 0]
        options.append(tuple(opts))
    inv = np.argsort(trans, axis=2).astype(np.int64)
    return Compiled(module, cfg, m2, nstates, trans, inv, nopt, tuple(options))


def _mode_setup(constraint: SubseqConstraint) -> tuple[int, int, int]:
    """(kernel mode, ncount, target count)."""
    if constraint.mode is Mode.FULL:
        return K.FULL, 1, 0
    if constraint.mode is Mode.ANY:
        return K.ANY, 2, 1
    if constraint.mode is Mode.EXACT:
        return K.EXACT, constraint.length + 1, constraint.length
    return K.CONSEC, 2, 1


def _codes(module: ModuleSpec, seq: Sequence) -> np.ndarray:
    return np.array([module.encode(module.element(x)) for x in seq], dtype=np.int64)


def _layers(comp: Compiled, codes: np.ndarray, kmode: int, ncount: int) -> np.ndarray:
    flags = K.mode_flags(kmode)
    return K.layers(codes, comp.trans, comp.nopt, ncount, *flags, comp.nstates)


def _backtrack(comp, codes, lay, kmode, ncount, target_c, start_state=0) -> Witness:
    skip_zero, skip_rest, saturate = K.mode_flags(kmode)

    def advance(pc):
        nc = pc + 1
        if nc >= ncount:
            return ncount - 1 if saturate else None
        return nc

    c, s = target_c, start_state
    picked = []
    for i in range(len(codes) - 1, -1, -1):
        e = int(codes[i])
        prev = lay[i]
        can_skip = skip_zero if c == 0 else skip_rest
        if can_skip and prev[c, s]:
            continue
        found = False
        for pc in range(ncount):
            if advance(pc) != c:
                continue
            for o in range(int(comp.nopt[e])):
                p = int(comp.inv[e, o, s])
                if prev[pc, p]:
                    picked.append((i, o))
                    c, s = pc, p
                    found = True
                    break
            if found:
                break
        if not found:  # pragma: no cover - reachability guarantees a predecessor
            raise AssertionError("witness backtrack lost the reachable path")
    if (c, s) != (0, 0):  # pragma: no cover
        raise AssertionError("witness backtrack did not return to the empty state")
    picked.reverse()
    idx = tuple(i for i, _ in picked)
    ab = [comp.options[int(codes[i])][o] for i, o in picked]
    a_w = tuple(a for a, _ in ab)
    b_w = tuple(b for _, b in ab) if comp.cfg.has_b else None
    return Witness(idx, a_w, b_w)


def _solve(module, seq, cfg, constraint) -> Optional[Witness]:
    comp = compile_problem(module, cfg)
    codes = _codes(module, seq)
    kmode, ncount, target = _mode_setup(constraint)
    lay = _layers(comp, codes, kmode, ncount)
    if not lay[-1, target, 0]:
        return None
    return _backtrack(comp, codes, lay, kmode, ncount, target)


def check_full(module: ModuleSpec, seq: Sequence, cfg: WeightConfig) -> Optional[Witness]:
    """Witness that the whole of ``seq`` is an (A,B)-weighted zero-sum, or None."""
    if len(seq) == 0:
        raise EmptySequence("check_full needs a nonempty sequence")
    return _solve(module, seq, cfg, FULL_SEQUENCE)


def find_subsequence(
    module: ModuleSpec,
    seq: Sequence,
    cfg: WeightConfig,
    constraint: SubseqConstraint = ANY_NONEMPTY,
) -> Optional[Witness]:
    """A weighted zero-sum subsequence of ``seq`` obeying ``constraint``, or None.

    The returned witness carries the host indices. Consecutive mode tries every
    window with :func:`check_full`, shortest end position first.
    """
    if len(seq) == 0:
        raise EmptySequence("find_subsequence needs a nonempty sequence")
    constraint.validate(len(seq))
    if constraint.mode is Mode.CONSECUTIVE:
        for j in range(len(seq)):
            for i in range(j, -1, -1):
                w = check_full(module, seq[i : j + 1], cfg)
                if w is not None:
                    return Witness(tuple(i + t for t in w.indices), w.a_weights, w.b_weights)
        return None
    return _solve(module, seq, cfg, constraint)


def has_wzs_window_ending_last(module: ModuleSpec, seq: Sequence, cfg: WeightConfig) -> bool:
    """Whether some window ending at the last term is a weighted zero-sum."""
    comp = compile_problem(module, cfg)
    codes = _codes(module, seq)
    lay = _layers(comp, codes, K.CONSEC, 2)
    return bool(lay[-1, 1, 0])


# ---------------------------------------------------------------------------
# brute-force oracle

ORACLE_MAX_LEN = 12
ORACLE_BUDGET = 10**7


def _enumeration_size(k: int, npairs: int, constraint: SubseqConstraint) -> int:
    if constraint.mode is Mode.FULL:
        return npairs**k
    if constraint.mode is Mode.CONSECUTIVE:
        return sum((k - L + 1) * npairs**L for L in range(1, k + 1))
    return (npairs + 1) ** k


def brute_force_oracle(
    module: ModuleSpec,
    seq: Sequence,
    cfg: WeightConfig,
    constraint: SubseqConstraint = ANY_NONEMPTY,
    max_len: int = ORACLE_MAX_LEN,
    budget: int = ORACLE_BUDGET,
) -> Optional[Witness]:
    """Exhaustive enumeration of every subsequence and every weight vector.

    Shares nothing with the dynamic program: weights are enumerated as a plain
    Cartesian product over (skip, (a, b) pairs) per position. Test use only.
    """
    k = len(seq)
    if k == 0:
        raise EmptySequence("oracle needs a nonempty sequence")
    constraint.validate(k)
    pairs = cfg.pairs()
    if k > max_len:
        raise BudgetExceeded(f"sequence length {k} exceeds oracle cap {max_len}")
    size = _enumeration_size(k, len(pairs), constraint)
    if size > budget:
        raise BudgetExceeded(f"{size} weight vectors exceed oracle budget {budget}")
    seq = tuple(module.element(x) for x in seq)
    if constraint.mode is Mode.CONSECUTIVE:
        for j in range(k):
            for i in range(j, -1, -1):
                w = _enumerate(module, seq[i : j + 1], cfg, pairs, allow_skip=False, length=None)
                if w is not None:
                    return Witness(tuple(i + t for t in w.indices), w.a_weights, w.b_weights)
        return None
    allow_skip = constraint.mode is not Mode.FULL
    length = constraint.length if constraint.mode is Mode.EXACT else None
    return _enumerate(module, seq, cfg, pairs, allow_skip, length)


def _enumerate(module, seq, cfg, pairs, allow_skip, length) -> Optional[Witness]:
    m, r = module.modulus, module.rank
    # option 0 = skip (when allowed); option j = pairs[j - offset]
    offset = 1 if allow_skip else 0
    coords = [np.zeros(1, dtype=np.int32) for _ in range(r)]
    bsum = np.zeros(1, dtype=np.int32)
    count = np.zeros(1, dtype=np.int32)
    for x in seq:
        opt_coords = [[0] * offset + [(a * x[c]) % m for a, _ in pairs] for c in range(r)]
        opt_b = [0] * offset + [(a * b) % m for a, b in pairs]
        opt_n = [0] * offset + [1] * len(pairs)
        coords = [
            ((cc[:, None] + np.array(oc, dtype=np.int32)[None, :]) % m).ravel()
            for cc, oc in zip(coords, opt_coords)
        ]
        bsum = ((bsum[:, None] + np.array(opt_b, dtype=np.int32)[None, :]) % m).ravel()
        count = (count[:, None] + np.array(opt_n, dtype=np.int32)[None, :]).ravel()
    ok = count > 0 if length is None else count == length
    for cc in coords:
        ok &= cc == 0
    if cfg.has_b:
        ok &= bsum == 0
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        return None
    digits = np.unravel_index(int(hits[0]), (offset + len(pairs),) * len(seq))
    idx, a_w, b_w = [], [], []
    for i, d in enumerate(digits):
        d = int(d)
        if d < offset:
            continue
        a, b = pairs[d - offset]
        idx.append(i)
        a_w.append(a)
        b_w.append(b)
    return Witness(tuple(idx), tuple(a_w), tuple(b_w) if cfg.has_b else None)


def naive_free(module, seq, cfg, constraint=ANY_NONEMPTY) -> bool:
    """Slow reference: no witness among all index subsets, all weights, pure Python."""
    pairs = cfg.pairs()
    m = module.modulus
    k = len(seq)
    if constraint.mode is Mode.CONSECUTIVE:
        subsets = [tuple(range(i, j + 1)) for i in range(k) for j in range(i, k)]
    elif constraint.mode is Mode.FULL:
        subsets = [tuple(range(k))]
    else:
        subsets = [
            c
            for L in range(1, k + 1)
            if constraint.mode is not Mode.EXACT or L == constraint.length
            for c in itertools.combinations(range(k), L)
        ]
    for sub in subsets:
        for choice in itertools.product(pairs, repeat=len(sub)):
            if any(
                sum(a * seq[i][c] for i, (a, _) in zip(sub, choice)) % m
                for c in range(module.rank)
            ):
                continue
            if cfg.has_b and sum(a * b for a, b in choice) % m:
                continue
            return False
    return True
