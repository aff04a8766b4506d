"""Exact computation of the constants D, C and E as 1 + maximum free length.

Freeness is hereditary (sub-multisets for D and E, contiguous pieces for C),
so the maximum free length is found by a depth-first extension search that
abandons a branch as soon as the newest term creates a weighted zero-sum.
"""

from __future__ import annotations

import enum
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional

import numpy as np

from . import __version__
from . import _kernels as K
from .algebra import ModuleSpec, Sequence, translation_valid
from .checker import (
    ANY_NONEMPTY,
    CONSECUTIVE,
    SubseqConstraint,
    compile_problem,
    exact_length,
    find_subsequence,
    has_wzs_window_ending_last,
)
from .errors import CapTooSmall, EmptySequence, SearchIncomplete
from .weights import WeightConfig

log = logging.getLogger(__name__)


class ConstantKind(str, enum.Enum):
    D = "D"
    C = "C"
    E = "E"


def constraint_for(kind: ConstantKind, module: ModuleSpec) -> SubseqConstraint:
    kind = ConstantKind(kind)
    if kind is ConstantKind.D:
        return ANY_NONEMPTY
    if kind is ConstantKind.C:
        return CONSECUTIVE
    return exact_length(module.cardinality)


def is_free(
    module: ModuleSpec,
    seq: Sequence,
    cfg: WeightConfig,
    kind: ConstantKind,
    incremental: bool = False,
) -> bool:
    """True iff ``seq`` has no weighted zero-sum subsequence of the kind's shape.

    With ``incremental=True`` and kind C the prefix without the last term is
    assumed free already, so only windows ending at the last term are checked.
    """
    if len(seq) == 0:
        raise EmptySequence("is_free needs a nonempty sequence")
    kind = ConstantKind(kind)
    if kind is ConstantKind.E and len(seq) < module.cardinality:
        return True
    if kind is ConstantKind.C and incremental:
        return not has_wzs_window_ending_last(module, seq, cfg)
    return find_subsequence(module, seq, cfg, constraint_for(kind, module)) is None


def default_cap(kind: ConstantKind, module: ModuleSpec) -> int:
    """Known upper bound on the constant's value.

    |Z_m^r| is always a multiple of char Z_m = m, so D <= E <= 2|M| - 1 and
    C <= |M|^2 hold for every weight configuration.
    """
    n = module.cardinality
    if ConstantKind(kind) is ConstantKind.C:
        return n * n
    return 2 * n - 1


# ---------------------------------------------------------------------------
# search


@dataclass
class SearchResult:
    length: int
    witness: Sequence
    exhaustive: bool
    nodes_explored: int
    symmetries_used: list[str]
    aborted: bool = False
    seconds: float = 0.0


def _kernel_mode(kind: ConstantKind, module: ModuleSpec) -> tuple[int, int, int]:
    if kind is ConstantKind.D:
        return K.ANY, 2, 1
    if kind is ConstantKind.C:
        return K.CONSEC, 2, 1
    n = module.cardinality
    return K.EXACT, n + 1, n


def orbit_minima(module: ModuleSpec) -> np.ndarray:
    """Mask of elements that are least in their unit-scaling orbit."""
    mask = np.zeros(module.cardinality, dtype=np.bool_)
    for x in module.elements():
        if all(module.smul(u, x) >= x for u in module.units):
            mask[module.encode(x)] = True
    return mask


def root_masks(module: ModuleSpec, cfg: WeightConfig, symmetry: bool):
    """Allowed first and second terms, plus the names of symmetries applied.

    Translation (B = {1} only) moves some term to 0, which is then the first
    term in either ordering. Scaling fixes 0 and can make the next term, or
    the first one when translation is off, least in its orbit.
    """
    n = module.cardinality
    everything = np.ones(n, dtype=np.bool_)
    if not symmetry:
        return everything, everything, []
    used = []
    mins = orbit_minima(module)
    scaling = len(module.units) > 1
    if translation_valid(cfg):
        mask0 = np.zeros(n, dtype=np.bool_)
        mask0[0] = True
        used.append("translation")
        mask1 = mins if scaling else everything
    else:
        mask0 = mins if scaling else everything
        mask1 = everything
    if scaling:
        used.append("unit-scaling")
    return mask0, mask1, used


def _enumerate_prefixes(comp, flags, ncount, target_c, depth, multiset, mask0, mask1, cap):
    """Free prefixes of length ``depth`` in DFS order, with shallow statistics."""
    nodes = 0
    best: tuple = ()
    units = []
    init = np.zeros((ncount, comp.nstates), dtype=np.bool_)
    init[0, 0] = True
    n_elem = comp.trans.shape[0]

    def rec(prefix, layer):
        nonlocal nodes, best
        d = len(prefix)
        if d == depth:
            units.append((prefix, layer))
            return
        lo = prefix[-1] if (multiset and prefix) else 0
        for e in range(lo, n_elem):
            if (d == 0 and not mask0[e]) or (d == 1 and not mask1[e]):
                continue
            nodes += 1
            nxt = np.empty_like(layer)
            K.step(layer, comp.trans[e], comp.nopt[e], *flags, nxt)
            if nxt[target_c, 0]:
                continue
            p = prefix + (e,)
            if len(p) > len(best):
                best = p
            if len(p) < cap:
                rec(p, nxt)

    rec((), init)
    return units, nodes, best


def max_free_length(
    cfg: WeightConfig,
    module: ModuleSpec,
    kind: ConstantKind,
    cap: int,
    *,
    symmetry: bool = True,
    threads: int = 1,
    split_depth: int = 2,
    node_limit: int = -1,
) -> SearchResult:
    """Longest free sequence of length at most ``cap``.

    ``exhaustive`` is True when no free sequence of length ``cap`` exists and
    the node budget was not exhausted, i.e. ``length`` is the true maximum.
    D and E enumerate nondecreasing multisets; C enumerates ordered sequences.
    """
    if cap < 1:
        raise CapTooSmall(f"cap must be >= 1, got {cap}")
    kind = ConstantKind(kind)
    t0 = time.perf_counter()
    comp = compile_problem(module, cfg)
    kmode, ncount, target_c = _kernel_mode(kind, module)
    flags = K.mode_flags(kmode)
    multiset = kind is not ConstantKind.C
    mask0, mask1, used = root_masks(module, cfg, symmetry)
    init = np.zeros((ncount, comp.nstates), dtype=np.bool_)
    init[0, 0] = True
    empty = np.zeros(0, dtype=np.int64)

    def run(prefix, layer, limit):
        return K.dfs(
            comp.trans, comp.nopt, ncount, *flags, target_c, cap, multiset,
            mask0, mask1, prefix, layer, limit,
        )

    if threads <= 1 or split_depth <= 0 or cap <= split_depth:
        best_len, best_seq, nodes, hit_cap, aborted = run(empty, init, node_limit)
        best_codes = tuple(int(v) for v in best_seq[:best_len])
    else:
        units, nodes, shallow_best = _enumerate_prefixes(
            comp, flags, ncount, target_c, split_depth, multiset, mask0, mask1, cap
        )
        hit_cap = len(shallow_best) >= cap
        aborted = node_limit >= 0 and nodes > node_limit
        best_codes = shallow_best
        if not aborted:
            limit = -1 if node_limit < 0 else node_limit - nodes
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = [
                    pool.submit(run, np.array(p, dtype=np.int64), lay, limit) for p, lay in units
                ]
                results = [f.result() for f in futures]
            for blen, bseq, n, hc, ab in results:
                nodes += int(n)
                hit_cap = hit_cap or bool(hc)
                aborted = aborted or bool(ab)
                if blen > len(best_codes):
                    best_codes = tuple(int(v) for v in bseq[:blen])
    witness = tuple(module.decode(c) for c in best_codes)
    return SearchResult(
        length=len(best_codes),
        witness=witness,
        exhaustive=not (hit_cap or aborted),
        nodes_explored=int(nodes),
        symmetries_used=used,
        aborted=bool(aborted),
        seconds=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# certificates


@dataclass
class ConstantCertificate:
    kind: ConstantKind
    module: ModuleSpec
    config: WeightConfig
    value: int
    extremal: Sequence
    nodes_explored: int
    symmetries_used: list[str]
    exhaustive: bool
    engine_version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def verify_lower_bound(self) -> bool:
        """The extremal sequence has length value - 1 and is free."""
        if len(self.extremal) != self.value - 1:
            return False
        if not self.extremal:
            return True
        return is_free(self.module, self.extremal, self.config, self.kind)

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "modulus": self.module.modulus,
            "rank": self.module.rank,
            "a_set": sorted(self.config.a_set),
            "b_set": None if self.config.b_set is None else sorted(self.config.b_set),
            "value": self.value,
            "extremal": [list(x) for x in self.extremal],
            "nodes_explored": self.nodes_explored,
            "symmetries_used": list(self.symmetries_used),
            "exhaustive": self.exhaustive,
            "engine_version": self.engine_version,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ConstantCertificate":
        module = ModuleSpec(int(data["modulus"]), int(data["rank"]))
        b = data["b_set"]
        cfg = WeightConfig.make(module.modulus, data["a_set"], None if b is None else b)
        return cls(
            kind=ConstantKind(data["kind"]),
            module=module,
            config=cfg,
            value=int(data["value"]),
            extremal=tuple(tuple(int(c) for c in x) for x in data["extremal"]),
            nodes_explored=int(data["nodes_explored"]),
            symmetries_used=list(data["symmetries_used"]),
            exhaustive=bool(data["exhaustive"]),
            engine_version=data["engine_version"],
            timestamp=data["timestamp"],
        )


def compute_constant(
    cfg: WeightConfig,
    module: ModuleSpec,
    kind: ConstantKind,
    *,
    cap: Optional[int] = None,
    symmetry: bool = True,
    threads: int = 1,
    node_limit: int = -1,
    cache=None,
) -> ConstantCertificate:
    """Exact value of D, C or E for ``(cfg, module)``.

    ``cache`` is an optional :class:`wzsconst.cache.CertificateCache`; hits
    are returned without searching. Raises :class:`SearchIncomplete` (with the
    lower-bound certificate attached) when the search could not finish.
    """
    kind = ConstantKind(kind)
    if cache is not None:
        hit = cache.get(module, cfg, kind)
        if hit is not None:
            return hit
    if cap is None:
        cap = default_cap(kind, module)
    res = max_free_length(
        cfg, module, kind, cap, symmetry=symmetry, threads=threads, node_limit=node_limit
    )
    cert = ConstantCertificate(
        kind=kind,
        module=module,
        config=cfg,
        value=res.length + 1,
        extremal=res.witness,
        nodes_explored=res.nodes_explored,
        symmetries_used=res.symmetries_used,
        exhaustive=res.exhaustive,
    )
    log.debug("%s %s %s -> %d (%d nodes, %.2fs)", kind.value, module, cfg.label(),
              cert.value, res.nodes_explored, res.seconds)
    if not res.exhaustive:
        why = "node budget exhausted" if res.aborted else f"free sequence of length cap={cap} found"
        raise SearchIncomplete(
            f"{kind.value}({module}, {cfg.label()}) >= {cert.value}: {why}", cert
        )
    if cache is not None:
        cache.put(cert)
    return cert
