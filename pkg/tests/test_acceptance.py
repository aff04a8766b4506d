"""Exit criteria. Each test records a PASS/FAIL line shown in the terminal summary."""

import itertools
import json
import math
import random
import time

from conftest import random_instance
from wzsconst import cli
from wzsconst.algebra import ModuleSpec, scale, translate, translation_valid
from wzsconst.checker import (
    ANY_NONEMPTY,
    CONSECUTIVE,
    FULL_SEQUENCE,
    brute_force_oracle,
    exact_length,
    find_subsequence,
    verify_witness,
)
from wzsconst.errors import BudgetExceeded, InternalProofViolation
from wzsconst.proofs import binom_exceeds, extract_even_length, extract_z2, pigeonhole_witness
from wzsconst.search import ConstantKind, compute_constant, is_free
from wzsconst.weights import ones, pm_one

D, C, E = ConstantKind.D, ConstantKind.C, ConstantKind.E


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def test_criterion_1_paper_values(acceptance):
    ok = True
    notes = []
    try:
        M6 = ModuleSpec(6)
        d61, t1 = _timed(compute_constant, pm_one(6), M6, D)
        d6, t2 = _timed(compute_constant, pm_one(6, False), M6, D)
        assert (d61.value, d6.value) == (5, 3)
        assert max(t1, t2) < 10
        for m, seq in ((6, (0, 1, 2, 4)), (4, (0, 1, 2)), (8, (0, 1, 2, 4))):
            M = ModuleSpec(m)
            assert is_free(M, M.sequence(seq), pm_one(m), D)
        for m in (4, 8):
            M = ModuleSpec(m)
            w, tw = _timed(compute_constant, pm_one(m), M, D)
            c, tc = _timed(compute_constant, pm_one(m, False), M, D)
            assert w.value == c.value + 1
            assert max(tw, tc) < 10
            notes.append(f"D_A,1({m})={w.value} D_A({m})={c.value}")
    except AssertionError:
        ok = False
        raise
    finally:
        acceptance("1 paper values (Remark)", ok, "; ".join(notes))


def test_criterion_2_odd_modulus_e(acceptance):
    ok = True
    notes = []
    try:
        for n in (3, 5, 7):
            cert, secs = _timed(compute_constant, pm_one(n), ModuleSpec(n), E)
            notes.append(f"E_A,1({n})={cert.value} in {secs:.2f}s")
            assert cert.value == 2 * n - 1
            assert secs < 300
    except AssertionError:
        ok = False
        raise
    finally:
        acceptance("2 odd-modulus E = 2n-1", ok, "; ".join(notes))


def test_criterion_3_z2_closed_forms(acceptance):
    ok = True
    try:
        for r in (1, 2, 3):
            M = ModuleSpec(2, r)
            assert compute_constant(ones(2), M, D).value == r + 2
            assert compute_constant(ones(2), M, E).value == 2**r + r
        for r in (1, 2):
            assert compute_constant(ones(2), ModuleSpec(2, r), C).value == 2 ** (r + 1)
    except AssertionError:
        ok = False
        raise
    finally:
        acceptance("3 Z_2^r closed forms", ok)


def test_criterion_4_relation_suite(acceptance):
    violations = []
    try:
        for m in range(3, 11):
            M = ModuleSpec(m)
            w = compute_constant(pm_one(m), M, D).value
            c = compute_constant(pm_one(m, False), M, D).value
            if not (c + 1 <= w <= 2 * c):
                violations.append(f"D bounds at m={m}: {c}, {w}")
            if not 2**c > m:
                violations.append(f"2^D_A > m fails at m={m}")
        for m in (4, 6, 8):
            M = ModuleSpec(m)
            ea = compute_constant(pm_one(m, False), M, E).value
            ew = compute_constant(pm_one(m), M, E).value
            dw = compute_constant(pm_one(m), M, D).value
            if not (ea <= ew <= m - 2 + dw):
                violations.append(f"E bounds at m={m}: {ea}, {ew}, {m - 2 + dw}")
        assert violations == []
    finally:
        acceptance("4 relation suite", not violations, f"{len(violations)} violations")


def test_criterion_5_consecutive_constants(acceptance):
    ok = True
    try:
        for m in (2, 4):
            M = ModuleSpec(m)
            ca = compute_constant(pm_one(m, False), M, C).value
            assert ca == m
            assert compute_constant(pm_one(m), M, C).value == 2 * ca
        assert compute_constant(ones(3), ModuleSpec(3), C).value == 9
    except AssertionError:
        ok = False
        raise
    finally:
        acceptance("5 C_A,1 = 2 C_A and C_1,1(3) = 9", ok)


def test_criterion_6_oracle_equivalence(acceptance):
    rng = random.Random(20240601)
    modes = ["any", "exact", "full", "consecutive"]
    checked = disagreements = refused = 0
    absent_b = 0
    try:
        while checked < 10_000:
            module, cfg, seq = random_instance(rng)
            mode = rng.choice(modes)
            if mode == "any":
                cons = ANY_NONEMPTY
            elif mode == "exact":
                cons = exact_length(rng.randint(1, len(seq)))
            elif mode == "full":
                cons = FULL_SEQUENCE
            else:
                cons = CONSECUTIVE
            try:
                slow = brute_force_oracle(module, seq, cfg, cons)
            except BudgetExceeded:
                refused += 1
                continue
            fast = find_subsequence(module, seq, cfg, cons)
            checked += 1
            absent_b += cfg.b_set is None
            if (slow is None) != (fast is None):
                disagreements += 1
            if fast is not None:
                assert verify_witness(module, seq, cfg, fast, cons)
        assert disagreements == 0
        assert absent_b > 0
    finally:
        acceptance(
            "6 oracle equivalence",
            checked >= 10_000 and disagreements == 0,
            f"{checked} instances, {disagreements} disagreements, {refused} over budget",
        )


def test_criterion_7_constructive_gates(acceptance):
    counts = {}
    ok = True
    try:
        for m, target in ((4, 4), (6, 6)):
            M = ModuleSpec(m)
            d = compute_constant(pm_one(m), M, D).value
            n = 0
            for seq in itertools.combinations_with_replacement(range(m), target - 2 + d):
                w = extract_even_length(M, M.sequence(seq), target, d)
                assert len(w) == target
                n += 1
            counts[f"even Z_{m}"] = n

        M = ModuleSpec(2, 2)
        for seq in itertools.product(M.elements(), repeat=4):
            w = extract_z2(M, seq, davenport=3)
            assert len(w) % 2 == 0
        counts["z2 Z_2^2"] = 4**4

        M = ModuleSpec(2, 3)
        dav = compute_constant(ones(2, False), M, D).value
        assert dav == 4
        rng = random.Random(7)
        elems = M.elements()
        for _ in range(10_000):
            seq = tuple(rng.choice(elems) for _ in range(dav + 1))
            assert len(extract_z2(M, seq, davenport=dav)) % 2 == 0
        counts["z2 Z_2^3"] = 10_000

        M = ModuleSpec(8)
        for _ in range(1000):
            pigeonhole_witness(M, [rng.randrange(8) for _ in range(6)])
        counts["pigeonhole Z_8"] = 1000

        assert all(binom_exceeds(k) for k in range(2, 31))
        assert not binom_exceeds(1)
        assert math.comb(2, 1) == 2**1
    except (AssertionError, InternalProofViolation):
        ok = False
        raise
    finally:
        acceptance("7 constructive-proof gates", ok, ", ".join(f"{k}: {v}" for k, v in counts.items()))


def test_criterion_8_invariance(acceptance):
    rng = random.Random(99)
    violations = 0
    try:
        for _ in range(1000):
            module, cfg, seq = random_instance(rng, max_len=6)
            if rng.random() < 0.5:
                cfg = type(cfg).make(module.modulus, cfg.a_set, {1})
            base = find_subsequence(module, seq, cfg) is not None
            shifts = module.elements() if translation_valid(cfg) else []
            for x in shifts:
                if (find_subsequence(module, translate(module, seq, x), cfg) is not None) != base:
                    violations += 1
            for u in module.units:
                if (find_subsequence(module, scale(module, seq, u), cfg) is not None) != base:
                    violations += 1
        assert violations == 0
    finally:
        acceptance("8 translation/scaling invariance", violations == 0, f"{violations} violations")


def _strip_timestamps(obj):
    if isinstance(obj, dict):
        return {k: _strip_timestamps(v) for k, v in obj.items() if k != "timestamp"}
    if isinstance(obj, list):
        return [_strip_timestamps(v) for v in obj]
    return obj


def test_criterion_9_determinism(acceptance, tmp_path):
    ok = False
    try:
        outs = []
        for run in ("a", "b"):
            code = cli.main(["verify", "--out", str(tmp_path / run), "--quiet"])
            assert code == 0
            outs.append(json.loads((tmp_path / run / "report.json").read_text()))
        a, b = (_strip_timestamps(o) for o in outs)
        ok = json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
        assert ok
        assert a["summary"].get("violated", 0) == 0
    finally:
        acceptance("9 deterministic verify report", ok)
