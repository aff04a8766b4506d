import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_instance
from wzsconst.algebra import ModuleSpec, translate
from wzsconst.checker import (
    ANY_NONEMPTY,
    CONSECUTIVE,
    FULL_SEQUENCE,
    Witness,
    brute_force_oracle,
    check_full,
    exact_length,
    find_subsequence,
    naive_free,
    verify_witness,
)
from wzsconst.errors import BadConstraint, BudgetExceeded, EmptySequence
from wzsconst.weights import WeightConfig, pm_one

Z4, Z6 = ModuleSpec(4), ModuleSpec(6)


def _signed_full_sums(seq, m):
    """All (sum a_i x_i, sum a_i) over sign vectors, for rank-1 sequences."""
    for signs in itertools.product((1, -1), repeat=len(seq)):
        yield sum(s * x for s, (x,) in zip(signs, seq)) % m, sum(signs) % m


@pytest.mark.parametrize("x", range(5))
def test_repeated_pair_is_wzs(x):
    M = ModuleSpec(5)
    w = check_full(M, ((x,), (x,)), pm_one(5))
    assert w is not None
    assert sorted(w.a_weights) == [1, 4]
    assert w.b_weights == (1, 1)


def test_single_zero_needs_two_terms_with_b():
    assert check_full(Z4, ((0,),), pm_one(4)) is None
    w = check_full(Z4, ((0,),), pm_one(4, with_b=False))
    assert w == Witness((0,), (1,), None) or w.indices == (0,)


def test_one_three_mod_four_by_enumeration():
    seq = Z4.sequence([1, 3])
    assert (0, 0) not in set(_signed_full_sums(seq, 4))
    assert check_full(Z4, seq, pm_one(4)) is None


def test_check_full_rejects_empty():
    with pytest.raises(EmptySequence):
        check_full(Z4, (), pm_one(4))


def test_paper_free_sequences():
    for m, s in ((6, [0, 1, 2, 4]), (4, [0, 1, 2]), (8, [0, 1, 2, 4])):
        M = ModuleSpec(m)
        assert find_subsequence(M, M.sequence(s), pm_one(m)) is None
        assert brute_force_oracle(M, M.sequence(s), pm_one(m)) is None


def test_exact_length_two_pairs():
    M = ModuleSpec(10)
    seq = M.sequence([5, 1, 9, 9, 5, 1])
    w = find_subsequence(M, seq, pm_one(10), exact_length(4))
    assert w is not None and len(w) == 4
    assert verify_witness(M, seq, pm_one(10), w, exact_length(4))


def test_consecutive_interleaved_shape_by_enumeration():
    seq = Z4.sequence([0, 1, 0, 2, 0])
    windows = [seq[i:j] for i in range(5) for j in range(i + 1, 6)]
    assert len(windows) == 15
    expected = any((0, 0) in set(_signed_full_sums(w, 4)) for w in windows)
    assert expected is False
    assert (find_subsequence(Z4, seq, pm_one(4), CONSECUTIVE) is None) is not expected


@pytest.mark.parametrize("m", [4, 6, 8])
def test_odd_exact_length_absent_for_even_modulus(m):
    rng = random.Random(m)
    M = ModuleSpec(m)
    for _ in range(50):
        seq = M.sequence(rng.randrange(m) for _ in range(7))
        for L in (1, 3, 5, 7):
            assert find_subsequence(M, seq, pm_one(m), exact_length(L)) is None


def test_bad_constraints():
    with pytest.raises(BadConstraint):
        find_subsequence(Z4, Z4.sequence([1, 2]), pm_one(4), exact_length(3))
    with pytest.raises(BadConstraint):
        find_subsequence(Z4, Z4.sequence([1, 2]), pm_one(4), exact_length(0))
    with pytest.raises(EmptySequence):
        find_subsequence(Z4, (), pm_one(4))


def test_oracle_refuses_over_budget():
    M = ModuleSpec(8)
    cfg = WeightConfig.make(8, range(1, 8), range(1, 8))
    with pytest.raises(BudgetExceeded):
        brute_force_oracle(M, M.sequence([1] * 8), cfg)
    with pytest.raises(BudgetExceeded):
        brute_force_oracle(M, M.sequence([1] * 13), pm_one(8))


def test_oracle_examples():
    assert brute_force_oracle(Z4, Z4.sequence([0, 1, 2]), pm_one(4)) is None
    M8 = ModuleSpec(8)
    assert brute_force_oracle(M8, M8.sequence([0, 1, 2, 4]), pm_one(8)) is None


def test_verify_witness_rejects_tampering():
    seq = Z6.sequence([2, 2, 3])
    cfg = pm_one(6)
    w = find_subsequence(Z6, seq, cfg)
    assert verify_witness(Z6, seq, cfg, w)
    bad = Witness(w.indices, tuple(1 for _ in w.a_weights), w.b_weights)
    assert not verify_witness(Z6, seq, cfg, bad)
    assert not verify_witness(Z6, seq, cfg, Witness((), (), ()))
    assert not verify_witness(Z6, seq, cfg, Witness(w.indices, w.a_weights, None))


def test_witness_json_round_trip():
    w = Witness((0, 2), (1, 5), (1, 1))
    assert Witness.from_json(w.to_json()) == w


# -- properties ---------------------------------------------------------------


@st.composite
def instances(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    module, cfg, seq = random_instance(random.Random(seed), max_m=6, max_len=6)
    mode = draw(st.sampled_from(["any", "exact", "full", "consecutive"]))
    if mode == "exact":
        cons = exact_length(draw(st.integers(1, len(seq))))
    else:
        cons = {"any": ANY_NONEMPTY, "full": FULL_SEQUENCE, "consecutive": CONSECUTIVE}[mode]
    return module, cfg, seq, cons


@settings(max_examples=300, deadline=None)
@given(instances())
def test_dp_matches_oracle_and_witnesses_verify(inst):
    module, cfg, seq, cons = inst
    fast = find_subsequence(module, seq, cfg, cons)
    slow = brute_force_oracle(module, seq, cfg, cons)
    assert (fast is None) == (slow is None)
    for w in (fast, slow):
        if w is not None:
            assert verify_witness(module, seq, cfg, w, cons)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_dp_matches_pure_python_reference(seed):
    module, cfg, seq = random_instance(random.Random(seed), max_m=5, max_r=1, max_len=5)
    assert (find_subsequence(module, seq, cfg) is None) == naive_free(module, seq, cfg)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.data())
def test_translation_invariance_with_b_one(seed, data):
    module, cfg, seq = random_instance(random.Random(seed), max_len=6)
    cfg = WeightConfig.make(module.modulus, cfg.a_set, {1})
    x = data.draw(st.sampled_from(module.elements()))
    base = find_subsequence(module, seq, cfg) is None
    assert (find_subsequence(module, translate(module, seq, x), cfg) is None) == base


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_parity_of_witnesses(seed):
    rng = random.Random(seed)
    m = rng.choice([2, 4, 6, 8])
    M = ModuleSpec(m)
    seq = M.sequence(rng.randrange(m) for _ in range(rng.randint(1, 9)))
    w = find_subsequence(M, seq, pm_one(m))
    if w is not None:
        assert len(w) % 2 == 0


@pytest.mark.parametrize("n", [3, 5, 7])
def test_odd_modulus_full_length_witness_has_constant_signs(n):
    rng = random.Random(n)
    M = ModuleSpec(n)
    for _ in range(40):
        seq = M.sequence(rng.randrange(n) for _ in range(2 * n - 1))
        w = find_subsequence(M, seq, pm_one(n), exact_length(n))
        if w is not None:
            assert len(set(w.a_weights)) == 1
            assert sum(seq[i][0] for i in w.indices) % n == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_freeness_is_hereditary(seed):
    rng = random.Random(seed)
    module, cfg, seq = random_instance(rng, max_len=7)
    if find_subsequence(module, seq, cfg) is not None:
        return
    for L in range(1, len(seq)):
        for sub in itertools.combinations(seq, L):
            assert find_subsequence(module, sub, cfg) is None
