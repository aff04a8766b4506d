import json

import pytest

from wzsconst.suite import CLAIMS, SuiteConfig, report_json, report_text, run_suite, scan_conjectures


def _by_id(rows):
    out = {}
    for r in rows:
        out.setdefault(r.claim_id, []).append(r)
    return out


def test_default_suite_all_verified():
    rows = run_suite()
    assert rows
    assert {r.status for r in rows} == {"verified"}
    ids = _by_id(rows)
    assert [r.lhs for r in ids["remark-gap"]] == [2, 1, 1]
    assert [r.lhs for r in ids["sec5-odd"]] == [5, 9, 13]
    assert "lemma-3.3-k1" in ids and len(ids["lemma-3.3"]) == 29


def test_claim_filter():
    rows = run_suite(SuiteConfig(claims=["thm-3.2"], c_moduli=[2, 3]))
    assert [r.claim_id for r in rows] == ["thm-3.2", "thm-3.2"]
    # C_A(2) = C_A(3) = 2: any two nonzero residues mod 3 agree up to sign
    assert [r.rhs for r in rows] == [4, 4]


def test_thm_3_4_uses_k_at_least_two():
    rows = run_suite(SuiteConfig(claims=["thm-3.4"], d_moduli=[2, 3, 5]))
    assert [r.rhs for r in rows] == [4, 4, 6]
    assert all(r.status == "verified" for r in rows)


def test_budget_zero_skips_everything():
    rows = run_suite(SuiteConfig(budget=0))
    assert rows and all(r.status == "skipped" for r in rows)


def test_small_budget_skips_instead_of_guessing():
    rows = run_suite(SuiteConfig(claims=["sec5-odd"], e_odd=[7], budget=5))
    assert [r.status for r in rows] == ["skipped", "skipped"]
    assert "budget" in rows[0].reason


def test_violation_attaches_certificates():
    from wzsconst.suite import _Evaluator
    from wzsconst.algebra import ModuleSpec
    from wzsconst.weights import pm_one

    ev = _Evaluator(SuiteConfig())
    M = ModuleSpec(6)

    def wrong():
        c = ev.const(pm_one(6), M, "D")
        return c.value, 4, [c]

    row = ev.row("remark-D6", {"m": 6}, wrong, "==")
    assert row.status == "violated"
    assert row.certificates and row.certificates[0]["value"] == 5


def test_config_validation():
    with pytest.raises(ValueError):
        SuiteConfig.from_dict({"nope": 1})
    with pytest.raises(ValueError):
        SuiteConfig.from_dict({"claims": ["thm-9.9"]})
    cfg = SuiteConfig.from_dict({"claims": list(CLAIMS[:2]), "budget": 100})
    assert cfg.budget == 100


def test_conjecture_rows_are_evidence_only():
    rows = scan_conjectures(range(2, 11))
    statuses = {r.status for r in rows}
    assert statuses <= {"consistent", "counterexample", "skipped"}
    e_even = [r for r in rows if r.claim_id == "conj-E-even" and r.status != "skipped"]
    assert [r.parameters["m"] for r in e_even] == [2, 4, 6, 8, 10]
    pow2 = [r for r in rows if r.claim_id == "conj-D-pow2" and r.status != "skipped"]
    assert [r.parameters["m"] for r in pow2] == [2, 4, 8]


def test_reports_are_deterministic():
    cfg = SuiteConfig(claims=["remark", "sec4"])
    a = report_json(run_suite(cfg), cfg, timestamp="t")
    b = report_json(run_suite(cfg), cfg, timestamp="t")
    assert a == b
    doc = json.loads(a)
    assert doc["summary"] == {"verified": len(doc["claims"])}
    text = report_text(run_suite(cfg))
    assert text.splitlines()[0].startswith("claim")
    assert "remark-D6" in text


@pytest.mark.slow
def test_sec4_with_rank_three_consecutive():
    rows = run_suite(SuiteConfig(claims=["sec4"], z2_c_ranks=[1, 2, 3]))
    assert len(rows) == 9
    assert all(r.status == "verified" for r in rows)
