import random

import pytest

from wzsconst.algebra import ModuleSpec
from wzsconst.weights import WeightConfig

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def record(name: str, passed: bool, detail: str = "") -> None:
        _ACCEPTANCE.append((name, passed, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        mark = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{mark}] {name}" + (f": {detail}" if detail else ""))


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("WZS_CACHE_DIR", str(tmp_path / "cache"))


def random_instance(rng: random.Random, max_m=8, max_r=2, max_len=8, allow_absent_b=True):
    """A random (module, weights, sequence) triple for property checks."""
    m = rng.randint(2, max_m)
    r = rng.randint(1, max_r)
    module = ModuleSpec(m, r)
    nonzero = list(range(1, m))
    a = rng.sample(nonzero, rng.randint(1, min(3, len(nonzero))))
    if allow_absent_b and rng.random() < 1 / 3:
        b = None
    else:
        b = rng.sample(nonzero, rng.randint(1, min(2, len(nonzero))))
    cfg = WeightConfig.make(m, a, b)
    k = rng.randint(1, max_len)
    elems = module.elements()
    seq = tuple(rng.choice(elems) for _ in range(k))
    return module, cfg, seq
