"""Weight sets A and (optional) B."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Optional

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightConfig:
    """Weights acting on a sequence over Z_m^r.

    ``b_set=None`` is the classical A-weighted setting: only the module
    congruence sum(a_i x_i) = 0 is imposed.
    """

    modulus: int
    a_set: frozenset
    b_set: Optional[frozenset] = None

    def __post_init__(self) -> None:
        m = self.modulus
        a = frozenset(int(v) % m for v in self.a_set)
        if not a:
            raise ValueError("A must be nonempty")
        if 0 in a:
            raise ValueError("A must not contain 0 (mod m)")
        object.__setattr__(self, "a_set", a)
        if self.b_set is not None:
            b = frozenset(int(v) % m for v in self.b_set)
            if not b:
                raise ValueError("B must be nonempty when given")
            if 0 in b:
                raise ValueError("B must not contain 0 (mod m)")
            object.__setattr__(self, "b_set", b)

    @classmethod
    def make(cls, modulus: int, a: Iterable[int], b: Iterable[int] | None = None) -> "WeightConfig":
        return cls(modulus, frozenset(a), None if b is None else frozenset(b))

    @property
    def has_b(self) -> bool:
        return self.b_set is not None

    def pairs(self) -> list[tuple[int, int]]:
        """All (a, b) weight pairs in sorted order; b is 1 as a placeholder without B."""
        bs = sorted(self.b_set) if self.b_set is not None else [1]
        return [(a, b) for a in sorted(self.a_set) for b in bs]

    def a_units_only(self) -> bool:
        from math import gcd

        return all(gcd(a, self.modulus) == 1 for a in self.a_set)

    def b_units_only(self) -> bool:
        from math import gcd

        return self.b_set is not None and all(gcd(b, self.modulus) == 1 for b in self.b_set)

    def classical(self) -> "WeightConfig":
        """Same A-set with the B-constraint dropped."""
        return WeightConfig(self.modulus, self.a_set, None)

    def label(self) -> str:
        def fmt(s):
            return "{" + ",".join(str(v) for v in sorted(s)) + "}"

        b = "-" if self.b_set is None else fmt(self.b_set)
        return f"A={fmt(self.a_set)} B={b}"


def parse_weight_set(text: str, modulus: int) -> frozenset:
    """Parse ``"+-1"``, ``"1,3"``, ``"-1,2"``, ``"+-1,2"`` into reduced residues.

    ``+-k`` expands to {k, -k}. Residues colliding after reduction mod m are
    collapsed with a warning (e.g. ``+-1`` at m=2).
    """
    raw: list[int] = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            raise ValueError(f"empty entry in weight set {text!r}")
        if tok.startswith(("+-", "±")):
            v = int(tok[2:] if tok.startswith("+-") else tok[1:])
            raw.extend([v, -v])
        else:
            raw.append(int(tok))
    reduced = [v % modulus for v in raw]
    out = frozenset(reduced)
    if len(out) != len(reduced):
        log.warning("weight set %r collapses to %s mod %d", text, sorted(out), modulus)
    if 0 in out:
        raise ValueError(f"weight set {text!r} contains 0 mod {modulus}")
    return out


PLUS_MINUS_ONE = "+-1"


def pm_one(modulus: int, with_b: bool = True) -> WeightConfig:
    """A = {+1, -1}; B = {1} when ``with_b`` else absent."""
    return WeightConfig.make(modulus, {1, -1}, {1} if with_b else None)


def ones(modulus: int, with_b: bool = True) -> WeightConfig:
    """A = {1}; B = {1} when ``with_b`` else absent."""
    return WeightConfig.make(modulus, {1}, {1} if with_b else None)
