"""Arithmetic in M = Z_m^r over the scalar ring Z_m, and sequence primitives.

Elements are tuples of ``rank`` residues; sequences are tuples of elements.
Elements are ordered lexicographically on their coordinates, which coincides
with the order of their integer codes (base-``m`` digits, most significant
coordinate first).
"""

from __future__ import annotations

import itertools
import math
import sys
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Sequence as _Seq

from .errors import CardinalityOverflow, NonUnitScalar

if TYPE_CHECKING:
    from .weights import WeightConfig

Element = tuple[int, ...]
Sequence = tuple[Element, ...]

# Per-element state arrays are sized |M| * m; keep both inside int64.
_MAX_CARDINALITY = 2**62


@dataclass(frozen=True)
class ModuleSpec:
    modulus: int
    rank: int = 1
    cardinality: int = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not isinstance(self.modulus, int) or self.modulus < 2:
            raise ValueError(f"modulus must be an integer >= 2, got {self.modulus!r}")
        if not isinstance(self.rank, int) or self.rank < 1:
            raise ValueError(f"rank must be an integer >= 1, got {self.rank!r}")
        card = self.modulus**self.rank
        if card > _MAX_CARDINALITY or card > sys.maxsize:
            raise CardinalityOverflow(
                f"|Z_{self.modulus}^{self.rank}| = {card} exceeds the native integer range"
            )
        object.__setattr__(self, "cardinality", card)

    def __str__(self) -> str:
        if self.rank == 1:
            return f"Z_{self.modulus}"
        return f"Z_{self.modulus}^{self.rank}"

    # -- elements -------------------------------------------------------

    def element(self, value: int | Iterable[int]) -> Element:
        """Coerce an int (rank 1 only) or an iterable of ints to a reduced element."""
        if isinstance(value, int):
            if self.rank != 1:
                raise ValueError(f"bare integer {value} given for rank-{self.rank} module")
            return (value % self.modulus,)
        coords = tuple(int(c) % self.modulus for c in value)
        if len(coords) != self.rank:
            raise ValueError(f"element {tuple(value)} does not have {self.rank} coordinates")
        return coords

    def sequence(self, terms: Iterable[int | Iterable[int]]) -> Sequence:
        return tuple(self.element(t) for t in terms)

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def elements(self) -> list[Element]:
        """All elements, in increasing order."""
        return [tuple(c) for c in itertools.product(range(self.modulus), repeat=self.rank)]

    def encode(self, x: Element) -> int:
        code = 0
        for c in x:
            code = code * self.modulus + c
        return code

    def decode(self, code: int) -> Element:
        coords = []
        for _ in range(self.rank):
            code, c = divmod(code, self.modulus)
            coords.append(c)
        return tuple(reversed(coords))

    def add(self, x: Element, y: Element) -> Element:
        m = self.modulus
        return tuple((a + b) % m for a, b in zip(x, y))

    def neg(self, x: Element) -> Element:
        m = self.modulus
        return tuple((-a) % m for a in x)

    def smul(self, u: int, x: Element) -> Element:
        m = self.modulus
        return tuple((u * a) % m for a in x)

    def total(self, xs: Iterable[Element]) -> Element:
        acc = self.zero
        for x in xs:
            acc = self.add(acc, x)
        return acc

    # -- scalars --------------------------------------------------------

    @cached_property
    def units(self) -> tuple[int, ...]:
        m = self.modulus
        return tuple(u for u in range(1, m) if math.gcd(u, m) == 1)

    def is_unit(self, u: int) -> bool:
        return math.gcd(u % self.modulus, self.modulus) == 1

    def inverse(self, u: int) -> int:
        if not self.is_unit(u):
            raise NonUnitScalar(f"{u} is not a unit mod {self.modulus}")
        return pow(u % self.modulus, -1, self.modulus)

    @cached_property
    def addition_table(self):
        """``table[i, j]`` is the code of ``decode(i) + decode(j)``."""
        import numpy as np

        n, m, r = self.cardinality, self.modulus, self.rank
        digits = np.array([self.decode(i) for i in range(n)], dtype=np.int64).reshape(n, r)
        summed = (digits[:, None, :] + digits[None, :, :]) % m
        weights = m ** np.arange(r - 1, -1, -1, dtype=np.int64)
        return (summed * weights).sum(axis=2).astype(np.int64)


# -- sequence primitives ----------------------------------------------------


def translate(module: ModuleSpec, seq: _Seq[Element], x: Element) -> Sequence:
    return tuple(module.add(t, x) for t in seq)


def scale(module: ModuleSpec, seq: _Seq[Element], u: int) -> Sequence:
    if not module.is_unit(u):
        raise NonUnitScalar(f"scaling by {u} is not invertible mod {module.modulus}")
    return tuple(module.smul(u, t) for t in seq)


def concatenate(*seqs: _Seq[Element]) -> Sequence:
    return tuple(itertools.chain.from_iterable(seqs))


def translation_valid(cfg: WeightConfig) -> bool:
    """Translates preserve weighted zero-sums exactly when the B-set is {1}."""
    return cfg.b_set is not None and cfg.b_set == frozenset({1})


def symmetry_images(
    module: ModuleSpec, seq: _Seq[Element], cfg: WeightConfig
) -> Iterable[Sequence]:
    """Every image of ``seq`` under the affine symmetries valid for ``cfg``."""
    shifts = module.elements() if translation_valid(cfg) else [module.zero]
    for u in module.units:
        scaled = scale(module, seq, u)
        for x in shifts:
            yield translate(module, scaled, x)


def canonical_form(
    module: ModuleSpec,
    seq: _Seq[Element],
    cfg: WeightConfig,
    order_insensitive: bool = False,
) -> Sequence:
    """Lexicographically least symmetry image of ``seq``.

    Unit scalings are always used; translations only when ``cfg.b_set`` is
    exactly {1}. With ``order_insensitive`` each image is sorted first
    (multiset semantics for the D and E constants). Term order is never
    touched otherwise.
    """
    best = None
    for img in symmetry_images(module, seq, cfg):
        if order_insensitive:
            img = tuple(sorted(img))
        if best is None or img < best:
            best = img
    return best if best is not None else tuple(seq)
