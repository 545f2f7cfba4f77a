"""Three-valued belief algebra.

An agent's world model assigns one of three truth values to each of n
propositions, numbered 1..n. Beyond plain true/false, the third value
``Unknown`` lets an agent represent missing information explicitly; it is
the identity element of the pairwise fusion operator, while a head-on
disagreement between two certain values collapses back to ``Unknown``.

Beliefs are immutable. Internally a belief is a read-only int8 array of
codes (FALSE=0, UNKNOWN=1, TRUE=2); the numeric reading {0, 0.5, 1} is
applied only inside the error metric so that the algebra itself never
compares floats.
"""

from __future__ import annotations

from enum import IntEnum
from typing import Iterable, Sequence

import numpy as np


class TruthValue(IntEnum):
    """Truth value of a single proposition."""

    FALSE = 0
    UNKNOWN = 1
    TRUE = 2

    @property
    def numeric(self) -> float:
        """Numeric reading used by error metrics: 0.0, 0.5 or 1.0."""
        return (0.0, 0.5, 1.0)[self.value]

    @property
    def symbol(self) -> str:
        return "0u1"[self.value]


FALSE = TruthValue.FALSE
UNKNOWN = TruthValue.UNKNOWN
TRUE = TruthValue.TRUE

_SYMBOL_TO_CODE = {"0": 0, "u": 1, "1": 2}

# Numeric map, indexed by code.
_NUMERIC = np.array([0.0, 0.5, 1.0])

# Pairwise fusion, indexed [a, b]: Unknown is the identity, agreement is
# preserved, and contradiction between certain values yields Unknown.
_FUSION = np.array(
    [
        [0, 0, 1],
        [0, 1, 2],
        [1, 2, 2],
    ],
    dtype=np.int8,
)


class Belief:
    """An immutable n-tuple of truth values, one per proposition.

    Proposition indices are 1-based throughout the public API, matching
    the usual p_1..p_n numbering of the model.
    """

    __slots__ = ("codes",)

    def __init__(self, values: Iterable[TruthValue | int]):
        codes = np.array(list(values), dtype=np.int8)
        if codes.ndim != 1 or codes.size == 0:
            raise ValueError("a belief needs at least one proposition")
        if codes.min() < 0 or codes.max() > 2:
            raise ValueError("truth value codes must be 0 (false), 1 (unknown) or 2 (true)")
        codes.setflags(write=False)
        self.codes = codes

    @classmethod
    def _from_codes(cls, codes: np.ndarray) -> "Belief":
        # Internal fast path: caller guarantees a fresh, valid int8 array.
        self = object.__new__(cls)
        codes.setflags(write=False)
        self.codes = codes
        return self

    @classmethod
    def unknown(cls, n: int) -> "Belief":
        """The totally uncertain belief over n propositions."""
        return cls._from_codes(np.full(n, 1, dtype=np.int8))

    @classmethod
    def from_string(cls, text: str) -> "Belief":
        """Parse a compact belief string over the alphabet {0, u, 1}."""
        try:
            return cls([_SYMBOL_TO_CODE[c] for c in text])
        except KeyError as exc:
            raise ValueError(f"invalid belief symbol {exc.args[0]!r}") from None

    def to_string(self) -> str:
        return "".join("0u1"[c] for c in self.codes)

    def value_at(self, index: int) -> TruthValue:
        """Truth value of proposition ``index`` (1-based)."""
        if not 1 <= index <= self.codes.size:
            raise ValueError(f"proposition index {index} out of range 1..{self.codes.size}")
        return TruthValue(int(self.codes[index - 1]))

    def certainty(self) -> int:
        """Number of propositions with a certain (non-Unknown) value."""
        return int(self.codes.size - np.count_nonzero(self.codes == 1))

    def is_certain(self) -> bool:
        return not bool((self.codes == 1).any())

    def __len__(self) -> int:
        return self.codes.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Belief):
            return NotImplemented
        return np.array_equal(self.codes, other.codes)

    def __hash__(self) -> int:
        return hash(self.codes.tobytes())

    def __repr__(self) -> str:
        return f"Belief({self.to_string()!r})"


class GroundTruth:
    """The hidden state of the world: a certain value for every proposition."""

    __slots__ = ("codes",)

    def __init__(self, values: Iterable[TruthValue | int]):
        codes = np.array(list(values), dtype=np.int8)
        if codes.ndim != 1 or codes.size == 0:
            raise ValueError("a ground truth needs at least one proposition")
        if not np.isin(codes, (0, 2)).all():
            raise ValueError("ground truth values must be certain (false or true)")
        codes.setflags(write=False)
        self.codes = codes

    @classmethod
    def from_bools(cls, flags: Sequence[bool]) -> "GroundTruth":
        return cls([2 if f else 0 for f in flags])

    def value_at(self, index: int) -> TruthValue:
        if not 1 <= index <= self.codes.size:
            raise ValueError(f"proposition index {index} out of range 1..{self.codes.size}")
        return TruthValue(int(self.codes[index - 1]))

    def as_belief(self) -> Belief:
        """The fully certain belief that matches this ground truth exactly."""
        return Belief._from_codes(self.codes.copy())

    def to_string(self) -> str:
        return "".join("0?1"[c] for c in self.codes)

    def __len__(self) -> int:
        return self.codes.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroundTruth):
            return NotImplemented
        return np.array_equal(self.codes, other.codes)

    def __repr__(self) -> str:
        return f"GroundTruth({self.to_string()!r})"


def fuse_value(a: TruthValue, b: TruthValue) -> TruthValue:
    """Fuse two truth values with the pairwise operator (see _FUSION)."""
    return TruthValue(int(_FUSION[a, b]))


def fuse_beliefs(a: Belief, b: Belief) -> Belief:
    """Element-wise fusion of two beliefs of equal length."""
    if len(a) != len(b):
        raise ValueError(f"belief length mismatch: {len(a)} vs {len(b)}")
    return Belief._from_codes(_FUSION[a.codes, b.codes])


def is_evidence(e: Belief) -> bool:
    """True when ``e`` is certain about exactly one proposition."""
    return int(np.count_nonzero(e.codes != 1)) == 1


def update_with_evidence(belief: Belief, evidence: Belief) -> Belief:
    """Incorporate a single-proposition observation into a belief.

    Evidence must be Unknown everywhere except at exactly one index, so
    the update can only touch that one proposition.
    """
    if len(belief) != len(evidence):
        raise ValueError(f"belief length mismatch: {len(belief)} vs {len(evidence)}")
    if not is_evidence(evidence):
        raise ValueError("evidence must be certain about exactly one proposition")
    return fuse_beliefs(belief, evidence)


def uncertain_indices(belief: Belief) -> set[int]:
    """The 1-based indices of all propositions the belief is unsure about."""
    return {int(i) + 1 for i in np.flatnonzero(belief.codes == 1)}


def belief_error(belief: Belief, truth: GroundTruth) -> float:
    """Mean absolute numeric difference between a belief and the truth.

    An exactly matching belief scores 0; a totally uncertain one scores
    0.5; the worst possible (certain and wrong everywhere) scores 1.
    """
    if len(belief) != len(truth):
        raise ValueError(f"belief length mismatch: {len(belief)} vs {len(truth)}")
    return float(np.abs(_NUMERIC[belief.codes] - _NUMERIC[truth.codes]).mean())
