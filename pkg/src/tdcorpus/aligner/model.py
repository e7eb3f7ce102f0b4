"""Length-based bead cost model and the alignment value types."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

#: Bead kinds in tie-break order: earlier kinds win exact ties in the DP.
KINDS = ("1-1", "2-1", "1-2", "2-2", "1-0", "0-1")

#: Number of (source, target) sentences consumed by each bead kind.
KIND_SIZES = {
    "1-1": (1, 1),
    "2-1": (2, 1),
    "1-2": (1, 2),
    "2-2": (2, 2),
    "1-0": (1, 0),
    "0-1": (0, 1),
}

SUBSTITUTION_KINDS = frozenset(("1-1", "2-1", "1-2", "2-2"))

# 0.0099 is the combined 1-0/0-1 mass in the classic estimates; split evenly
# and rounded so the table sums to exactly 1.
DEFAULT_PRIORS = {
    "1-1": 0.89,
    "1-0": 0.005,
    "0-1": 0.005,
    "2-1": 0.0445,
    "1-2": 0.0445,
    "2-2": 0.011,
}

#: Upper bound (nats) on the length term of an insertion or deletion bead.
INDEL_LENGTH_CAP = 4.5

_SQRT1_2 = math.sqrt(0.5)
_LOG_SQRT_PI = 0.5 * math.log(math.pi)
ERFC_SERIES_FROM = 26.0


class AlignmentError(ValueError):
    """Raised when an alignment request cannot be honoured."""


@dataclass(frozen=True)
class AlignParams:
    c: float = 1.0
    s2: float = 6.8
    bead_priors: dict = field(default_factory=lambda: dict(DEFAULT_PRIORS))
    dict_weight: float = 1.0
    chunk_limit: int = 10_000

    def __post_init__(self):
        if set(self.bead_priors) != set(KINDS):
            raise ValueError(f"bead_priors must define exactly {KINDS}")
        if any(p <= 0 for p in self.bead_priors.values()):
            raise ValueError("bead priors must be positive")
        if abs(sum(self.bead_priors.values()) - 1.0) > 1e-6:
            raise ValueError("bead priors must sum to 1")
        if not self.s2 > 0:
            raise ValueError("s2 must be positive")
        if not self.c > 0:
            raise ValueError("c must be positive")
        if self.dict_weight < 0:
            raise ValueError("dict_weight must be nonnegative")
        if self.chunk_limit < 100:
            raise ValueError("chunk_limit must be at least 100")

    def prior_costs(self):
        """-log(prior) per kind, in KINDS order."""
        return tuple(-math.log(self.bead_priors[k]) for k in KINDS)

    def transposed(self):
        """Parameters for aligning target against source."""
        p = self.bead_priors
        swapped = {
            "1-1": p["1-1"], "2-2": p["2-2"],
            "2-1": p["1-2"], "1-2": p["2-1"],
            "1-0": p["0-1"], "0-1": p["1-0"],
        }
        return AlignParams(1.0 / self.c, self.s2, swapped, self.dict_weight, self.chunk_limit)


@dataclass(frozen=True)
class Bead:
    kind: str
    src_span: tuple  # (start, stop), half-open
    tgt_span: tuple
    cost: float

    def shifted(self, src_offset, tgt_offset):
        return Bead(
            self.kind,
            (self.src_span[0] + src_offset, self.src_span[1] + src_offset),
            (self.tgt_span[0] + tgt_offset, self.tgt_span[1] + tgt_offset),
            self.cost,
        )


def neg_log_erfc(x):
    """-log(erfc(x)) for x >= 0.

    Below ERFC_SERIES_FROM this is the C library erfc (fdlibm rational
    approximations, error below one ulp). From there on erfc nears the
    subnormal range and loses bits, so the asymptotic expansion
    erfc(x) ~ exp(-x^2) / (x sqrt(pi)) * sum_n (-1)^n (2n-1)!! / (2x^2)^n
    is used with seven correction terms (truncation error < 1e-16 at x = 26).
    The compiled kernel carries an identical copy of this routine.
    """
    if x < ERFC_SERIES_FROM:
        return -math.log(math.erfc(x))
    inv = 0.5 / (x * x)
    term = 1.0
    tail = 0.0
    for n in range(1, 8):
        term *= -(2 * n - 1) * inv
        tail += term
    return x * x + math.log(x) + _LOG_SQRT_PI - math.log1p(tail)


def substitution_length_cost(l1, l2, c, s2):
    """-log(2 * (1 - Phi(|delta|))) for a bead whose spans have l1 and l2 chars."""
    if l1 == 0 and l2 == 0:
        return 0.0
    delta = (l2 - l1 * c) / math.sqrt((l1 + l2) / 2.0 * s2)
    return neg_log_erfc(abs(delta) * _SQRT1_2)


def indel_length_cost(l, s2):
    """Length term of a 1-0 / 0-1 bead, capped at INDEL_LENGTH_CAP."""
    z = l / math.sqrt(l * s2 + 1.0)
    cost = neg_log_erfc(z * _SQRT1_2)
    return cost if cost < INDEL_LENGTH_CAP else INDEL_LENGTH_CAP


def length_cost(l1, l2, kind, params=None):
    """Cost in nats of a bead of ``kind`` spanning l1 source and l2 target chars."""
    params = params or AlignParams()
    if kind not in KIND_SIZES:
        raise ValueError(f"unknown bead kind {kind!r}")
    prior = -math.log(params.bead_priors[kind])
    if kind == "1-0":
        return prior + indel_length_cost(l1, params.s2)
    if kind == "0-1":
        return prior + indel_length_cost(l2, params.s2)
    return prior + substitution_length_cost(l1, l2, params.c, params.s2)
