"""Seeded train/dev/test splitting and corpus-level BLEU."""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

MAX_ORDER = 4


@dataclass(frozen=True)
class SplitSpec:
    dev_size: int
    test_size: int
    seed: int


def split(pairs, spec):
    """Shuffle with ``spec.seed`` and cut off dev and test; the rest is train."""
    pairs = list(pairs)
    if spec.dev_size < 0 or spec.test_size < 0:
        raise ValueError("split sizes must be nonnegative")
    if spec.dev_size + spec.test_size >= len(pairs):
        raise ValueError(
            f"dev ({spec.dev_size}) + test ({spec.test_size}) must be below the corpus size ({len(pairs)})"
        )
    order = list(range(len(pairs)))
    random.Random(spec.seed).shuffle(order)
    dev = [pairs[i] for i in order[:spec.dev_size]]
    test = [pairs[i] for i in order[spec.dev_size:spec.dev_size + spec.test_size]]
    rest = sorted(order[spec.dev_size + spec.test_size:])
    train = [pairs[i] for i in rest]
    return train, dev, test


@dataclass(frozen=True)
class BleuReport:
    matches: tuple  # clipped n-gram matches, n = 1..4
    totals: tuple  # hypothesis n-gram counts
    hyp_len: int
    ref_len: int
    brevity_penalty: float
    score: float
    smoothed: bool = False

    @property
    def precisions(self):
        """Modified precisions as exact fractions (None where the hypothesis has no n-grams)."""
        return tuple(Fraction(m, t) if t else None for m, t in zip(self.matches, self.totals))

    def format(self, percent=False):
        scale = 100.0 if percent else 1.0
        ps = " ".join(
            f"p{n}={m}/{t}" + (f" ({scale * m / t:.4f})" if t else "")
            for n, (m, t) in enumerate(zip(self.matches, self.totals), 1)
        )
        return (
            f"BLEU = {scale * self.score:.4f}\n{ps}\n"
            f"BP = {self.brevity_penalty:.6f} (hyp_len={self.hyp_len}, ref_len={self.ref_len})\n"
        )


def ngram_stats(hyp, ref, max_order=MAX_ORDER):
    """Clipped matches and hypothesis n-gram totals for one sentence pair."""
    matches = [0] * max_order
    totals = [0] * max_order
    for n in range(1, max_order + 1):
        h = Counter(tuple(hyp[i:i + n]) for i in range(len(hyp) - n + 1))
        r = Counter(tuple(ref[i:i + n]) for i in range(len(ref) - n + 1))
        matches[n - 1] = sum(min(c, r[g]) for g, c in h.items())
        totals[n - 1] = max(len(hyp) - n + 1, 0)
    return matches, totals


def brevity_penalty(hyp_len, ref_len):
    if hyp_len > ref_len:
        return 1.0
    if hyp_len == 0:
        return 0.0
    return math.exp(1.0 - ref_len / hyp_len)


def bleu(hypotheses, references, smooth=False):
    """Corpus BLEU over tokenised sentences with one reference each.

    Counts are summed over the corpus before dividing. With ``smooth``,
    orders 2..4 get add-one smoothing of numerator and denominator.
    """
    if len(hypotheses) != len(references):
        raise ValueError(f"{len(hypotheses)} hypotheses but {len(references)} references")
    if not hypotheses:
        raise ValueError("BLEU of an empty corpus is undefined")
    matches = [0] * MAX_ORDER
    totals = [0] * MAX_ORDER
    hyp_len = ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        m, t = ngram_stats(list(hyp), list(ref))
        for i in range(MAX_ORDER):
            matches[i] += m[i]
            totals[i] += t[i]
        hyp_len += len(hyp)
        ref_len += len(ref)

    bp = brevity_penalty(hyp_len, ref_len)
    log_sum = 0.0
    score = None
    for i in range(MAX_ORDER):
        m, t = matches[i], totals[i]
        if smooth and i > 0:
            m, t = m + 1, t + 1
        if m == 0 or t == 0:
            score = 0.0
            break
        log_sum += math.log(m / t) / MAX_ORDER
    if score is None:
        score = bp * math.exp(log_sum)
    return BleuReport(tuple(matches), tuple(totals), hyp_len, ref_len, bp, score, smooth)


def tokenize(line):
    return line.split()
