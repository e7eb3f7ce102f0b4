"""Synthetic bitexts with known alignments, for evaluation and benchmarks."""

from __future__ import annotations

import math
import random
import string
from dataclasses import dataclass

from .aligner.model import KIND_SIZES
from .langid import read_seed
from .records import DocumentRecord
from .segmenter import Sentence

DEFAULT_MIXTURE = {"1-1": 0.85, "2-1": 0.05, "1-2": 0.05, "1-0": 0.025, "0-1": 0.025}


@dataclass
class SyntheticDoc:
    src: list
    tgt: list
    gold: list  # (kind, src_span, tgt_span)


def _word(rng, lo=3, hi=10):
    return "".join(rng.choices(string.ascii_lowercase, k=rng.randint(lo, hi)))


def make_lexicon(rng, size=200):
    """``size`` (source, target) pairs of distinct random words."""
    seen = set()
    lex = []
    while len(lex) < size:
        s, t = _word(rng), _word(rng)
        if s in seen or t in seen:
            continue
        seen.update((s, t))
        lex.append((s, t))
    return lex


class BitextGenerator:
    """Sentences whose lengths follow the length model, with a planted lexicon.

    A source sentence draws its length from a log-normal with median
    ``length_median`` chars and log-sd ``length_sigma`` (clipped to
    ``length_bounds``), then fills it with lexicon words (probability ``lexicon_rate``) or fresh filler.
    The target side of a bead gets length ~ N(c*l1, s2*l1) and holds the
    translations of the source lexicon words, padded with filler.
    """

    def __init__(self, seed=0, lexicon_size=200, c=1.0, s2=6.8, length_median=129.0,
                 length_sigma=0.5, length_bounds=(10, 600), lexicon_rate=0.7, mixture=None):
        self.rng = random.Random(seed)
        self.lexicon = make_lexicon(self.rng, lexicon_size)
        self.c = c
        self.s2 = s2
        self.length_median = length_median
        self.length_sigma = length_sigma
        self.length_bounds = length_bounds
        self.lexicon_rate = lexicon_rate
        mixture = mixture or DEFAULT_MIXTURE
        self.kinds = list(mixture)
        self.weights = [mixture[k] for k in self.kinds]

    def _source_sentence(self):
        rng = self.rng
        lo, hi = self.length_bounds
        target_len = rng.lognormvariate(math.log(self.length_median), self.length_sigma)
        target_len = min(max(round(target_len), lo), hi)
        words, trans, n = [], [], 0
        while n < target_len:
            if rng.random() < self.lexicon_rate:
                s, t = rng.choice(self.lexicon)
                trans.append(t)
            else:
                s = _word(rng)
            words.append(s)
            n += len(s)
        return " ".join(words) + ".", trans

    def _target_sentence(self, length, trans):
        rng = self.rng
        words, n = [], 0
        for t in trans:
            if n + len(t) > length - 1:
                break
            words.append(t)
            n += len(t)
        rest = length - 1 - n  # one char for the final period
        while rest > 0:
            k = min(rest, rng.randint(3, 10))
            if 0 < rest - k < 3:
                k = rest
            words.append("".join(rng.choices(string.ascii_lowercase, k=k)))
            rest -= k
        rng.shuffle(words)
        return " ".join(words) + "."

    def _target_length(self, l1):
        l2 = round(self.rng.gauss(self.c * l1, math.sqrt(self.s2 * l1)))
        return max(l2, 4)

    def document(self, n_units):
        """A document of ``n_units`` planted beads."""
        rng = self.rng
        src, tgt, gold = [], [], []
        for _ in range(n_units):
            kind = rng.choices(self.kinds, self.weights)[0]
            a, b = KIND_SIZES[kind]
            i, j = len(src), len(tgt)
            if kind == "0-1":
                text, _ = self._source_sentence()
                tgt.append(Sentence.from_text(self._target_sentence(Sentence.from_text(text).char_len, [])))
            elif kind == "1-0":
                text, _ = self._source_sentence()
                src.append(Sentence.from_text(text))
            elif b == 1:
                texts, trans = [], []
                for _ in range(a):
                    t, tr = self._source_sentence()
                    texts.append(t)
                    trans += tr
                sents = [Sentence.from_text(t) for t in texts]
                src.extend(sents)
                l2 = self._target_length(sum(s.char_len for s in sents))
                tgt.append(Sentence.from_text(self._target_sentence(l2, trans)))
            else:  # 1-2: one source sentence, its translation split in two
                text, trans = self._source_sentence()
                sent = Sentence.from_text(text)
                src.append(sent)
                l2 = self._target_length(sent.char_len)
                cut = rng.randint(max(4, l2 // 3), max(4, l2 - l2 // 3))
                half = len(trans) // 2
                tgt.append(Sentence.from_text(self._target_sentence(cut, trans[:half])))
                tgt.append(Sentence.from_text(self._target_sentence(max(l2 - cut, 4), trans[half:])))
            gold.append((kind, (i, i + a), (j, j + b)))
        return SyntheticDoc(src, tgt, gold)

    def corpus(self, n_docs, units=(20, 40)):
        return [self.document(self.rng.randint(*units)) for _ in range(n_docs)]


def bead_f1(predicted, gold):
    """Bead-level F1 over exact (src_span, tgt_span) matches."""
    pred = {(tuple(b.src_span), tuple(b.tgt_span)) for b in predicted}
    ref = {(tuple(s), tuple(t)) for _, s, t in gold}
    if not pred or not ref:
        return 1.0 if pred == ref else 0.0
    hit = len(pred & ref)
    if hit == 0:
        return 0.0
    p, r = hit / len(pred), hit / len(ref)
    return 2 * p * r / (p + r)


def seed_pairs():
    """Line-aligned (pt, en) sentence pairs from the bundled seed corpora."""
    return list(zip(read_seed("pt"), read_seed("en")))


def seed_records(n_records, sentences=(4, 12), seed=0, id_prefix="syn"):
    """Bilingual records whose abstracts are random runs of seed sentence pairs."""
    rng = random.Random(seed)
    pairs = seed_pairs()
    areas = ("ciências da saúde", "ciências humanas", "engenharias", "ciências agrárias",
             "ciências biológicas", "ciências exatas e da terra", "ciências sociais aplicadas",
             "linguística, letras e artes", "multidisciplinar")
    out = []
    for r in range(n_records):
        chosen = rng.sample(pairs, rng.randint(*sentences))
        out.append(DocumentRecord(
            id=f"{id_prefix}{r:07d}",
            year=rng.randint(2013, 2016),
            university="universidade sintética",
            title_native=chosen[0][0][:60],
            doc_type=rng.choice(("thesis", "dissertation")),
            knowledge_area=rng.choice(areas),
            abstract_native=" ".join(p for p, _ in chosen),
            abstract_foreign=" ".join(e for _, e in chosen),
        ))
    return out
