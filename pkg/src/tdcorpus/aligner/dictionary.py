"""Bilingual dictionary bootstrapped from a length-only alignment.

Association is the Dice coefficient over substitution beads: a word is
counted once per bead it occurs in, and so is a word pair.
"""

from __future__ import annotations

import csv
from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np

from .model import SUBSTITUTION_KINDS

_STRIP = "".join(sorted(set(
    "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~" "«»“”‘’…–—¿¡·"
)))
MIN_WORD_LEN = 3


def words(text):
    """Whitespace tokens with surrounding punctuation removed (may be empty strings)."""
    return [w.strip(_STRIP) for w in text.split()]


def content_words(text):
    """Word types eligible for the dictionary."""
    return {w for w in words(text) if len(w) >= MIN_WORD_LEN}


@dataclass
class BilingualDictionary:
    entries: dict = field(default_factory=dict)  # (src, tgt) -> Dice score
    min_count: int = 2
    min_assoc: float = 0.3

    def __post_init__(self):
        self._index = defaultdict(set)
        for (s, t), score in self.entries.items():
            if not 0.0 < score <= 1.0:
                raise ValueError(f"association for {(s, t)} outside (0, 1]: {score}")
            self._index[s].add(t)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, pair):
        return pair in self.entries

    def add(self, src, tgt, score=1.0):
        if not 0.0 < score <= 1.0:
            raise ValueError("association must lie in (0, 1]")
        self.entries[(src, tgt)] = score
        self._index[src].add(tgt)

    def translations(self, src):
        return self._index.get(src, frozenset())

    def save(self, path):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            for (s, t), score in sorted(self.entries.items()):
                fh.write(f"{s}\t{t}\t{score!r}\n")

    @classmethod
    def load(cls, path):
        """Read ``src<TAB>tgt[<TAB>score]`` lines; a missing score means 1.0."""
        entries = {}
        with open(path, encoding="utf-8", newline="") as fh:
            for lineno, row in enumerate(csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE), 1):
                if not row or row[0].startswith("#"):
                    continue
                if len(row) not in (2, 3):
                    raise ValueError(f"{path}:{lineno}: expected 2 or 3 tab-separated fields")
                score = float(row[2]) if len(row) == 3 else 1.0
                entries[(row[0], row[1])] = score
        return cls(entries, min_count=1, min_assoc=min(entries.values(), default=1.0))


class CooccurrenceCounts:
    """Mergeable bead-level counts: ``a.merge(b)`` equals counting both inputs at once."""

    def __init__(self):
        self.src = Counter()
        self.tgt = Counter()
        self.pairs = Counter()

    def add(self, src_words, tgt_words, keep_src=None, keep_tgt=None):
        self.src.update(src_words)
        self.tgt.update(tgt_words)
        if keep_src is not None:
            src_words = [w for w in src_words if w in keep_src]
        if keep_tgt is not None:
            tgt_words = [w for w in tgt_words if w in keep_tgt]
        self.pairs.update((s, t) for s in src_words for t in tgt_words)

    def merge(self, other):
        self.src.update(other.src)
        self.tgt.update(other.tgt)
        self.pairs.update(other.pairs)
        return self

    def to_dictionary(self, min_count=2, min_assoc=0.3):
        entries = {}
        for (s, t), n in self.pairs.items():
            if n < min_count:
                continue
            assoc = 2.0 * n / (self.src[s] + self.tgt[t])
            if assoc >= min_assoc:
                entries[(s, t)] = assoc
        return BilingualDictionary(entries, min_count, min_assoc)


def _bead_words(beads, src, tgt):
    for bead in beads:
        if bead.kind not in SUBSTITUTION_KINDS:
            continue
        s = set().union(*(content_words(src[i].text) for i in range(*bead.src_span)))
        t = set().union(*(content_words(tgt[j].text) for j in range(*bead.tgt_span)))
        yield s, t


def build_dictionary(beads, src, tgt, min_count=2, min_assoc=0.3):
    """Dice dictionary from the substitution beads of a finished pass.

    ``src``/``tgt`` are the sentence lists the bead spans index into. Words
    seen in fewer than ``min_count`` beads cannot reach the pair threshold,
    so pairs are only counted between the survivors of a first counting pass.
    """
    bead_words = list(_bead_words(beads, src, tgt))
    unigrams = CooccurrenceCounts()
    for s, t in bead_words:
        unigrams.src.update(s)
        unigrams.tgt.update(t)
    keep_src = {w for w, n in unigrams.src.items() if n >= min_count}
    keep_tgt = {w for w, n in unigrams.tgt.items() if n >= min_count}

    counts = CooccurrenceCounts()
    for s, t in bead_words:
        counts.add(s, t, keep_src, keep_tgt)
    return counts.to_dictionary(min_count, min_assoc)


def similarity_rows(src, tgt, dictionary):
    """Dictionary similarity of every substitution bead, as CSR arrays.

    For the bead ending at prefix lengths (i, j) the similarity is the number
    of source tokens with a translation among the target span's word types,
    divided by the larger whitespace-token count of the two spans. Row i
    holds the cells (i, j) with nonzero similarity for some bead kind; the
    value columns follow KINDS order (1-1, 2-1, 1-2, 2-2).
    """
    n, m = len(src), len(tgt)
    occ = defaultdict(set)
    for j, sent in enumerate(tgt):
        for w in set(words(sent.text)):
            occ[w].add(j)

    # single[i][j]: tokens of source i matched in target j
    # double[i][j]: tokens of source i matched in targets j-1 or j
    single = []
    double = []
    for sent in src:
        one = Counter()
        two = Counter()
        for w in words(sent.text):
            hits = set()
            for t in dictionary.translations(w):
                hits.update(occ.get(t, ()))
            if not hits:
                continue
            one.update(hits)
            two.update({h for h in hits if h >= 1} | {h + 1 for h in hits if h + 1 < m})
        single.append(one)
        double.append(two)

    ts = [s.token_count for s in src]
    tt = [t.token_count for t in tgt]
    rowptr = [0]
    cols = []
    vals = []
    for i in range(n + 1):
        if i >= 1:
            a = i - 1
            cand = set(single[a]) | set(double[a])
            if a >= 1:
                cand |= set(single[a - 1]) | set(double[a - 1])
            for b in sorted(cand):
                j = b + 1
                v11 = single[a][b] / max(ts[a], tt[b])
                v21 = v12 = v22 = 0.0
                if a >= 1:
                    v21 = (single[a - 1][b] + single[a][b]) / max(ts[a - 1] + ts[a], tt[b])
                if b >= 1:
                    v12 = double[a][b] / max(ts[a], tt[b - 1] + tt[b])
                    if a >= 1:
                        v22 = (double[a - 1][b] + double[a][b]) / max(ts[a - 1] + ts[a], tt[b - 1] + tt[b])
                if v11 or v21 or v12 or v22:
                    cols.append(j)
                    vals.append((v11, v21, v12, v22))
        rowptr.append(len(cols))
    return (
        np.asarray(rowptr, dtype=np.int64),
        np.asarray(cols, dtype=np.int64),
        np.asarray(vals, dtype=np.float64).reshape(-1, 4),
    )
