"""Independent reference implementations used by the tests.

Bead costs are computed in 50-digit arithmetic from the normal CDF
(mpmath.ncdf) rather than the complementary error function the package
uses, and alignments by exhaustive enumeration instead of DP.
"""

import mpmath

from tdcorpus.aligner.dictionary import words
from tdcorpus.aligner.model import KIND_SIZES, KINDS
from tdcorpus.segmenter import Sentence

mpmath.mp.dps = 50


def sentences(lengths, fill="x"):
    return [Sentence(fill * n, n, 1) for n in lengths]


def oracle_length_cost(l1, l2, kind, params):
    prior = -mpmath.log(mpmath.mpf(params.bead_priors[kind]))
    if kind in ("1-0", "0-1"):
        ell = l1 if kind == "1-0" else l2
        z = ell / mpmath.sqrt(ell * mpmath.mpf(params.s2) + 1)
        term = -mpmath.log(2 * mpmath.ncdf(-z))
        term = min(term, mpmath.mpf("4.5"))
    else:
        delta = (l2 - l1 * mpmath.mpf(params.c)) / mpmath.sqrt((mpmath.mpf(l1 + l2) / 2) * mpmath.mpf(params.s2))
        term = -mpmath.log(2 * mpmath.ncdf(-abs(delta)))
    return float(prior + term)


def oracle_similarity(src_sents, tgt_sents, dictionary):
    """Source tokens with a translation among the target span's words, over the larger token count."""
    tgt_types = set()
    for t in tgt_sents:
        tgt_types.update(words(t.text))
    hits = 0
    n_src = 0
    for s in src_sents:
        toks = words(s.text)
        n_src += len(toks)
        hits += sum(1 for w in toks if any(t in tgt_types for t in dictionary.translations(w)))
    n_tgt = sum(len(words(t.text)) for t in tgt_sents)
    return hits / max(n_src, n_tgt)


def oracle_bead_cost(kind, src_sents, tgt_sents, params, dictionary=None):
    l1 = sum(s.char_len for s in src_sents)
    l2 = sum(t.char_len for t in tgt_sents)
    cost = oracle_length_cost(l1, l2, kind, params)
    if dictionary is not None and kind not in ("1-0", "0-1"):
        cost = max(0.0, cost - params.dict_weight * oracle_similarity(src_sents, tgt_sents, dictionary))
    return cost


def all_covers(n, m):
    """Every monotone bead cover of an n x m bitext, as lists of (kind, i, j) start points."""
    if n == 0 and m == 0:
        yield []
        return
    for kind in KINDS:
        a, b = KIND_SIZES[kind]
        if a <= n and b <= m:
            for rest in all_covers(n - a, m - b):
                yield rest + [(kind, n - a, m - b)]


def brute_force(src, tgt, params, dictionary=None):
    """Sorted (total_cost, cover) for every cover; cover beads are (kind, src_span, tgt_span)."""
    cache = {}

    def cost(kind, i, j):
        key = (kind, i, j)
        if key not in cache:
            a, b = KIND_SIZES[kind]
            cache[key] = oracle_bead_cost(kind, src[i:i + a], tgt[j:j + b], params, dictionary)
        return cache[key]

    out = []
    for cover in all_covers(len(src), len(tgt)):
        total = 0.0
        beads = []
        for kind, i, j in cover:
            a, b = KIND_SIZES[kind]
            total += cost(kind, i, j)
            beads.append((kind, (i, i + a), (j, j + b)))
        out.append((total, beads))
    out.sort(key=lambda x: x[0])
    return out


def is_cover(beads, n, m):
    i = j = 0
    for b in beads:
        a, c = KIND_SIZES[b.kind]
        if tuple(b.src_span) != (i, i + a) or tuple(b.tgt_span) != (j, j + c):
            return False
        i += a
        j += c
    return (i, j) == (n, m)


def hand_bleu_p1_all_the():
    # hypothesis: 7 x "the"; reference "the cat is on the mat" has "the" twice
    return 2, 7
