"""Two-pass sentence alignment over documents and batches of documents."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import kernel
from .dictionary import build_dictionary, similarity_rows
from .model import KIND_SIZES, KINDS, AlignmentError, AlignParams, Bead

log = logging.getLogger(__name__)

MIN_PAIR_CHARS = 3


@dataclass(frozen=True)
class AlignedPair:
    doc_id: str
    src_text: str
    tgt_text: str
    bead_kind: str
    cost: float = 0.0


@dataclass
class CorpusAlignment:
    beads: list  # per document, document-local indices
    dictionary: object
    pass1: list = field(default_factory=list)  # batch-global indices; empty when a dictionary was supplied


def align_pass(src, tgt, params=None, dictionary=None):
    """Minimum-cost monotone bead cover of ``src`` x ``tgt``."""
    params = params or AlignParams()
    sim = None
    if dictionary is not None and len(dictionary) and params.dict_weight > 0:
        sim = similarity_rows(src, tgt, dictionary)
    _, path = kernel.dp_align(
        [s.char_len for s in src], [t.char_len for t in tgt],
        params.prior_costs(), params.c, params.s2, sim, params.dict_weight,
    )
    beads = []
    for k, i, j, cost in path:
        kind = KINDS[k]
        a, b = KIND_SIZES[kind]
        beads.append(Bead(kind, (i - a, i), (j - b, j), cost))
    return beads


def total_cost(beads):
    # same left-to-right order as the DP accumulates, so it reproduces its total
    total = 0.0
    for b in beads:
        total += b.cost
    return total


def check_cover(beads, n_src, n_tgt):
    """Raise AlignmentError unless ``beads`` partition both index ranges in order."""
    i = j = 0
    for bead in beads:
        a, b = KIND_SIZES[bead.kind]
        if bead.src_span != (i, i + a) or bead.tgt_span != (j, j + b):
            raise AlignmentError(f"bead {bead} does not continue the cover at ({i}, {j})")
        if bead.cost < 0:
            raise AlignmentError(f"negative bead cost in {bead}")
        i += a
        j += b
    if (i, j) != (n_src, n_tgt):
        raise AlignmentError(f"cover ends at ({i}, {j}), expected ({n_src}, {n_tgt})")


def plan_chunks(docs, limit):
    """Group consecutive documents so each group has <= ``limit`` sentences per side.

    Returns ``[(first_doc, stop_doc), ...]``.
    """
    chunks = []
    start = 0
    ns = nt = 0
    for d, (src, tgt) in enumerate(docs):
        if len(src) > limit or len(tgt) > limit:
            raise AlignmentError(
                f"document {d} has {len(src)}/{len(tgt)} sentences, above the chunk limit {limit}"
            )
        if d > start and (ns + len(src) > limit or nt + len(tgt) > limit):
            chunks.append((start, d))
            start, ns, nt = d, 0, 0
        ns += len(src)
        nt += len(tgt)
    if start < len(docs):
        chunks.append((start, len(docs)))
    return chunks


def chunked_align(docs, params=None, dictionary=None):
    """Align a batch of ``(src, tgt)`` documents as one concatenated bitext.

    Above ``params.chunk_limit`` sentences on either side the batch is cut
    at document boundaries and each chunk aligned on its own; bead indices
    are global over the concatenation.
    """
    params = params or AlignParams()
    docs = list(docs)
    chunks = plan_chunks(docs, params.chunk_limit)
    if len(chunks) > 1:
        log.info("aligning %d documents in %d chunks", len(docs), len(chunks))
    out = []
    src_off = tgt_off = 0
    for first, stop in chunks:
        src = [s for d in docs[first:stop] for s in d[0]]
        tgt = [t for d in docs[first:stop] for t in d[1]]
        out.extend(b.shifted(src_off, tgt_off) for b in align_pass(src, tgt, params, dictionary))
        src_off += len(src)
        tgt_off += len(tgt)
    return out


_worker_state = {}


def _init_worker(params, dictionary):
    _worker_state["args"] = (params, dictionary)


def _align_one(doc):
    params, dictionary = _worker_state["args"]
    return align_pass(doc[0], doc[1], params, dictionary)


def align_corpus(docs, params=None, dictionary=None, workers=1, min_count=2, min_assoc=0.3):
    """Length-only pass over the batch, dictionary from it, then per-document realignment.

    With a supplied ``dictionary`` the first pass is skipped. Results keep
    document order regardless of ``workers``.
    """
    params = params or AlignParams()
    docs = list(docs)
    plan_chunks(docs, params.chunk_limit)  # reject oversized documents up front
    pass1 = []
    if dictionary is None:
        pass1 = chunked_align(docs, params)
        src = [s for d in docs for s in d[0]]
        tgt = [t for d in docs for t in d[1]]
        dictionary = build_dictionary(pass1, src, tgt, min_count, min_assoc)
        log.info("bootstrapped dictionary with %d entries", len(dictionary))

    if workers > 1 and len(docs) > 1:
        with ProcessPoolExecutor(workers, initializer=_init_worker,
                                 initargs=(params, dictionary)) as pool:
            beads = list(pool.map(_align_one, docs, chunksize=max(1, len(docs) // (4 * workers))))
    else:
        beads = [align_pass(s, t, params, dictionary) for s, t in docs]
    return CorpusAlignment(beads, dictionary, pass1)


def align_document(src, tgt, params=None, dictionary=None):
    """Two-pass alignment of a single document."""
    return align_corpus([(src, tgt)], params, dictionary).beads[0]


def postprocess(beads, src, tgt, doc_id):
    """Turn beads into exportable pairs: drop indels and pairs with a side under 3 chars."""
    pairs = []
    for bead in beads:
        if bead.kind in ("1-0", "0-1"):
            continue
        s = " ".join(src[i].text for i in range(*bead.src_span))
        t = " ".join(tgt[j].text for j in range(*bead.tgt_span))
        if len(s) < MIN_PAIR_CHARS or len(t) < MIN_PAIR_CHARS:
            continue
        pairs.append(AlignedPair(doc_id, s, t, bead.kind, bead.cost))
    return pairs
