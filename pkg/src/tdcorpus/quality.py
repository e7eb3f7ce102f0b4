"""Manual alignment-quality evaluation: sampling, a terminal labeling loop, summary."""

from __future__ import annotations

import csv
import dataclasses
import logging
import os
import random
import time
from collections import Counter
from dataclasses import dataclass

from filelock import FileLock, Timeout

from .aligner.align import AlignedPair

log = logging.getLogger(__name__)

UNLABELED = "unlabeled"
LABELS = ("correct", "partial", "no_alignment")
KEYS = {"c": "correct", "p": "partial", "n": "no_alignment"}
SKIP, QUIT = "s", "q"

PROMPT_HELP = (
    "[c] correct: the two sides say the same thing\n"
    "[p] partial: the sides only partly correspond because a sentence was split\n"
    "    or merged in the wrong place (segmentation error)\n"
    "[n] no alignment: the sides are unrelated\n"
    "[s] skip   [q] quit (progress is saved after every answer)"
)


class AnnotationError(Exception):
    pass


@dataclass(frozen=True)
class EvalSample:
    sample_id: int
    pair: AlignedPair
    label: str = UNLABELED

    def labeled(self, label):
        if label not in LABELS:
            raise ValueError(f"unknown label {label!r}")
        if self.label != UNLABELED:
            raise AnnotationError(f"sample {self.sample_id} is already labeled {self.label!r}")
        return dataclasses.replace(self, label=label)


def sample_pairs(pairs, n, seed):
    """Uniform sample without replacement; ``sample_id`` is the pair's corpus index."""
    if n < 0 or n > len(pairs):
        raise ValueError(f"cannot sample {n} of {len(pairs)} pairs")
    ids = random.Random(seed).sample(range(len(pairs)), n)
    return [EvalSample(i, pairs[i]) for i in ids]


def save_samples(samples, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", quoting=csv.QUOTE_NONE, quotechar=None, lineterminator="\n")
        w.writerow(("sample_id", "doc_id", "bead_kind", "src_text", "tgt_text"))
        for s in samples:
            p = s.pair
            w.writerow((s.sample_id, p.doc_id, p.bead_kind, p.src_text, p.tgt_text))


def load_samples(path):
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE, quotechar=None))
    if not rows or rows[0][0] != "sample_id":
        raise ValueError(f"{path}: not a sample file")
    return [EvalSample(int(r[0]), AlignedPair(r[1], r[3], r[4], r[2])) for r in rows[1:] if r]


def read_label_log(path):
    """sample_id -> label from the log; the first label recorded for an id wins."""
    labels = {}
    if not os.path.exists(path):
        return labels
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3 or parts[1] not in LABELS:
                log.warning("%s:%d: ignoring malformed log line", path, lineno)
                continue
            sid = int(parts[0])
            if sid in labels:
                log.warning("%s:%d: sample %d relabeled; keeping %r", path, lineno, sid, labels[sid])
                continue
            labels[sid] = parts[1]
    return labels


def apply_labels(samples, labels):
    return [s.labeled(labels[s.sample_id]) if s.label == UNLABELED and s.sample_id in labels else s
            for s in samples]


def _show(sample, position, total, write):
    p = sample.pair
    write(f"\n[{position}/{total}] sample {sample.sample_id}  doc {p.doc_id}  ({p.bead_kind})")
    write(f"  pt: {p.src_text}")
    write(f"  en: {p.tgt_text}")


def annotate(samples, log_path, read_key=input, write=print, clock=time.time):
    """Label unlabeled samples interactively, appending each answer to ``log_path``.

    Labels already in the log are applied first, so an interrupted session
    resumes where it stopped. ``read_key`` is called with a prompt and
    returns the typed key; EOF or ``q`` ends the session. Only one session
    may hold a log at a time.
    """
    lock = FileLock(os.fspath(log_path) + ".lock")
    try:
        lock.acquire(timeout=0)
    except Timeout:
        raise AnnotationError(f"{log_path} is locked by another annotation session") from None
    try:
        samples = apply_labels(samples, read_label_log(log_path))
        todo = [k for k, s in enumerate(samples) if s.label == UNLABELED]
        if todo:
            write(PROMPT_HELP)
        with open(log_path, "a", encoding="utf-8") as out:
            for n, k in enumerate(todo, 1):
                _show(samples[k], n, len(todo), write)
                while True:
                    try:
                        key = read_key("label [c/p/n/s/q]: ").strip().lower()
                    except EOFError:
                        key = QUIT
                    if key in KEYS or key in (SKIP, QUIT):
                        break
                    write(f"unrecognised key {key!r}")
                if key == QUIT:
                    break
                if key == SKIP:
                    continue
                samples[k] = samples[k].labeled(KEYS[key])
                out.write(f"{samples[k].sample_id}\t{KEYS[key]}\t{clock():.3f}\n")
                out.flush()
                os.fsync(out.fileno())
    finally:
        lock.release()
    return samples


@dataclass(frozen=True)
class EvalSummary:
    counts: dict  # label -> count, over labeled samples
    labeled: int
    unlabeled: int

    def percent(self, label):
        return 100.0 * self.counts[label] / self.labeled

    def format(self):
        c = self.counts
        lines = [
            f"{'label':<14}{'count':>7}{'percent':>10}",
            *(f"{lab:<14}{c[lab]:>7}{self.percent(lab):>9.2f}%" for lab in LABELS),
            f"{'labeled':<14}{self.labeled:>7}",
            f"{'unlabeled':<14}{self.unlabeled:>7}",
            "",
            f"Of {self.labeled} evaluated pairs, {self.percent('correct'):.2f}% ({c['correct']}) were "
            f"correctly aligned, {self.percent('partial'):.2f}% ({c['partial']}) were partially "
            f"aligned, and {self.percent('no_alignment'):.2f}% ({c['no_alignment']}) presented no alignment.",
        ]
        return "\n".join(lines) + "\n"


def summarize(samples):
    counts = Counter(s.label for s in samples)
    labeled = sum(counts[lab] for lab in LABELS)
    if labeled == 0:
        raise ValueError("no labeled samples to summarise")
    return EvalSummary({lab: counts[lab] for lab in LABELS}, labeled, counts[UNLABELED])
