"""Character n-gram language detector for telling Portuguese from English.

Each profile holds add-k smoothed log-probabilities for n-grams of orders
1..n_max. A text is scored by its mean n-gram log-likelihood under each
profile, so scores are comparable across text lengths.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

UNKNOWN = "unknown"
MIN_TEXT_LEN = 20
PROFILE_MAGIC = "#tdcorpus-langprofile"
PROFILE_VERSION = 1


@dataclass(frozen=True)
class LanguageProfile:
    lang: str
    n_max: int
    smoothing: float
    ngram_log_probs: dict = field(repr=False)
    unseen_log_probs: dict = field(repr=False)  # order -> log prob of an unseen n-gram

    def log_prob(self, gram):
        lp = self.ngram_log_probs.get(gram)
        if lp is None:
            return self.unseen_log_probs[len(gram)]
        return lp

    def save(self, path):
        """Write the ``ngram<TAB>logprob`` table with a small header."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"{PROFILE_MAGIC}\t{PROFILE_VERSION}\n")
            fh.write(f"#lang\t{self.lang}\n#n_max\t{self.n_max}\n#smoothing\t{self.smoothing!r}\n")
            for n in sorted(self.unseen_log_probs):
                fh.write(f"#unseen\t{n}\t{self.unseen_log_probs[n]!r}\n")
            for gram in sorted(self.ngram_log_probs):
                fh.write(f"{gram}\t{self.ngram_log_probs[gram]!r}\n")

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8", newline="\n") as fh:
            lines = fh.read().split("\n")
        if not lines or not lines[0].startswith(PROFILE_MAGIC):
            raise ValueError(f"{path}: not a language profile")
        version = int(lines[0].split("\t")[1])
        if version != PROFILE_VERSION:
            raise ValueError(f"{path}: unsupported profile version {version}")
        meta = {}
        unseen = {}
        grams = {}
        for line in lines[1:]:
            if not line:
                continue
            if line.startswith("#unseen\t"):
                _, n, lp = line.split("\t")
                unseen[int(n)] = float(lp)
            elif line.startswith("#") and line.count("\t") == 1 and not line.startswith("#\t"):
                key, value = line[1:].split("\t")
                meta[key] = value
            else:
                gram, lp = line.rsplit("\t", 1)
                grams[gram] = float(lp)
        return cls(meta["lang"], int(meta["n_max"]), float(meta["smoothing"]), grams, unseen)


def _prepare(text):
    return " " + " ".join(text.casefold().split()) + " "


def _ngrams(text, n):
    return (text[i:i + n] for i in range(len(text) - n + 1))


def ngram_counts(texts, n_max):
    """Per-order n-gram counts over ``texts`` (each padded with one space)."""
    counts = {n: Counter() for n in range(1, n_max + 1)}
    for text in texts:
        padded = _prepare(text)
        for n in range(1, n_max + 1):
            counts[n].update(_ngrams(padded, n))
    return counts


def train_profile(texts, lang, n_max=3, smoothing=0.5):
    """Add-k smoothed n-gram model; one pseudo-type per order absorbs unseen n-grams."""
    texts = [t for t in texts if t.strip()]
    if not texts:
        raise ValueError("cannot train a profile on an empty corpus")
    if not 1 <= n_max <= 3:
        raise ValueError("n_max must be between 1 and 3")
    if smoothing <= 0:
        raise ValueError("smoothing must be positive")
    log_probs = {}
    unseen = {}
    for n, counter in ngram_counts(texts, n_max).items():
        total = sum(counter.values())
        denom = total + smoothing * (len(counter) + 1)
        for gram, c in counter.items():
            log_probs[gram] = math.log((c + smoothing) / denom)
        unseen[n] = math.log(smoothing / denom)
    return LanguageProfile(lang, n_max, smoothing, log_probs, unseen)


def score(text, profile):
    """Mean log-probability of the n-grams of ``text`` under ``profile``."""
    padded = _prepare(text)
    total = 0.0
    count = 0
    for n in range(1, profile.n_max + 1):
        for gram in _ngrams(padded, n):
            total += profile.log_prob(gram)
            count += 1
    return total / count if count else -math.inf


def detect(text, profiles):
    """Return ``(lang, margin)``; ``("unknown", 0.0)`` for texts under 20 characters."""
    if len(profiles) < 2:
        raise ValueError("detect needs at least two profiles")
    if len(" ".join(text.split())) < MIN_TEXT_LEN:
        return UNKNOWN, 0.0
    scored = sorted(((score(text, p), p.lang) for p in profiles), key=lambda x: -x[0])
    (best, lang), (second, _) = scored[0], scored[1]
    return lang, best - second


def check_consistency(record, profiles, native="pt", foreign="en"):
    """Classify a record as ``ok``, ``swapped`` or ``inconsistent``."""
    got_native, _ = detect(record.abstract_native, profiles)
    got_foreign, _ = detect(record.abstract_foreign, profiles)
    if got_native == native and got_foreign == foreign:
        return "ok"
    if got_native == foreign and got_foreign == native:
        return "swapped"
    return "inconsistent"


def read_seed(lang):
    """Sentences of the bundled seed corpus for ``lang``."""
    text = resources.files("tdcorpus.data").joinpath(f"seed_{lang}.txt").read_text("utf-8")
    return [line for line in text.splitlines() if line.strip() and not line.startswith("#")]


@lru_cache(maxsize=None)
def default_profiles():
    """Profiles for pt and en trained on the bundled seed text."""
    return (train_profile(read_seed("pt"), "pt"), train_profile(read_seed("en"), "en"))
