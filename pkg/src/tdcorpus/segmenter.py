"""Sentence segmentation for case-folded text.

Capitalisation is gone after case folding, so a boundary is any run of
terminal punctuation followed by whitespace, unless a guard vetoes it:
a listed abbreviation, a single-letter token ("j. r. silva"), or a
position inside a short parenthesised span.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

MAX_PAREN_SPAN = 40
_CLOSERS = ")]}\"'»”’"
_OPENERS = "([{\"'«“‘"
_TOKEN = re.compile(r"\S+")
_SINGLE_LETTER = re.compile(r"^[^\W\d_]\.$")


@dataclass(frozen=True)
class Sentence:
    text: str
    char_len: int
    token_count: int

    @classmethod
    def from_text(cls, text):
        text = text.strip()
        if not text:
            raise ValueError("empty sentence")
        tokens = text.split()
        return cls(text, sum(len(t) for t in tokens), len(tokens))


def load_abbreviations(path):
    """Read a guard list: one abbreviation per line, ``#`` starts a comment."""
    with open(path, encoding="utf-8") as fh:
        return _parse_abbreviations(fh.read())


def _parse_abbreviations(text):
    out = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.add(" ".join(line.casefold().split()))
    return frozenset(out)


@lru_cache(maxsize=None)
def default_abbreviations(lang):
    try:
        data = resources.files("tdcorpus.data").joinpath(f"abbrev_{lang}.txt").read_text("utf-8")
    except FileNotFoundError:
        raise ValueError(f"no abbreviation list for language {lang!r}") from None
    return _parse_abbreviations(data)


def _protected_positions(text):
    """Indices lying strictly inside a matched (...) span of <= MAX_PAREN_SPAN chars."""
    protected = set()
    stack = []
    for i, ch in enumerate(text):
        if ch == "(":
            stack.append(i)
        elif ch == ")" and stack:
            start = stack.pop()
            if i - start + 1 <= MAX_PAREN_SPAN:
                protected.update(range(start + 1, i))
    return protected


class Segmenter:
    def __init__(self, lang="pt", abbreviations=None, split_semicolon=False):
        self.lang = lang
        self.abbreviations = (
            frozenset(abbreviations) if abbreviations is not None else default_abbreviations(lang)
        )
        self.split_semicolon = split_semicolon
        terminals = ".!?;" if split_semicolon else ".!?"
        self._boundary = re.compile(
            "[" + re.escape(terminals) + "]+[" + re.escape(_CLOSERS) + r"]*(?=\s)"
        )

    def _is_guarded(self, text, punct_start, tokens_before):
        if text[punct_start] != ".":
            return False
        token = tokens_before[-1].lstrip(_OPENERS) if tokens_before else ""
        if token in self.abbreviations or _SINGLE_LETTER.match(token):
            return True
        if len(tokens_before) >= 2:
            pair = tokens_before[-2].lstrip(_OPENERS) + " " + token
            if pair in self.abbreviations:
                return True
        return False

    def boundaries(self, text):
        """Offsets just past each sentence-final punctuation run."""
        protected = None
        token_spans = None
        out = []
        for match in self._boundary.finditer(text):
            start, end = match.span()
            if token_spans is None:
                token_spans = [m.span() for m in _TOKEN.finditer(text)]
                token_starts = [a for a, _ in token_spans]
            # the token the punctuation belongs to, and the one before it
            k = bisect_right(token_starts, start) - 1
            tokens_before = [text[token_spans[k][0]:start + 1]]
            if k > 0:
                tokens_before.insert(0, text[slice(*token_spans[k - 1])])
            if self._is_guarded(text, start, tokens_before):
                continue
            if protected is None:
                protected = _protected_positions(text)
            if start in protected:
                continue
            out.append(end)
        return out

    def segment(self, text):
        sentences = []
        pos = 0
        for end in self.boundaries(text):
            piece = text[pos:end].strip()
            if piece:
                sentences.append(Sentence.from_text(piece))
            pos = end
        tail = text[pos:].strip()
        if tail:
            sentences.append(Sentence.from_text(tail))
        return sentences


def segment(text, lang="pt", split_semicolon=False):
    """Split normalised ``text`` into sentences."""
    return Segmenter(lang, split_semicolon=split_semicolon).segment(text)
