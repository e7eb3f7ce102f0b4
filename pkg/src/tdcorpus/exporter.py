"""Corpus export: TMX files, an SQLite metadata store, per-area statistics."""

from __future__ import annotations

import csv
import logging
import os
import re
import sqlite3
import tempfile
import xml.etree.ElementTree as ET
from collections import defaultdict
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from . import __version__
from .aligner.align import AlignedPair

log = logging.getLogger(__name__)

SRC_LANG = "pt"
TGT_LANG = "en"
DOC_ID_PROP = "doc_id"
KIND_PROP = "x-bead_kind"
UNKNOWN_AREA = "unknown"
_XML_LANG = "{http://www.w3.org/XML/1998/namespace}lang"
# characters XML 1.0 cannot carry, even as references
_ILLEGAL_XML = re.compile("[\x00-\x08\x0b\x0c\x0e-\x1f\ufffe\uffff]")
REQUIRED_HEADER_ATTRS = (
    "creationtool", "creationtoolversion", "segtype", "o-tmf", "adminlang", "srclang", "datatype",
)


class ExportError(Exception):
    pass


class TmxError(ValueError):
    def __init__(self, msg, line=None):
        super().__init__(msg)
        self.line = line


# -- TMX ---------------------------------------------------------------------

def _text(s):
    if _ILLEGAL_XML.search(s):
        raise ExportError(f"text contains characters not representable in XML: {s!r}")
    return escape(s).replace("\r", "&#13;")


def _atomic_path(path):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=d)
    os.close(fd)
    return tmp


def write_tmx(pairs, path):
    """Write one <tu> per pair; the document id travels as a unit property."""
    tmp = _atomic_path(path)
    try:
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write('<?xml version="1.0" encoding="UTF-8"?>\n<tmx version="1.4">\n')
            fh.write(
                f'  <header creationtool="tdcorpus" creationtoolversion="{__version__}" '
                f'segtype="sentence" o-tmf="tdcorpus" adminlang="en" srclang="{SRC_LANG}" '
                'datatype="plaintext"/>\n  <body>\n'
            )
            for p in pairs:
                fh.write(
                    "    <tu>\n"
                    f'      <prop type="{DOC_ID_PROP}">{_text(p.doc_id)}</prop>\n'
                    f'      <prop type="{KIND_PROP}">{_text(p.bead_kind)}</prop>\n'
                    f'      <tuv xml:lang="{SRC_LANG}"><seg>{_text(p.src_text)}</seg></tuv>\n'
                    f'      <tuv xml:lang="{TGT_LANG}"><seg>{_text(p.tgt_text)}</seg></tuv>\n'
                    "    </tu>\n"
                )
            fh.write("  </body>\n</tmx>\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class TmxReadReport:
    units: int = 0
    skipped: int = 0
    warnings: list = field(default_factory=list)


def _primary_lang(code):
    return re.split("[-_]", code or "", maxsplit=1)[0].lower()


def _parse(path):
    try:
        return ET.parse(path)
    except ET.ParseError as exc:
        line, col = exc.position
        raise TmxError(f"{path}:{line}:{col}: malformed TMX: {exc}", line) from None


def read_tmx(path, report=None):
    """Pairs in file order. Units lacking a pt or en variant are skipped with a warning."""
    report = report if report is not None else TmxReadReport()
    root = _parse(path).getroot()
    if root.tag != "tmx":
        raise TmxError(f"{path}: root element is <{root.tag}>, not <tmx>")
    body = root.find("body")
    pairs = []
    if body is None:
        return pairs
    for n, tu in enumerate(body.iter("tu"), 1):
        report.units += 1
        props = {p.get("type"): (p.text or "") for p in tu.findall("prop")}
        segs = {}
        for tuv in tu.findall("tuv"):
            lang = _primary_lang(tuv.get(_XML_LANG) or tuv.get("lang"))
            seg = tuv.find("seg")
            if seg is not None:
                segs.setdefault(lang, "".join(seg.itertext()))
        missing = [lang for lang in (SRC_LANG, TGT_LANG) if lang not in segs]
        if missing:
            report.skipped += 1
            msg = f"{path}: translation unit {n} has no {'/'.join(missing)} variant; skipped"
            report.warnings.append(msg)
            log.warning(msg)
            continue
        pairs.append(AlignedPair(
            props.get(DOC_ID_PROP, ""), segs[SRC_LANG], segs[TGT_LANG], props.get(KIND_PROP, "1-1"),
        ))
    return pairs


def validate_tmx(path):
    """Structural problems found in a TMX file; an empty list means it is valid."""
    try:
        root = _parse(path).getroot()
    except TmxError as exc:
        return [str(exc)]
    problems = []
    if root.tag != "tmx":
        return [f"root element is <{root.tag}>"]
    if root.get("version") != "1.4":
        problems.append(f"tmx version is {root.get('version')!r}, expected '1.4'")
    header = root.find("header")
    if header is None:
        problems.append("missing <header>")
    else:
        problems += [f"header lacks {a!r}" for a in REQUIRED_HEADER_ATTRS if not header.get(a)]
    body = root.find("body")
    if body is None:
        problems.append("missing <body>")
        return problems
    for n, tu in enumerate(body.findall("tu"), 1):
        tuvs = tu.findall("tuv")
        if len(tuvs) < 2:
            problems.append(f"unit {n}: {len(tuvs)} variants")
        for tuv in tuvs:
            if not (tuv.get(_XML_LANG) or tuv.get("lang")):
                problems.append(f"unit {n}: variant without xml:lang")
            if len(tuv.findall("seg")) != 1:
                problems.append(f"unit {n}: variant must hold exactly one <seg>")
    return problems


# -- relational store -----------------------------------------------------------

SCHEMA = """
CREATE TABLE documents (
    id TEXT PRIMARY KEY,
    year INTEGER,
    university TEXT,
    title_native TEXT,
    doc_type TEXT,
    knowledge_area TEXT,
    url_pdf TEXT
);
CREATE TABLE keywords (
    doc_id TEXT NOT NULL REFERENCES documents(id),
    lang TEXT NOT NULL,
    keyword TEXT NOT NULL
);
CREATE TABLE subareas (
    doc_id TEXT NOT NULL REFERENCES documents(id),
    subarea TEXT NOT NULL
);
CREATE TABLE pairs (
    doc_id TEXT NOT NULL REFERENCES documents(id),
    seq INTEGER NOT NULL,
    src_text TEXT NOT NULL,
    tgt_text TEXT NOT NULL,
    bead_kind TEXT NOT NULL,
    cost REAL,
    PRIMARY KEY (doc_id, seq)
);
CREATE INDEX pairs_doc ON pairs(doc_id);
CREATE INDEX keywords_doc ON keywords(doc_id);
"""


def write_store(pairs, records, path):
    """Write documents, keywords, subareas and pairs into a fresh SQLite file.

    ``seq`` numbers the pairs of each document in input order. A pair whose
    document is not among ``records`` is an integrity error and nothing is written.
    """
    known = {r.id for r in records}
    orphans = sorted({p.doc_id for p in pairs} - known)
    if orphans:
        raise ExportError(f"pairs reference unknown documents: {orphans[:5]}")
    tmp = _atomic_path(path)
    try:
        con = sqlite3.connect(tmp)
        try:
            con.execute("PRAGMA foreign_keys = ON")
            con.executescript(SCHEMA)
            with con:
                con.executemany(
                    "INSERT INTO documents VALUES (?, ?, ?, ?, ?, ?, ?)",
                    ((r.id, r.year, r.university, r.title_native, r.doc_type,
                      r.knowledge_area or UNKNOWN_AREA, r.url_pdf) for r in records),
                )
                con.executemany(
                    "INSERT INTO keywords VALUES (?, ?, ?)",
                    ((r.id, lang, kw) for r in records
                     for lang, kws in ((SRC_LANG, r.keywords_native), (TGT_LANG, r.keywords_foreign))
                     for kw in kws),
                )
                con.executemany(
                    "INSERT INTO subareas VALUES (?, ?)",
                    ((r.id, s) for r in records for s in r.subareas),
                )
                seq = defaultdict(int)

                def rows():
                    for p in pairs:
                        seq[p.doc_id] += 1
                        yield p.doc_id, seq[p.doc_id], p.src_text, p.tgt_text, p.bead_kind, p.cost

                con.executemany("INSERT INTO pairs VALUES (?, ?, ?, ?, ?, ?)", rows())
        finally:
            con.close()
        os.replace(tmp, path)
    except sqlite3.IntegrityError as exc:
        os.unlink(tmp)
        raise ExportError(f"store integrity error: {exc}") from exc
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_store_pairs(path):
    """Pairs ordered by (doc_id, seq)."""
    con = sqlite3.connect(path)
    try:
        rows = con.execute(
            "SELECT doc_id, src_text, tgt_text, bead_kind, cost FROM pairs ORDER BY doc_id, seq"
        ).fetchall()
    finally:
        con.close()
    return [AlignedPair(*r) for r in rows]


def dump_store(path):
    """Canonical SQL text of the store, for content comparison."""
    con = sqlite3.connect(path)
    try:
        return "\n".join(con.iterdump())
    finally:
        con.close()


# -- statistics ------------------------------------------------------------------

@dataclass
class AreaStats:
    docs: int = 0
    pairs: int = 0
    tokens_src: int = 0
    tokens_tgt: int = 0

    def __add__(self, other):
        return AreaStats(self.docs + other.docs, self.pairs + other.pairs,
                         self.tokens_src + other.tokens_src, self.tokens_tgt + other.tokens_tgt)


@dataclass
class CorpusStats:
    areas: dict = field(default_factory=dict)  # area -> AreaStats

    @property
    def total(self):
        out = AreaStats()
        for s in self.areas.values():
            out = out + s
        return out

    def rows(self):
        """Areas by descending pair count, then name; totals last."""
        ordered = sorted(self.areas.items(), key=lambda kv: (-kv[1].pairs, kv[0]))
        return ordered + [("total", self.total)]

    def format_table(self):
        header = ("Knowledge Area", "Docs", "Sents", "Tokens EN", "Tokens PT")
        body = [(area, f"{s.docs:,}", f"{s.pairs:,}", f"{s.tokens_tgt:,}", f"{s.tokens_src:,}")
                for area, s in self.rows()]
        widths = [max(len(r[i]) for r in [header] + body) for i in range(5)]

        def line(r):
            return "  ".join([r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])])

        rule = "-" * len(line(header))
        out = [line(header), rule] + [line(r) for r in body[:-1]] + [rule, line(body[-1])]
        return "\n".join(out) + "\n"

    def format_tsv(self):
        out = ["area\tdocs\tsents\ttokens_en\ttokens_pt"]
        out += [f"{a}\t{s.docs}\t{s.pairs}\t{s.tokens_tgt}\t{s.tokens_src}" for a, s in self.rows()]
        return "\n".join(out) + "\n"


def compute_stats(pairs, records):
    """Per knowledge area: documents with >= 1 pair, pairs and whitespace tokens per side."""
    area_of = {r.id: (r.knowledge_area or UNKNOWN_AREA) for r in records}
    areas = defaultdict(AreaStats)
    docs = defaultdict(set)
    for p in pairs:
        area = area_of.get(p.doc_id, UNKNOWN_AREA)
        s = areas[area]
        s.pairs += 1
        s.tokens_src += len(p.src_text.split())
        s.tokens_tgt += len(p.tgt_text.split())
        docs[area].add(p.doc_id)
    for area, ids in docs.items():
        areas[area].docs = len(ids)
    return CorpusStats(dict(areas))


def store_stats(path):
    """compute_stats recomputed from a store file."""
    con = sqlite3.connect(path)
    try:
        rows = con.execute(
            "SELECT d.knowledge_area, p.doc_id, p.src_text, p.tgt_text "
            "FROM pairs p JOIN documents d ON d.id = p.doc_id"
        ).fetchall()
    finally:
        con.close()
    areas = defaultdict(AreaStats)
    docs = defaultdict(set)
    for area, doc_id, src, tgt in rows:
        s = areas[area]
        s.pairs += 1
        s.tokens_src += len(src.split())
        s.tokens_tgt += len(tgt.split())
        docs[area].add(doc_id)
    for area, ids in docs.items():
        areas[area].docs = len(ids)
    return CorpusStats(dict(areas))


# -- intermediate pair files -------------------------------------------------------

PAIR_HEADER = ("doc_id", "bead_kind", "src_text", "tgt_text", "cost")


def write_pairs(pairs, path):
    """Tab-separated pairs with a one-line header."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", quoting=csv.QUOTE_NONE, quotechar=None, lineterminator="\n")
        w.writerow(PAIR_HEADER)
        for p in pairs:
            row = (p.doc_id, p.bead_kind, p.src_text, p.tgt_text)
            if any(c in v for v in row for c in "\t\r\n"):
                raise ValueError(f"pair from {p.doc_id!r} holds a tab or line break; normalise texts first")
            w.writerow(row + (repr(float(p.cost)),))


def read_pairs(path):
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE, quotechar=None)
        header = next(reader, None)
        if header is None:
            return []
        if tuple(header) != PAIR_HEADER:
            raise ValueError(f"{path}: expected header {PAIR_HEADER}")
        out = []
        for lineno, row in enumerate(reader, 2):
            if len(row) != len(PAIR_HEADER):
                raise ValueError(f"{path}:{lineno}: expected {len(PAIR_HEADER)} fields")
            out.append(AlignedPair(row[0], row[2], row[3], row[1], float(row[4])))
        return out
