"""End-to-end corpus build driven by one INI config file."""

from __future__ import annotations

import configparser
import dataclasses
import logging
import os
from dataclasses import dataclass, field

from .aligner import AlignParams, BilingualDictionary, KINDS, align_corpus, postprocess
from .exporter import compute_stats, write_pairs, write_store, write_tmx
from .langid import check_consistency, default_profiles, LanguageProfile
from .mt_eval import SplitSpec, split
from .records import ColumnMap, IngestReport, filter_bilingual, normalize, parse_records
from .segmenter import Segmenter

log = logging.getLogger(__name__)

LANGID_POLICIES = ("drop", "swap")


class PipelineError(Exception):
    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineConfig:
    inputs: list
    column_map: ColumnMap = None
    langid_policy: str = "drop"
    profiles: tuple = ()  # (pt profile path, en profile path); empty -> bundled
    split_semicolon: bool = False
    params: AlignParams = field(default_factory=AlignParams)
    dictionary: str | None = None
    min_count: int = 2
    min_assoc: float = 0.3
    workers: int = 1
    tmx: str | None = None
    store: str | None = None
    stats: str | None = None
    stats_tsv: str | None = None
    pairs: str | None = None
    report: str | None = None
    split: SplitSpec | None = None
    split_prefix: str | None = None

    def outputs(self):
        paths = [self.tmx, self.store, self.stats, self.stats_tsv, self.pairs, self.report]
        if self.split and self.split_prefix:
            paths += [f"{self.split_prefix}.{part}.tsv" for part in ("train", "dev", "test")]
        return [p for p in paths if p]

    def validate(self):
        if not self.inputs:
            raise ValueError("no input files configured")
        for path in list(self.inputs) + list(self.profiles) + ([self.dictionary] if self.dictionary else []):
            if not os.path.isfile(path):
                raise ValueError(f"input {path!r} does not exist")
        if self.profiles and len(self.profiles) != 2:
            raise ValueError("profiles must name a pt and an en profile")
        if self.langid_policy not in LANGID_POLICIES:
            raise ValueError(f"langid policy must be one of {LANGID_POLICIES}")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if bool(self.split) != bool(self.split_prefix):
            raise ValueError("split needs dev_size, test_size, seed and prefix together")
        for path in self.outputs():
            parent = os.path.dirname(os.path.abspath(path))
            if not os.path.isdir(parent):
                raise ValueError(f"output directory {parent!r} does not exist")
        return self


def _bool(value):
    return value.strip().lower() in ("1", "true", "yes", "on")


def params_from_section(section, base=None):
    """AlignParams from an [align] section: c, s2, dict_weight, chunk_limit, prior.<kind>."""
    base = base or AlignParams()
    priors = dict(base.bead_priors)
    for kind in KINDS:
        key = f"prior.{kind}"
        if key in section:
            priors[kind] = float(section[key])
    return AlignParams(
        c=float(section.get("c", base.c)),
        s2=float(section.get("s2", base.s2)),
        bead_priors=priors,
        dict_weight=float(section.get("dict_weight", base.dict_weight)),
        chunk_limit=int(section.get("chunk_limit", base.chunk_limit)),
    )


def load_params(path):
    parser = configparser.ConfigParser(interpolation=None)
    if not parser.read(path, encoding="utf-8"):
        raise ValueError(f"cannot read {path}")
    return params_from_section(parser["align"] if parser.has_section("align") else {})


def load_config(path):
    """Read a PipelineConfig; relative paths are taken relative to the config file."""
    parser = configparser.ConfigParser(interpolation=None)
    if not parser.read(path, encoding="utf-8"):
        raise ValueError(f"cannot read config {path}")
    base = os.path.dirname(os.path.abspath(path))

    def resolve(p):
        return os.path.normpath(os.path.join(base, p)) if p else None

    def get(section, key, default=None):
        return parser.get(section, key, fallback=default)

    inputs = [resolve(p) for p in (get("input", "paths", "") or "").split() if p]
    cmap_path = get("input", "column_map")
    cfg = PipelineConfig(
        inputs=inputs,
        column_map=ColumnMap.from_file(resolve(cmap_path)) if cmap_path else None,
        langid_policy=get("langid", "policy", "drop"),
        profiles=tuple(resolve(p) for p in (get("langid", "profiles", "") or "").split()),
        split_semicolon=_bool(get("segmenter", "split_semicolon", "false")),
        params=params_from_section(parser["align"] if parser.has_section("align") else {}),
        dictionary=resolve(get("align", "dictionary")),
        min_count=int(get("align", "min_count", 2)),
        min_assoc=float(get("align", "min_assoc", 0.3)),
        workers=int(get("align", "workers", 1)),
        tmx=resolve(get("output", "tmx")),
        store=resolve(get("output", "store")),
        stats=resolve(get("output", "stats")),
        stats_tsv=resolve(get("output", "stats_tsv")),
        pairs=resolve(get("output", "pairs")),
        report=resolve(get("output", "report")),
    )
    if parser.has_section("split"):
        s = parser["split"]
        missing = [k for k in ("dev_size", "test_size", "seed", "prefix") if k not in s]
        if missing:
            raise ValueError(f"[split] lacks {missing} (splits need an explicit seed)")
        cfg.split = SplitSpec(int(s["dev_size"]), int(s["test_size"]), int(s["seed"]))
        cfg.split_prefix = resolve(s["prefix"])
    return cfg


@dataclass
class StageCount:
    stage: str
    count_in: int
    count_out: int
    drops: dict = field(default_factory=dict)


@dataclass
class RunReport:
    stages: list = field(default_factory=list)
    sentences: tuple = (0, 0)  # (pt, en) after segmentation
    pairs: int = 0
    outputs: list = field(default_factory=list)

    def add(self, stage, count_in, count_out, **drops):
        self.stages.append(StageCount(stage, count_in, count_out, {k: v for k, v in drops.items() if v}))

    def count(self, stage):
        for s in self.stages:
            if s.stage == stage:
                return s.count_out
        raise KeyError(stage)

    def format(self):
        lines = [f"{'stage':<12}{'in':>10}{'out':>10}  dropped"]
        for s in self.stages:
            drops = ", ".join(f"{k}={v}" for k, v in s.drops.items()) or "-"
            lines.append(f"{s.stage:<12}{s.count_in:>10}{s.count_out:>10}  {drops}")
        lines.append(f"sentences: pt {self.sentences[0]}, en {self.sentences[1]}")
        lines.append(f"pairs exported: {self.pairs}")
        return "\n".join(lines) + "\n"


def _swap(record):
    return dataclasses.replace(
        record,
        abstract_native=record.abstract_foreign,
        abstract_foreign=record.abstract_native,
    )


def language_check(records, profiles, policy="drop"):
    """(kept records, counts of ok/swapped/inconsistent)."""
    kept = []
    counts = {"ok": 0, "swapped": 0, "inconsistent": 0}
    for rec in records:
        verdict = check_consistency(rec, profiles)
        counts[verdict] += 1
        if verdict == "ok":
            kept.append(rec)
        elif verdict == "swapped" and policy == "swap":
            kept.append(_swap(rec))
    return kept, counts


def _stage(name):
    def wrap(fn):
        def run(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except PipelineError:
                raise
            except Exception as exc:  # noqa: BLE001 - re-raised with the stage tag
                raise PipelineError(name, exc) from exc
        return run
    return wrap


def run_pipeline(config):
    """ingest -> filter -> normalize -> langid -> segment -> align -> postprocess -> export.

    On any fatal error the outputs written so far are removed and a
    PipelineError naming the stage is raised.
    """
    report = RunReport()
    written = []
    try:
        _stage("config")(config.validate)()
        records = _stage("ingest")(_ingest)(config, report)
        records = _stage("filter")(_filter)(records, report)
        records = _stage("normalize")(lambda r: [normalize(x) for x in r])(records)
        records = _stage("langid")(_langid)(records, config, report)
        records.sort(key=lambda r: r.id)
        docs = _stage("segment")(_segment)(records, config, report)
        pairs = _stage("align")(_align)(records, docs, config, report)
        report.pairs = len(pairs)
        if pairs:
            _stage("export")(_export)(pairs, records, config, report, written)
            if config.report:
                _stage("export")(_write_text)(config.report, report.format(), written)
        else:
            log.warning("no pairs produced; no output files written")
    except BaseException:
        for path in written:
            if os.path.exists(path):
                os.unlink(path)
        raise
    report.outputs = written
    return report


def _ingest(config, report):
    cmap = config.column_map or ColumnMap.default()
    ingest = IngestReport()
    records = []
    seen = set()
    duplicates = 0
    for path in config.inputs:
        for rec in parse_records(path, cmap, ingest):
            if rec.id in seen:
                duplicates += 1
                log.warning("%s: duplicate id %r across files; keeping first", path, rec.id)
                continue
            seen.add(rec.id)
            records.append(rec)
    report.add("ingest", ingest.rows, len(records), malformed=ingest.malformed,
               undecodable=ingest.undecodable, duplicate=ingest.duplicates + duplicates)
    return records


def _filter(records, report):
    kept = filter_bilingual(records)
    report.add("filter", len(records), len(kept), monolingual=len(records) - len(kept))
    return kept


def _langid(records, config, report):
    if config.profiles:
        profiles = tuple(LanguageProfile.load(p) for p in config.profiles)
    else:
        profiles = default_profiles()
    kept, counts = language_check(records, profiles, config.langid_policy)
    drops = {"inconsistent": counts["inconsistent"]}
    if config.langid_policy == "drop":
        drops["swapped"] = counts["swapped"]
    report.add("langid", len(records), len(kept), **drops)
    return kept


def _segment(records, config, report):
    pt = Segmenter("pt", split_semicolon=config.split_semicolon)
    en = Segmenter("en", split_semicolon=config.split_semicolon)
    docs = [(pt.segment(r.abstract_native), en.segment(r.abstract_foreign)) for r in records]
    n_src = sum(len(s) for s, _ in docs)
    n_tgt = sum(len(t) for _, t in docs)
    report.add("segment", len(records), len(docs))
    report.sentences = (n_src, n_tgt)
    return docs


def _align(records, docs, config, report):
    dictionary = BilingualDictionary.load(config.dictionary) if config.dictionary else None
    result = align_corpus(docs, config.params, dictionary, config.workers,
                          config.min_count, config.min_assoc)
    pairs = []
    beads = unaligned = 0
    for rec, (src, tgt), doc_beads in zip(records, docs, result.beads):
        beads += len(doc_beads)
        unaligned += sum(b.kind in ("1-0", "0-1") for b in doc_beads)
        pairs.extend(postprocess(doc_beads, src, tgt, rec.id))
    short = beads - unaligned - len(pairs)
    report.add("align", beads, len(pairs), unaligned=unaligned, short=short)
    return pairs


def _write_text(path, text, written):
    written.append(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _export(pairs, records, config, report, written):
    # tmx and store are replaced atomically, so a failed write leaves any older file alone
    if config.tmx:
        write_tmx(pairs, config.tmx)
        written.append(config.tmx)
    if config.store:
        write_store(pairs, records, config.store)
        written.append(config.store)
    if config.pairs:
        written.append(config.pairs)
        write_pairs(pairs, config.pairs)
    stats = compute_stats(pairs, records)
    if config.stats:
        _write_text(config.stats, stats.format_table(), written)
    if config.stats_tsv:
        _write_text(config.stats_tsv, stats.format_tsv(), written)
    if config.split:
        parts = split(pairs, config.split)
        for name, part in zip(("train", "dev", "test"), parts):
            path = f"{config.split_prefix}.{name}.tsv"
            written.append(path)
            write_pairs(part, path)
