"""Reading thesis/dissertation records from delimited catalog dumps."""

from __future__ import annotations

import configparser
import csv
import dataclasses
import logging
import re
from dataclasses import dataclass, field
from importlib import resources

log = logging.getLogger(__name__)

FIELDS = (
    "id", "year", "university", "title_native", "doc_type", "keywords_native",
    "keywords_foreign", "knowledge_area", "subareas", "url_pdf",
    "abstract_native", "abstract_foreign",
)
REQUIRED_FIELDS = ("id", "abstract_native", "abstract_foreign")
LIST_FIELDS = ("keywords_native", "keywords_foreign", "subareas")
# lowercased; id and url_pdf are case-sensitive keys and stay as they are
TEXT_FIELDS = (
    "university", "title_native", "knowledge_area", "abstract_native", "abstract_foreign",
)
DOC_TYPES = ("thesis", "dissertation", "other")

_DOC_TYPE_ALIASES = {
    "thesis": "thesis", "tese": "thesis", "doutorado": "thesis",
    "dissertation": "dissertation", "dissertacao": "dissertation",
    "dissertação": "dissertation", "mestrado": "dissertation",
    "mestrado profissional": "dissertation",
}
_QUOTING = {
    "minimal": csv.QUOTE_MINIMAL,
    "all": csv.QUOTE_ALL,
    "none": csv.QUOTE_NONE,
}
_DELIMITER_NAMES = {"comma": ",", "tab": "\t", "\\t": "\t", "semicolon": ";", "pipe": "|"}
_SURROGATES = re.compile("[\udc80-\udcff]")
_WHITESPACE = re.compile(r"\s+")
# C0/C1 controls other than whitespace, plus zero-width and BOM characters
_CONTROL = re.compile("[\x00-\x08\x0e-\x1f\x7f-\x84\x86-\x9f\u200b-\u200d\ufeff]")


class ConfigError(ValueError):
    """Bad column map or input layout."""


@dataclass(frozen=True)
class DocumentRecord:
    id: str
    year: int | None = None
    university: str = ""
    title_native: str = ""
    doc_type: str = "other"
    keywords_native: tuple = ()
    keywords_foreign: tuple = ()
    knowledge_area: str = ""
    subareas: tuple = ()
    url_pdf: str = ""
    abstract_native: str = ""
    abstract_foreign: str = ""


@dataclass
class ColumnMap:
    columns: dict
    delimiter: str = ","
    quoting: str = "minimal"
    list_separator: str = ";"
    encoding: str = "utf-8"
    fallback_encoding: str | None = "latin-1"

    def __post_init__(self):
        unknown = set(self.columns) - set(FIELDS)
        if unknown:
            raise ConfigError(f"unknown record fields in column map: {sorted(unknown)}")
        missing = [f for f in REQUIRED_FIELDS if not self.columns.get(f)]
        if missing:
            raise ConfigError(f"column map lacks required fields: {missing}")
        if len(self.delimiter) != 1:
            raise ConfigError(f"delimiter must be one character, got {self.delimiter!r}")
        if self.quoting not in _QUOTING:
            raise ConfigError(f"quoting must be one of {sorted(_QUOTING)}")

    @classmethod
    def identity(cls, delimiter="\t", quoting="none"):
        """Headers equal to field names; the layout of intermediate record files."""
        return cls({f: f for f in FIELDS}, delimiter=delimiter, quoting=quoting)

    @classmethod
    def from_string(cls, text):
        """Parse ``key = value`` lines: field names map to headers, plus format keys."""
        parser = configparser.ConfigParser(interpolation=None, delimiters=("=",))
        parser.optionxform = str
        parser.read_string("[map]\n" + text)
        opts = dict(parser["map"])
        kwargs = {}
        for key in ("quoting", "list_separator", "encoding"):
            if key in opts:
                kwargs[key] = opts.pop(key)
        if "delimiter" in opts:
            d = opts.pop("delimiter")
            kwargs["delimiter"] = _DELIMITER_NAMES.get(d.lower(), d)
        if "fallback_encoding" in opts:
            fb = opts.pop("fallback_encoding")
            kwargs["fallback_encoding"] = None if fb.lower() in ("", "none", "off") else fb
        return cls(opts, **kwargs)

    @classmethod
    def from_file(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_string(fh.read())

    @classmethod
    def default(cls):
        """The bundled map for the public catalog layout."""
        text = resources.files("tdcorpus.data").joinpath("tdc_columns.conf").read_text("utf-8")
        return cls.from_string(text)

    def dialect(self):
        kw = dict(delimiter=self.delimiter, quoting=_QUOTING[self.quoting])
        if self.quoting == "none":
            kw["quotechar"] = None
        return kw


@dataclass
class IngestReport:
    rows: int = 0
    records: int = 0
    malformed: int = 0
    undecodable: int = 0
    duplicates: int = 0
    warnings: list = field(default_factory=list)

    def warn(self, msg):
        self.warnings.append(msg)
        log.warning(msg)


def _doc_type(value):
    return _DOC_TYPE_ALIASES.get(value.strip().casefold(), "other")


def _split_list(value, sep):
    return tuple(p.strip() for p in value.split(sep) if p.strip())


def _build(values, sep):
    kw = {}
    for name, raw in values.items():
        if name in LIST_FIELDS:
            kw[name] = _split_list(raw, sep)
        elif name == "year":
            raw = raw.strip()
            kw[name] = int(raw) if raw else None
        elif name == "doc_type":
            kw[name] = _doc_type(raw)
        else:
            kw[name] = raw
    return DocumentRecord(**kw)


def parse_records(path, column_map=None, report=None):
    """Read one record per data row, in file order.

    Rows with the wrong field count, an empty id, an unparseable year or
    bytes that cannot be decoded are skipped with a warning; later rows
    repeating an id are dropped. A mapped column missing from the header
    raises ConfigError.
    """
    cmap = column_map or ColumnMap.default()
    report = report if report is not None else IngestReport()
    records = []
    seen = set()
    with open(path, encoding=cmap.encoding, errors="surrogateescape", newline="") as fh:
        reader = csv.reader(fh, **cmap.dialect())
        try:
            header = next(reader)
        except StopIteration:
            return records
        positions = {}
        for name, column in cmap.columns.items():
            if column not in header:
                raise ConfigError(f"{path}: column {column!r} (for {name}) not in header")
            positions[name] = header.index(column)

        while True:
            try:
                row = next(reader)
            except StopIteration:
                break
            except csv.Error as exc:
                report.rows += 1
                report.malformed += 1
                report.warn(f"{path}:{reader.line_num}: unparseable row skipped ({exc})")
                continue
            if not row:
                continue
            report.rows += 1
            line = reader.line_num
            if len(row) != len(header):
                report.malformed += 1
                report.warn(f"{path}:{line}: expected {len(header)} fields, got {len(row)}; row skipped")
                continue
            if any(_SURROGATES.search(v) for v in row):
                try:
                    if not cmap.fallback_encoding:
                        raise UnicodeError("no fallback encoding")
                    row = [v.encode(cmap.encoding, "surrogateescape").decode(cmap.fallback_encoding, "strict")
                           if _SURROGATES.search(v) else v for v in row]
                except UnicodeError:
                    report.undecodable += 1
                    report.warn(f"{path}:{line}: undecodable bytes; row skipped")
                    continue
            values = {name: row[pos] for name, pos in positions.items()}
            try:
                record = _build(values, cmap.list_separator)
            except (ValueError, UnicodeError) as exc:
                report.malformed += 1
                report.warn(f"{path}:{line}: {exc}; row skipped")
                continue
            if not record.id.strip():
                report.malformed += 1
                report.warn(f"{path}:{line}: empty id; row skipped")
                continue
            if record.id in seen:
                report.duplicates += 1
                report.warn(f"{path}:{line}: duplicate id {record.id!r}; keeping first occurrence")
                continue
            seen.add(record.id)
            records.append(record)
    report.records += len(records)
    return records


def write_records(records, path, column_map=None):
    """Serialise records in ``column_map``'s layout (inverse of parse_records)."""
    cmap = column_map or ColumnMap.default()
    names = [f for f in FIELDS if f in cmap.columns]
    with open(path, "w", encoding=cmap.encoding, newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n", **cmap.dialect())
        writer.writerow([cmap.columns[f] for f in names])
        for rec in records:
            row = []
            for name in names:
                value = getattr(rec, name)
                if name in LIST_FIELDS:
                    value = cmap.list_separator.join(value)
                elif value is None:
                    value = ""
                row.append(str(value))
            writer.writerow(row)


def filter_bilingual(records):
    """Keep records whose two abstracts are both non-blank."""
    return [r for r in records if r.abstract_native.strip() and r.abstract_foreign.strip()]


def normalize_text(text):
    """Full case fold, controls removed, whitespace runs to one space, trimmed."""
    return _WHITESPACE.sub(" ", _CONTROL.sub("", text.casefold())).strip()


def normalize(record):
    changes = {name: normalize_text(getattr(record, name)) for name in TEXT_FIELDS}
    for name in LIST_FIELDS:
        items = (normalize_text(v) for v in getattr(record, name))
        changes[name] = tuple(v for v in items if v)
    return dataclasses.replace(record, **changes)
