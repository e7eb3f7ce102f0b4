"""Command-line interface: one subcommand per pipeline stage, plus ``run``."""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .aligner import AlignParams, BilingualDictionary, align_corpus, postprocess
from .exporter import ExportError, compute_stats, read_pairs, write_pairs, write_store, write_tmx
from .langid import LanguageProfile, default_profiles, detect, train_profile
from .mt_eval import SplitSpec, bleu, split, tokenize
from .pipeline import PipelineError, language_check, load_config, load_params, run_pipeline
from .quality import (
    AnnotationError, annotate, apply_labels, load_samples, read_label_log, sample_pairs, save_samples,
    summarize,
)
from .records import ColumnMap, IngestReport, filter_bilingual, normalize, parse_records, write_records
from .segmenter import Segmenter

log = logging.getLogger("tdcorpus")


def _records_in(path):
    return parse_records(path, ColumnMap.identity())


def _records_out(records, path):
    write_records(records, path, ColumnMap.identity())


def _profiles(paths):
    if paths:
        return tuple(LanguageProfile.load(p) for p in paths)
    return default_profiles()


def cmd_ingest(args):
    cmap = ColumnMap.from_file(args.column_map) if args.column_map else ColumnMap.default()
    report = IngestReport()
    records = []
    seen = set()
    for path in args.inputs:
        for rec in parse_records(path, cmap, report):
            if rec.id not in seen:
                seen.add(rec.id)
                records.append(rec)
    n = len(records)
    if not args.keep_monolingual:
        records = filter_bilingual(records)
    if not args.no_normalize:
        records = [normalize(r) for r in records]
    _records_out(records, args.output)
    print(f"rows {report.rows}  records {n}  bilingual {len(records)}  malformed {report.malformed}  "
          f"undecodable {report.undecodable}  duplicates {report.duplicates}", file=sys.stderr)


def cmd_langid_train(args):
    texts = []
    for path in args.texts:
        with open(path, encoding="utf-8") as fh:
            texts += [line for line in fh.read().splitlines() if line.strip() and not line.startswith("#")]
    train_profile(texts, args.lang, args.n_max, args.smoothing).save(args.output)


def cmd_langid_detect(args):
    profiles = _profiles(args.profiles)
    lines = [" ".join(args.text)] if args.text else sys.stdin.read().splitlines()
    for line in lines:
        lang, margin = detect(line, profiles)
        print(f"{lang}\t{margin:.4f}")


def cmd_langid_check(args):
    records = _records_in(args.records)
    kept, counts = language_check(records, _profiles(args.profiles), args.policy)
    _records_out(kept, args.output)
    print("  ".join(f"{k} {v}" for k, v in counts.items()) + f"  kept {len(kept)}", file=sys.stderr)


def cmd_segment(args):
    seg = Segmenter(args.lang, split_semicolon=args.split_semicolon)
    for line in sys.stdin:
        for sent in seg.segment(line.strip()):
            print(sent.text)


def cmd_align(args):
    params = load_params(args.params) if args.params else AlignParams()
    if args.chunk_limit is not None:
        params = AlignParams(params.c, params.s2, params.bead_priors, params.dict_weight, args.chunk_limit)
    # same document order as the full pipeline; pass 1 aligns the batch as one bitext
    records = sorted(_records_in(args.records), key=lambda r: r.id)
    pt = Segmenter("pt", split_semicolon=args.split_semicolon)
    en = Segmenter("en", split_semicolon=args.split_semicolon)
    docs = [(pt.segment(r.abstract_native), en.segment(r.abstract_foreign)) for r in records]
    dictionary = BilingualDictionary.load(args.dict) if args.dict else None
    result = align_corpus(docs, params, dictionary, args.workers)
    if args.save_dict:
        result.dictionary.save(args.save_dict)
    pairs = []
    for rec, (src, tgt), beads in zip(records, docs, result.beads):
        pairs.extend(postprocess(beads, src, tgt, rec.id))
    write_pairs(pairs, args.output)
    print(f"documents {len(docs)}  pairs {len(pairs)}  dictionary {len(result.dictionary)}", file=sys.stderr)


def cmd_export(args):
    pairs = read_pairs(args.pairs)
    records = _records_in(args.records)
    if args.tmx:
        write_tmx(pairs, args.tmx)
    if args.store:
        write_store(pairs, records, args.store)
    stats = compute_stats(pairs, records)
    for path, text in ((args.stats, stats.format_table()), (args.stats_tsv, stats.format_tsv())):
        if path:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)


def cmd_stats(args):
    stats = compute_stats(read_pairs(args.pairs), _records_in(args.records))
    sys.stdout.write(stats.format_tsv() if args.tsv else stats.format_table())


def cmd_split(args):
    parts = split(read_pairs(args.pairs), SplitSpec(args.dev, args.test, args.seed))
    for name, part in zip(("train", "dev", "test"), parts):
        write_pairs(part, f"{args.prefix}.{name}.tsv")
        print(f"{name}\t{len(part)}")


def cmd_bleu(args):
    with open(args.hyp, encoding="utf-8") as fh:
        hyps = [tokenize(line) for line in fh.read().splitlines()]
    with open(args.ref, encoding="utf-8") as fh:
        refs = [tokenize(line) for line in fh.read().splitlines()]
    sys.stdout.write(bleu(hyps, refs, smooth=args.smooth).format(percent=args.percent))


def cmd_sample_eval(args):
    samples = sample_pairs(read_pairs(args.pairs), args.n, args.seed)
    save_samples(samples, args.output)
    print(f"{len(samples)} samples written to {args.output}", file=sys.stderr)


def cmd_annotate(args):
    samples = load_samples(args.samples)
    if args.keys is not None:
        keys = iter(k for k in args.keys.split(",") if k.strip())

        def read_key(prompt):
            try:
                return next(keys)
            except StopIteration:
                raise EOFError from None

        samples = annotate(samples, args.log, read_key=read_key)
    else:
        samples = annotate(samples, args.log)
    done = sum(s.label != "unlabeled" for s in samples)
    print(f"{done}/{len(samples)} samples labeled", file=sys.stderr)


def cmd_eval_report(args):
    samples = apply_labels(load_samples(args.samples), read_label_log(args.log))
    sys.stdout.write(summarize(samples).format())


def cmd_run(args):
    report = run_pipeline(load_config(args.config))
    sys.stdout.write(report.format())


def build_parser():
    p = argparse.ArgumentParser(prog="tdcorpus", description="Build a pt-en parallel corpus from bilingual abstracts.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", help="parse catalog files into a records file")
    s.add_argument("inputs", nargs="+")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--column-map", help="key=value column map (default: bundled catalog layout)")
    s.add_argument("--keep-monolingual", action="store_true", help="skip the bilingual filter")
    s.add_argument("--no-normalize", action="store_true")
    s.set_defaults(func=cmd_ingest)

    lang = sub.add_parser("langid", help="train, apply or check language profiles")
    lsub = lang.add_subparsers(dest="langid_command", required=True)
    s = lsub.add_parser("train")
    s.add_argument("texts", nargs="+", help="text files, one sentence per line")
    s.add_argument("--lang", required=True)
    s.add_argument("--n-max", type=int, default=3)
    s.add_argument("--smoothing", type=float, default=0.5)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_langid_train)
    s = lsub.add_parser("detect")
    s.add_argument("text", nargs="*", help="text to classify (default: one text per stdin line)")
    s.add_argument("--profiles", nargs=2, metavar=("PT", "EN"))
    s.set_defaults(func=cmd_langid_detect)
    s = lsub.add_parser("check", help="drop or swap records whose abstracts are in the wrong fields")
    s.add_argument("records")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--policy", choices=("drop", "swap"), default="drop")
    s.add_argument("--profiles", nargs=2, metavar=("PT", "EN"))
    s.set_defaults(func=cmd_langid_check)

    s = sub.add_parser("segment", help="split stdin text into one sentence per line")
    s.add_argument("--lang", choices=("pt", "en"), default="pt")
    s.add_argument("--split-semicolon", action="store_true")
    s.set_defaults(func=cmd_segment)

    s = sub.add_parser("align", help="segment and align a records file")
    s.add_argument("records")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--dict", help="src<TAB>tgt<TAB>score dictionary; skips the first pass")
    s.add_argument("--save-dict", help="write the bootstrapped dictionary here")
    s.add_argument("--chunk-limit", type=int)
    s.add_argument("--params", help="INI file with an [align] section")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--split-semicolon", action="store_true")
    s.set_defaults(func=cmd_align)

    s = sub.add_parser("export", help="write TMX, store and statistics from aligned pairs")
    s.add_argument("pairs")
    s.add_argument("--records", required=True)
    s.add_argument("--tmx")
    s.add_argument("--store")
    s.add_argument("--stats")
    s.add_argument("--stats-tsv")
    s.set_defaults(func=cmd_export)

    s = sub.add_parser("stats", help="per knowledge area corpus statistics")
    s.add_argument("pairs")
    s.add_argument("--records", required=True)
    s.add_argument("--tsv", action="store_true", help="tab-separated output")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("split", help="seeded train/dev/test split of a pairs file")
    s.add_argument("pairs")
    s.add_argument("--dev", type=int, required=True)
    s.add_argument("--test", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--prefix", required=True, help="writes PREFIX.{train,dev,test}.tsv")
    s.set_defaults(func=cmd_split)

    s = sub.add_parser("bleu", help="corpus BLEU of a hypothesis file against a reference file")
    s.add_argument("--hyp", required=True)
    s.add_argument("--ref", required=True)
    s.add_argument("--percent", action="store_true", help="report on the 0-100 scale")
    s.add_argument("--smooth", action="store_true", help="add-one smoothing for n >= 2")
    s.set_defaults(func=cmd_bleu)

    s = sub.add_parser("sample-eval", help="draw pairs for manual evaluation")
    s.add_argument("pairs")
    s.add_argument("--n", type=int, default=400)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_sample_eval)

    s = sub.add_parser("annotate", help="label samples (keys c/p/n/s/q)")
    s.add_argument("samples")
    s.add_argument("--log", required=True, help="append-only label log; reused to resume")
    s.add_argument("--keys", help="comma-separated scripted keys instead of the terminal")
    s.set_defaults(func=cmd_annotate)

    s = sub.add_parser("eval-report", help="summarise labels")
    s.add_argument("samples")
    s.add_argument("--log", required=True)
    s.set_defaults(func=cmd_eval_report)

    s = sub.add_parser("run", help="run the whole pipeline")
    s.add_argument("--config", required=True)
    s.set_defaults(func=cmd_run)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except PipelineError as exc:
        print(f"tdcorpus: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, ExportError, AnnotationError) as exc:
        print(f"tdcorpus: [{args.command}] {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
