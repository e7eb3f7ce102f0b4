"""Acceptance criteria, each at its stated tolerance; one summary line per criterion."""

import random
import shutil
import sqlite3
import string
import time
from pathlib import Path

from oracles import brute_force, is_cover, sentences
from tdcorpus.aligner import AlignedPair, AlignParams, align_corpus, align_pass, check_cover, chunked_align, total_cost
from tdcorpus.aligner.align import plan_chunks
from tdcorpus.exporter import dump_store, read_pairs, read_tmx, validate_tmx, write_tmx
from tdcorpus.langid import check_consistency, default_profiles, detect, read_seed, train_profile
from tdcorpus.mt_eval import bleu, tokenize
from tdcorpus.pipeline import load_config, run_pipeline
from tdcorpus.records import ColumnMap, DocumentRecord, normalize, parse_records, write_records
from tdcorpus.synth import BitextGenerator, bead_f1, seed_records

FIXTURES = Path(__file__).parent / "fixtures"


def _fixture_dir(root):
    root.mkdir(parents=True, exist_ok=True)
    shutil.copy(FIXTURES / "tdc_10.csv", root)
    shutil.copy(FIXTURES / "pipeline.ini", root)
    (root / "out").mkdir()
    return root


def _write_config(path, csv_path, out):
    path.write_text(
        f"[input]\npaths = {csv_path}\n[align]\nworkers = 1\n"
        f"[output]\ntmx = {out / 'corpus.tmx'}\nstore = {out / 'corpus.sqlite'}\n"
        f"pairs = {out / 'pairs.tsv'}\nstats_tsv = {out / 'stats.tsv'}\n",
        encoding="utf-8",
    )


# 1 ---------------------------------------------------------------------------------

def test_c1_oracle_equivalence(criterion):
    rng = random.Random(2024)
    params = AlignParams()
    docs = []
    for _ in range(500):
        ls = [rng.randint(5, 200) for _ in range(rng.randint(0, 6))]
        lt = [rng.randint(5, 200) for _ in range(rng.randint(0, 6))]
        docs.append((sentences(ls), sentences(lt)))
    t0 = time.perf_counter()
    results = [align_pass(s, t, params) for s, t in docs]
    elapsed = time.perf_counter() - t0
    cost_bad = bead_bad = unique = 0
    for (s, t), beads in zip(docs, results):
        ranked = brute_force(s, t, params)
        if not is_cover(beads, len(s), len(t)) or abs(total_cost(beads) - ranked[0][0]) > 1e-9:
            cost_bad += 1
        if len(ranked) == 1 or ranked[1][0] - ranked[0][0] > 1e-9:
            unique += 1
            if [(b.kind, b.src_span, b.tgt_span) for b in beads] != ranked[0][1]:
                bead_bad += 1
    ok = cost_bad == 0 and bead_bad == 0 and elapsed < 10.0
    assert criterion(1, "alignment oracle equivalence", ok,
                     f"500 docs, cost mismatches {cost_bad}, bead mismatches {bead_bad}/{unique} unique optima, "
                     f"align_pass {elapsed:.2f}s < 10s")


# 2 ---------------------------------------------------------------------------------

def test_c2_synthetic_recovery(criterion):
    gen = BitextGenerator(seed=0, lexicon_size=200, c=1.0, s2=6.8)
    corpus = gen.corpus(100, units=(20, 40))
    result = align_corpus([(d.src, d.tgt) for d in corpus])
    gold, pass2 = [], []
    off_s = off_t = 0
    for doc, beads in zip(corpus, result.beads):
        gold += [(k, (s[0] + off_s, s[1] + off_s), (t[0] + off_t, t[1] + off_t)) for k, s, t in doc.gold]
        pass2 += [b.shifted(off_s, off_t) for b in beads]
        off_s += len(doc.src)
        off_t += len(doc.tgt)
    f1_1 = bead_f1(result.pass1, gold)
    f1_2 = bead_f1(pass2, gold)
    ok = f1_1 >= 0.90 and f1_2 >= f1_1
    assert criterion(2, "synthetic recovery", ok,
                     f"pass-1 F1 {f1_1:.4f} (>= 0.90 required), pass-2 F1 {f1_2:.4f} (>= pass-1), "
                     f"dictionary {len(result.dictionary)} entries")


# 3 ---------------------------------------------------------------------------------

def test_c3_chunking_equivalence(criterion):
    gen = BitextGenerator(seed=3)
    docs = []
    n = 0
    while n < 25_000:
        d = gen.document(gen.rng.randint(20, 40))
        docs.append((d.src, d.tgt))
        n += len(d.src)
    params = AlignParams()  # chunk_limit 10,000
    chunks = plan_chunks(docs, params.chunk_limit)
    beads = chunked_align(docs, params)
    src = [s for d in docs for s in d[0]]
    tgt = [t for d in docs for t in d[1]]
    try:
        check_cover(beads, len(src), len(tgt))
        cover = True
    except Exception:
        cover = False
    whole = align_pass(src, tgt, params)
    ends = {(b.src_span[1], b.tgt_span[1]) for b in whole}
    cuts = set()
    o_s = o_t = 0
    for a, b in chunks:
        o_s += sum(len(docs[d][0]) for d in range(a, b))
        o_t += sum(len(docs[d][1]) for d in range(a, b))
        cuts.add((o_s, o_t))
    through = cuts <= ends  # the unchunked optimum passes through every chunk boundary
    equal = beads == whole
    ok = cover and len(chunks) > 1 and (equal if through else True)
    assert criterion(3, "chunking equivalence", ok,
                     f"{len(src)}x{len(tgt)} sentences in {len(chunks)} chunks, valid cover {cover}, "
                     f"unchunked path through boundaries {through}, bead-for-bead equal {equal}")
    assert through, "batch does not exercise the equality clause"


# 4 ---------------------------------------------------------------------------------

def test_c4_bleu_fixtures(criterion):
    T = tokenize
    checks = []

    r = bleu([T("the cat is on the mat"), T("a b c d e")], [T("the cat is on the mat"), T("a b c d e")])
    checks.append(("identity", abs(r.score - 1.0) <= 1e-9))
    r = bleu([T("the the the the the the the")], [T("the cat is on the mat")])
    checks.append(("clipped p1 = 2/7", r.matches[0] == 2 and r.totals[0] == 7))
    r = bleu([T("the cat sat on the mat")], [T("the cat is on the mat")])
    checks.append(("no 4-gram overlap", r.score == 0.0 and r.matches[3] == 0))
    r = bleu([T("the cat sat on the mat")], [T("the cat is on the mat")], smooth=True)
    checks.append(("add-one smoothing", abs(r.score - (1 / 18) ** 0.25) <= 1e-9))
    r = bleu([T("a b c d"), T("w x y z")], [T("a b c d e f"), T("w x y z")])
    checks.append(("brevity penalty", abs(r.score - 2.718281828459045 ** -0.25) <= 1e-9))
    r = bleu([T("a b c d"), T("a b c e")], [T("a b c d"), T("a b c d")])
    checks.append(("corpus-summed counts", abs(r.score - (105 / 384) ** 0.25) <= 1e-9))
    failed = [name for name, good in checks if not good]
    assert criterion(4, "BLEU correctness", not failed,
                     f"{len(checks) - len(failed)}/{len(checks)} hand-computed fixtures within 1e-9"
                     + (f", failed: {failed}" if failed else ""))


# 5 ---------------------------------------------------------------------------------

def test_c5_tmx_roundtrip(criterion, tmp_path):
    rng = random.Random(5)
    alphabet = string.ascii_letters + string.digits + " &<>\"'.,;:!?()[]{}/\\%#@" + "áéíóúãõçÁÇ€—“”«»\t\n\r"

    def text():
        return "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 80)))

    pairs = [AlignedPair(str(rng.randint(1, 10**7)), text(), text(), rng.choice(["1-1", "2-1", "1-2", "2-2"]))
             for _ in range(1000)]
    path = tmp_path / "rt.tmx"
    write_tmx(pairs, path)
    back = read_tmx(path)
    problems = validate_tmx(path)
    key = [(p.doc_id, p.src_text, p.tgt_text, p.bead_kind) for p in pairs]
    mismatches = sum(a != (b.doc_id, b.src_text, b.tgt_text, b.bead_kind) for a, b in zip(key, back))
    ok = len(back) == 1000 and mismatches == 0 and not problems
    assert criterion(5, "TMX round-trip", ok,
                     f"{len(back)}/1000 units read back, {mismatches} field mismatches, "
                     f"{len(problems)} validator problems")


# 6 ---------------------------------------------------------------------------------

def test_c6_pipeline_determinism(criterion, tmp_path):
    runs = []
    for name in ("a", "b"):
        d = _fixture_dir(tmp_path / name)
        report = run_pipeline(load_config(d / "pipeline.ini"))
        out = d / "out"
        runs.append((report, (out / "corpus.tmx").read_bytes(), (out / "stats.txt").read_bytes(),
                     (out / "stats.tsv").read_bytes(), dump_store(out / "corpus.sqlite")))
    (ra, *fa), (rb, *fb) = runs
    identical = fa == fb
    counts = [ra.count("ingest"), ra.count("filter"), ra.count("langid")]
    ok = identical and counts == [10, 9, 8] and [rb.count(s) for s in ("ingest", "filter", "langid")] == counts
    assert criterion(6, "pipeline determinism", ok,
                     f"TMX/stats/store identical {identical}, records {' -> '.join(map(str, counts))}, "
                     f"{ra.pairs} pairs")


# 7 ---------------------------------------------------------------------------------

def test_c7_post_filter(criterion, tmp_path):
    rng = random.Random(7)
    records = []
    for r in seed_records(300, sentences=(3, 8), seed=7):
        pt, en = r.abstract_native, r.abstract_foreign
        if rng.random() < 0.3:  # tiny sentence pair, aligned 1-1 and then filtered
            pt, en = pt + " a.", en + " b."
        if rng.random() < 0.3:  # long extra sentence on one side only: too long to merge, left as 1-0
            pt = pt + " " + " ".join(["esta frase adicional não tem tradução no resumo em inglês"] * 7) + "."
        records.append(DocumentRecord(**{**r.__dict__, "abstract_native": pt, "abstract_foreign": en}))
    csv_path = tmp_path / "in.csv"
    write_records(records, csv_path, ColumnMap.default())
    out = tmp_path / "out"
    out.mkdir()
    _write_config(tmp_path / "p.ini", csv_path, out)
    report = run_pipeline(load_config(tmp_path / "p.ini"))
    align = next(s for s in report.stages if s.stage == "align")

    con = sqlite3.connect(out / "corpus.sqlite")
    store = con.execute("SELECT src_text, tgt_text, bead_kind FROM pairs").fetchall()
    con.close()
    exported = (
        [(p.src_text, p.tgt_text, p.bead_kind) for p in read_tmx(out / "corpus.tmx")]
        + [(p.src_text, p.tgt_text, p.bead_kind) for p in read_pairs(out / "pairs.tsv")]
        + store
    )
    short = sum(len(s) < 3 or len(t) < 3 for s, t, _ in exported)
    indel = sum(k in ("1-0", "0-1") for _, _, k in exported)
    exercised = align.drops.get("short", 0) > 0 and align.drops.get("unaligned", 0) > 0
    ok = short == 0 and indel == 0 and exercised
    assert criterion(7, "post-filter properties", ok,
                     f"scanned {len(exported)} exported pairs (TMX + TSV + store): {short} short, {indel} "
                     f"indel; filters removed {align.drops.get('short', 0)} short and "
                     f"{align.drops.get('unaligned', 0)} indel beads")


# 8 ---------------------------------------------------------------------------------

def test_c8_throughput(criterion, tmp_path):
    gen = BitextGenerator(seed=8)
    docs = []
    n = 0
    while n < 10_000:
        d = gen.document(gen.rng.randint(20, 40))
        docs.append((d.src, d.tgt))
        n += len(d.src)
    t0 = time.perf_counter()
    align_corpus(docs)
    two_pass = time.perf_counter() - t0

    records = seed_records(12_600, sentences=(4, 12), seed=8)
    csv_path = tmp_path / "big.csv"
    write_records(records, csv_path, ColumnMap.default())
    out = tmp_path / "out"
    out.mkdir()
    _write_config(tmp_path / "p.ini", csv_path, out)
    t0 = time.perf_counter()
    report = run_pipeline(load_config(tmp_path / "p.ini"))
    full = time.perf_counter() - t0
    ok = two_pass < 60 and full < 600 and report.sentences[0] >= 100_000
    assert criterion(8, "throughput (soft)", ok,
                     f"two-pass {n} sentences/side in {two_pass:.1f}s (< 60s); full pipeline on "
                     f"{report.sentences[0]} pt / {report.sentences[1]} en sentences, "
                     f"{report.pairs} pairs out, {full:.1f}s (< 600s)")


# 9 ---------------------------------------------------------------------------------

def test_c9_language_check(criterion):
    pt, en = read_seed("pt"), read_seed("en")
    accs = []
    for seed in range(5):
        rng = random.Random(seed)
        held = set(rng.sample(range(len(pt)), 100))  # line-aligned corpora: hold out both sides
        profiles = (train_profile([x for i, x in enumerate(pt) if i not in held], "pt"),
                    train_profile([x for i, x in enumerate(en) if i not in held], "en"))
        correct = sum(detect(pt[i], profiles)[0] == "pt" for i in held)
        correct += sum(detect(en[i], profiles)[0] == "en" for i in held)
        accs.append(correct / 200)

    profiles = default_profiles()
    swapped = [DocumentRecord(r.id, abstract_native=r.abstract_foreign, abstract_foreign=r.abstract_native)
               for r in seed_records(300, sentences=(1, 6), seed=9)]
    fixture = [normalize(r) for r in parse_records(FIXTURES / "tdc_10.csv", ColumnMap.default())]
    swapped.append(next(r for r in fixture if check_consistency(r, profiles) == "swapped"))
    hits = sum(check_consistency(normalize(r), profiles) == "swapped" for r in swapped)
    ok = min(accs) >= 0.99 and hits == len(swapped)
    assert criterion(9, "language check", ok,
                     f"held-out accuracy min {min(accs):.3f} over 5 splits of 100+100 sentences (>= 0.99); "
                     f"swapped {hits}/{len(swapped)} constructed cases")
