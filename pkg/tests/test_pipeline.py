import shutil
import sqlite3
from pathlib import Path

import pytest

from tdcorpus.exporter import dump_store, read_pairs, read_tmx, validate_tmx
from tdcorpus.pipeline import PipelineConfig, PipelineError, language_check, load_config, run_pipeline
from tdcorpus.langid import default_profiles
from tdcorpus.records import DocumentRecord

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def workdir(tmp_path):
    shutil.copy(FIXTURES / "tdc_10.csv", tmp_path)
    shutil.copy(FIXTURES / "pipeline.ini", tmp_path)
    (tmp_path / "out").mkdir()
    return tmp_path


def outputs(d):
    out = d / "out"
    return {p.name: p.read_bytes() for p in sorted(out.iterdir()) if p.suffix != ".sqlite"}


def test_stage_counts_on_fixture(workdir):
    report = run_pipeline(load_config(workdir / "pipeline.ini"))
    assert report.count("ingest") == 10
    assert report.count("filter") == 9
    assert report.count("langid") == 8
    stages = {s.stage: s for s in report.stages}
    assert stages["filter"].drops == {"monolingual": 1}
    assert stages["langid"].drops == {"swapped": 1}
    ins = [s.count_in for s in report.stages[:3]]
    outs = [s.count_out for s in report.stages[:3]]
    assert outs == sorted(outs, reverse=True) and ins[1:] == outs[:-1]


def test_pairs_only_from_surviving_records(workdir):
    report = run_pipeline(load_config(workdir / "pipeline.ini"))
    pairs = read_tmx(workdir / "out" / "corpus.tmx")
    con = sqlite3.connect(workdir / "out" / "corpus.sqlite")
    docs = {r[0] for r in con.execute("SELECT id FROM documents")}
    n_store = con.execute("SELECT COUNT(*) FROM pairs").fetchone()[0]
    con.close()
    assert len(docs) == 8
    assert {p.doc_id for p in pairs} <= docs
    assert report.pairs == len(pairs) == n_store > 0
    assert validate_tmx(workdir / "out" / "corpus.tmx") == []


def test_doc_ids_in_sorted_order(workdir):
    run_pipeline(load_config(workdir / "pipeline.ini"))
    ids = [p.doc_id for p in read_pairs(workdir / "out" / "pairs.tsv")]
    assert ids == sorted(ids)


def test_rerun_is_byte_identical(workdir):
    cfg = load_config(workdir / "pipeline.ini")
    run_pipeline(cfg)
    first, store = outputs(workdir), dump_store(workdir / "out" / "corpus.sqlite")
    run_pipeline(cfg)
    assert outputs(workdir) == first
    assert dump_store(workdir / "out" / "corpus.sqlite") == store


def test_split_outputs(workdir):
    run_pipeline(load_config(workdir / "pipeline.ini"))
    parts = [read_pairs(workdir / "out" / f"split.{n}.tsv") for n in ("train", "dev", "test")]
    assert [len(p) for p in parts[1:]] == [2, 2]
    assert sum(len(p) for p in parts) == len(read_pairs(workdir / "out" / "pairs.tsv"))


def test_workers_do_not_change_output(workdir):
    cfg = load_config(workdir / "pipeline.ini")
    run_pipeline(cfg)
    one = outputs(workdir)
    cfg.workers = 2
    run_pipeline(cfg)
    assert outputs(workdir) == one


def test_empty_input(workdir):
    (workdir / "tdc_10.csv").write_text("")
    report = run_pipeline(load_config(workdir / "pipeline.ini"))
    assert all(s.count_in == s.count_out == 0 for s in report.stages)
    assert report.pairs == 0
    assert list((workdir / "out").iterdir()) == []


def test_missing_input_fails_in_config_stage(workdir):
    (workdir / "tdc_10.csv").unlink()
    with pytest.raises(PipelineError) as err:
        run_pipeline(load_config(workdir / "pipeline.ini"))
    assert err.value.stage == "config"


def test_bad_column_fails_in_ingest_stage(workdir):
    text = (workdir / "tdc_10.csv").read_text(encoding="utf-8").replace("DS_ABSTRACT", "OTHER", 1)
    (workdir / "tdc_10.csv").write_text(text, encoding="utf-8")
    with pytest.raises(PipelineError) as err:
        run_pipeline(load_config(workdir / "pipeline.ini"))
    assert err.value.stage == "ingest" and "DS_ABSTRACT" in str(err.value)


def test_export_failure_removes_partial_outputs(workdir):
    (workdir / "out" / "corpus.sqlite").mkdir()  # the store cannot replace a directory
    with pytest.raises(PipelineError) as err:
        run_pipeline(load_config(workdir / "pipeline.ini"))
    assert err.value.stage == "export"
    assert [p.name for p in (workdir / "out").iterdir()] == ["corpus.sqlite"]
    assert not any(p.name.startswith(".tmp-") for p in (workdir / "out").iterdir())


def test_swap_policy_keeps_swapped_record(workdir):
    cfg = load_config(workdir / "pipeline.ini")
    cfg.langid_policy = "swap"
    report = run_pipeline(cfg)
    assert report.count("langid") == 9


def test_config_validation(workdir):
    cfg = load_config(workdir / "pipeline.ini")
    assert cfg.split.seed == 13 and cfg.params.s2 == 6.8
    for bad in (dict(langid_policy="keep"), dict(workers=0), dict(inputs=[]),
                dict(tmx=str(workdir / "nowhere" / "x.tmx")), dict(split_prefix=None)):
        c = load_config(workdir / "pipeline.ini")
        for k, v in bad.items():
            setattr(c, k, v)
        with pytest.raises(ValueError):
            c.validate()


def test_split_requires_seed(workdir):
    text = (workdir / "pipeline.ini").read_text().replace("seed = 13\n", "")
    (workdir / "pipeline.ini").write_text(text)
    with pytest.raises(ValueError, match="seed"):
        load_config(workdir / "pipeline.ini")


def test_align_section_priors(tmp_path):
    (tmp_path / "p.ini").write_text("[input]\npaths = x\n[align]\nc = 1.1\nprior.2-2 = 0.005\nprior.1-1 = 0.896\n")
    cfg = load_config(tmp_path / "p.ini")
    assert cfg.params.c == 1.1 and cfg.params.bead_priors["2-2"] == 0.005


def test_language_check_counts():
    pt = "os dados foram comparados entre os grupos por anova de medidas repetidas."
    en = "data were compared by repeated measures anova between the two groups."
    recs = [DocumentRecord("a", abstract_native=pt, abstract_foreign=en),
            DocumentRecord("b", abstract_native=en, abstract_foreign=pt),
            DocumentRecord("c", abstract_native=en, abstract_foreign=en)]
    kept, counts = language_check(recs, default_profiles(), "drop")
    assert [r.id for r in kept] == ["a"] and counts == {"ok": 1, "swapped": 1, "inconsistent": 1}
    kept, _ = language_check(recs, default_profiles(), "swap")
    assert [(r.id, r.abstract_native) for r in kept] == [("a", pt), ("b", pt)]


def test_pipeline_config_defaults():
    cfg = PipelineConfig(inputs=["x"])
    assert cfg.outputs() == [] and cfg.langid_policy == "drop"
