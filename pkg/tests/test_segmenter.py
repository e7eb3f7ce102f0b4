import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdcorpus.segmenter import (
    MAX_PAREN_SPAN, Segmenter, Sentence, default_abbreviations, load_abbreviations, segment,
)

TABLE2 = ("a coleta de dados se deu por meio de entrevista semiestruturada com 12 familiares cuidadores "
          "de crianças atendidas em pronto-socorro pediátrico de um hospital de ensino. os dados foram "
          "submetidos à análise de conteúdo temático conforme bardin (2011).")


def texts(text, **kw):
    return [s.text for s in segment(text, **kw)]


def test_table2_document():
    assert texts(TABLE2) == [
        "a coleta de dados se deu por meio de entrevista semiestruturada com 12 familiares cuidadores "
        "de crianças atendidas em pronto-socorro pediátrico de um hospital de ensino.",
        "os dados foram submetidos à análise de conteúdo temático conforme bardin (2011).",
    ]


def test_single_terminal():
    assert texts("x.") == ["x."]


def test_empty_input():
    assert segment("") == []
    assert segment("   ") == []


def test_decimal_point_is_not_a_boundary():
    assert texts("o valor foi 3.14 metros. fim.") == ["o valor foi 3.14 metros.", "fim."]
    assert texts("foram 10.000 casos. fim.") == ["foram 10.000 casos.", "fim."]


@pytest.mark.parametrize("text,n", [
    ("conforme dr. silva relatou. fim.", 2),
    ("segundo silva et al. o efeito foi nulo. fim.", 2),
    ("ver fig. 3 para detalhes. fim.", 2),
    ("autores como j. r. silva discordam. fim.", 2),
])
def test_portuguese_guards(text, n):
    assert len(segment(text, "pt")) == n


@pytest.mark.parametrize("text,n", [
    ("we used e.g. surveys and i.e. interviews. end.", 2),
    ("smith vs. jones was cited. end.", 2),
    ("results were strong! were they? yes.", 3),
])
def test_english_guards(text, n):
    assert len(segment(text, "en")) == n


def test_no_uppercase_needed():
    assert texts("primeira frase. segunda frase! terceira?") == ["primeira frase.", "segunda frase!", "terceira?"]


def test_closing_quote_and_paren_stay_with_sentence():
    assert texts('ele disse "basta." depois saiu.') == ['ele disse "basta."', "depois saiu."]


def test_short_parenthesis_protected():
    assert texts("o grupo (n. 3. ok) foi avaliado. fim.") == ["o grupo (n. 3. ok) foi avaliado.", "fim."]


def test_long_parenthesis_not_protected():
    inner = "primeira parte longa. segunda parte bem mais longa que o limite"
    assert len(inner) + 2 > MAX_PAREN_SPAN
    assert len(segment(f"texto ({inner}) fim.")) == 2


def test_semicolon_flag():
    text = "objetivo: avaliar; método: coorte."
    assert len(segment(text)) == 1
    assert texts(text, split_semicolon=True) == ["objetivo: avaliar;", "método: coorte."]


def test_sentence_fields():
    s = Sentence.from_text("  dois  tokens. ")
    assert (s.text, s.char_len, s.token_count) == ("dois  tokens.", 11, 2)
    with pytest.raises(ValueError):
        Sentence.from_text("   ")


def test_guard_file(tmp_path):
    path = tmp_path / "abbr.txt"
    path.write_text("# comment\nABC.  # trailing\n\nx  y.\n", encoding="utf-8")
    assert load_abbreviations(path) == {"abc.", "x y."}
    seg = Segmenter("pt", abbreviations=load_abbreviations(path))
    assert len(seg.segment("ver abc. depois. fim.")) == 2


def test_bundled_lists():
    assert {"dr.", "etc.", "et al.", "fig.", "cap."} <= default_abbreviations("pt")
    assert {"e.g.", "i.e.", "vs.", "et al."} <= default_abbreviations("en")
    with pytest.raises(ValueError):
        default_abbreviations("xx")


words = st.sampled_from(["dados", "dr.", "3.14", "(n.", "2)", "fim.", "x.", "a", "etc.", "ok!", "b?",
                         "j.", "foi", "«sim.»", "(ver", "tab.", "1)", "valor;", "et", "al."])
normalized = st.lists(words, max_size=40).map(" ".join)


@settings(max_examples=300, deadline=None)
@given(normalized, st.booleans())
def test_lossless(text, semi):
    out = segment(text, split_semicolon=semi)
    assert " ".join(s.text for s in out) == " ".join(text.split())
    assert all(s.text and s.text == s.text.strip() and s.char_len > 0 for s in out)


@settings(max_examples=300, deadline=None)
@given(normalized)
def test_idempotent(text):
    for s in segment(text):
        assert segment(s.text) == [s]


@settings(max_examples=300, deadline=None)
@given(normalized, normalized, normalized)
def test_no_boundary_in_short_parenthesis(before, inside, after):
    inside = inside.replace("(", "").replace(")", "")[:MAX_PAREN_SPAN - 2].strip()
    text = " ".join(p for p in (before.replace("(", "").replace(")", ""), f"({inside})", after) if p)
    seg = Segmenter("pt")
    start = text.index("(")
    end = start + len(inside) + 1
    for b in seg.boundaries(text):
        assert not start < b <= end
