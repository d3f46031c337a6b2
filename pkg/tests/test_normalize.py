import pytest
from hypothesis import given, settings

from propdiac.normalize import STEPS, RepairTrace, default_letter_map, load_letter_map, normalize
from propdiac.script import from_hsb, parse_arabic, render, to_hsb
from propdiac.validation import validate

from conftest import gold_lemmas, read_tsv
from defects import FIXABLE, defective_words
from test_script import words


@pytest.mark.parametrize(
    "hsb, fixed, trace",
    [
        ("ςaDu~wm", "ςaD~uwm", "S2@1"),
        ("karamu", "karam", "S7@2"),
        ("sAnšiyz", "saAn.šiyz", "S3@0,S6@2"),
        ("paAriys", "baAriys", "S1@0"),
        ("ĀamaAl", "ĀmaAl", "S5@0"),
        ("Ăas.raAŷiyl", "Ăis.raAŷiyl", "S4@0"),
    ],
)
def test_repairs(hsb, fixed, trace):
    result = normalize(from_hsb(hsb))
    assert to_hsb(result.word) == fixed
    assert str(result.trace) == trace


def test_fixture_rows():
    for row in read_tsv("malformed.tsv"):
        word, trace = normalize(parse_arabic(row["invalid"]))
        assert render(word) == row["corrected"]
        assert trace


@pytest.mark.parametrize("form", gold_lemmas())
def test_valid_input_is_untouched(form):
    word, trace = normalize(form)
    assert render(word) == form
    assert not trace
    assert str(trace) == ""


def test_shadda_kept_on_final_letter():
    assert to_hsb(normalize(from_hsb("sit~a")).word) == "sit~"


def test_final_alif_with_vowel_still_gets_fatha_before_it():
    # S7 strips the alif's mark, so S3 has to treat it as a long vowel
    result = normalize(from_hsb("Âak.rAa"))
    assert to_hsb(result.word) == "Âak.raA"
    assert str(result.trace) == "S3@2,S7@3"


def test_trace_counts():
    trace = normalize(from_hsb("sAnšiyz")).trace
    assert trace.counts() == {"S3": 1, "S6": 1}
    assert RepairTrace().counts() == {}
    assert set(STEPS) == {f"S{k}" for k in range(1, 8)}


def test_letter_map_is_overridable(tmp_path):
    path = tmp_path / "map.tsv"
    path.write_text("U+067E\tU+0641\n", encoding="utf-8")
    table = load_letter_map(path)
    assert to_hsb(normalize(from_hsb("paAriys"), table).word) == "faAriys"
    assert default_letter_map()["پ"] == "ب"
    with pytest.raises(TypeError):
        default_letter_map()["x"] = "y"


@given(words)
@settings(max_examples=300)
def test_idempotent_on_arbitrary_words(w):
    once = normalize(w).word
    again = normalize(once)
    assert again.word == once
    assert not again.trace


@given(words)
@settings(max_examples=300)
def test_fixable_codes_never_survive(w):
    once = normalize(w).word
    assert not [v for v in validate(once) if v.code.value in FIXABLE]


def test_injected_defects_are_repaired():
    for base, word, codes in defective_words(200, seed=3):
        fixed, _ = normalize(word)
        assert normalize(fixed).word == fixed
        assert not [v for v in validate(fixed) if v.code.value in FIXABLE]
