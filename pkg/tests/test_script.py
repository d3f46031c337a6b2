import pytest
from hypothesis import given
from hypothesis import strategies as st

from propdiac.script import (
    ARABIC_LETTERS,
    DAMMA,
    FATHA,
    FOREIGN_LETTERS,
    KASRA,
    SHADDA,
    SUKUN,
    DiacritizedWord,
    LeadingDiacritic,
    LetterClass,
    NunationMark,
    OversizedCluster,
    Segment,
    UnknownHsbSymbol,
    UnsupportedCharacter,
    from_hsb,
    has_marks,
    hsb_table,
    letter_class,
    parse_arabic,
    render,
    strip_diacritics,
    to_hsb,
)

from conftest import all_table_forms, read_tsv

BA = "ب"
# Amman with shadda typed before its fatha, as in the source text
AMMAN = "عَمَّان"
OMAN = "عُمَان"


def test_single_mark_segment():
    w = parse_arabic(BA + FATHA)
    assert w.segments == (Segment(BA, (FATHA,)),)


def test_empty_word():
    assert len(parse_arabic("")) == 0
    assert to_hsb(DiacritizedWord()) == ""
    assert len(from_hsb("")) == 0


def test_cluster_order_is_kept():
    assert parse_arabic(BA + SHADDA + DAMMA)[0].marks == (SHADDA, DAMMA)
    assert parse_arabic(BA + DAMMA + SHADDA)[0].marks == (DAMMA, SHADDA)


@pytest.mark.parametrize(
    "text, error, pos",
    [
        ("xبَ", UnsupportedCharacter, 0),
        ("بـب", UnsupportedCharacter, 1),
        (FATHA + BA, LeadingDiacritic, 0),
        (BA + "ً", NunationMark, 1),
        (BA + FATHA + DAMMA, OversizedCluster, 2),
        (BA + SHADDA + FATHA + SUKUN, OversizedCluster, 3),
    ],
)
def test_parse_errors(text, error, pos):
    with pytest.raises(error) as exc:
        parse_arabic(text)
    assert exc.value.position == pos


def test_nunation_is_an_oversized_cluster():
    assert issubclass(NunationMark, OversizedCluster)


def test_to_hsb_examples():
    assert to_hsb(parse_arabic(OMAN)) == "ςumaAn"
    assert to_hsb(parse_arabic(AMMAN)) == "ςam~aAn"


def test_from_hsb_examples():
    assert render(from_hsb("nax.jiwaAn")) == "نَخْجِوَان"
    assert render(from_hsb("sit~")) == "سِتّ"


def test_unknown_hsb_symbol_position():
    with pytest.raises(UnknownHsbSymbol) as exc:
        from_hsb("ba!")
    assert exc.value.position == 2


def test_strip_diacritics():
    assert strip_diacritics(parse_arabic(OMAN)) == "عمان"
    assert strip_diacritics("عمان") == "عمان"
    assert strip_diacritics(from_hsb("sit~")) == "ست"


# hand-copied from the published HSB scheme, independent of the data file
HSB_ORACLE = {
    "ء": "'", "آ": "Ā", "أ": "Â", "ؤ": "ŵ", "إ": "Ă", "ئ": "ŷ", "ا": "A", "ب": "b",
    "ة": "ħ", "ت": "t", "ث": "θ", "ج": "j", "ح": "H", "خ": "x", "د": "d", "ذ": "ð",
    "ر": "r", "ز": "z", "س": "s", "ش": "š", "ص": "S", "ض": "D", "ط": "T", "ظ": "Ď",
    "ع": "ς", "غ": "γ", "ف": "f", "ق": "q", "ك": "k", "ل": "l", "م": "m", "ن": "n",
    "ه": "h", "و": "w", "ى": "ý", "ي": "y",
    FATHA: "a", DAMMA: "u", KASRA: "i", SHADDA: "~", SUKUN: ".",
}


def test_hsb_table_matches_reference_scheme():
    table = hsb_table()
    for ar, sym in HSB_ORACLE.items():
        assert table[ar] == sym, ar


def test_hsb_table_is_bijective_and_covers_all_letters():
    table = hsb_table()
    assert len(set(table.values())) == len(table)
    assert all(len(v) == 1 for v in table.values())
    for ch in (ARABIC_LETTERS - {chr(0x063B + k) for k in range(6)}) | FOREIGN_LETTERS:
        assert ch in table


def test_letter_classes():
    assert letter_class("ا") is LetterClass.ALIF_BARE
    assert letter_class("إ") is LetterClass.ALIF_HAMZA_BELOW
    assert letter_class("پ") is LetterClass.FOREIGN
    assert letter_class("ب") is LetterClass.PLAIN
    with pytest.raises(KeyError):
        letter_class("x")


def test_has_marks():
    assert has_marks(OMAN)
    assert not has_marks("عمان")
    assert has_marks("بٌ")


@pytest.mark.parametrize("row", read_tsv("diacritics.tsv"), ids=lambda r: r["name"])
def test_diacritic_table_parses_to_one_segment(row):
    w = parse_arabic(row["arabic"])
    assert w[0].letter == BA
    assert render(w) == row["arabic"]


@pytest.mark.parametrize("form", all_table_forms())
def test_table_forms_round_trip(form):
    assert render(from_hsb(to_hsb(parse_arabic(form)))) == form


LETTER_POOL = sorted(ARABIC_LETTERS | FOREIGN_LETTERS)
CLUSTERS = [(), (FATHA,), (DAMMA,), (KASRA,), (SUKUN,), (SHADDA,), ("ٰ",)]
CLUSTERS += [(SHADDA, v) for v in (FATHA, DAMMA, KASRA)] + [(v, SHADDA) for v in (FATHA, DAMMA, KASRA)]

segments = st.builds(Segment, st.sampled_from(LETTER_POOL), st.sampled_from(CLUSTERS))
words = st.lists(segments, max_size=10).map(lambda s: DiacritizedWord(tuple(s)))


@given(words)
def test_parse_render_round_trip(w):
    assert parse_arabic(render(w)) == w


@given(words)
def test_hsb_round_trip(w):
    h = to_hsb(w)
    assert len(h) == len(render(w))
    assert from_hsb(h) == w


@given(words)
def test_strip_keeps_letter_count(w):
    assert len(strip_diacritics(w)) == len(w)
    assert not has_marks(strip_diacritics(w))
