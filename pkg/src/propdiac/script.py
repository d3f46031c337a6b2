"""Arabic letter/diacritic segmentation and HSB romanization.

A word is held as a tuple of segments, each a base letter followed by the
diacritic marks typed after it.  Parsing is faithful: marks keep their input
order so that downstream checks can see non-canonical clusters.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

FATHA = "َ"
DAMMA = "ُ"
KASRA = "ِ"
SHADDA = "ّ"
SUKUN = "ْ"
DAGGER_ALIF = "ٰ"

MARKS = frozenset({FATHA, DAMMA, KASRA, SHADDA, SUKUN, DAGGER_ALIF})
SHORT_VOWELS = frozenset({FATHA, DAMMA, KASRA})
NUNATION = frozenset({"ً", "ٌ", "ٍ"})

MARK_NAMES = {
    FATHA: "fatha",
    DAMMA: "damma",
    KASRA: "kasra",
    SUKUN: "sukun",
    SHADDA: "shadda",
    DAGGER_ALIF: "dagger-alif",
}


class LetterClass(str, enum.Enum):
    PLAIN = "plain-consonant"
    ALIF_BARE = "alif-bare"
    ALIF_HAMZA_ABOVE = "alif-hamza-above"
    ALIF_HAMZA_BELOW = "alif-hamza-below"
    ALIF_MADDA = "alif-madda"
    ALIF_WASLA = "alif-wasla"
    ALIF_MAQSURA = "alif-maqsura"
    WAW = "waw"
    WAW_HAMZA = "waw-hamza"
    YA = "ya"
    YA_HAMZA = "ya-hamza"
    TA_MARBUTA = "ta-marbuta"
    FOREIGN = "foreign-extension"


_SPECIAL = {
    "ا": LetterClass.ALIF_BARE,
    "أ": LetterClass.ALIF_HAMZA_ABOVE,
    "إ": LetterClass.ALIF_HAMZA_BELOW,
    "آ": LetterClass.ALIF_MADDA,
    "ٱ": LetterClass.ALIF_WASLA,
    "ى": LetterClass.ALIF_MAQSURA,
    "و": LetterClass.WAW,
    "ؤ": LetterClass.WAW_HAMZA,
    "ي": LetterClass.YA,
    "ئ": LetterClass.YA_HAMZA,
    "ة": LetterClass.TA_MARBUTA,
}

# U+0621..U+064A minus the unassigned/tatweel gap U+063B..U+0640
ARABIC_LETTERS = frozenset(
    chr(c) for c in range(0x0621, 0x064B) if not 0x063B <= c <= 0x0640
) | {"ٱ"}
FOREIGN_LETTERS = frozenset("پڤگچژکیہە")
LETTERS = ARABIC_LETTERS | FOREIGN_LETTERS

ALIF_FAMILY = frozenset("اأإآٱى")


def letter_class(ch: str) -> LetterClass:
    if ch in _SPECIAL:
        return _SPECIAL[ch]
    if ch in FOREIGN_LETTERS:
        return LetterClass.FOREIGN
    if ch in ARABIC_LETTERS:
        return LetterClass.PLAIN
    raise KeyError(ch)


class ScriptError(ValueError):
    """Base class for parse failures; carries the offending position."""

    def __init__(self, position: int, detail: str = ""):
        self.position = position
        msg = f"{type(self).__name__} at position {position}"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class UnsupportedCharacter(ScriptError):
    pass


class LeadingDiacritic(ScriptError):
    pass


class OversizedCluster(ScriptError):
    pass


class NunationMark(OversizedCluster):
    pass


class UnknownHsbSymbol(ScriptError):
    pass


@dataclass(frozen=True)
class Segment:
    letter: str
    marks: tuple[str, ...] = ()

    @property
    def klass(self) -> LetterClass:
        return letter_class(self.letter)

    def has(self, mark: str) -> bool:
        return mark in self.marks

    @property
    def vowel(self) -> str | None:
        for m in self.marks:
            if m in SHORT_VOWELS:
                return m
        return None

    def __str__(self) -> str:
        return self.letter + "".join(self.marks)


@dataclass(frozen=True)
class DiacritizedWord:
    segments: tuple[Segment, ...] = ()

    def __str__(self) -> str:
        return "".join(str(s) for s in self.segments)

    def __len__(self) -> int:
        return len(self.segments)

    def __getitem__(self, i: int) -> Segment:
        return self.segments[i]

    def __iter__(self):
        return iter(self.segments)


def _check_cluster(marks: list[str], start: int) -> None:
    if len(marks) > 2:
        raise OversizedCluster(start + 2, "more than two marks")
    if len(marks) == 2:
        if SHADDA not in marks or not (set(marks) - {SHADDA}) <= SHORT_VOWELS or marks[0] == marks[1]:
            raise OversizedCluster(start + 1, "two-mark cluster must be shadda plus a short vowel")


def parse_arabic(text: str) -> DiacritizedWord:
    segments: list[Segment] = []
    letter: str | None = None
    marks: list[str] = []
    mark_start = 0

    def flush():
        if letter is not None:
            _check_cluster(marks, mark_start)
            segments.append(Segment(letter, tuple(marks)))

    for pos, ch in enumerate(text):
        if ch in LETTERS:
            flush()
            letter, marks, mark_start = ch, [], pos + 1
        elif ch in MARKS:
            if letter is None:
                raise LeadingDiacritic(pos)
            marks.append(ch)
        elif ch in NUNATION:
            raise NunationMark(pos, "nunation is not supported")
        else:
            raise UnsupportedCharacter(pos, repr(ch))
    flush()
    return DiacritizedWord(tuple(segments))


def render(word: DiacritizedWord) -> str:
    return str(word)


def _parse_codepoint(field: str) -> str:
    field = field.strip()
    if field.upper().startswith("U+"):
        return chr(int(field[2:], 16))
    if len(field) != 1:
        raise ValueError(f"expected a single character or U+XXXX, got {field!r}")
    return field


def load_pair_table(path) -> dict[str, str]:
    """Read a two-column codepoint TSV ('#' comments allowed) into a dict."""
    table: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ValueError(f"{path}:{lineno}: expected two tab-separated columns")
        src, dst = _parse_codepoint(cols[0]), _parse_codepoint(cols[1])
        if src in table:
            raise ValueError(f"{path}:{lineno}: duplicate entry for {src!r}")
        table[src] = dst
    return table


@lru_cache(maxsize=None)
def hsb_table() -> dict[str, str]:
    """Arabic codepoint -> HSB symbol, loaded once from the packaged data file."""
    with resources.as_file(resources.files("propdiac") / "data" / "hsb.tsv") as p:
        table = load_pair_table(p)
    if len(set(table.values())) != len(table):
        raise ValueError("HSB table is not one-to-one")
    return table


@lru_cache(maxsize=None)
def _hsb_inverse() -> dict[str, str]:
    return {v: k for k, v in hsb_table().items()}


def to_hsb(word: DiacritizedWord | str) -> str:
    if isinstance(word, str):
        word = parse_arabic(word)
    table = hsb_table()
    return "".join(table[ch] for ch in render(word))


def from_hsb(hsb: str) -> DiacritizedWord:
    inverse = _hsb_inverse()
    out = []
    for pos, sym in enumerate(hsb):
        try:
            out.append(inverse[sym])
        except KeyError:
            raise UnknownHsbSymbol(pos, repr(sym)) from None
    return parse_arabic("".join(out))


def strip_diacritics(word: DiacritizedWord | str) -> str:
    if isinstance(word, str):
        word = parse_arabic(word)
    return "".join(s.letter for s in word)


def has_marks(text: str) -> bool:
    return any(ch in MARKS or ch in NUNATION for ch in text)
