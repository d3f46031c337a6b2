"""Automatic repair of systematic diacritization defects.

Seven repairs run in a fixed order:

S1 foreign-letter mapping, S2 shadda-first clusters, S3 fatha before a
long-vowel alif, S4 kasra on alif hamza below, S5 no fatha on alif madda,
S6 sukun on unmarked letters, S7 no final short vowel or sukun.

S3 has to precede S6, otherwise the letter before an alif would get a sukun.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from types import MappingProxyType
from typing import Mapping

from .script import (
    FATHA,
    KASRA,
    SHADDA,
    SHORT_VOWELS,
    SUKUN,
    DiacritizedWord,
    LetterClass,
    Segment,
    load_pair_table,
    parse_arabic,
)
from .validation import FINAL_FORBIDDEN, needs_mark

STEPS = ("S1", "S2", "S3", "S4", "S5", "S6", "S7")
STEP_NAMES = {
    "S1": "map-foreign-letter",
    "S2": "shadda-first",
    "S3": "fatha-before-alif",
    "S4": "kasra-on-hamza-below",
    "S5": "drop-fatha-on-madda",
    "S6": "insert-sukun",
    "S7": "drop-final-mark",
}

# letters that never take the S3 fatha (S4/S5 would undo it)
_NO_S3 = {
    LetterClass.ALIF_BARE,
    LetterClass.ALIF_MADDA,
    LetterClass.ALIF_HAMZA_BELOW,
    LetterClass.ALIF_WASLA,
    LetterClass.ALIF_MAQSURA,
}


@dataclass(frozen=True)
class RepairStep:
    step: str
    position: int

    def __str__(self) -> str:
        return f"{self.step}@{self.position}"


@dataclass(frozen=True)
class RepairTrace:
    steps: tuple[RepairStep, ...] = ()

    def __bool__(self) -> bool:
        return bool(self.steps)

    def __str__(self) -> str:
        return ",".join(str(s) for s in self.steps)

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for s in self.steps:
            out[s.step] = out.get(s.step, 0) + 1
        return out


@dataclass(frozen=True)
class NormalizationResult:
    word: DiacritizedWord
    trace: RepairTrace = field(default_factory=RepairTrace)

    def __iter__(self):
        return iter((self.word, self.trace))


@lru_cache(maxsize=None)
def default_letter_map() -> Mapping[str, str]:
    with resources.as_file(resources.files("propdiac") / "data" / "foreign_letters.tsv") as p:
        return MappingProxyType(load_pair_table(p))


def load_letter_map(path) -> Mapping[str, str]:
    return MappingProxyType(load_pair_table(path))


def _with_vowel(marks: tuple[str, ...], vowel: str) -> tuple[str, ...]:
    kept = [m for m in marks if m not in SHORT_VOWELS and m != SUKUN]
    return tuple(kept) + (vowel,)


def normalize(
    word: DiacritizedWord | str,
    letter_map: Mapping[str, str] | None = None,
) -> NormalizationResult:
    if isinstance(word, str):
        word = parse_arabic(word)
    if letter_map is None:
        letter_map = default_letter_map()
    segs = list(word.segments)
    steps: list[RepairStep] = []
    n = len(segs)

    def log(step: str, i: int) -> None:
        steps.append(RepairStep(step, i))

    for i, s in enumerate(segs):
        if s.letter in letter_map:
            segs[i] = Segment(letter_map[s.letter], s.marks)
            log("S1", i)

    for i, s in enumerate(segs):
        if len(s.marks) == 2 and s.marks[1] == SHADDA:
            segs[i] = Segment(s.letter, (SHADDA, s.marks[0]))
            log("S2", i)

    for i in range(1, n):
        alif, prev = segs[i], segs[i - 1]
        # a final alif's vowel is dropped by S7, so it still reads as long
        doomed = i == n - 1 and set(alif.marks) <= FINAL_FORBIDDEN
        if alif.klass is not LetterClass.ALIF_BARE or (alif.marks and not doomed):
            continue
        if prev.klass in _NO_S3 or prev.vowel is not None:
            continue
        segs[i - 1] = Segment(prev.letter, _with_vowel(prev.marks, FATHA))
        log("S3", i - 1)

    for i, s in enumerate(segs):
        if s.klass is LetterClass.ALIF_HAMZA_BELOW and not s.has(KASRA) and i < n - 1:
            segs[i] = Segment(s.letter, _with_vowel(s.marks, KASRA))
            log("S4", i)

    for i, s in enumerate(segs):
        if s.klass is LetterClass.ALIF_MADDA and s.has(FATHA):
            segs[i] = Segment(s.letter, tuple(m for m in s.marks if m != FATHA))
            log("S5", i)

    # left to right: each insertion is visible to the next letter's check
    for i in range(n):
        current = DiacritizedWord(tuple(segs))
        if needs_mark(current, i):
            segs[i] = Segment(segs[i].letter, (SUKUN,))
            log("S6", i)

    if n:
        s = segs[-1]
        kept = tuple(m for m in s.marks if m not in FINAL_FORBIDDEN)
        if kept != s.marks:
            segs[-1] = Segment(s.letter, kept)
            log("S7", n - 1)

    return NormalizationResult(DiacritizedWord(tuple(segs)), RepairTrace(tuple(steps)))
