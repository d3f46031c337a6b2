"""Well-formedness rules for maximally diacritized proper-noun lemmas."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .script import (
    DAMMA,
    FATHA,
    KASRA,
    SHADDA,
    SHORT_VOWELS,
    SUKUN,
    DiacritizedWord,
    LetterClass,
)

FINAL_FORBIDDEN = SHORT_VOWELS | {SUKUN}


class Rule(str, enum.Enum):
    CLUSTER_ORDER = "R1"
    LONG_VOWEL_CONTEXT = "R2"
    FINAL_SHORT_VOWEL = "R3"
    MISSING_MARK = "R4"
    MADDA_FOLLOWED_BY_FATHA = "R5"
    HAMZA_BELOW_VOWEL = "R6"
    FOREIGN_LETTER = "R7"
    LEADING_DETERMINER = "R8"


class Profile(str, enum.Enum):
    LEMMA = "lemma"
    SURFACE = "surface"


@dataclass(frozen=True, order=True)
class Violation:
    position: int
    code: Rule
    message: str = ""

    def to_line(self) -> str:
        return f"{self.code.value}\t{self.position}\t{self.message}"

    def __str__(self) -> str:
        return f"{self.code.value}@{self.position}"


_LONG_VOWEL_FOR = {LetterClass.WAW: DAMMA, LetterClass.YA: KASRA}
_ALIF_LIKE = {LetterClass.ALIF_BARE, LetterClass.ALIF_MAQSURA}


def is_long_vowel(word: DiacritizedWord, i: int) -> bool:
    """True if the unmarked alif/waw/ya at ``i`` reads as a long vowel."""
    seg = word[i]
    if seg.marks or i == 0:
        return False
    prev = word[i - 1]
    if seg.klass in _ALIF_LIKE:
        return prev.has(FATHA)
    if seg.klass in _LONG_VOWEL_FOR:
        return prev.has(_LONG_VOWEL_FOR[seg.klass])
    return False


def needs_mark(word: DiacritizedWord, i: int) -> bool:
    """The letter at ``i`` is unmarked but maximal diacritization wants a mark.

    Shared by the MissingMark rule and the sukun-insertion repair so the two
    agree exactly.  Alif-type letters and mismatched long vowels are left to
    the long-vowel rule.
    """
    seg = word[i]
    if seg.marks or i == len(word) - 1:
        return False
    k = seg.klass
    if k in _ALIF_LIKE or k in (LetterClass.ALIF_MADDA, LetterClass.ALIF_WASLA):
        return False
    if k in _LONG_VOWEL_FOR and i > 0:
        vowel = word[i - 1].vowel
        if vowel is not None and vowel != FATHA:
            # matching vowel: long vowel; mismatching vowel: R2 territory
            return False
    return True


def _long_vowel_issue(word: DiacritizedWord, i: int, profile: Profile) -> str | None:
    seg = word[i]
    k = seg.klass
    if k is LetterClass.ALIF_WASLA:
        if profile is Profile.LEMMA:
            return "alif wasla is not used in lemmas"
        return None
    if k in _ALIF_LIKE:
        if i == 0:
            if k is LetterClass.ALIF_BARE and seg.vowel is None:
                return "word-initial alif must carry a short vowel"
            return None
        if seg.marks:
            return "long-vowel alif cannot carry a diacritic"
        if not word[i - 1].has(FATHA):
            return "alif without a preceding fatha"
        return None
    if k in _LONG_VOWEL_FOR and i > 0:
        prev = word[i - 1]
        matching = _LONG_VOWEL_FOR[k]
        if not seg.marks:
            vowel = prev.vowel
            if vowel is not None and vowel not in (matching, FATHA):
                return "long vowel does not match the preceding short vowel"
        elif seg.has(SUKUN) and prev.has(matching):
            return "long vowel cannot carry a sukun"
    return None


def validate(
    word: DiacritizedWord,
    profile: Profile | str = Profile.LEMMA,
    input_skeleton: str | None = None,
) -> list[Violation]:
    """Return every rule violation in ``word``, sorted by position then code.

    ``input_skeleton`` enables the leading-determiner check in lemma mode.
    """
    profile = Profile(profile)
    lemma = profile is Profile.LEMMA
    out: list[Violation] = []
    n = len(word)

    def add(i: int, rule: Rule, msg: str) -> None:
        out.append(Violation(i, rule, msg))

    for i, seg in enumerate(word):
        k = seg.klass
        last = i == n - 1
        if len(seg.marks) == 2 and seg.marks[1] == SHADDA:
            add(i, Rule.CLUSTER_ORDER, "short vowel precedes shadda")
        issue = _long_vowel_issue(word, i, profile)
        if issue:
            add(i, Rule.LONG_VOWEL_CONTEXT, issue)
        if lemma and last and any(m in FINAL_FORBIDDEN for m in seg.marks):
            add(i, Rule.FINAL_SHORT_VOWEL, "final letter cannot carry a short vowel or sukun")
        if needs_mark(word, i):
            add(i, Rule.MISSING_MARK, "letter has no diacritic")
        if k is LetterClass.ALIF_MADDA and seg.has(FATHA):
            add(i, Rule.MADDA_FOLLOWED_BY_FATHA, "fatha after alif madda")
        if k is LetterClass.ALIF_HAMZA_BELOW and not seg.has(KASRA) and not (lemma and last):
            add(i, Rule.HAMZA_BELOW_VOWEL, "alif hamza below must carry kasra")
        if k is LetterClass.FOREIGN:
            add(i, Rule.FOREIGN_LETTER, f"non-Arabic letter {seg.letter}")

    if lemma and input_skeleton is not None and _determiner_remnant(word, input_skeleton):
        add(0, Rule.LEADING_DETERMINER, "definite article kept in lemma")
    return sorted(out)


def _determiner_remnant(word: DiacritizedWord, input_skeleton: str) -> bool:
    from .lemma import DETERMINER, TransformKind, check_integrity

    if len(word) <= 2 or not input_skeleton.startswith(DETERMINER):
        return False
    if word[0].letter != "ا" or word[1].letter != "ل":
        return False
    # the article survived verbatim and dropping it is a permitted transform
    report = check_integrity(input_skeleton, word)
    if not report.ok or TransformKind.DET in report.transforms:
        return False
    return len(input_skeleton) > 2


def format_report(violations: list[Violation]) -> str:
    return "".join(v.to_line() + "\n" for v in violations)
