"""Letter-level integrity between an input word and its proposed lemma.

Only three edits are allowed when going from the Wikipedia title to the
lemma: dropping a leading definite article, dropping the masculine plural
ending of a demonym, and restoring the hamza seat on alif/waw/ya.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations

from .script import DiacritizedWord, has_marks, parse_arabic, strip_diacritics

DETERMINER = "ال"
PLURAL_SUFFIX = "ون"

HAMZA_CLASSES = ("اأإآٱ", "وؤ", "يئ")
_HAMZA_KEY = {ch: cls[0] for cls in HAMZA_CLASSES for ch in cls}


class TransformKind(str, enum.Enum):
    DET = "det-removal"
    PLURAL_3MP = "plural-3mp-removal"
    HAMZA = "hamza-normalization"


@dataclass(frozen=True)
class IntegrityReport:
    ok: bool
    transforms: frozenset[TransformKind] = field(default_factory=frozenset)
    diff: int | None = None

    @property
    def labels(self) -> list[str]:
        return sorted(t.value for t in self.transforms)


def _hamza_fold(text: str) -> str:
    return "".join(_HAMZA_KEY.get(ch, ch) for ch in text)


def _strip_det(s: str) -> str | None:
    if s.startswith(DETERMINER) and len(s) > len(DETERMINER):
        return s[len(DETERMINER):]
    return None


def _strip_plural(s: str) -> str | None:
    # demonym plural: ...يون -> ...ي
    if s.endswith("ي" + PLURAL_SUFFIX) and len(s) > 3:
        return s[: -len(PLURAL_SUFFIX)]
    return None


_STRUCTURAL = (TransformKind.DET, TransformKind.PLURAL_3MP)
_APPLY = {TransformKind.DET: _strip_det, TransformKind.PLURAL_3MP: _strip_plural}


def _candidates(skeleton: str) -> list[tuple[frozenset[TransformKind], str]]:
    out = []
    for r in range(len(_STRUCTURAL) + 1):
        for kinds in combinations(_STRUCTURAL, r):
            s: str | None = skeleton
            for kind in kinds:
                s = _APPLY[kind](s)
                if s is None:
                    break
            if s is not None:
                out.append((frozenset(kinds), s))
    return out


def derive_candidates(input_skeleton: str) -> list[str]:
    """Skeletons reachable by article and/or plural removal (identity first)."""
    seen: list[str] = []
    for _, s in _candidates(input_skeleton):
        if s not in seen:
            seen.append(s)
    return seen


def _first_mismatch(a: str, b: str) -> int:
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return i
    return min(len(a), len(b))


def check_integrity(input_skeleton: str, lemma: DiacritizedWord | str) -> IntegrityReport:
    if isinstance(lemma, str):
        lemma = parse_arabic(lemma)
    if has_marks(input_skeleton):
        raise ValueError("input skeleton must be undiacritized")
    target = strip_diacritics(lemma)
    folded_target = _hamza_fold(target)

    best: tuple[int, int, frozenset[TransformKind]] | None = None
    closest = 0
    for kinds, cand in _candidates(input_skeleton):
        if cand == target:
            found = kinds
        elif _hamza_fold(cand) == folded_target:
            found = kinds | {TransformKind.HAMZA}
        else:
            closest = max(closest, _first_mismatch(_hamza_fold(cand), folded_target))
            continue
        rank = (len(found), TransformKind.HAMZA in found, found)
        if best is None or rank[:2] < best[:2]:
            best = rank
    if best is None:
        return IntegrityReport(False, frozenset(), closest)
    return IntegrityReport(True, best[2])
