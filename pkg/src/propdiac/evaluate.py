"""Scoring of predicted lemmas against gold: exact match, edit distance, error type."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .normalize import RepairTrace
from .script import (
    ALIF_FAMILY,
    MARK_NAMES,
    DiacritizedWord,
    parse_arabic,
    render,
    strip_diacritics,
)

AWY_LETTERS = ALIF_FAMILY | frozenset("وؤيئ")
DEFAULT_SUBSTITUTION_PAIRS = frozenset(
    {frozenset("جغ"), frozenset("خه"), frozenset("ةه")}
)

EXACT = "exact-match"
DIAC_ONLY = "diac-only"
AWY = "awy"
LETTER_SUB = "letter-sub"
MULTIPLE = "multiple"
ERROR_KINDS = (EXACT, DIAC_ONLY, AWY, LETTER_SUB, MULTIPLE)


@dataclass(frozen=True)
class ErrorClass:
    kind: str
    pairs: tuple[tuple[str, str], ...] = ()

    @property
    def label(self) -> str:
        if self.kind == LETTER_SUB:
            return "letter-sub(" + ",".join(f"{a}↔{b}" for a, b in self.pairs) + ")"
        return self.kind

    def __str__(self) -> str:
        return self.label


def _as_word(w: DiacritizedWord | str) -> DiacritizedWord:
    return parse_arabic(w) if isinstance(w, str) else w


def exact_match(prediction: DiacritizedWord | str, reference: DiacritizedWord | str) -> bool:
    return render(_as_word(prediction)) == render(_as_word(reference))


def levenshtein(a: Sequence, b: Sequence) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def edit_distance(prediction: DiacritizedWord | str, reference: DiacritizedWord | str) -> int:
    """Character edits over the full codepoint sequence, marks included."""
    return levenshtein(render(_as_word(prediction)), render(_as_word(reference)))


def classify_error(
    prediction: DiacritizedWord | str,
    reference: DiacritizedWord | str,
    pairs: Iterable[frozenset[str]] = DEFAULT_SUBSTITUTION_PAIRS,
) -> ErrorClass:
    prediction, reference = _as_word(prediction), _as_word(reference)
    if render(prediction) == render(reference):
        return ErrorClass(EXACT)
    p, r = strip_diacritics(prediction), strip_diacritics(reference)
    if p == r:
        return ErrorClass(DIAC_ONLY)
    # AWY: the skeletons agree once alif/waw/ya are set aside
    if [c for c in p if c not in AWY_LETTERS] == [c for c in r if c not in AWY_LETTERS]:
        return ErrorClass(AWY)
    pairs = set(pairs)
    if len(p) == len(r):
        seen = []
        for x, y in zip(p, r):
            if x == y:
                continue
            if frozenset((x, y)) not in pairs:
                break
            pair = (x, y)  # predicted letter first
            if pair not in seen:
                seen.append(pair)
        else:
            return ErrorClass(LETTER_SUB, tuple(seen))
    return ErrorClass(MULTIPLE)


@dataclass
class EvalRecord:
    entry_id: str
    reference: DiacritizedWord
    prediction: DiacritizedWord | None = None
    raw: str | None = None
    exact: bool = False
    distance: int | None = None
    error_class: ErrorClass | None = None
    freeman: float | None = None
    frequency: int = 0
    trace: RepairTrace = field(default_factory=RepairTrace)
    failure: str | None = None
    raw_distance: int | None = None  # before repair; logged, not summarized

    @property
    def failed(self) -> bool:
        return self.failure is not None


def score(
    entry_id: str,
    prediction: DiacritizedWord | str,
    reference: DiacritizedWord | str,
    *,
    freeman: float | None = None,
    frequency: int = 0,
    raw: str | None = None,
    trace: RepairTrace | None = None,
    pairs: Iterable[frozenset[str]] = DEFAULT_SUBSTITUTION_PAIRS,
) -> EvalRecord:
    prediction, reference = _as_word(prediction), _as_word(reference)
    return EvalRecord(
        entry_id=entry_id,
        reference=reference,
        prediction=prediction,
        raw=raw if raw is not None else render(prediction),
        exact=exact_match(prediction, reference),
        distance=edit_distance(prediction, reference),
        error_class=classify_error(prediction, reference, pairs),
        freeman=freeman,
        frequency=frequency,
        trace=trace or RepairTrace(),
    )


def diacritic_confusion(records: Iterable[EvalRecord]) -> dict[str, float]:
    """Relative over/under-prediction of each mark on diacritic-only errors.

    Records of any other error type are ignored.  Marks absent from the
    references are left out of the table.
    """
    pred, ref = Counter(), Counter()
    for r in records:
        if r.error_class is None or r.error_class.kind != DIAC_ONLY:
            continue
        pred.update(m for s in r.prediction for m in s.marks)
        ref.update(m for s in r.reference for m in s.marks)
    return {
        name: (pred[m] - ref[m]) / ref[m]
        for m, name in MARK_NAMES.items()
        if ref[m]
    }


def summarize_records(records: Sequence[EvalRecord]) -> dict:
    """Accuracy over all records (failures count as misses); distance over scored ones."""
    scored = [r for r in records if not r.failed]
    hist = Counter(r.error_class.kind for r in scored)
    steps = Counter()
    for r in scored:
        steps.update(r.trace.counts())
    n = len(records)
    return {
        "n": n,
        "scored": len(scored),
        "failed": n - len(scored),
        "matches": sum(r.exact for r in records),
        "accuracy": sum(r.exact for r in records) / n if n else 0.0,
        "mean_distance": sum(r.distance for r in scored) / len(scored) if scored else 0.0,
        "error_classes": {k: hist.get(k, 0) for k in ERROR_KINDS},
        "diacritic_confusion": diacritic_confusion(scored),
        "repairs": dict(sorted(steps.items())),
        "exact_as_generated": sum(r.exact and not r.trace for r in scored),
    }
