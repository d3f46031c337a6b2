"""Loading the proper-noun TSV, gloss splitting, frequencies, and corpus statistics."""

from __future__ import annotations

import logging
import statistics
import warnings
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .lemma import check_integrity
from .script import DiacritizedWord, has_marks, parse_arabic
from .similarity import freeman_similarity

log = logging.getLogger(__name__)

COLUMNS = ("id", "arabic_input", "gloss", "gold_lemma", "frequency", "entity_class")
REQUIRED = ("id", "arabic_input", "gloss")
GLOSS_SEPARATOR = ";"
ENTITY_CLASSES = ("location", "name", "organization", "unknown")
_CLASS_ALIASES = {
    "loc": "location",
    "location": "location",
    "name": "name",
    "per": "name",
    "person": "name",
    "org": "organization",
    "organization": "organization",
    "unknown": "unknown",
    "": "unknown",
}


class DatasetError(ValueError):
    def __init__(self, message: str, row: int | None = None):
        self.row = row
        super().__init__(f"row {row}: {message}" if row is not None else message)


class MissingColumn(DatasetError):
    pass


class DiacriticInInput(DatasetError):
    pass


class EmptyGloss(DatasetError):
    pass


class MalformedFrequencyRow(DatasetError):
    pass


class EmptyInput(DatasetError):
    pass


@dataclass(frozen=True)
class Entry:
    id: str
    arabic_input: str
    gloss: str
    gold_lemma: DiacritizedWord | None = None
    frequency: int = 0
    entity_class: tuple[str, ...] = ("unknown",)
    row_id: str = ""


@dataclass(frozen=True)
class CorpusStats:
    unique_arabic: int
    pairs: int
    glosses_per_entry: float
    frequency_average: float
    frequency_median: float
    freeman_average: float | None
    class_distribution: dict[str, float] = field(default_factory=dict)

    def as_rows(self) -> list[tuple[str, str]]:
        rows = [
            ("unique_arabic", str(self.unique_arabic)),
            ("pairs", str(self.pairs)),
            ("glosses_per_entry", f"{self.glosses_per_entry:.2f}"),
            ("frequency_average", f"{self.frequency_average:.2f}"),
            ("frequency_median", f"{self.frequency_median:g}"),
            ("freeman_average", "NA" if self.freeman_average is None else f"{self.freeman_average:.2f}"),
        ]
        rows += [(f"class_{k}", f"{v:.3f}") for k, v in self.class_distribution.items()]
        return rows


def _data_lines(path: Path) -> Iterable[tuple[int, str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            yield lineno, line


def split_glosses(field_value: str) -> list[str]:
    return [g.strip() for g in field_value.split(GLOSS_SEPARATOR)]


def parse_entity_class(value: str, row: int | None = None) -> tuple[str, ...]:
    labels = []
    for part in value.replace("|", ",").split(","):
        key = part.strip().lower()
        if key not in _CLASS_ALIASES:
            raise DatasetError(f"unknown entity class {part!r}", row)
        label = _CLASS_ALIASES[key]
        if label not in labels:
            labels.append(label)
    if len(labels) > 1 and "unknown" in labels:
        labels.remove("unknown")
    return tuple(labels)


def load_entries(path, columns: Mapping[str, str] | None = None) -> list[Entry]:
    """Read the dataset TSV, one Entry per (Arabic word, gloss) pair.

    ``columns`` maps canonical column names to the names used in the file
    header, for dumps whose layout differs from the canonical one.
    """
    path = Path(path)
    names = {c: c for c in COLUMNS}
    names.update(columns or {})
    lines = list(_data_lines(path))
    if not lines:
        raise EmptyInput(f"{path} has no header")
    header = lines[0][1].split("\t")
    index = {c: header.index(names[c]) for c in COLUMNS if names[c] in header}
    for c in REQUIRED:
        if c not in index:
            raise MissingColumn(f"missing column {names[c]!r} in {path}")

    entries: list[Entry] = []
    for lineno, line in lines[1:]:
        cells = line.split("\t")

        def get(c: str) -> str:
            i = index.get(c)
            return cells[i].strip() if i is not None and i < len(cells) else ""

        arabic = get("arabic_input")
        if has_marks(arabic):
            raise DiacriticInInput("arabic_input carries diacritics", lineno)
        glosses = split_glosses(get("gloss"))
        if any(not g for g in glosses):
            raise EmptyGloss("empty gloss", lineno)
        gold_text = get("gold_lemma")
        gold = parse_arabic(gold_text) if gold_text else None
        if gold is not None and not check_integrity(arabic, gold).ok:
            log.warning("row %d: gold lemma %s is not reachable from %s", lineno, gold_text, arabic)
        freq_text = get("frequency")
        try:
            frequency = int(freq_text) if freq_text else 0
        except ValueError:
            raise DatasetError(f"bad frequency {freq_text!r}", lineno) from None
        klass = parse_entity_class(get("entity_class"), lineno)
        row_id = get("id") or str(lineno)
        for k, gloss in enumerate(glosses, 1):
            entries.append(
                Entry(
                    id=f"{row_id}-{k}",
                    arabic_input=arabic,
                    gloss=gloss,
                    gold_lemma=gold,
                    frequency=frequency,
                    entity_class=klass,
                    row_id=row_id,
                )
            )
    return entries


def load_frequency_table(path) -> dict[str, int]:
    table: dict[str, int] = {}
    for lineno, line in _data_lines(Path(path)):
        cells = line.split("\t")
        if len(cells) != 2:
            raise MalformedFrequencyRow("expected word<TAB>count", lineno)
        word, count = cells[0].strip(), cells[1].strip()
        try:
            n = int(count)
        except ValueError:
            if lineno == 1:  # header row
                continue
            raise MalformedFrequencyRow(f"count {count!r} is not an integer", lineno) from None
        if n < 0 or not word:
            raise MalformedFrequencyRow("negative count or empty word", lineno)
        if word in table:
            warnings.warn(f"duplicate frequency row for {word} at line {lineno}; keeping the last", stacklevel=2)
        table[word] = n
    return table


def attach_frequencies(entries: Sequence[Entry], freq_table) -> list[Entry]:
    """Set each entry's frequency by exact skeleton lookup; missing words get 0.

    ``freq_table`` is a path or an already-loaded mapping.
    """
    if not isinstance(freq_table, Mapping):
        freq_table = load_frequency_table(freq_table)
    return [replace(e, frequency=freq_table.get(e.arabic_input, 0)) for e in entries]


def summarize(entries: Sequence[Entry], with_freeman: bool = True) -> CorpusStats:
    if not entries:
        raise EmptyInput("no entries")
    unique = {e.arabic_input for e in entries}
    freqs = [e.frequency for e in entries]
    freeman = None
    if with_freeman:
        freeman = round(statistics.fmean(freeman_similarity(e.arabic_input, e.gloss) for e in entries), 2)

    classes_by_word: dict[str, set[str]] = {}
    for e in entries:
        classes_by_word.setdefault(e.arabic_input, set()).update(e.entity_class)
    counts = Counter(c for labels in classes_by_word.values() for c in labels)
    distribution = {c: counts[c] / len(unique) for c in ENTITY_CLASSES if counts[c]}

    return CorpusStats(
        unique_arabic=len(unique),
        pairs=len(entries),
        glosses_per_entry=round(len(entries) / len(unique), 2),
        frequency_average=round(statistics.fmean(freqs), 2),
        frequency_median=statistics.median(freqs),
        freeman_average=freeman,
        class_distribution=distribution,
    )
