"""Phonological similarity between an Arabic skeleton and a Latin-script name.

Both strings are rewritten as sequences of shared sound classes, runs of the
same class are collapsed, and the score is the Dice-style ratio
``2 * lcs / (len(a) + len(b))`` over the two class sequences.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path


class EmptyGloss(ValueError):
    pass


@dataclass(frozen=True)
class ClassTable:
    latin: dict[str, tuple[str, ...]]
    arabic: dict[str, tuple[str, ...]]

    @property
    def max_token(self) -> int:
        return max(len(k) for k in self.latin)


def load_class_table(path) -> ClassTable:
    latin: dict[str, tuple[str, ...]] = {}
    arabic: dict[str, tuple[str, ...]] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            token, classes = line.split("\t")
        except ValueError:
            raise ValueError(f"{path}:{lineno}: expected token<TAB>classes") from None
        target = arabic if "؀" <= token[0] <= "ۿ" else latin
        target[token] = tuple(classes.split())
    return ClassTable(latin, arabic)


@lru_cache(maxsize=None)
def default_class_table() -> ClassTable:
    with resources.as_file(resources.files("propdiac") / "data" / "freeman_classes.tsv") as p:
        return load_class_table(p)


def _collapse(seq: list[str]) -> tuple[str, ...]:
    out: list[str] = []
    for c in seq:
        if not out or out[-1] != c:
            out.append(c)
    return tuple(out)


def clean_gloss(gloss: str, table: ClassTable) -> str:
    """Lowercase, drop accents the table does not know, keep letters only."""
    out = []
    for ch in gloss.lower():
        if ch in table.latin:
            out.append(ch)
            continue
        base = "".join(c for c in unicodedata.normalize("NFKD", ch) if not unicodedata.combining(c))
        out.extend(c for c in base if c.isascii() and c.isalpha())
    return "".join(out)


def latin_classes(gloss: str, table: ClassTable | None = None) -> tuple[str, ...]:
    table = table or default_class_table()
    text = clean_gloss(gloss, table)
    if not text:
        raise EmptyGloss(f"gloss {gloss!r} has no letters")
    seq: list[str] = []
    i = 0
    while i < len(text):
        for size in range(min(table.max_token, len(text) - i), 0, -1):
            tok = text[i : i + size]
            if tok in table.latin:
                seq.extend(table.latin[tok])
                i += size
                break
        else:
            i += 1  # letter with no class, e.g. a stray 'ß' remnant
    return _collapse(seq)


def arabic_classes(skeleton: str, table: ClassTable | None = None) -> tuple[str, ...]:
    table = table or default_class_table()
    seq: list[str] = []
    for ch in skeleton:
        seq.extend(table.arabic.get(ch, ()))
    return _collapse(seq)


def lcs_length(a, b) -> int:
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, 1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def class_similarity(a, b) -> float:
    if not a and not b:
        return 1.0
    return 2 * lcs_length(a, b) / (len(a) + len(b))


def freeman_similarity(arabic_skeleton: str, gloss: str, table: ClassTable | None = None) -> float:
    table = table or default_class_table()
    return class_similarity(arabic_classes(arabic_skeleton, table), latin_classes(gloss, table))
