import csv
from pathlib import Path

import pytest

from propdiac.dataset import Entry
from propdiac.script import parse_arabic

FIXTURES = Path(__file__).parent / "fixtures"


def read_tsv(name):
    with open(FIXTURES / name, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh, delimiter="\t", quoting=csv.QUOTE_NONE))


def prediction_entries():
    return [
        Entry(r["id"], r["arabic_input"], r["gloss"], parse_arabic(r["gold_lemma"]))
        for r in read_tsv("predictions.tsv")
    ]


def gold_lemmas():
    """Unique gold forms of the lemmatization, variant and error tables."""
    forms = [r["lemma"] for r in read_tsv("lemmatizations.tsv")]
    forms += [r["arabic"] for r in read_tsv("variants.tsv")]
    forms += [r["gold_lemma"] for r in read_tsv("predictions.tsv")]
    return list(dict.fromkeys(forms))


def all_table_forms():
    forms = [r["arabic"] for r in read_tsv("diacritics.tsv")]
    for r in read_tsv("lemmatizations.tsv"):
        forms += [r["input"], r["lemma"]]
    forms += [r["arabic"] for r in read_tsv("variants.tsv")]
    for r in read_tsv("malformed.tsv"):
        forms += [r["invalid"], r["corrected"]]
    for r in read_tsv("predictions.tsv"):
        forms += [r["arabic_input"], r["gold_lemma"], r["prediction"]]
    for r in read_tsv("fewshot_sample.tsv"):
        forms += [r["input"], r["output"]]
    for r in read_tsv("annotator_pairs.tsv"):
        forms += [r["first"], r["second"]]
    return list(dict.fromkeys(forms))


@pytest.fixture
def fixtures_dir():
    return FIXTURES
