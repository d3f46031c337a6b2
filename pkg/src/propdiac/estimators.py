"""Estimator-style wrappers so the pipeline composes with scikit-learn tooling.

All estimators take a 1-D sequence of words (strings or parsed words) as X.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .bench import ModelClient, PromptConfig, generate
from .dataset import Entry
from .evaluate import exact_match
from .normalize import normalize
from .script import DiacritizedWord, parse_arabic, render
from .validation import Profile, validate


def check_words(X, name: str = "X") -> list[DiacritizedWord]:
    """Coerce X to a list of parsed words; a bare string is rejected."""
    if isinstance(X, (str, bytes)):
        raise TypeError(f"{name} must be a sequence of words, not a single string")
    if isinstance(X, np.ndarray):
        if X.ndim != 1:
            raise ValueError(f"{name} must be 1-D, got shape {X.shape}")
        X = X.tolist()
    try:
        items = list(X)
    except TypeError:
        raise TypeError(f"{name} must be iterable, got {type(X).__name__}") from None
    out = []
    for i, w in enumerate(items):
        if isinstance(w, DiacritizedWord):
            out.append(w)
        elif isinstance(w, str):
            out.append(parse_arabic(w))
        else:
            raise TypeError(f"{name}[{i}] is {type(w).__name__}, expected str or DiacritizedWord")
    return out


def check_entries(X, name: str = "X") -> list[Entry]:
    """Accept Entry objects or (arabic, gloss) pairs."""
    if isinstance(X, (str, bytes)):
        raise TypeError(f"{name} must be a sequence of entries")
    out = []
    for i, item in enumerate(X):
        if isinstance(item, Entry):
            out.append(item)
        elif isinstance(item, (tuple, list)) and len(item) == 2:
            out.append(Entry(id=str(i), arabic_input=item[0], gloss=item[1]))
        else:
            raise TypeError(f"{name}[{i}] must be an Entry or an (arabic, gloss) pair")
    return out


def check_consistent_length(X, y) -> None:
    if len(X) != len(y):
        raise ValueError(f"X and y have different lengths: {len(X)} != {len(y)}")


class LemmaNormalizer(TransformerMixin, BaseEstimator):
    """Stateless repair of malformed diacritized words.

    >>> LemmaNormalizer().fit_transform(["كَرَمُ"])
    ['كَرَم']
    """

    def __init__(self, letter_map=None):
        self.letter_map = letter_map

    def fit(self, X=None, y=None):
        if X is not None:
            check_words(X)
        self.is_fitted_ = True
        return self

    def transform(self, X) -> list[str]:
        return [render(normalize(w, self.letter_map).word) for w in check_words(X)]

    def transform_with_trace(self, X):
        return [normalize(w, self.letter_map) for w in check_words(X)]

    def __sklearn_is_fitted__(self) -> bool:
        return True


class LemmaValidator(BaseEstimator):
    """predict returns True for words with no rule violations."""

    def __init__(self, profile: str = "lemma"):
        self.profile = profile

    def fit(self, X=None, y=None):
        self.profile_ = Profile(self.profile)
        return self

    def violations(self, X) -> list[list]:
        check_is_fitted(self, "profile_")
        return [validate(w, self.profile_) for w in check_words(X)]

    def predict(self, X) -> np.ndarray:
        return np.array([not v for v in self.violations(X)], dtype=bool)

    def score(self, X, y=None) -> float:
        """Share of valid words, or agreement with y when given."""
        pred = self.predict(X)
        if y is None:
            return float(pred.mean()) if len(pred) else 0.0
        check_consistent_length(pred, y)
        return float(np.mean(pred == np.asarray(y, dtype=bool)))


class PromptedDiacritizer(BaseEstimator):
    """Diacritize proper nouns by prompting a model client.

    fit only resolves the prompt configuration; nothing is learned.
    Failed generations come back as None from predict.
    """

    def __init__(self, client: ModelClient | None = None, config="few_gloss", workers: int = 4):
        self.client = client
        self.config = config
        self.workers = workers

    def fit(self, X=None, y=None):
        if self.client is None:
            raise ValueError("a model client is required")
        config = self.config
        self.config_ = config if isinstance(config, PromptConfig) else PromptConfig.named(config)
        self.config_.shot_examples()
        return self

    def predict(self, X) -> list[str | None]:
        check_is_fitted(self, "config_")
        entries = check_entries(X)
        gens = generate(entries, self.client, self.config_, self.workers)
        return [None if g.repaired is None else render(g.repaired) for g in gens]

    def score(self, X, y: Sequence) -> float:
        """Exact-match accuracy; failures count as misses."""
        pred = self.predict(X)
        check_consistent_length(pred, y)
        if not pred:
            return 0.0
        return sum(p is not None and exact_match(p, r) for p, r in zip(pred, y)) / len(pred)
