"""Prompting a chat-completion model for diacritized lemmas, and scoring it.

Prompts follow a fixed template per (shots, input format) cell.  A replay
client keyed by a digest of the exact prompt text makes runs reproducible
offline; any edit to a prompt changes the digest and misses the recording.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Protocol, Sequence

import httpx

from .dataset import Entry
from .evaluate import (
    DEFAULT_SUBSTITUTION_PAIRS,
    EvalRecord,
    edit_distance,
    score,
    summarize_records,
)
from .normalize import RepairTrace, normalize
from .script import DiacritizedWord, ScriptError, parse_arabic, render
from .similarity import EmptyGloss, freeman_similarity

log = logging.getLogger(__name__)

SHOTS = ("zero", "one", "few")
FORMATS = ("arabic+gloss", "arabic-only")
FEW_SHOT_COUNT = 80
API_KEY_ENV = "MODEL_API_KEY"


class ConfigurationError(ValueError):
    pass


class InsufficientExamples(ConfigurationError):
    pass


class ResponseError(ValueError):
    pass


class LineCountMismatch(ResponseError):
    pass


class NonArabicPayload(ResponseError):
    pass


class ReplayMiss(KeyError):
    pass


@dataclass(frozen=True)
class FewShotExample:
    input: str
    gloss: str
    output: str


def load_examples(path=None) -> list[FewShotExample]:
    """Few-shot pool TSV (input, gloss, output[, source]); defaults to the packaged pool."""
    if path is None:
        with resources.as_file(resources.files("propdiac") / "data" / "fewshot.tsv") as p:
            return load_examples(p)
    rows = [
        line.split("\t")
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.startswith("#")
    ]
    header, body = rows[0], rows[1:]
    idx = {name: header.index(name) for name in ("input", "gloss", "output")}
    return [FewShotExample(r[idx["input"]], r[idx["gloss"]], r[idx["output"]]) for r in body]


@dataclass(frozen=True)
class PromptConfig:
    shots: str = "few"
    input_format: str = "arabic+gloss"
    examples: tuple[FewShotExample, ...] = ()
    few_shot_count: int = FEW_SHOT_COUNT
    batch_size: int = 1

    def __post_init__(self):
        if self.shots not in SHOTS:
            raise ConfigurationError(f"shots must be one of {SHOTS}")
        if self.input_format not in FORMATS:
            raise ConfigurationError(f"input_format must be one of {FORMATS}")
        if self.batch_size < 1:
            raise ConfigurationError("batch_size must be positive")

    @classmethod
    def named(cls, name: str, **kw) -> "PromptConfig":
        """Build from a short name such as ``few_gloss`` or ``zero_arabic``."""
        shots, _, fmt = name.partition("_")
        formats = {"gloss": "arabic+gloss", "arabic": "arabic-only"}
        if fmt not in formats:
            raise ConfigurationError(f"unknown config name {name!r}")
        if shots != "zero" and "examples" not in kw:
            kw["examples"] = tuple(load_examples())
        return cls(shots=shots, input_format=formats[fmt], **kw)

    @property
    def name(self) -> str:
        return f"{self.shots}_{'gloss' if self.input_format == 'arabic+gloss' else 'arabic'}"

    def shot_examples(self) -> list[FewShotExample]:
        need = {"zero": 0, "one": 1, "few": self.few_shot_count}[self.shots]
        if len(self.examples) < need:
            raise InsufficientExamples(f"{self.shots}-shot needs {need} examples, have {len(self.examples)}")
        return list(self.examples[:need])


_GLOSS_TEMPLATE = """You are an expert in Arabic.

You are given the undiacritized proper noun in Arabic and its English gloss.
Your task is to generate the corresponding diacritized proper noun lemma in Arabic.
Arabic lemmas are dictionary entries that have no attached definite article (ال).
Diacritization is adding the correct diacritic markings to undiacritized words.

Remove the Arabic definite article (ال) when present.
Do not add, remove, or substitute any other letters in the input.
Determine the most accurate diacritization that matches the English gloss pronunciation.

The user will provide a Markdown table with {n} rows.
Each row contains an undiacritized proper noun in Arabic in the “Input” column and its English gloss in the “Gloss” column.

Return exactly {n} diacritized lemmas, one per line.
Do not include extra text, explanations, or formatting."""

_ARABIC_TEMPLATE = """You are an expert in Arabic.

You are given the undiacritized proper noun in Arabic.
Your task is to generate the corresponding diacritized proper noun lemma in Arabic.
Arabic lemmas are dictionary entries that have no attached definite article (ال).
Diacritization is adding the correct diacritic markings to undiacritized words.

Remove the Arabic definite article (ال) when present.
Do not add, remove, or substitute any other letters in the input.

The user will provide a Markdown table with {n} rows.
Each row contains an undiacritized proper noun in Arabic in the “Input” column.

Return exactly {n} diacritized lemmas, one per line.
Do not include extra text, explanations, or formatting."""

_GLOSS_SHOTS_INTRO = (
    "Here are some examples of triplets of an undiacritized proper noun in Arabic (“Input”), "
    "its respective English gloss (“Gloss”), and its diacritized lemma (“Output”) for reference"
)
_ARABIC_SHOTS_INTRO = (
    "Here are some examples of pairs of an undiacritized proper noun in Arabic (“Input”), "
    "and its diacritized lemma (“Output”) for reference"
)


def markdown_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join(" --- " for _ in header) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(lines)


def build_prompt(config: PromptConfig, batch: Sequence[Entry]) -> tuple[str, str]:
    if not 1 <= len(batch) <= config.batch_size:
        raise ValueError(f"batch of {len(batch)} does not fit batch_size={config.batch_size}")
    gloss = config.input_format == "arabic+gloss"
    system = (_GLOSS_TEMPLATE if gloss else _ARABIC_TEMPLATE).format(n=len(batch))
    shots = config.shot_examples()
    if shots:
        if gloss:
            table = markdown_table(["Input", "Gloss", "Output"], [(e.input, e.gloss, e.output) for e in shots])
        else:
            table = markdown_table(["Input", "Output"], [(e.input, e.output) for e in shots])
        system += "\n\n" + (_GLOSS_SHOTS_INTRO if gloss else _ARABIC_SHOTS_INTRO) + "\n\n" + table
    if gloss:
        user = markdown_table(["Input", "Gloss"], [(e.arabic_input, e.gloss) for e in batch])
    else:
        user = markdown_table(["Input"], [(e.arabic_input,) for e in batch])
    return system, user


_BIDI_CONTROLS = dict.fromkeys(map(ord, "‎‏؜‪‫‬‭‮"))


def _is_arabic_script(ch: str) -> bool:
    o = ord(ch)
    return 0x0600 <= o <= 0x06FF or 0x0750 <= o <= 0x077F or 0x08A0 <= o <= 0x08FF


def parse_response(text: str, expected_count: int) -> list[str]:
    """Split a model reply into exactly ``expected_count`` Arabic lines."""
    if expected_count < 1:
        raise ValueError("expected_count must be at least 1")
    lines = [ln.translate(_BIDI_CONTROLS).strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    for ln in lines:
        if not all(_is_arabic_script(ch) for ch in ln):
            raise NonArabicPayload(f"non-Arabic content in line {ln!r}")
    if len(lines) != expected_count:
        raise LineCountMismatch(f"expected {expected_count} lines, got {len(lines)}")
    return lines


class ModelClient(Protocol):
    def complete(self, system: str, user: str) -> str: ...


def request_digest(system: str, user: str) -> str:
    h = hashlib.sha256()
    h.update(system.encode("utf-8"))
    h.update(b"\x00")
    h.update(user.encode("utf-8"))
    return h.hexdigest()


class ReplayClient:
    """Offline client answering from a JSONL file of {digest, response} records."""

    def __init__(self, path):
        self.path = Path(path)
        self.responses: dict[str, str] = {}
        for line in self.path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                rec = json.loads(line)
                self.responses[rec["digest"]] = rec["response"]

    def complete(self, system: str, user: str) -> str:
        digest = request_digest(system, user)
        try:
            return self.responses[digest]
        except KeyError:
            raise ReplayMiss(f"no recorded response for request {digest[:12]}") from None


class RecordingClient:
    """Wraps a live client and appends each exchange to a replay file."""

    def __init__(self, inner: ModelClient, path):
        self.inner = inner
        self.path = Path(path)

    def complete(self, system: str, user: str) -> str:
        response = self.inner.complete(system, user)
        rec = {"digest": request_digest(system, user), "response": response}
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
        return response


class HttpChatClient:
    """Chat-completion endpoint client with retry and exponential backoff.

    Sampling parameters are left at the endpoint defaults.
    """

    RETRY_STATUS = {408, 409, 429, 500, 502, 503, 504}

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: str | None = None,
        timeout: float = 60.0,
        max_retries: int = 4,
        backoff: float = 1.0,
        transport: httpx.BaseTransport | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        api_key = api_key or os.environ.get(API_KEY_ENV)
        if not api_key:
            raise ConfigurationError(f"set {API_KEY_ENV} to use a live endpoint")
        self.endpoint = endpoint
        self.model = model
        self.max_retries = max_retries
        self.backoff = backoff
        self._sleep = sleep
        self._client = httpx.Client(
            timeout=timeout,
            transport=transport,
            headers={"Authorization": f"Bearer {api_key}", "Content-Type": "application/json"},
        )

    def payload(self, system: str, user: str) -> dict:
        return {
            "model": self.model,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
        }

    def complete(self, system: str, user: str) -> str:
        body = self.payload(system, user)
        for attempt in range(self.max_retries + 1):
            try:
                resp = self._client.post(self.endpoint, json=body)
                if resp.status_code in self.RETRY_STATUS and attempt < self.max_retries:
                    raise httpx.HTTPStatusError("retryable status", request=resp.request, response=resp)
                resp.raise_for_status()
                return resp.json()["choices"][0]["message"]["content"]
            except (httpx.TransportError, httpx.HTTPStatusError) as exc:
                retryable = isinstance(exc, httpx.TransportError) or exc.response.status_code in self.RETRY_STATUS
                if not retryable or attempt == self.max_retries:
                    raise
                delay = self.backoff * 2**attempt
                log.warning("request failed (%s); retrying in %.1fs", exc, delay)
                self._sleep(delay)
        raise AssertionError("unreachable")

    def close(self) -> None:
        self._client.close()


@dataclass
class BenchmarkResult:
    records: list[EvalRecord]
    summary: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.records, self.summary))


@dataclass(frozen=True)
class Generation:
    """One model answer for one entry, after parsing and repair."""

    raw: str | None
    parsed: DiacritizedWord | None = None
    repaired: DiacritizedWord | None = None
    trace: RepairTrace = field(default_factory=RepairTrace)
    failure: str | None = None


def _generate_batch(batch: Sequence[Entry], client: ModelClient, config: PromptConfig) -> list[Generation]:
    system, user = build_prompt(config, batch)
    try:
        text = client.complete(system, user)
    except Exception as exc:  # transport failures stay per-entry
        return [Generation(None, failure=f"request: {type(exc).__name__}: {exc}") for _ in batch]
    try:
        lines = parse_response(text, len(batch))
    except ResponseError as exc:
        return [Generation(text, failure=f"response: {exc}") for _ in batch]
    out = []
    for line in lines:
        try:
            parsed = parse_arabic(line)
        except ScriptError as exc:
            out.append(Generation(line, failure=f"parse: {exc}"))
            continue
        repaired, trace = normalize(parsed)
        out.append(Generation(line, parsed, repaired, trace))
    return out


def generate(
    entries: Sequence[Entry],
    client: ModelClient,
    config: PromptConfig,
    workers: int = 4,
) -> list[Generation]:
    """Prompt the model for every entry; results keep input order."""
    if config.shots != "zero":
        config.shot_examples()
    batches = [entries[i : i + config.batch_size] for i in range(0, len(entries), config.batch_size)]
    if workers <= 1 or isinstance(client, ReplayClient):
        results = [_generate_batch(b, client, config) for b in batches]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda b: _generate_batch(b, client, config), batches))
    return [g for chunk in results for g in chunk]


def _freeman(entry: Entry) -> float | None:
    try:
        return freeman_similarity(entry.arabic_input, entry.gloss)
    except EmptyGloss:
        return None


def score_generation(entry: Entry, gen: Generation, pairs=DEFAULT_SUBSTITUTION_PAIRS) -> EvalRecord:
    if gen.failure is not None:
        return EvalRecord(
            entry_id=entry.id,
            reference=entry.gold_lemma,
            raw=gen.raw,
            freeman=_freeman(entry),
            frequency=entry.frequency,
            failure=gen.failure,
        )
    rec = score(
        entry.id,
        gen.repaired,
        entry.gold_lemma,
        freeman=_freeman(entry),
        frequency=entry.frequency,
        raw=gen.raw,
        trace=gen.trace,
        pairs=pairs,
    )
    rec.raw_distance = edit_distance(gen.parsed, entry.gold_lemma)
    return rec


def run_benchmark(
    entries: Sequence[Entry],
    client: ModelClient,
    config: PromptConfig,
    workers: int = 4,
    pairs=DEFAULT_SUBSTITUTION_PAIRS,
) -> BenchmarkResult:
    """Prompt, repair, and score every entry; records keep input order."""
    missing = [e.id for e in entries if e.gold_lemma is None]
    if missing:
        raise ConfigurationError(f"{len(missing)} entries lack a gold lemma, e.g. {missing[0]}")
    gens = generate(entries, client, config, workers)
    records = [score_generation(e, g, pairs) for e, g in zip(entries, gens)]
    summary = summarize_records(records)
    summary["config"] = {
        "name": config.name,
        "shots": config.shots,
        "input_format": config.input_format,
        "batch_size": config.batch_size,
        "batched_extension": config.batch_size > 1,
    }
    return BenchmarkResult(records, summary)


def record_to_json(rec: EvalRecord) -> dict:
    return {
        "id": rec.entry_id,
        "raw": rec.raw,
        "normalized": None if rec.prediction is None else render(rec.prediction),
        "reference": render(rec.reference),
        "exact": rec.exact,
        "distance": rec.distance,
        "raw_distance": rec.raw_distance,
        "error_class": None if rec.error_class is None else rec.error_class.label,
        "repairs": str(rec.trace),
        "freeman": rec.freeman,
        "frequency": rec.frequency,
        "failure": rec.failure,
    }


def write_results(records: Sequence[EvalRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(record_to_json(rec), ensure_ascii=False, sort_keys=True) + "\n")


def read_results(path) -> list[EvalRecord]:
    """Load a results file back into records, enough for binned analysis."""
    records = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        d = json.loads(line)
        records.append(
            EvalRecord(
                entry_id=d["id"],
                reference=parse_arabic(d["reference"]),
                prediction=None if d["normalized"] is None else parse_arabic(d["normalized"]),
                raw=d["raw"],
                exact=d["exact"],
                distance=d["distance"],
                freeman=d.get("freeman"),
                frequency=d.get("frequency") or 0,
                failure=d.get("failure"),
                raw_distance=d.get("raw_distance"),
            )
        )
    return records
