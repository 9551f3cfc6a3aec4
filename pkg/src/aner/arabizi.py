"""Input normalization for mixed Arabic/romanized text.

Raw text is cleaned (whitespace collapsed, emoji and other symbol
codepoints dropped) while keeping a per-character map back to the
original string. Each word is then classified by script, and words
written in Latin letters (Arabizi) are transliterated to Arabic script,
either through an external input-tools service or a local rule table.
The result is an all-Arabic sentence plus per-word provenance.
"""

from __future__ import annotations

import os
import time
import unicodedata
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Protocol, Union

import httpx

from .errors import TransliterationError
from .validation import check_text, check_word

ENDPOINT_ENV_VAR = "ANER_TRANSLIT_ENDPOINT"

_VOWELS = frozenset("aeiou")

# Blocks holding Arabic letters, marks, and presentation forms.
_ARABIC_RANGES = (
    ("؀", "ۿ"),
    ("ݐ", "ݿ"),
    ("ࢠ", "ࣿ"),
    ("ﭐ", "﷿"),
    ("ﹰ", "﻿"),
)


def _in_arabic_block(ch: str) -> bool:
    return any(lo <= ch <= hi for lo, hi in _ARABIC_RANGES)


def _is_arabic_letter(ch: str) -> bool:
    return ch.isalpha() and _in_arabic_block(ch)


def _is_latin_letter(ch: str) -> bool:
    return ch.isalpha() and unicodedata.name(ch, "").startswith("LATIN")


def _is_dropped(ch: str) -> bool:
    # Emoji and friends: every symbol category, plus invisible format,
    # control, surrogate, private-use, and unassigned codepoints.
    category = unicodedata.category(ch)
    return category[0] == "S" or category in ("Cc", "Cf", "Cs", "Co", "Cn")


class WordKind(Enum):
    ARABIC = "arabic"
    ARABIZI = "arabizi"
    NEUTRAL = "neutral"


class TransliterationBackend(Enum):
    EXTERNAL = "external"
    LOCAL_RULES = "local_rules"


@dataclass(frozen=True)
class CleanedText:
    """Normalized text plus, for each output char, its source index."""

    text: str
    offset_map: tuple[int, ...]

    def __post_init__(self):
        if len(self.offset_map) != len(self.text):
            raise ValueError("offset_map must have one entry per output character")
        if any(b < a for a, b in zip(self.offset_map, self.offset_map[1:])):
            raise ValueError("offset_map must be non-decreasing")


@dataclass(frozen=True)
class WordClassification:
    word: str
    kind: WordKind


@dataclass(frozen=True)
class TransliterationResult:
    """Candidate Arabic spellings for one romanized word, best first."""

    source: str
    candidates: tuple[str, ...]
    backend: TransliterationBackend

    def __post_init__(self):
        if not self.candidates:
            raise TransliterationError(f"no transliteration candidates for {self.source!r}")

    @property
    def chosen(self) -> str:
        return self.candidates[0]


@dataclass(frozen=True)
class WordProvenance:
    """How one output word came to be, for display alongside results.

    ``raw_start``/``raw_end`` delimit the original word in the raw,
    uncleaned input. ``backend`` is None for words that were not
    transliterated.
    """

    original: str
    kind: WordKind
    output: str
    raw_start: int
    raw_end: int
    candidates: tuple[str, ...] = ()
    backend: TransliterationBackend | None = None


@dataclass(frozen=True)
class FrontResult:
    text: str
    words: tuple[WordProvenance, ...]


def clean_text(raw: str) -> CleanedText:
    """Collapse whitespace runs to single spaces and drop symbol codepoints.

    Newlines count as whitespace. A collapsed run maps to the source
    index of its first whitespace character; leading and trailing runs
    are trimmed entirely.
    """
    check_text(raw)
    chars: list[str] = []
    offsets: list[int] = []
    pending_space: int | None = None
    for i, ch in enumerate(raw):
        if ch.isspace():
            if pending_space is None:
                pending_space = i
            continue
        if _is_dropped(ch):
            continue
        if pending_space is not None and chars:
            chars.append(" ")
            offsets.append(pending_space)
        pending_space = None
        chars.append(ch)
        offsets.append(i)
    return CleanedText(text="".join(chars), offset_map=tuple(offsets))


def classify_word(word: str) -> WordClassification:
    """Classify a word by script. Any Latin letter makes it Arabizi,
    otherwise any Arabic letter makes it Arabic, otherwise Neutral."""
    check_word(word)
    has_arabic = False
    for ch in word:
        if _is_latin_letter(ch):
            return WordClassification(word, WordKind.ARABIZI)
        has_arabic = has_arabic or _is_arabic_letter(ch)
    return WordClassification(word, WordKind.ARABIC if has_arabic else WordKind.NEUTRAL)


def load_transliteration_table(source: Union[str, Path, Iterable[str]]) -> dict[str, str]:
    """Read a rule table (``latin<TAB>arabic`` per line, ``#`` comments).

    Keys must be lowercase Latin/digit/apostrophe sequences and values
    Arabic script, so a bad table fails loudly at load time.
    """
    if isinstance(source, Path):
        lines: Iterable[str] = source.read_text(encoding="utf-8").splitlines()
    elif isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = source
    table: dict[str, str] = {}
    for raw_line in lines:
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise TransliterationError(f"bad rule line {raw_line!r}")
        latin, arabic = parts
        if latin != latin.lower():
            raise TransliterationError(f"rule key {latin!r} must be lowercase")
        if latin in table:
            raise TransliterationError(f"duplicate rule key {latin!r}")
        if not all(_in_arabic_block(ch) for ch in arabic):
            raise TransliterationError(f"rule value {arabic!r} must be Arabic script")
        table[latin] = arabic
    if not table:
        raise TransliterationError("transliteration table is empty")
    return table


@lru_cache(maxsize=1)
def default_transliteration_table() -> dict[str, str]:
    path = Path(__file__).parent / "data" / "arabizi_table.tsv"
    return load_transliteration_table(path)


def strip_diacritics(text: str) -> str:
    """Remove Arabic combining marks (short vowels, shadda, sukun)."""
    return "".join(ch for ch in text if unicodedata.category(ch) != "Mn")


def transliterate_local(
    word: str, table: dict[str, str] | None = None
) -> TransliterationResult:
    """Deterministic rule-based romanized-to-Arabic conversion.

    Left to right, longest table match first. Single vowels follow
    position: word-initial vowels become alef, word-final ``a`` becomes
    alef and ``e``/``i``/``o``/``u`` the matching long vowel, and medial
    vowels are dropped (Arabic omits short vowels). A letter repeating
    its predecessor collapses, mirroring shadda. Arabic-script
    characters pass through, so mixed-script words keep their Arabic
    half. Accented Latin letters fold to their base letter first; a
    word whose characters all lack mappings comes out as a bare hamza,
    so any word is guaranteed some Arabic-script output.
    """
    if not word:
        raise TransliterationError("cannot transliterate an empty word")
    if table is None:
        table = default_transliteration_table()
    max_key = max(len(k) for k in table)
    text = unicodedata.normalize("NFKD", word.lower())
    text = "".join(ch for ch in text if unicodedata.category(ch) != "Mn")
    out: list[str] = []
    i = 0
    while i < len(text):
        matched = None
        for length in range(min(max_key, len(text) - i), 1, -1):
            chunk = text[i : i + length]
            if chunk in table:
                matched = chunk
                break
        if matched:
            out.append(table[matched])
            i += len(matched)
            continue
        ch = text[i]
        if ch in _VOWELS:
            if i == 0:
                out.append("ا")  # ا
            elif i == len(text) - 1:
                out.append({"a": "ا", "e": "ي", "i": "ي",
                            "o": "و", "u": "و"}[ch])
            i += 1
            continue
        if i > 0 and ch == text[i - 1]:
            i += 1
            continue
        if ch in table:
            out.append(table[ch])
        elif _in_arabic_block(ch):
            out.append(ch)
        i += 1
    result = "".join(out) or "ء"  # ء
    return TransliterationResult(
        source=word, candidates=(result,), backend=TransliterationBackend.LOCAL_RULES
    )


class Transliterator(Protocol):
    def transliterate(self, word: str) -> TransliterationResult: ...


class LocalTransliterator:
    """Table-driven transliterator with the uniform client interface."""

    def __init__(self, table: dict[str, str] | None = None):
        self._table = table

    def transliterate(self, word: str) -> TransliterationResult:
        return transliterate_local(word, self._table)


class ExternalTransliterator:
    """Client for an input-tools style transliteration HTTP service.

    One GET per word with ``text``, ``itc`` and ``num`` query
    parameters; the reply is a JSON array whose first element is a
    status string and whose second holds per-word candidate lists. Any
    transport or parse failure falls back to the local rule table, so
    the pipeline keeps working offline; the fallback shows up as
    ``backend=LOCAL_RULES`` on the result.
    """

    INPUT_SCHEME = "ar-t-i0-und"

    def __init__(
        self,
        endpoint: str | None = None,
        *,
        num_candidates: int = 3,
        timeout: float = 5.0,
        requests_per_second: float | None = None,
        transport: httpx.BaseTransport | None = None,
        table: dict[str, str] | None = None,
    ):
        endpoint = endpoint or os.environ.get(ENDPOINT_ENV_VAR)
        if not endpoint:
            raise TransliterationError(
                f"no transliteration endpoint configured; pass one or set {ENDPOINT_ENV_VAR}"
            )
        if num_candidates < 1:
            raise TransliterationError("num_candidates must be at least 1")
        self._endpoint = endpoint
        self._num_candidates = num_candidates
        self._table = table
        self._min_interval = 1.0 / requests_per_second if requests_per_second else 0.0
        self._last_request = 0.0
        self._client = httpx.Client(timeout=timeout, transport=transport)

    def _throttle(self):
        if self._min_interval <= 0:
            return
        wait = self._min_interval - (time.monotonic() - self._last_request)
        if wait > 0:
            time.sleep(wait)

    def transliterate(self, word: str) -> TransliterationResult:
        if classify_word(word).kind is not WordKind.ARABIZI:
            raise TransliterationError(
                f"{word!r} is not romanized Arabic; only Arabizi words can be transliterated"
            )
        try:
            self._throttle()
            self._last_request = time.monotonic()
            response = self._client.get(
                self._endpoint,
                params={
                    "text": word,
                    "itc": self.INPUT_SCHEME,
                    "num": str(self._num_candidates),
                },
            )
            response.raise_for_status()
            candidates = self._parse(response.json())
        except (httpx.HTTPError, ValueError, LookupError, TypeError):
            return transliterate_local(word, self._table)
        return TransliterationResult(
            source=word,
            candidates=tuple(candidates),
            backend=TransliterationBackend.EXTERNAL,
        )

    @staticmethod
    def _parse(payload) -> list[str]:
        if not isinstance(payload, list) or len(payload) < 2 or payload[0] != "SUCCESS":
            raise ValueError("unexpected reply shape")
        first_word = payload[1][0]
        candidates = []
        for candidate in first_word[1]:
            if not isinstance(candidate, str):
                continue
            candidate = candidate.strip()
            # A multi-word candidate would break the one-word-in,
            # one-word-out contract downstream.
            if candidate and not any(ch.isspace() for ch in candidate):
                candidates.append(candidate)
        if not candidates:
            raise ValueError("empty candidate list")
        return candidates

    def close(self):
        self._client.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()


def process_pipeline_front(
    raw: str, transliterator: Transliterator | None = None
) -> FrontResult:
    """Clean, classify and transliterate a sentence into Arabic script.

    Words stay in their original order; Arabic and Neutral words pass
    through untouched. The default transliterator is the local rule
    table, so the call works without network access.
    """
    cleaned = clean_text(raw)
    if not cleaned.text:
        return FrontResult(text="", words=())
    if transliterator is None:
        transliterator = LocalTransliterator()

    provenance: list[WordProvenance] = []
    outputs: list[str] = []
    position = 0
    for word in cleaned.text.split(" "):
        start, end = position, position + len(word)
        position = end + 1
        raw_start = cleaned.offset_map[start]
        raw_end = cleaned.offset_map[end - 1] + 1
        kind = classify_word(word).kind
        if kind is WordKind.ARABIZI:
            result = transliterator.transliterate(word)
            record = WordProvenance(
                original=word,
                kind=kind,
                output=result.chosen,
                raw_start=raw_start,
                raw_end=raw_end,
                candidates=result.candidates,
                backend=result.backend,
            )
        else:
            record = WordProvenance(
                original=word, kind=kind, output=word,
                raw_start=raw_start, raw_end=raw_end,
            )
        outputs.append(record.output)
        provenance.append(record)
    return FrontResult(text=" ".join(outputs), words=tuple(provenance))
