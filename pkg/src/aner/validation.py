"""Input validation helpers shared by the estimators and the service."""

from __future__ import annotations

from typing import Iterable


def check_text(value, name: str = "text") -> str:
    """Require a unicode string (bytes are rejected, not decoded)."""
    if isinstance(value, bytes):
        raise TypeError(f"{name} must be str, not bytes; decode it first")
    if not isinstance(value, str):
        raise TypeError(f"{name} must be str, got {type(value).__name__}")
    return value


def check_texts(values: Iterable, name: str = "X") -> list[str]:
    """Materialize an iterable of strings, rejecting a bare string.

    A single string is almost always a mistake when a batch is expected
    (it would be iterated character by character).
    """
    if isinstance(values, (str, bytes)):
        raise TypeError(f"{name} must be an iterable of strings, not a single string")
    out = []
    for i, value in enumerate(values):
        out.append(check_text(value, name=f"{name}[{i}]"))
    return out


def check_word(value, name: str = "word") -> str:
    """Require a non-empty string with no internal whitespace."""
    check_text(value, name=name)
    if not value:
        raise ValueError(f"{name} must be non-empty")
    if any(ch.isspace() for ch in value):
        raise ValueError(f"{name} must not contain whitespace: {value!r}")
    return value


def check_positive(value: int, name: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return value
