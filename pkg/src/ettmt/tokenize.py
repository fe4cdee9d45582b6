"""Tokenization of normalized text: plain whitespace split and root+suffix split."""

from __future__ import annotations

from collections.abc import Iterable

# A suffix must leave at least this many root characters behind.
MIN_ROOT_LEN = 2


def tokenize_whitespace(text: str) -> list[str]:
    """Split a normalized string on spaces; empty input gives an empty list."""
    return text.split()


def tokenize_suffix(text: str, suffixes: Iterable[str]) -> list[str]:
    """Split each word into root + suffix using the longest matching suffix.

    A suffix applies only when it matches the end of the word and leaves a
    root of at least MIN_ROOT_LEN characters; the split is applied once per
    word (no recursive stripping). The suffix token is emitted with a '-'
    prefix so later stages can tell it apart from a free word.
    """
    by_length = sorted(set(suffixes), key=lambda s: (-len(s), s))
    out: list[str] = []
    for token in text.split():
        for suffix in by_length:
            if len(token) - len(suffix) >= MIN_ROOT_LEN and token.endswith(suffix):
                out.append(token[: -len(suffix)])
                out.append("-" + suffix)
                break
        else:
            out.append(token)
    return out


def detokenize(tokens: list[str]) -> str:
    """Join tokens with spaces, re-attaching '-'-prefixed suffix tokens to the previous word."""
    parts: list[str] = []
    for tok in tokens:
        if tok.startswith("-") and len(tok) > 1:
            if not parts:
                raise ValueError(f"token sequence begins with suffix token {tok!r}")
            parts[-1] += tok[1:]
        else:
            parts.append(tok)
    return " ".join(parts)
