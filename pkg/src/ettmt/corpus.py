"""Corpus loading, normalization, and splitting for the Etruscan-English data.

Etruscan transcriptions arrive in mixed conventions (Greek letters for
aspirates and sibilants, several word-separator glyphs, damage hyphens).
`normalize` maps everything onto a small Latin alphabet {a-z, space, '-'};
the mapping is deterministic but not reversible.
"""

from __future__ import annotations

import csv
import json
import random
import unicodedata
from dataclasses import dataclass, field

from .errors import DataError

# Grammatical feature columns of the lexicon, in file order.
FEATURE_NAMES = (
    "city name",
    "place name",
    "name",
    "epithet",
    "theonomin",
    "cognomen",
    "praenomen",
    "nomen",
    "nominative",
    "accusative",
    "masculine",
    "feminine",
    "nas-particle",
    "nasa-particle",
    "u-particle",
    "th-imperative",
    "th-particle",
    "thas-particle",
    "as-particle",
    "active",
    "passive",
    "non-past",
    "past",
    "imperative",
    "jussive",
    "necessitative",
    "inanimate",
    "animate",
    "indefinite (pronoun)",
    "definite (article)",
    "deictic particle",
    "enclitic particle",
    "enclitic conjunction",
    "demonstrative",
    "adverb",
    "article",
    "conjunction",
    "post-position",
    "pronoun",
    "relative",
    "subordinator",
    "negation",
    "numeral",
    "1st genitive",
    "2nd genitive",
    "1st ablative",
    "2nd ablative",
    "locative",
    "1st pertinentive",
    "2nd pertinentive",
    "1st person",
    "2nd person",
    "3rd person",
    "plural",
)
N_FEATURES = len(FEATURE_NAMES)

# Feature columns that mark an entry as a proper noun (used by augmentation).
NAME_FEATURES = ("city name", "place name", "name", "theonomin", "cognomen", "praenomen", "nomen")
NAME_FEATURE_INDICES = tuple(FEATURE_NAMES.index(f) for f in NAME_FEATURES)

SOURCES = ("ETP", "CIEP")

# Transcription symbols with a multi-char or non-identity target.
_CHAR_MAP = {
    "θ": "th",  # theta
    "ϑ": "th",  # theta symbol variant
    "φ": "ph",  # phi
    "ϕ": "ph",  # phi symbol variant
    "χ": "kh",  # chi
    "σ": "s",   # sigma
    "ς": "s",   # final sigma
    "ś": "sh",  # s with acute
    "⊞": "s",   # boxed s ("marked" sibilant)
    "‐": "-",   # hyphen variants fold onto the damage placeholder
    "‑": "-",
    "‒": "-",
    "–": "-",
    "—": "-",
    "―": "-",
}

# Bases that an acute-like mark turns into "sh" (s / sigma / final sigma).
_S_LIKE = frozenset("sσς")
# Marks that behave like the acute in transcriptions: combining acute,
# apostrophes, acute accent, modifier prime.
_ACUTE_MARKS = frozenset("́'’´ʹ")
_OVERCROSS = "̽"  # combining x above: s-with-cross reads "sh"

# Word separators collapse to a single space; '|' marks a line break in the
# source editions and is treated the same way.
_SEPARATORS = frozenset("·:⋮|")


def _normalize_with_stats(raw: str) -> tuple[str, int]:
    """Normalize and also report how many characters had no mapping."""
    text = unicodedata.normalize("NFC", raw).lower()
    out: list[str] = []
    dropped = 0
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        nxt = text[i + 1] if i + 1 < n else ""
        if ch in _S_LIKE and (nxt in _ACUTE_MARKS or nxt == _OVERCROSS):
            out.append("sh")
            i += 2
            continue
        mapped = _CHAR_MAP.get(ch)
        if mapped is not None:
            out.append(mapped)
        elif ch in _SEPARATORS or ch.isspace():
            out.append(" ")
        elif "a" <= ch <= "z" or ch == "-":
            out.append(ch)
        else:
            dropped += 1
        i += 1
    return " ".join("".join(out).split()), dropped


def normalize(raw: str) -> str:
    """Map a raw Etruscan transcription onto {a-z, space, '-'}.

    Aspirates become digraphs (th, ph, kh), marked sibilants become "sh",
    separator glyphs become a single space, '-' survives as the damaged
    character placeholder, and anything without a mapping is dropped.
    Never fails; idempotent; empty output is legal.
    """
    return _normalize_with_stats(raw)[0]


def normalize_english(raw: str) -> str:
    """Lowercase an English gloss and strip punctuation to spaces.

    Apostrophes are removed outright so contractions stay one token;
    digits are kept.
    """
    text = unicodedata.normalize("NFC", raw).lower()
    out = []
    for ch in text:
        if ch in "'’":
            continue
        if "a" <= ch <= "z" or "0" <= ch <= "9":
            out.append(ch)
        else:
            out.append(" ")
    return " ".join("".join(out).split())


@dataclass(frozen=True)
class Inscription:
    """One parallel example; `english is None` means untranslated."""

    id: str
    source: str
    etruscan_raw: str
    etruscan_norm: str
    english: str | None = None
    date: str | None = None
    location: str | None = None


@dataclass(frozen=True)
class ParallelCorpus:
    items: tuple[Inscription, ...]
    name: str = ""

    def __post_init__(self):
        seen: set[str] = set()
        for item in self.items:
            if item.id in seen:
                raise DataError(f"duplicate inscription id {item.id!r} in corpus {self.name!r}")
            seen.add(item.id)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def translated(self) -> "ParallelCorpus":
        """Sub-corpus restricted to items that carry a translation."""
        return ParallelCorpus(
            tuple(i for i in self.items if i.english), name=self.name
        )


@dataclass(frozen=True)
class LexiconEntry:
    etruscan: str
    english: str
    features: tuple[int, ...]

    def __post_init__(self):
        if not self.etruscan:
            raise DataError("lexicon entry with empty Etruscan form")
        if len(self.features) != N_FEATURES:
            raise DataError(
                f"lexicon entry {self.etruscan!r}: expected {N_FEATURES} features, "
                f"got {len(self.features)}"
            )

    @property
    def translatable(self) -> bool:
        return bool(self.english)

    @property
    def is_name(self) -> bool:
        return any(self.features[i] for i in NAME_FEATURE_INDICES)


@dataclass(frozen=True)
class Lexicon:
    entries: tuple[LexiconEntry, ...]
    suffixes: tuple[str, ...] = ()

    def __post_init__(self):
        if len(set(self.suffixes)) != len(self.suffixes) or "" in self.suffixes:
            raise DataError("suffix list must be unique and non-empty")


@dataclass
class LoadReport:
    """Bookkeeping for one corpus load: what was read, kept, and dropped."""

    path: str = ""
    rows_read: int = 0
    rows_kept: int = 0
    rows_dropped: int = 0
    dropped_chars: int = 0
    reasons: list[str] = field(default_factory=list)

    def drop(self, line_no: int, reason: str):
        self.rows_dropped += 1
        self.reasons.append(f"line {line_no}: {reason}")

    def summary(self) -> str:
        lines = [
            f"{self.path}: read {self.rows_read} rows, kept {self.rows_kept}, "
            f"dropped {self.rows_dropped}; {self.dropped_chars} unmappable characters removed"
        ]
        lines.extend("  " + r for r in self.reasons)
        return "\n".join(lines)


_CORPUS_COLUMNS = ("id", "source", "etruscan", "english", "date", "location")


def _row_to_inscription(row: dict, line_no: int, report: LoadReport) -> Inscription | None:
    ident = (row.get("id") or "").strip()
    if not ident:
        raise DataError(f"line {line_no}: missing id")
    source = (row.get("source") or "").strip().upper()
    if source not in SOURCES:
        raise DataError(f"line {line_no}: unknown source {row.get('source')!r}")
    raw = row.get("etruscan") or ""
    norm, dropped = _normalize_with_stats(raw)
    report.dropped_chars += dropped
    if not norm:
        report.drop(line_no, f"id {ident!r}: empty after normalization")
        return None
    english = normalize_english(row.get("english") or "") or None
    return Inscription(
        id=ident,
        source=source,
        etruscan_raw=raw,
        etruscan_norm=norm,
        english=english,
        date=(row.get("date") or "").strip() or None,
        location=(row.get("location") or "").strip() or None,
    )


def load_corpus(path, fmt: str = "tsv", name: str = "") -> tuple[ParallelCorpus, LoadReport]:
    """Load a corpus file (TSV or JSON) and normalize every row.

    Rows whose Etruscan field normalizes to the empty string are dropped and
    counted in the returned LoadReport. Malformed rows and duplicate ids
    raise DataError with the offending line.
    """
    report = LoadReport(path=str(path))
    items: list[Inscription] = []
    if fmt == "tsv":
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
            if reader.fieldnames is None or [c.strip() for c in reader.fieldnames] != list(_CORPUS_COLUMNS):
                raise DataError(
                    f"{path}: expected header {' '.join(_CORPUS_COLUMNS)}, got {reader.fieldnames}"
                )
            for line_no, row in enumerate(reader, start=2):
                if None in row or None in row.values():
                    raise DataError(f"line {line_no}: wrong column count")
                report.rows_read += 1
                item = _row_to_inscription(row, line_no, report)
                if item is not None:
                    items.append(item)
    elif fmt == "json":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, list):
            raise DataError(f"{path}: JSON corpus must be an array of objects")
        for line_no, row in enumerate(data, start=1):
            if not isinstance(row, dict):
                raise DataError(f"entry {line_no}: not an object")
            report.rows_read += 1
            item = _row_to_inscription(row, line_no, report)
            if item is not None:
                items.append(item)
    else:
        raise ValueError(f"unknown corpus format {fmt!r}")
    corpus = ParallelCorpus(tuple(items), name=name or str(path))
    report.rows_kept = len(items)
    return corpus, report


def save_corpus(corpus: ParallelCorpus, path, fmt: str = "tsv"):
    """Write a corpus with normalized fields; inverse of load_corpus up to normalization."""
    rows = [
        {
            "id": i.id,
            "source": i.source,
            "etruscan": i.etruscan_norm,
            "english": i.english or "",
            "date": i.date or "",
            "location": i.location or "",
        }
        for i in corpus
    ]
    if fmt == "tsv":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\t".join(_CORPUS_COLUMNS) + "\n")
            for row in rows:
                cells = [row[c].replace("\t", " ").replace("\n", " ") for c in _CORPUS_COLUMNS]
                fh.write("\t".join(cells) + "\n")
    elif fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, ensure_ascii=False, indent=1)
    else:
        raise ValueError(f"unknown corpus format {fmt!r}")


def load_lexicon(path, suffix_path=None) -> Lexicon:
    """Load the lexicon TSV (etruscan, english, f1..f54) plus an optional suffix file.

    Entries without an English gloss are kept but flagged untranslatable, so
    they still serve feature lookups.
    """
    entries: list[LexiconEntry] = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
        header = next(reader, None)
        if header is None or len(header) != 2 + N_FEATURES:
            got = 0 if header is None else len(header)
            raise DataError(
                f"{path}: lexicon header must have {2 + N_FEATURES} columns, got {got}"
            )
        for line_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2 + N_FEATURES:
                raise DataError(
                    f"{path} line {line_no}: expected {2 + N_FEATURES} columns, got {len(row)}"
                )
            feats = []
            for k, cell in enumerate(row[2:], start=1):
                cell = cell.strip()
                if cell not in ("0", "1"):
                    raise DataError(f"{path} line {line_no}: feature f{k} must be 0/1, got {cell!r}")
                feats.append(int(cell))
            entries.append(
                LexiconEntry(
                    etruscan=normalize(row[0]),
                    english=normalize_english(row[1]),
                    features=tuple(feats),
                )
            )
    suffixes: tuple[str, ...] = ()
    if suffix_path is not None:
        suffixes = load_suffixes(suffix_path)
    return Lexicon(tuple(entries), suffixes)


def load_suffixes(path) -> tuple[str, ...]:
    """Read one normalized suffix per line, ignoring blanks; order preserved."""
    out: list[str] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            suffix = normalize(line.strip())
            if suffix and suffix not in seen:
                out.append(suffix)
                seen.add(suffix)
    return tuple(out)


def split_corpus(
    corpus: ParallelCorpus, train_fraction: float, seed: int
) -> tuple[ParallelCorpus, ParallelCorpus]:
    """Deterministic shuffle split: floor(n * train_fraction) items to train.

    The corpus must already be restricted to translated items; the same seed
    always yields the same split.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    untranslated = [i.id for i in corpus if not i.english]
    if untranslated:
        raise DataError(
            f"split_corpus requires translated items only; {len(untranslated)} lack a translation "
            f"(first: {untranslated[0]!r})"
        )
    if len(corpus) < 2:
        raise DataError(f"cannot split a corpus of {len(corpus)} translated items")
    order = list(corpus.items)
    random.Random(seed).shuffle(order)
    # epsilon keeps floor() honest when n * fraction is an exact integer in
    # real arithmetic but lands a hair under it in floating point
    n_train = int(len(order) * train_fraction + 1e-9)
    train = ParallelCorpus(tuple(order[:n_train]), name=f"{corpus.name}/train")
    test = ParallelCorpus(tuple(order[n_train:]), name=f"{corpus.name}/test")
    return train, test
