"""Corpus ingestion and preprocessing.

A corpus is poets -> sonnets -> verses.  Preprocessing tokenizes each
verse, drops stop-words, and stems what remains, preserving the
poet/sonnet/verse structure so per-poet word sets can be recovered
later.

File layout expected by :func:`load_corpus`::

    <root>/<poet>/<sonnet>.txt      # UTF-8, one verse per line

All functions here are pure: no shared mutable state.
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .stemmer import stem

__all__ = [
    "Corpus", "ProcessedCorpus", "CorpusError",
    "load_corpus", "balance", "tokenize", "remove_stopwords",
    "preprocess", "load_stopwords", "stem",
    "save_processed", "load_processed",
]

log = logging.getLogger(__name__)

# Pinned digest of the bundled stop-word file (315 entries); preprocessing
# results are only reproducible if this exact list is used.
STOPWORDS_SHA256 = (
    "d1359f5c8ae762774b1fdf770bc756333b8d1b41bc7b84439eba9764afaa4e68")


class CorpusError(Exception):
    """Raised for unusable corpus input (missing poets, bad encoding...)."""


@dataclass(frozen=True)
class Corpus:
    """Raw verses grouped by poet and sonnet."""

    poets: tuple[str, ...]
    # poet -> sonnets -> verses (raw text lines)
    sonnets: dict[str, list[list[str]]] = field(compare=False)

    def __post_init__(self):
        if len(set(self.poets)) != len(self.poets):
            raise CorpusError("duplicate poet identifiers")
        for poet in self.poets:
            if not self.sonnets.get(poet):
                raise CorpusError(f"poet {poet!r} has no sonnets")

    def sonnet_count(self, poet: str) -> int:
        return len(self.sonnets[poet])


@dataclass(frozen=True)
class ProcessedCorpus:
    """Same structure as :class:`Corpus`, verses as token lists."""

    poets: tuple[str, ...]
    # poet -> sonnets -> verses (token lists)
    sonnets: dict[str, list[list[list[str]]]] = field(compare=False)

    def verses(self):
        for poet in self.poets:
            for sonnet in self.sonnets[poet]:
                yield from sonnet

    def tokens(self, poet: str | None = None):
        poets = [poet] if poet is not None else self.poets
        for p in poets:
            for sonnet in self.sonnets[p]:
                for verse in sonnet:
                    yield from verse


_EDGE_PUNCT = re.compile(r"^\W+|\W+$", re.UNICODE)


def tokenize(verse: str) -> list[str]:
    """Lowercase and split a verse, stripping edge punctuation.

    Accents are preserved (the stemmer needs them); empty fragments such
    as lone punctuation marks are dropped.
    """
    verse = unicodedata.normalize("NFC", verse)
    out = []
    for raw in verse.lower().split():
        tok = _EDGE_PUNCT.sub("", raw)
        if tok:
            out.append(tok)
    return out


def remove_stopwords(tokens: list[str], stopwords: set[str]) -> list[str]:
    """Order-preserving stop-word filter."""
    return [t for t in tokens if t not in stopwords]


def load_stopwords(path: str | Path | None = None) -> set[str]:
    """Load a stop-word file (one token per line, '#' comments).

    With no argument the bundled Spanish list is used and its checksum
    is verified against the pinned digest.
    """
    if path is None:
        data = (resources.files("philotope") / "data" / "stopwords_es.txt"
                ).read_bytes()
        digest = hashlib.sha256(data).hexdigest()
        if digest != STOPWORDS_SHA256:
            raise CorpusError(
                f"bundled stop-word list was modified (sha256 {digest})")
    else:
        data = Path(path).read_bytes()
    words = set()
    for line in data.decode("utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return words


def load_corpus(root_path: str | Path, poets: list[str]) -> Corpus:
    """Read one sub-directory of UTF-8 sonnet files per poet.

    Sonnets are ordered by lexicographic filename so the corpus (and
    everything downstream) is deterministic.  Empty files are skipped
    with a warning; a missing poet directory or undecodable file is
    fatal.
    """
    root = Path(root_path)
    if not root.is_dir():
        raise CorpusError(f"corpus root not found: {root}")
    sonnets: dict[str, list[list[str]]] = {}
    for poet in poets:
        poet_dir = root / poet
        if not poet_dir.is_dir():
            raise CorpusError(f"no directory for poet {poet!r} under {root}")
        poet_sonnets = []
        for f in sorted(poet_dir.glob("*.txt"), key=lambda p: p.name):
            try:
                text = f.read_text(encoding="utf-8")
            except UnicodeDecodeError as exc:
                raise CorpusError(f"not valid UTF-8: {f}") from exc
            verses = [line.strip() for line in text.splitlines()
                      if line.strip()]
            if not verses:
                log.warning("skipping empty sonnet file %s", f)
                continue
            poet_sonnets.append(verses)
        sonnets[poet] = poet_sonnets
    return Corpus(poets=tuple(poets), sonnets=sonnets)


def balance(corpus: Corpus, n: int) -> Corpus:
    """Keep the first ``n`` sonnets of every poet (corpus order)."""
    if n < 1:
        raise CorpusError(f"cannot balance to {n} sonnets per poet")
    for poet in corpus.poets:
        have = corpus.sonnet_count(poet)
        if have < n:
            raise CorpusError(
                f"poet {poet!r} has only {have} sonnets, need {n}")
    return Corpus(
        poets=corpus.poets,
        sonnets={p: corpus.sonnets[p][:n] for p in corpus.poets},
    )


def preprocess(corpus: Corpus, stopwords: set[str]) -> ProcessedCorpus:
    """tokenize -> remove_stopwords -> stem, per verse.

    Stop-words are matched on surface forms, before stemming.
    """
    processed: dict[str, list[list[list[str]]]] = {}
    for poet in corpus.poets:
        processed[poet] = [
            [[stem(t) for t in remove_stopwords(tokenize(v), stopwords)]
             for v in sonnet]
            for sonnet in corpus.sonnets[poet]
        ]
    return ProcessedCorpus(poets=corpus.poets, sonnets=processed)


def save_processed(corpus: ProcessedCorpus, path: str | Path) -> None:
    payload = {"poets": list(corpus.poets), "sonnets": corpus.sonnets}
    Path(path).write_text(
        json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=None,
                   separators=(",", ":")),
        encoding="utf-8")


def load_processed(path: str | Path) -> ProcessedCorpus:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return ProcessedCorpus(poets=tuple(payload["poets"]),
                           sonnets=payload["sonnets"])
