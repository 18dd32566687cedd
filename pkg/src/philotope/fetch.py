"""Best-effort downloader for the public Golden Age sonnet dataset.

The upstream repository ships one TEI-XML file per sonnet under a
directory per author.  This helper downloads the archive, matches author
directories to the requested poet ids, extracts the verse lines
(``<l>`` elements) and writes the plain-text layout the loader expects:
``<dest>/<poet>/<name>.txt``, one verse per line.
"""

from __future__ import annotations

import html
import io
import re
import unicodedata
import urllib.request
import zipfile
from pathlib import Path

from .corpus import CorpusError

_LINE = re.compile(r"<l\b[^>]*>(.*?)</l>", re.DOTALL)
_TAG = re.compile(r"<[^>]+>")


def _norm(text: str) -> str:
    text = unicodedata.normalize("NFD", text.lower())
    return "".join(c for c in text if not unicodedata.combining(c))


def _match_poet(poets: list[str], dirname: str) -> str | None:
    name = _norm(dirname)
    for poet in poets:
        if _norm(poet) in name:
            return poet
    return None


def extract_verses(xml_text: str) -> list[str]:
    verses = []
    for match in _LINE.finditer(xml_text):
        line = html.unescape(_TAG.sub("", match.group(1))).strip()
        if line:
            verses.append(" ".join(line.split()))
    return verses


def fetch_corpus(url: str, dest: Path, poets: list[str]) -> dict[str, int]:
    """Download and convert; returns sonnet counts per poet."""
    with urllib.request.urlopen(url) as resp:
        payload = resp.read()
    counts = {poet: 0 for poet in poets}
    with zipfile.ZipFile(io.BytesIO(payload)) as archive:
        for info in archive.infolist():
            parts = Path(info.filename).parts
            if len(parts) < 2 or info.is_dir():
                continue
            poet = _match_poet(poets, parts[-2])
            if poet is None:
                continue
            raw = archive.read(info).decode("utf-8", errors="replace")
            stem = Path(info.filename).stem
            if info.filename.endswith(".xml"):
                verses = extract_verses(raw)
            elif info.filename.endswith(".txt"):
                verses = [ln.strip() for ln in raw.splitlines() if ln.strip()]
            else:
                continue
            if not verses:
                continue
            poet_dir = dest / poet
            poet_dir.mkdir(parents=True, exist_ok=True)
            (poet_dir / f"{stem}.txt").write_text(
                "\n".join(verses) + "\n", encoding="utf-8")
            counts[poet] += 1
    missing = [p for p, n in counts.items() if n == 0]
    if missing:
        raise CorpusError(f"no sonnets found for poets: {missing}")
    return counts
