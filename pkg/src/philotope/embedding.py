"""Skipgram (SGNS) word embeddings over a processed corpus.

Training is deliberately single-threaded and driven by a counter-based
RNG so a (corpus, hyperparameters, seed) triple always yields the same
matrix bit for bit.  The hot per-pair update lives in a kernel selected
at import time (compiled extension, or pure Python as fallback); see
philotope._kernels.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator

import numpy as np

from ._kernels import KERNEL_NAME, train_epoch
from .corpus import ProcessedCorpus

__all__ = [
    "Vocabulary", "EmbeddingMatrix", "PointCloud",
    "EmbeddingError", "TrainingDiverged",
    "build_vocabulary", "training_pairs", "train_skipgram", "embed_poet",
    "cosine_distance", "sgns_pair_loss", "sgns_pair_grads",
    "save_embedding", "load_embedding",
]

_MAGIC = b"PHTEMB01"
_MASK = (1 << 64) - 1

DEFAULT_DIM = 150
DEFAULT_EPOCHS = 250
DEFAULT_WINDOW = 10
DEFAULT_NEGATIVES = 5
DEFAULT_LR = (0.025, 1e-4)


class EmbeddingError(Exception):
    pass


class TrainingDiverged(EmbeddingError):
    """NaN/Inf appeared in the parameters during training."""


@dataclass
class Vocabulary:
    words: list[str]                 # id -> word, ids by descending count
    index: dict[str, int]            # word -> id
    counts: dict[str, int]

    def __len__(self) -> int:
        return len(self.words)


@dataclass
class EmbeddingMatrix:
    input_vectors: np.ndarray        # N x d, the embedding E
    output_vectors: np.ndarray | None  # context vectors; dropped on save
    dim: int
    vocab: Vocabulary
    meta: dict = field(default_factory=dict)

    def vector(self, word: str) -> np.ndarray:
        return self.input_vectors[self.vocab.index[word]]


@dataclass
class PointCloud:
    points: np.ndarray               # m x d
    labels: list[str]                # parallel to points, no duplicates

    def __len__(self) -> int:
        return len(self.labels)


def build_vocabulary(corpus: ProcessedCorpus) -> Vocabulary:
    """Count distinct tokens; ids by descending count, ties lexicographic."""
    counts: dict[str, int] = {}
    for tok in corpus.tokens():
        counts[tok] = counts.get(tok, 0) + 1
    if not counts:
        raise EmbeddingError("corpus has no tokens")
    words = sorted(counts, key=lambda w: (-counts[w], w))
    return Vocabulary(words=words,
                      index={w: i for i, w in enumerate(words)},
                      counts=counts)


def training_pairs(corpus: ProcessedCorpus, vocab: Vocabulary,
                   window: int) -> Iterator[tuple[int, int]]:
    """Yield (center_id, context_id) pairs.

    Verses of one sonnet are concatenated; windows never cross sonnet
    boundaries.
    """
    if window < 1:
        raise EmbeddingError(f"window must be >= 1, got {window}")
    index = vocab.index
    for poet in corpus.poets:
        for sonnet in corpus.sonnets[poet]:
            ids = [index[t] for verse in sonnet for t in verse]
            n = len(ids)
            for t in range(n):
                lo = max(0, t - window)
                hi = min(n, t + window + 1)
                for j in range(lo, hi):
                    if j != t:
                        yield ids[t], ids[j]


def _unigram_table(vocab: Vocabulary, size: int = 1_000_000,
                   power: float = 0.75) -> np.ndarray:
    """Sampling table for the unigram distribution raised to ``power``."""
    weights = np.array([vocab.counts[w] for w in vocab.words], dtype=float)
    weights = weights ** power
    cum = np.cumsum(weights) / weights.sum()
    grid = (np.arange(size) + 0.5) / size
    return np.searchsorted(cum, grid).astype(np.int64)


def train_skipgram(corpus: ProcessedCorpus, *,
                   dim: int = DEFAULT_DIM,
                   epochs: int = DEFAULT_EPOCHS,
                   window: int = DEFAULT_WINDOW,
                   negatives: int = DEFAULT_NEGATIVES,
                   lr: tuple[float, float] = DEFAULT_LR,
                   seed: int = 0,
                   on_epoch: Callable[[int, np.ndarray], None] | None = None,
                   ) -> EmbeddingMatrix:
    """Train SGNS and return the input vectors as the embedding.

    ``on_epoch(epoch, input_vectors)`` is called after every epoch with a
    read-only view (used for convergence checks).
    """
    if dim < 1:
        raise EmbeddingError(f"dim must be >= 1, got {dim}")
    vocab = build_vocabulary(corpus)
    if len(vocab) < 2:
        raise EmbeddingError("vocabulary must contain at least 2 words")

    pairs = list(training_pairs(corpus, vocab, window))
    if not pairs:
        raise EmbeddingError("corpus yields no training pairs")
    centers = np.array([p[0] for p in pairs], dtype=np.int64)
    contexts = np.array([p[1] for p in pairs], dtype=np.int64)
    table = _unigram_table(vocab)

    rng = np.random.default_rng(seed)
    inp = (rng.random((len(vocab), dim)) - 0.5) / dim
    out = np.zeros((len(vocab), dim))
    state = (seed ^ 0xD1B54A32D192ED03) & _MASK

    lr_start, lr_min = lr
    total = epochs * len(pairs)
    done = 0
    for epoch in range(epochs):
        state = train_epoch(inp, out, centers, contexts, table, negatives,
                            lr_start, lr_min, total, done, state)
        done += len(pairs)
        if not (np.isfinite(inp).all() and np.isfinite(out).all()):
            raise TrainingDiverged(
                f"non-finite parameters after epoch {epoch} "
                f"(pairs {done - len(pairs)}..{done}, seed {seed})")
        if on_epoch is not None:
            view = inp.view()
            view.flags.writeable = False
            on_epoch(epoch, view)

    meta = {"dim": dim, "epochs": epochs, "window": window,
            "negatives": negatives, "lr_start": lr_start, "lr_min": lr_min,
            "seed": seed, "kernel": KERNEL_NAME}
    return EmbeddingMatrix(input_vectors=inp, output_vectors=out,
                           dim=dim, vocab=vocab, meta=meta)


def embed_poet(corpus: ProcessedCorpus, poet: str,
               emb: EmbeddingMatrix) -> PointCloud:
    """One point per distinct token the poet uses (set semantics)."""
    seen = set(corpus.tokens(poet))
    if not seen:
        raise EmbeddingError(f"poet {poet!r} has no tokens")
    missing = seen - emb.vocab.index.keys()
    if missing:
        raise EmbeddingError(
            f"tokens of poet {poet!r} missing from vocabulary: "
            f"{sorted(missing)[:5]}...")
    labels = sorted(seen, key=emb.vocab.index.__getitem__)
    ids = [emb.vocab.index[w] for w in labels]
    return PointCloud(points=emb.input_vectors[ids].copy(), labels=labels)


def cosine_distance(u: np.ndarray, v: np.ndarray) -> float:
    """1 - cos(angle(u, v)), in [0, 2]."""
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine distance undefined for zero vectors")
    d = 1.0 - float(np.dot(u, v)) / (nu * nv)
    return min(2.0, max(0.0, d))


# -- reference loss/gradient (the quantity the kernels ascend) ---------------

def _log_sigmoid(x: float) -> float:
    if x >= 0.0:
        return -np.log1p(np.exp(-x))
    return x - np.log1p(np.exp(x))


def sgns_pair_loss(v: np.ndarray, u_ctx: np.ndarray,
                   u_negs: np.ndarray) -> float:
    """Negative log-likelihood of one (center, context) pair."""
    loss = -_log_sigmoid(float(v @ u_ctx))
    for u_n in u_negs:
        loss -= _log_sigmoid(-float(v @ u_n))
    return loss


def sgns_pair_grads(v: np.ndarray, u_ctx: np.ndarray, u_negs: np.ndarray
                    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Analytic gradients of :func:`sgns_pair_loss` w.r.t. all inputs."""
    def sigmoid(x):
        return 1.0 / (1.0 + np.exp(-x)) if x >= 0 else \
            np.exp(x) / (1.0 + np.exp(x))

    s_pos = sigmoid(float(v @ u_ctx))
    gv = -(1.0 - s_pos) * u_ctx
    gu_ctx = -(1.0 - s_pos) * v
    gu_negs = np.empty_like(u_negs)
    for i, u_n in enumerate(u_negs):
        s = sigmoid(float(v @ u_n))
        gv = gv + s * u_n
        gu_negs[i] = s * v
    return gv, gu_ctx, gu_negs


# -- point cloud file format -------------------------------------------------

def save_cloud(cloud: PointCloud, path: str | Path,
               provenance: dict | None = None) -> None:
    """Text format: '# key: value' header, then 'label x1 x2 ...' lines."""
    lines = ["# philotope point cloud"]
    for key, val in (provenance or {}).items():
        lines.append(f"# {key}: {val}")
    for label, point in zip(cloud.labels, cloud.points):
        coords = " ".join(f"{x:.17g}" for x in point)
        lines.append(f"{label} {coords}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_cloud(path: str | Path) -> PointCloud:
    labels: list[str] = []
    rows: list[list[float]] = []
    for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise EmbeddingError(f"{path}:{lineno}: expected label + coords")
        try:
            rows.append([float(x) for x in parts[1:]])
        except ValueError as exc:
            raise EmbeddingError(f"{path}:{lineno}: {exc}") from exc
        labels.append(parts[0])
    if not rows:
        raise EmbeddingError(f"{path}: empty point cloud")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise EmbeddingError(f"{path}: inconsistent coordinate counts")
    return PointCloud(points=np.array(rows), labels=labels)


# -- checkpoint format -------------------------------------------------------

def save_embedding(emb: EmbeddingMatrix, path: str | Path) -> None:
    """Binary checkpoint: magic, JSON header, row-major LE float64 rows.

    Context vectors are not persisted.  A sidecar ``<path>.vocab.json``
    holds the word <-> id map.
    """
    path = Path(path)
    header = dict(emb.meta)
    header["n"] = len(emb.vocab)
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    data = np.ascontiguousarray(emb.input_vectors, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        fh.write(data.tobytes())
    sidecar = {"words": emb.vocab.words,
               "counts": [emb.vocab.counts[w] for w in emb.vocab.words]}
    Path(str(path) + ".vocab.json").write_text(
        json.dumps(sidecar, ensure_ascii=False), encoding="utf-8")


def load_embedding(path: str | Path) -> EmbeddingMatrix:
    path = Path(path)
    raw = path.read_bytes()
    if raw[:8] != _MAGIC:
        raise EmbeddingError(f"not an embedding checkpoint: {path}")
    (hlen,) = struct.unpack("<I", raw[8:12])
    header = json.loads(raw[12:12 + hlen].decode("utf-8"))
    n, dim = header["n"], header["dim"]
    vecs = np.frombuffer(raw[12 + hlen:], dtype="<f8", count=n * dim)
    vecs = vecs.reshape(n, dim).copy()
    sidecar = json.loads(Path(str(path) + ".vocab.json")
                         .read_text(encoding="utf-8"))
    words = sidecar["words"]
    vocab = Vocabulary(words=words,
                       index={w: i for i, w in enumerate(words)},
                       counts=dict(zip(words, sidecar["counts"])))
    return EmbeddingMatrix(input_vectors=vecs, output_vectors=None,
                           dim=dim, vocab=vocab, meta=header)
