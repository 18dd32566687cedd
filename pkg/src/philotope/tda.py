"""Vietoris-Rips filtrations and persistent homology over Z_2.

Simplices are tuples of strictly increasing vertex ids.  A filtration is
a list of (simplex, value) sorted by (value, dimension, vertices); the
tie-break makes pairings deterministic, while diagrams are invariant to
it as multisets.

The generic engine is boundary-matrix reduction (columns as Python int
bitmasks, XOR = Z_2 addition).  Dimension 0, the only one the style
pipeline needs, also has an exact union-find fast path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .embedding import PointCloud, cosine_distance

__all__ = [
    "TdaError", "Filtration", "Pairing", "PersistenceDiagram",
    "distance_matrix", "vietoris_rips", "reduce_filtration",
    "persistence_diagram", "h0_single_linkage",
    "save_diagrams", "load_diagrams",
]

Filtration = list[tuple[tuple[int, ...], float]]


class TdaError(Exception):
    pass


@dataclass
class Pairing:
    pairs: list[tuple[int, int]]     # (birth index, death index)
    essential: list[int]             # unpaired (essential) birth indices


@dataclass
class PersistenceDiagram:
    dim: int
    points: list[tuple[float, float]]   # (birth, death), death may be inf

    def nonzero(self) -> list[tuple[float, float]]:
        """Points with positive persistence (zero-persistence flagged out)."""
        return [(b, d) for b, d in self.points if d > b]

    def persistences(self) -> list[float]:
        return [d - b for b, d in self.points]


def distance_matrix(cloud: PointCloud, metric: str = "cosine") -> np.ndarray:
    """Full symmetric pairwise distance matrix of a point cloud."""
    pts = np.asarray(cloud.points, dtype=float)
    if len(pts) == 0:
        raise TdaError("empty point cloud")
    if metric == "cosine":
        norms = np.linalg.norm(pts, axis=1)
        bad = np.nonzero(norms == 0.0)[0]
        if bad.size:
            raise TdaError(
                f"zero vector under cosine metric: {cloud.labels[bad[0]]!r}")
        unit = pts / norms[:, None]
        dm = 1.0 - unit @ unit.T
        np.clip(dm, 0.0, 2.0, out=dm)
    elif metric == "euclidean":
        diff = pts[:, None, :] - pts[None, :, :]
        dm = np.sqrt((diff * diff).sum(axis=2))
    else:
        raise TdaError(f"unknown metric {metric!r}")
    dm = (dm + dm.T) / 2.0
    np.fill_diagonal(dm, 0.0)
    return dm


def vietoris_rips(dm: np.ndarray, max_dim: int,
                  max_value: float = math.inf) -> Filtration:
    """Clique filtration: a simplex enters at its largest edge value."""
    if max_dim < 0:
        raise TdaError(f"max_dim must be >= 0, got {max_dim}")
    n = dm.shape[0]
    simplices: Filtration = [((i,), 0.0) for i in range(n)]
    if max_dim >= 1:
        # upper-neighbour sets; a clique extension candidate is > all
        # current vertices exactly when it lies in every vertex's set
        nbrs = [set(np.nonzero(dm[i, i + 1:] <= max_value)[0] + i + 1)
                for i in range(n)]
        frontier = []
        for i in range(n):
            for j in sorted(nbrs[i]):
                frontier.append(((i, j), float(dm[i, j])))
        simplices.extend(frontier)
        for _ in range(2, max_dim + 1):
            nxt = []
            for verts, val in frontier:
                cands = set.intersection(*(nbrs[v] for v in verts))
                for c in sorted(cands):
                    value = max(val, max(float(dm[v, c]) for v in verts))
                    nxt.append((verts + (c,), value))
            simplices.extend(nxt)
            frontier = nxt
    simplices.sort(key=lambda sv: (sv[1], len(sv[0]), sv[0]))
    return simplices


def reduce_filtration(filtration: Filtration, clearing: bool = False
                      ) -> Pairing:
    """Standard left-to-right column reduction of the boundary matrix.

    With ``clearing=True`` columns known to be births are skipped
    (processing dimensions high to low); the pairing is identical.
    """
    index = {verts: i for i, (verts, _) in enumerate(filtration)}
    m = len(filtration)

    def boundary(verts: tuple[int, ...]) -> int:
        col = 0
        for k in range(len(verts)):
            face = verts[:k] + verts[k + 1:]
            col |= 1 << index[face]
        return col

    reduced: list[int] = [0] * m
    lows: dict[int, int] = {}   # low row -> column holding it

    if clearing:
        dims = sorted({len(v) - 1 for v, _ in filtration}, reverse=True)
        cleared: set[int] = set()
        order = [j for d in dims for j, (v, _) in enumerate(filtration)
                 if len(v) - 1 == d]
    else:
        cleared = set()
        order = list(range(m))

    for j in order:
        verts, _ = filtration[j]
        if len(verts) == 1 or j in cleared:
            continue
        col = boundary(verts)
        while col:
            low = col.bit_length() - 1
            other = lows.get(low)
            if other is None:
                break
            col ^= reduced[other]
        reduced[j] = col
        if col:
            low = col.bit_length() - 1
            lows[low] = j
            if clearing:
                cleared.add(low)

    paired = set(lows.values()) | set(lows)
    essential = [j for j in range(m) if j not in paired]
    pairs = sorted((low, j) for low, j in lows.items())
    return Pairing(pairs=pairs, essential=essential)


def persistence_diagram(filtration: Filtration, pairing: Pairing,
                        dim: int) -> PersistenceDiagram:
    """Extract the (birth, death) multiset of one homology dimension."""
    points: list[tuple[float, float]] = []
    for b, d in pairing.pairs:
        if len(filtration[b][0]) - 1 == dim:
            points.append((filtration[b][1], filtration[d][1]))
    for j in pairing.essential:
        if len(filtration[j][0]) - 1 == dim:
            points.append((filtration[j][1], math.inf))
    points.sort()
    return PersistenceDiagram(dim=dim, points=points)


class _UnionFind:
    __slots__ = ("parent", "size")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def h0_single_linkage(dm: np.ndarray) -> PersistenceDiagram:
    """Exact H0 diagram via union-find over ascending edges.

    Multiset-identical to the reduction path restricted to dimension 0:
    each merge at edge value w kills a component born at 0.
    """
    n = dm.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    w = dm[iu, ju]
    order = np.lexsort((ju, iu, w))
    uf = _UnionFind(n)
    points: list[tuple[float, float]] = []
    components = n
    for e in order:
        if uf.union(int(iu[e]), int(ju[e])):
            points.append((0.0, float(w[e])))
            components -= 1
            if components == 1:
                break
    points.append((0.0, math.inf))
    points.sort()
    return PersistenceDiagram(dim=0, points=points)


# -- diagram file format -----------------------------------------------------

def save_diagrams(diagrams: list[PersistenceDiagram], path: str | Path,
                  provenance: dict | None = None) -> None:
    """Text format: '# key: value' header, then 'dim birth death' lines."""
    lines = ["# philotope persistence diagram"]
    for key, val in (provenance or {}).items():
        lines.append(f"# {key}: {val}")
    for dgm in diagrams:
        for b, d in dgm.points:
            death = "inf" if math.isinf(d) else f"{d:.17g}"
            lines.append(f"{dgm.dim} {b:.17g} {death}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_diagrams(path: str | Path) -> dict[int, PersistenceDiagram]:
    by_dim: dict[int, list[tuple[float, float]]] = {}
    for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise TdaError(f"{path}:{lineno}: expected 'dim birth death'")
        try:
            dim = int(parts[0])
            birth = float(parts[1])
            death = math.inf if parts[2] == "inf" else float(parts[2])
        except ValueError as exc:
            raise TdaError(f"{path}:{lineno}: {exc}") from exc
        by_dim.setdefault(dim, []).append((birth, death))
    return {dim: PersistenceDiagram(dim=dim, points=sorted(pts))
            for dim, pts in by_dim.items()}
