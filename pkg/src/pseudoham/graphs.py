"""Undirected simple graphs with packed bit-row adjacency.

Vertices are integers 0..n-1.  Each row of the adjacency matrix is stored as a
Python int used as a bitset, which keeps neighbourhood intersections (common
neighbour counts, K_{2,s} detection) cheap at the sizes we care about.  Graphs
are immutable after construction.
"""

from __future__ import annotations

import json
import math
from collections import deque
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

MAX_VERTICES = 20000


class EdgeListError(ValueError):
    """Raised for malformed edge-list files; message carries the line number."""


class DegreeProfile:
    """Minimum, average (exact rational) and maximum degree of a graph."""

    def __init__(self, delta: int, dbar: Fraction, Delta: int):
        self.delta = delta
        self.dbar = dbar
        self.Delta = Delta

    def __repr__(self):
        return f"DegreeProfile(delta={self.delta}, dbar={self.dbar}, Delta={self.Delta})"

    def to_dict(self):
        return {"delta": self.delta, "dbar": float(self.dbar), "Delta": self.Delta}


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1.

    ``bipartition`` is an optional 0/1 side assignment per vertex; it is
    metadata (constructions record it, spectral code exploits it) and is
    validated against the edge set when present.  ``labels`` optionally maps
    vertex indices to human-readable strings (point/line coordinates etc.).
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]],
                 bipartition: Optional[Sequence[int]] = None,
                 labels: Optional[dict[int, str]] = None):
        if not 0 <= n <= MAX_VERTICES:
            raise ValueError(f"vertex count {n} outside supported range [0, {MAX_VERTICES}]")
        rows = [0] * n
        m = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) has endpoint outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"loop ({u},{v}) not allowed")
            if rows[u] >> v & 1:
                raise ValueError(f"duplicate edge ({u},{v})")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
            m += 1
        self.n = n
        self.m = m
        self._rows = rows
        if bipartition is not None:
            bipartition = list(bipartition)
            if len(bipartition) != n or any(s not in (0, 1) for s in bipartition):
                raise ValueError("bipartition must assign side 0 or 1 to every vertex")
            for u in range(n):
                for v in self.neighbors(u):
                    if bipartition[u] == bipartition[v]:
                        raise ValueError(f"edge ({u},{v}) inside one side of the bipartition")
        self.bipartition = bipartition
        self.labels = dict(labels) if labels else None

    # -- basic queries ------------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._rows[u] >> v & 1)

    def neighbors(self, u: int):
        row = self._rows[u]
        while row:
            low = row & -row
            yield low.bit_length() - 1
            row ^= low

    def neighbor_mask(self, u: int) -> int:
        return self._rows[u]

    def degree(self, u: int) -> int:
        return self._rows[u].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self._rows]

    def edges(self):
        for u in range(self.n):
            for v in self.neighbors(u):
                if u < v:
                    yield (u, v)

    def degree_profile(self) -> DegreeProfile:
        degs = self.degrees()
        return DegreeProfile(min(degs), Fraction(2 * self.m, self.n), max(degs))

    def sides(self) -> tuple[list[int], list[int]]:
        if self.bipartition is None:
            raise ValueError("graph has no recorded bipartition")
        x = [v for v in range(self.n) if self.bipartition[v] == 0]
        y = [v for v in range(self.n) if self.bipartition[v] == 1]
        return x, y

    def adjacency_matrix(self, dtype=None):
        import numpy as np

        a = np.zeros((self.n, self.n), dtype=dtype or np.float64)
        for u in range(self.n):
            for v in self.neighbors(u):
                a[u, v] = 1
        return a

    def __repr__(self):
        bip = ", bipartite" if self.bipartition is not None else ""
        return f"Graph(n={self.n}, m={self.m}{bip})"


# -- structural tests -------------------------------------------------------


def girth(g: Graph):
    """Length of a shortest cycle, or math.inf for forests.

    BFS from every vertex; the BFS rooted at a vertex of a shortest cycle
    certifies its length, so the minimum over roots is exact.  Each BFS is
    truncated once it can no longer improve the best cycle found.
    """
    best = math.inf
    dist = [0] * g.n
    for root in range(g.n):
        if best == 3:
            break
        seen = 1 << root
        dist[root] = 0
        queue = deque([(root, -1)])
        while queue:
            u, parent = queue.popleft()
            if 2 * dist[u] >= best:
                break
            for v in g.neighbors(u):
                if v == parent:
                    continue
                if seen >> v & 1:
                    # non-tree edge closes a cycle through the root region
                    best = min(best, dist[u] + dist[v] + 1)
                else:
                    seen |= 1 << v
                    dist[v] = dist[u] + 1
                    queue.append((v, u))
    return best


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = 1 << 0
    stack = [0]
    while stack:
        u = stack.pop()
        fresh = g.neighbor_mask(u) & ~seen
        seen |= fresh
        while fresh:
            low = fresh & -fresh
            stack.append(low.bit_length() - 1)
            fresh ^= low
    return seen == (1 << g.n) - 1


def contains_even_cycle(g: Graph, k: int) -> bool:
    """True iff g has a cycle of length exactly 2k (k >= 2).

    Exhaustive DFS: for each root r we search simple paths inside the set
    of vertices >= r (the root is the cycle's minimum), closing back to r at
    length exactly 2k.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    target = 2 * k
    for root in range(g.n):
        allowed = ~((1 << (root + 1)) - 1)  # vertices > root
        root_mask = g.neighbor_mask(root)
        # stack of (vertex, visited-mask, depth)
        stack = [(root, 1 << root, 0)]
        while stack:
            u, visited, depth = stack.pop()
            if depth == target - 1:
                if root_mask >> u & 1:
                    return True
                continue
            cand = g.neighbor_mask(u) & allowed & ~visited
            while cand:
                low = cand & -cand
                v = low.bit_length() - 1
                stack.append((v, visited | low, depth + 1))
                cand ^= low
    return False


def contains_k2s(g: Graph, s: int):
    """Detect K_{2,s}: a vertex pair with at least s common neighbours.

    Returns (found, witness); witness is ((u, v), [s common neighbours]) or
    None.
    """
    if s < 1:
        raise ValueError("need s >= 1")
    for u in range(g.n):
        ru = g.neighbor_mask(u)
        for v in range(u + 1, g.n):
            common = ru & g.neighbor_mask(v)
            if common.bit_count() >= s:
                picked = []
                while len(picked) < s:
                    low = common & -common
                    picked.append(low.bit_length() - 1)
                    common ^= low
                return True, ((u, v), picked)
    return False, None


def common_neighbor_histogram(g: Graph, v: int) -> dict[int, int]:
    """Histogram {c: #vertices u != v with |N(u) n N(v)| = c}."""
    rv = g.neighbor_mask(v)
    hist: dict[int, int] = {}
    for u in range(g.n):
        if u == v:
            continue
        c = (rv & g.neighbor_mask(u)).bit_count()
        hist[c] = hist.get(c, 0) + 1
    return hist


# -- edge-list files --------------------------------------------------------
#
# Format: header "n m" or "n m bipartite k" (vertices 0..k-1 form side X),
# then m lines "u v", 0-indexed.  Blank lines and lines starting with '#'
# are ignored.  A JSON sidecar "<path>.json" may carry {"labels": {...},
# "bipartition": [...]}; it is written when the header cannot express the
# metadata and loaded automatically when present.


def _prefix_size(bipartition: Sequence[int]) -> Optional[int]:
    """If the bipartition is 0...01...1, return the side-X size, else None."""
    k = sum(1 for s in bipartition if s == 0)
    if list(bipartition) == [0] * k + [1] * (len(bipartition) - k):
        return k
    return None


def write_edge_list(g: Graph, path) -> None:
    path = Path(path)
    header = f"{g.n} {g.m}"
    prefix = None
    if g.bipartition is not None:
        prefix = _prefix_size(g.bipartition)
        if prefix is not None:
            header += f" bipartite {prefix}"
    lines = [header]
    lines += [f"{u} {v}" for u, v in sorted(g.edges())]
    path.write_text("\n".join(lines) + "\n")
    sidecar = {}
    if g.labels:
        sidecar["labels"] = {str(v): lab for v, lab in sorted(g.labels.items())}
    if g.bipartition is not None and prefix is None:
        sidecar["bipartition"] = list(g.bipartition)
    side_path = Path(str(path) + ".json")
    if sidecar:
        side_path.write_text(json.dumps(sidecar, sort_keys=True, indent=1) + "\n")
    elif side_path.exists():
        side_path.unlink()


def read_edge_list(path) -> Graph:
    path = Path(path)
    n = m = None
    bip = None
    edges = []
    edge_set: set[tuple[int, int]] = set()
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if n is None:
                if len(parts) not in (2, 4) or (len(parts) == 4 and parts[2] != "bipartite"):
                    raise EdgeListError(f"{path}:{lineno}: bad header {line!r}")
                try:
                    n, m = int(parts[0]), int(parts[1])
                    if len(parts) == 4:
                        k = int(parts[3])
                        if not 0 <= k <= n:
                            raise ValueError
                        bip = [0] * k + [1] * (n - k)
                except ValueError:
                    raise EdgeListError(f"{path}:{lineno}: bad header {line!r}") from None
                continue
            if len(parts) != 2:
                raise EdgeListError(f"{path}:{lineno}: expected 'u v', got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise EdgeListError(f"{path}:{lineno}: expected 'u v', got {line!r}") from None
            if not (0 <= u < n and 0 <= v < n):
                raise EdgeListError(f"{path}:{lineno}: vertex out of range in {line!r}")
            if u == v:
                raise EdgeListError(f"{path}:{lineno}: loop {line!r} rejected")
            if (u, v) in edge_set or (v, u) in edge_set:
                raise EdgeListError(f"{path}:{lineno}: duplicate edge {line!r}")
            edges.append((u, v))
            edge_set.add((u, v))
    if n is None:
        raise EdgeListError(f"{path}: missing header")
    if len(edges) != m:
        raise EdgeListError(f"{path}: header declares {m} edges, found {len(edges)}")
    labels = None
    side_path = Path(str(path) + ".json")
    if side_path.exists():
        sidecar = json.loads(side_path.read_text())
        if "labels" in sidecar:
            labels = {int(k): v for k, v in sidecar["labels"].items()}
        if "bipartition" in sidecar:
            bip = sidecar["bipartition"]
    return Graph(n, edges, bipartition=bip, labels=labels)
