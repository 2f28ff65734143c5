"""Random 3-regular Max-Cut instances and exact brute-force oracles.

Graphs are simple and undirected; vertices are 0-based integers. Cut
assignments are binary vertex colorings, and the brute-force routines
enumerate all 2^n of them, so they are capped at n = 28.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Hard cap for the exhaustive oracles: 2^28 assignments is already ~30 s
# of chunked numpy work, anything above is not desk scale.
BRUTE_FORCE_MAX_N = 28

_CHUNK_BITS = 22


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph: vertex count + edge list (i, j), i != j."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for (i, j) in self.edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i},{j}) out of range for n={self.n}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for (i, j) in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def is_regular(self, d: int = 3) -> bool:
        return all(x == d for x in self.degrees())


@dataclass(frozen=True)
class CutAssignment:
    """Binary vertex coloring; bits[i] is the color of vertex i."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("assignment bits must be 0 or 1")

    @classmethod
    def from_int(cls, z: int, n: int) -> "CutAssignment":
        return cls(tuple((z >> i) & 1 for i in range(n)))

    def to_int(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))

    def complement(self) -> "CutAssignment":
        return CutAssignment(tuple(1 - b for b in self.bits))


def gen_random_3regular(n: int, seed: int) -> Graph:
    """Sample a random 3-regular simple graph on n vertices.

    Uses the configuration (pairing) model with full rejection: three stubs
    per vertex are shuffled and paired, and the whole pairing is discarded
    whenever it produces a self-loop or a multi-edge. Rejection keeps the
    sample near-uniform over simple 3-regular graphs. Deterministic for a
    fixed seed. Connectivity is not enforced.
    """
    if n < 4 or n % 2 != 0:
        raise ValueError(f"3-regular graphs need even n >= 4, got n={n}")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), 3)
    while True:
        perm = rng.permutation(stubs)
        pairs = perm.reshape(-1, 2)
        edges = set()
        ok = True
        for a, b in pairs:
            i, j = (int(a), int(b)) if a < b else (int(b), int(a))
            if i == j or (i, j) in edges:
                ok = False
                break
            edges.add((i, j))
        if ok:
            return Graph(n, tuple(sorted(edges)))


def cut_value(g: Graph, a: CutAssignment) -> int:
    """Number of edges whose endpoints get different colors under a."""
    if len(a.bits) != g.n:
        raise ValueError(f"assignment length {len(a.bits)} != n={g.n}")
    return sum(1 for (i, j) in g.edges if a.bits[i] != a.bits[j])


def cut_values_table(g: Graph, dtype=np.uint16) -> np.ndarray:
    """Cut value of every basis assignment z in [0, 2^n), vectorized.

    Index z encodes vertex i in bit i (little-endian). Shared by the
    brute-force oracle, the estimator, and the sampling pipeline.
    """
    if g.n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"n={g.n} exceeds brute-force cap {BRUTE_FORCE_MAX_N}")
    z = np.arange(1 << g.n, dtype=np.uint32)
    cuts = np.zeros(1 << g.n, dtype=dtype)
    for (i, j) in g.edges:
        cuts += ((z >> i) ^ (z >> j)) & 1
    return cuts


def brute_force_maxcut(g: Graph) -> tuple[int, list[CutAssignment]]:
    """Exhaustive Max-Cut: (optimal cut size, all optimal assignments).

    The optima list always has even length because flipping every color
    preserves the cut.
    """
    if g.n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"n={g.n} exceeds brute-force cap {BRUTE_FORCE_MAX_N}")
    k_max = 0
    optima: list[int] = []
    total = 1 << g.n
    step = 1 << _CHUNK_BITS
    for start in range(0, total, step):
        z = np.arange(start, min(start + step, total), dtype=np.uint32)
        cuts = np.zeros(len(z), dtype=np.uint16)
        for (i, j) in g.edges:
            cuts += ((z >> i) ^ (z >> j)) & 1
        chunk_max = int(cuts.max())
        if chunk_max > k_max:
            k_max = chunk_max
            optima = []
        if chunk_max == k_max:
            optima.extend(int(v) for v in z[cuts == k_max])
    return k_max, [CutAssignment.from_int(z, g.n) for z in optima]


def write_graph(g: Graph) -> str:
    """Edge-list text: first line "n m", then one "i j" line per edge."""
    lines = [f"{g.n} {g.n_edges}"]
    lines.extend(f"{i} {j}" for (i, j) in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(text: str) -> Graph:
    """Parse the edge-list format written by write_graph."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty graph text")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"malformed header line: {lines[0]!r}")
    n, m = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise ValueError(f"header promises {m} edges, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"malformed edge line: {ln!r}")
        i, j = int(parts[0]), int(parts[1])
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i},{j}) out of range for n={n}")
        edges.append((i, j))
    return Graph(n, tuple(edges))
