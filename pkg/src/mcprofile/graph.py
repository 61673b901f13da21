"""Randomly colored random bipartite graphs.

Vertices on both sides are ``0..n-1`` and colors are ``0..q-1`` in the Python
API.  The text format (see :func:`serialize`) is 1-based throughout.

Random generation follows a fixed draw order so a seed identifies a graph:

1. a Philox (counter-based, 64-bit) generator is seeded with ``seed``;
2. ``n*n`` uniforms are drawn in row-major order over ``(a, b)``; the pair is
   an edge iff its uniform is ``< p``;
3. one further uniform per edge, again in row-major order, picks the color
   by inverse CDF over the color law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import GraphFormatError, ModelDomainError

__all__ = [
    "ColorLaw",
    "ColoredBipartiteGraph",
    "RandomModelParams",
    "color_subgraph",
    "count_color_edges",
    "default_omega",
    "deserialize",
    "edge_probability",
    "generate",
    "generate_with_p",
    "neighbors_colored",
    "read_graph",
    "serialize",
    "write_graph",
]

_ALPHA_SUM_TOL = 1e-12
# rows of uniforms drawn per chunk is chosen so a chunk stays around 32 MB
_CHUNK_DRAWS = 1 << 22


@dataclass(frozen=True)
class ColorLaw:
    """Probability vector governing i.i.d. edge colors."""

    alphas: tuple[float, ...]

    def __post_init__(self):
        alphas = tuple(float(x) for x in self.alphas)
        object.__setattr__(self, "alphas", alphas)
        if not alphas:
            raise ValueError("color law needs at least one color")
        if any(not (x > 0) or not math.isfinite(x) for x in alphas):
            raise ValueError(f"every color probability must be > 0, got {alphas}")
        if abs(math.fsum(alphas) - 1.0) > _ALPHA_SUM_TOL:
            raise ValueError(f"color probabilities must sum to 1, got {math.fsum(alphas)!r}")

    @classmethod
    def uniform(cls, q: int) -> "ColorLaw":
        if q < 1:
            raise ValueError("q must be >= 1")
        return cls(tuple([1.0 / q] * q))

    @classmethod
    def parse(cls, text: str) -> "ColorLaw":
        """Parse ``"0.5,0.5"``; a trailing entry may be omitted with ``"0.3,*"``."""
        parts = [s.strip() for s in text.split(",") if s.strip()]
        if "*" in parts:
            if parts.count("*") != 1:
                raise ValueError("at most one '*' entry allowed")
            known = math.fsum(float(s) for s in parts if s != "*")
            parts = [repr(1.0 - known) if s == "*" else s for s in parts]
        return cls(tuple(float(s) for s in parts))

    @property
    def q(self) -> int:
        return len(self.alphas)

    @property
    def alpha_min(self) -> float:
        return min(self.alphas)


def default_omega(n: int) -> float:
    """``ln ln n``: grows without bound but is o(log n)."""
    if n < 3:
        raise ModelDomainError("default omega = ln ln n needs n >= 3")
    return math.log(math.log(n))


def edge_probability(n: int, omega: float) -> float:
    """Return ``p = (ln n + omega) / n``; raise if it is not in ``(0, 1]``."""
    if n < 2:
        raise ModelDomainError(f"n must be >= 2, got {n}")
    p = (math.log(n) + omega) / n
    if not (0.0 < p <= 1.0):
        raise ModelDomainError(f"edge probability {p!r} outside (0, 1] for n={n}, omega={omega}")
    return p


@dataclass(frozen=True)
class RandomModelParams:
    n: int
    law: ColorLaw
    omega: float | None = None
    seed: int = 0
    p: float = field(init=False)

    def __post_init__(self):
        omega = default_omega(self.n) if self.omega is None else float(self.omega)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "p", edge_probability(self.n, omega))


class ColoredBipartiteGraph:
    """Simple bipartite graph on ``A = B = range(n)`` with one color per edge.

    ``edges`` is an ``(m, 3)`` integer array of ``(a, b, color)`` rows, kept
    sorted by ``(a, b)``.  Instances are treated as immutable; the adjacency
    views are built lazily and cached.
    """

    def __init__(self, n: int, q: int, edges=None):
        if n < 0:
            raise ValueError("n must be >= 0")
        if q < 1:
            raise ValueError("q must be >= 1")
        self.n = int(n)
        self.q = int(q)
        if edges is None:
            arr = np.empty((0, 3), dtype=np.int64)
        else:
            arr = np.asarray(edges, dtype=np.int64)
            if arr.size == 0:
                arr = np.empty((0, 3), dtype=np.int64)
            if arr.ndim != 2 or arr.shape[1] != 3:
                raise ValueError("edges must be rows of (a, b, color)")
        if len(arr):
            if arr[:, :2].min() < 0 or arr[:, :2].max() >= n:
                raise ValueError(f"vertex index out of range for n={n}")
            if arr[:, 2].min() < 0 or arr[:, 2].max() >= q:
                raise ValueError(f"color index out of range for q={q}")
            order = np.lexsort((arr[:, 1], arr[:, 0]))
            arr = arr[order]
            keys = arr[:, 0] * n + arr[:, 1]
            if np.any(keys[1:] == keys[:-1]):
                raise ValueError("duplicate edge: graph must be simple")
        arr.setflags(write=False)
        self.edges = arr

    @classmethod
    def from_edges(cls, n: int, q: int, edges: Iterable[Sequence[int]]) -> "ColoredBipartiteGraph":
        return cls(n, q, [tuple(e) for e in edges])

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def __eq__(self, other):
        if not isinstance(other, ColoredBipartiteGraph):
            return NotImplemented
        return self.n == other.n and self.q == other.q and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash((self.n, self.q, self.edges.tobytes()))

    def __repr__(self):
        return f"ColoredBipartiteGraph(n={self.n}, q={self.q}, m={self.num_edges})"

    # -- adjacency ---------------------------------------------------------

    @cached_property
    def adjacency(self) -> list[list[int]]:
        """Color-blind neighbors of each A vertex, ascending."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for a, b in self.edges[:, :2].tolist():
            adj[a].append(b)
        return adj

    @cached_property
    def adj_a(self) -> list[list[list[int]]]:
        """``adj_a[c][a]``: B-neighbors of ``a`` joined by color ``c``."""
        adj = [[[] for _ in range(self.n)] for _ in range(self.q)]
        for a, b, c in self.edges.tolist():
            adj[c][a].append(b)
        return adj

    @cached_property
    def adj_b(self) -> list[list[list[int]]]:
        """``adj_b[c][b]``: A-neighbors of ``b`` joined by color ``c``."""
        adj = [[[] for _ in range(self.n)] for _ in range(self.q)]
        for a, b, c in self.edges.tolist():
            adj[c][b].append(a)
        for per_color in adj:
            for lst in per_color:
                lst.sort()
        return adj

    @cached_property
    def _color_lookup(self) -> dict[tuple[int, int], int]:
        return {(a, b): c for a, b, c in self.edges.tolist()}

    def color(self, a: int, b: int) -> int | None:
        """Color of edge ``(a, b)``, or ``None`` if it is not an edge."""
        return self._color_lookup.get((a, b))

    def has_edge(self, a: int, b: int) -> bool:
        return (a, b) in self._color_lookup

    def color_matrix(self, color: int) -> sp.csr_matrix:
        """Sparse 0/1 biadjacency matrix (rows A, columns B) of one color class."""
        self._check_color(color)
        cache = self.__dict__.setdefault("_color_matrices", {})
        if color not in cache:
            sel = self.edges[self.edges[:, 2] == color]
            data = np.ones(len(sel), dtype=np.int64)
            cache[color] = sp.csr_matrix((data, (sel[:, 0], sel[:, 1])), shape=(self.n, self.n))
        return cache[color]

    def color_degrees(self, color: int, side: str = "A") -> np.ndarray:
        mat = self.color_matrix(color)
        axis = 1 if side == "A" else 0
        return np.asarray(mat.sum(axis=axis)).ravel()

    def _check_color(self, color: int) -> None:
        if not (0 <= color < self.q):
            raise ValueError(f"color {color} out of range for q={self.q}")

    def _check_vertices(self, vertices: Iterable[int]) -> list[int]:
        out = [int(v) for v in vertices]
        for v in out:
            if not (0 <= v < self.n):
                raise ValueError(f"vertex {v} out of range for n={self.n}")
        return out


# -- generation ------------------------------------------------------------


def generate_with_p(n: int, p: float, law: ColorLaw, seed: int) -> ColoredBipartiteGraph:
    """Sample ``G_{n,n,p}`` and color it i.i.d. from ``law`` (draw order in module doc)."""
    if n < 1:
        raise ModelDomainError("n must be >= 1")
    if not (0.0 < p <= 1.0):
        raise ModelDomainError(f"edge probability {p!r} outside (0, 1]")
    rng = np.random.Generator(np.random.Philox(seed))
    rows_per_chunk = max(1, _CHUNK_DRAWS // n)
    flat_idx = []
    for start in range(0, n, rows_per_chunk):
        rows = min(rows_per_chunk, n - start)
        u = rng.random(rows * n)
        flat_idx.append(np.flatnonzero(u < p) + start * n)
    idx = np.concatenate(flat_idx) if flat_idx else np.empty(0, dtype=np.int64)
    v = rng.random(len(idx))
    cdf = np.cumsum(law.alphas)
    colors = np.minimum(np.searchsorted(cdf, v, side="right"), law.q - 1)
    edges = np.column_stack([idx // n, idx % n, colors]).astype(np.int64)
    return ColoredBipartiteGraph(n, law.q, edges)


def generate(params: RandomModelParams) -> ColoredBipartiteGraph:
    return generate_with_p(params.n, params.p, params.law, params.seed)


# -- queries ---------------------------------------------------------------


def count_color_edges(G: ColoredBipartiteGraph, S: Iterable[int], T: Iterable[int], color: int) -> int:
    """Number of edges of ``color`` between ``S`` (A side) and ``T`` (B side)."""
    G._check_color(color)
    S = G._check_vertices(S)
    T = set(G._check_vertices(T))
    if not S or not T:
        return 0
    adj = G.adj_a[color]
    return sum(1 for a in set(S) for b in adj[a] if b in T)


def neighbors_colored(G: ColoredBipartiteGraph, S: Iterable[int], color: int, side: str = "A") -> set[int]:
    """``N_color(S)``: vertices on the opposite side joined to ``S`` by ``color``.

    ``side`` names the side ``S`` lives on.
    """
    G._check_color(color)
    if side not in ("A", "B"):
        raise ValueError("side must be 'A' or 'B'")
    adj = G.adj_a[color] if side == "A" else G.adj_b[color]
    out: set[int] = set()
    for v in G._check_vertices(S):
        out.update(adj[v])
    return out


def color_subgraph(G: ColoredBipartiteGraph, color: int) -> ColoredBipartiteGraph:
    """Same vertex sides, only the edges of one color (colors keep their index)."""
    G._check_color(color)
    return ColoredBipartiteGraph(G.n, G.q, G.edges[G.edges[:, 2] == color])


# -- text format -----------------------------------------------------------


def serialize(G: ColoredBipartiteGraph) -> str:
    lines = [f"{G.n} {G.q}"]
    lines.extend(f"{a + 1} {b + 1} {c + 1}" for a, b, c in G.edges.tolist())
    return "\n".join(lines) + "\n"


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def deserialize(text: str | bytes) -> ColoredBipartiteGraph:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    header = None
    edges = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        fields = line.split()
        try:
            values = [int(x) for x in fields]
        except ValueError:
            raise GraphFormatError(f"non-integer field in {raw!r}", lineno) from None
        if header is None:
            if len(values) != 2 or values[0] < 0 or values[1] < 1:
                raise GraphFormatError("header must be 'n q' with n >= 0, q >= 1", lineno)
            header = values
            n, q = values
            continue
        if len(values) != 3:
            raise GraphFormatError("edge line must be 'a b c'", lineno)
        a, b, c = values
        if not (1 <= a <= n and 1 <= b <= n):
            raise GraphFormatError(f"vertex out of range 1..{n}", lineno)
        if not (1 <= c <= q):
            raise GraphFormatError(f"color {c} out of range 1..{q}", lineno)
        if (a, b) in seen:
            raise GraphFormatError(f"duplicate edge ({a}, {b}), first on line {seen[(a, b)]}", lineno)
        seen[(a, b)] = lineno
        edges.append((a - 1, b - 1, c - 1))
    if header is None:
        raise GraphFormatError("missing 'n q' header", 1)
    return ColoredBipartiteGraph(header[0], header[1], edges)


def write_graph(G: ColoredBipartiteGraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize(G))


def read_graph(path) -> ColoredBipartiteGraph:
    with open(path, "rb") as fh:
        return deserialize(fh.read())
