"""Maximum matchings and color profiles."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Mapping

from .errors import GraphFormatError, MatchingError
from .graph import ColoredBipartiteGraph

__all__ = [
    "Matching",
    "is_perfect",
    "maximum_matching",
    "parse_matching",
    "profile",
    "format_matching",
    "validate_matching",
]

UNMATCHED = -1


class Matching:
    """Partial injection ``A -> B`` stored as two mate arrays.

    ``mate_a[a]`` is the B vertex matched to ``a`` (``-1`` if none) and
    ``mate_b`` is its inverse.  Instances are not mutated after construction.
    """

    __slots__ = ("n", "mate_a", "mate_b")

    def __init__(self, n: int, pairs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        if isinstance(pairs, Mapping):
            pairs = pairs.items()
        mate_a = [UNMATCHED] * n
        mate_b = [UNMATCHED] * n
        for a, b in pairs:
            a, b = int(a), int(b)
            if not (0 <= a < n and 0 <= b < n):
                raise MatchingError(f"pair ({a}, {b}) out of range for n={n}")
            if mate_a[a] != UNMATCHED:
                raise MatchingError(f"A vertex {a} matched twice")
            if mate_b[b] != UNMATCHED:
                raise MatchingError(f"B vertex {b} matched twice")
            mate_a[a] = b
            mate_b[b] = a
        self.n = n
        self.mate_a = mate_a
        self.mate_b = mate_b

    @classmethod
    def _from_mates(cls, mate_a: list[int], mate_b: list[int]) -> "Matching":
        m = cls.__new__(cls)
        m.n = len(mate_a)
        m.mate_a = mate_a
        m.mate_b = mate_b
        return m

    @property
    def size(self) -> int:
        return sum(1 for b in self.mate_a if b != UNMATCHED)

    def __len__(self) -> int:
        return self.size

    def pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a, b in enumerate(self.mate_a) if b != UNMATCHED]

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs())

    def __eq__(self, other):
        if not isinstance(other, Matching):
            return NotImplemented
        return self.n == other.n and self.mate_a == other.mate_a

    def __hash__(self):
        return hash((self.n, tuple(self.mate_a)))

    def __repr__(self):
        return f"Matching(n={self.n}, size={self.size})"


def validate_matching(G: ColoredBipartiteGraph, M: Matching) -> None:
    """Raise :class:`MatchingError` unless ``M`` is a matching of ``G``."""
    if M.n != G.n:
        raise MatchingError(f"matching is on n={M.n}, graph has n={G.n}")
    for a, b in enumerate(M.mate_a):
        if b == UNMATCHED:
            continue
        if M.mate_b[b] != a:
            raise MatchingError(f"mate arrays disagree at ({a}, {b})")
        if not G.has_edge(a, b):
            raise MatchingError(f"pair ({a}, {b}) is not an edge of the graph")
    if sum(1 for a in M.mate_b if a != UNMATCHED) != M.size:
        raise MatchingError("mate arrays have different sizes")


def maximum_matching(G: ColoredBipartiteGraph) -> Matching:
    """Hopcroft-Karp maximum-cardinality matching, O(|E| sqrt(n)).

    Free A vertices are scanned in ascending order and neighbors in canonical
    edge order, so the result depends only on the graph.
    """
    n = G.n
    adj = G.adjacency
    mate_a = [UNMATCHED] * n
    mate_b = [UNMATCHED] * n
    inf = n + 1
    dist = [inf] * n

    def bfs() -> bool:
        queue = deque()
        for a in range(n):
            if mate_a[a] == UNMATCHED:
                dist[a] = 0
                queue.append(a)
            else:
                dist[a] = inf
        found = inf
        while queue:
            a = queue.popleft()
            if dist[a] >= found:
                continue
            for b in adj[a]:
                a2 = mate_b[b]
                if a2 == UNMATCHED:
                    if found == inf:
                        found = dist[a] + 1
                elif dist[a2] == inf:
                    dist[a2] = dist[a] + 1
                    queue.append(a2)
        return found != inf

    def dfs(root: int) -> bool:
        # iterative layered DFS; avoids recursion limits on long augmenting paths
        stack = [(root, 0)]
        path = []
        while stack:
            a, i = stack[-1]
            nbrs = adj[a]
            advanced = False
            while i < len(nbrs):
                b = nbrs[i]
                i += 1
                a2 = mate_b[b]
                if a2 == UNMATCHED:
                    stack[-1] = (a, i)
                    path.append((a, b))
                    for pa, pb in path:
                        mate_a[pa] = pb
                        mate_b[pb] = pa
                    return True
                if dist[a2] == dist[a] + 1:
                    stack[-1] = (a, i)
                    path.append((a, b))
                    stack.append((a2, 0))
                    advanced = True
                    break
            if not advanced:
                dist[a] = inf
                stack.pop()
                if path:
                    path.pop()
        return False

    while bfs():
        for a in range(n):
            if mate_a[a] == UNMATCHED:
                dfs(a)
    return Matching._from_mates(mate_a, mate_b)


def profile(G: ColoredBipartiteGraph, M: Matching) -> tuple[int, ...]:
    """Color profile: number of matching edges of each color."""
    counts = [0] * G.q
    color = G.color
    for a, b in enumerate(M.mate_a):
        if b == UNMATCHED:
            continue
        c = color(a, b)
        if c is None:
            raise MatchingError(f"pair ({a}, {b}) is not an edge of the graph")
        counts[c] += 1
    return tuple(counts)


def is_perfect(G: ColoredBipartiteGraph, M: Matching) -> bool:
    return M.n == G.n and M.size == G.n


# -- text format: one "a b" line per pair, 1-based ---------------------------


def format_matching(M: Matching) -> str:
    return "".join(f"{a + 1} {b + 1}\n" for a, b in M.pairs())


def parse_matching(text: str | bytes, n: int) -> Matching:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise GraphFormatError("matching line must be 'a b'", lineno)
        try:
            a, b = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphFormatError(f"non-integer field in {raw!r}", lineno) from None
        if not (1 <= a <= n and 1 <= b <= n):
            raise GraphFormatError(f"vertex out of range 1..{n}", lineno)
        pairs.append((a - 1, b - 1))
    try:
        return Matching(n, pairs)
    except MatchingError as exc:
        raise GraphFormatError(str(exc)) from None
