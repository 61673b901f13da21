"""Unit moves on the color profile of a perfect matching.

A *swap cycle* for colors ``(src, dst)`` is an alternating cycle
``x1 y1 x2 y2 ... xl yl x1`` where ``e_i = {x_i, y_i}`` are matching edges,
``f_i = {y_i, x_{i+1}}`` are non-matching edges, ``e_1`` has color ``src`` and
every other edge of the cycle has color ``dst``.  Exchanging the cycle moves
exactly one unit of the profile from ``src`` to ``dst``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .errors import MatchingError
from .graph import ColoredBipartiteGraph
from .matching import Matching, is_perfect, profile, validate_matching

__all__ = [
    "AlternatingCycle",
    "RecolorFailure",
    "RecolorOutcome",
    "apply_cycle",
    "find_swap_cycle",
    "recolor_to_target",
]


@dataclass(frozen=True)
class AlternatingCycle:
    xs: tuple[int, ...]
    ys: tuple[int, ...]
    src: int
    dst: int

    @property
    def length(self) -> int:
        """Number of matching edges on the cycle (``l``)."""
        return len(self.xs)

    @property
    def matching_edges(self) -> list[tuple[int, int]]:
        return list(zip(self.xs, self.ys))

    @property
    def exchange_edges(self) -> list[tuple[int, int]]:
        """The ``f_i`` edges as ``(a, b)`` pairs: ``(x_{i+1}, y_i)``."""
        l = self.length
        return [(self.xs[(i + 1) % l], self.ys[i]) for i in range(l)]

    def validate(self, G: ColoredBipartiteGraph, M: Matching) -> None:
        """Raise :class:`MatchingError` if this is not a swap cycle for ``(G, M)``."""
        l = self.length
        if l < 2 or len(self.ys) != l:
            raise MatchingError("cycle needs l >= 2 matching edges")
        if len(set(self.xs)) != l or len(set(self.ys)) != l:
            raise MatchingError("cycle vertices must be distinct")
        if self.src == self.dst:
            raise MatchingError("src and dst colors must differ")
        for i, (x, y) in enumerate(self.matching_edges):
            if M.mate_a[x] != y:
                raise MatchingError(f"e_{i + 1} = ({x}, {y}) is not a matching edge")
            want = self.src if i == 0 else self.dst
            if G.color(x, y) != want:
                raise MatchingError(f"e_{i + 1} = ({x}, {y}) has color {G.color(x, y)}, expected {want}")
        for i, (x, y) in enumerate(self.exchange_edges):
            if M.mate_a[x] == y:
                raise MatchingError(f"f_{i + 1} = ({x}, {y}) is a matching edge")
            if G.color(x, y) != self.dst:
                raise MatchingError(f"f_{i + 1} = ({x}, {y}) is not an edge of color {self.dst}")

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "src": self.src + 1,
            "dst": self.dst + 1,
            "x": [x + 1 for x in self.xs],
            "y": [y + 1 for y in self.ys],
        }


def _check_swap_args(G: ColoredBipartiteGraph, M: Matching, src: int, dst: int) -> None:
    G._check_color(src)
    G._check_color(dst)
    if src == dst:
        raise ValueError("src and dst colors must differ")
    validate_matching(G, M)
    if not is_perfect(G, M):
        raise ValueError("swap cycles are defined for perfect matchings only")


def find_swap_cycle(G: ColoredBipartiteGraph, M: Matching, src: int, dst: int) -> AlternatingCycle | None:
    """Shortest swap cycle over all ``src``-colored starting edges, or ``None``.

    Nodes of the search digraph are the ``dst``-colored matching edges,
    identified by their A endpoint; ``(x, y) -> (x', M(x'))`` when ``{y, x'}``
    is a non-matching ``dst`` edge.  A cycle through start ``e_1 = (x1, y1)``
    of length ``l`` is a path ``u ~> v`` of ``l - 2`` arcs where ``u`` is
    entered from ``y1`` and ``v`` leaves into ``x1``.

    All starts are searched breadth-first in lockstep, so the first level at
    which some start closes its cycle gives the global minimum ``l``.  Ties
    go to the smallest ``x1``; the path itself is the first one found by a
    BFS that scans nodes in ascending order.
    """
    _check_swap_args(G, M, src, dst)
    return _shortest_swap_cycle(G, M, src, dst)


def _matching_colors(G: ColoredBipartiteGraph, M: Matching) -> np.ndarray:
    color = G.color
    return np.fromiter((color(a, b) for a, b in enumerate(M.mate_a)), dtype=np.int64, count=G.n)


def _shortest_swap_cycle(G, M, src, dst, mcolor=None):
    n = G.n
    if mcolor is None:
        mcolor = _matching_colors(G, M)
    dst_nodes = np.flatnonzero(mcolor == dst)
    if len(dst_nodes) == 0 or not np.any(mcolor == src):
        return None
    m = len(dst_nodes)
    node_of = np.full(n, -1, dtype=np.int64)
    node_of[dst_nodes] = np.arange(m)
    mate_a = np.asarray(M.mate_a, dtype=np.int64)
    mate_b = np.asarray(M.mate_b, dtype=np.int64)

    edges = G.edges[G.edges[:, 2] == dst]
    a, b = edges[:, 0], edges[:, 1]
    owner = mate_b[b]  # matching edge whose B endpoint is b
    a_col, owner_col = mcolor[a], mcolor[owner]
    # arcs between dst nodes: owner -> a through non-matching edge {b, a}
    sel = (a != owner) & (a_col == dst) & (owner_col == dst)
    arcs = sp.csr_matrix(
        (np.ones(int(sel.sum()), dtype=np.float32), (node_of[owner[sel]], node_of[a[sel]])), shape=(m, m)
    )
    # start x1 = owner (src) enters u = a; v = owner (dst) leaves into start x1 = a (src)
    out_sel = (owner_col == src) & (a_col == dst)
    in_sel = (a_col == src) & (owner_col == dst)
    starts = np.intersect1d(owner[out_sel], a[in_sel])
    if len(starts) == 0:
        return None
    row_of = np.full(n, -1, dtype=np.int64)
    row_of[starts] = np.arange(len(starts))
    k = len(starts)
    outs = np.zeros((k, m), dtype=bool)
    ins = np.zeros((k, m), dtype=bool)
    r = row_of[owner[out_sel]]
    keep = r >= 0
    outs[r[keep], node_of[a[out_sel]][keep]] = True
    r = row_of[a[in_sel]]
    keep = r >= 0
    ins[r[keep], node_of[owner[in_sel]][keep]] = True

    reach = outs.copy()
    frontier = outs
    depth = 0
    while True:
        hits = np.flatnonzero((frontier & ins).any(axis=1))
        if len(hits):
            x1 = int(starts[hits[0]])
            break
        nxt = np.asarray(frontier.astype(np.float32) @ arcs) > 0
        nxt &= ~reach
        if not nxt.any():
            return None
        reach |= nxt
        frontier = nxt
        depth += 1

    # rebuild one shortest path for the chosen start
    row = row_of[x1]
    targets = set(np.flatnonzero(ins[row]).tolist())
    level = np.flatnonzero(outs[row]).tolist()
    parent = {u: -1 for u in level}
    indptr, indices = arcs.indptr, arcs.indices
    end = None
    for _ in range(depth + 1):
        found = [u for u in level if u in targets]
        if found:
            end = found[0]
            break
        nxt_level = []
        for u in level:
            for w in sorted(indices[indptr[u]:indptr[u + 1]].tolist()):
                if w not in parent:
                    parent[w] = u
                    nxt_level.append(w)
        level = nxt_level
    if end is None:  # pragma: no cover - lockstep BFS guarantees a path
        raise AssertionError("path reconstruction failed")
    path = [end]
    while parent[path[-1]] != -1:
        path.append(parent[path[-1]])
    path.reverse()
    xs = [x1] + [int(dst_nodes[u]) for u in path]
    ys = [int(mate_a[x]) for x in xs]
    return AlternatingCycle(tuple(xs), tuple(ys), src, dst)


def apply_cycle(G: ColoredBipartiteGraph, M: Matching, cycle: AlternatingCycle) -> Matching:
    """Return ``M`` with the cycle exchanged (``M`` symmetric-difference ``E(C)``)."""
    cycle.validate(G, M)
    mate_a = list(M.mate_a)
    mate_b = list(M.mate_b)
    for a, b in cycle.exchange_edges:
        mate_a[a] = b
        mate_b[b] = a
    return Matching._from_mates(mate_a, mate_b)


@dataclass
class RecolorFailure:
    src: int
    dst: int
    profile: tuple[int, ...]
    reason: str = "no swap cycle"

    def to_dict(self) -> dict:
        return {"src": self.src + 1, "dst": self.dst + 1, "profile": list(self.profile), "reason": self.reason}


@dataclass
class RecolorOutcome:
    final: Matching
    target: tuple[int, ...]
    steps: list[tuple[int, int, AlternatingCycle]] = field(default_factory=list)
    profile_trajectory: list[tuple[int, ...]] = field(default_factory=list)
    failure: RecolorFailure | None = None

    @property
    def success(self) -> bool:
        return self.failure is None

    def to_dict(self) -> dict:
        return {
            "success": self.success,
            "target": list(self.target),
            "num_steps": len(self.steps),
            "trajectory": [list(p) for p in self.profile_trajectory],
            "steps": [c.to_dict() for _, _, c in self.steps],
            "failure": None if self.failure is None else self.failure.to_dict(),
        }


def recolor_to_target(
    G: ColoredBipartiteGraph, M: Matching, target, max_steps: int | None = None
) -> RecolorOutcome:
    """Walk the profile of ``M`` to ``target`` one swap cycle at a time.

    Each step moves a unit from the most over-subscribed color to the most
    under-subscribed one (ties to the lowest index).  A missing cycle ends the
    walk with a :class:`RecolorFailure` rather than an exception.
    """
    target = tuple(int(x) for x in target)
    if len(target) != G.q:
        raise ValueError(f"target must have {G.q} entries, got {len(target)}")
    if any(x < 0 for x in target) or sum(target) != G.n:
        raise ValueError(f"target {target} must be nonnegative and sum to n={G.n}")
    validate_matching(G, M)
    if not is_perfect(G, M):
        raise ValueError("recoloring starts from a perfect matching")

    mu = list(profile(G, M))
    outcome = RecolorOutcome(final=M, target=target, profile_trajectory=[tuple(mu)])
    if max_steps is None:
        max_steps = sum(max(a - b, 0) for a, b in zip(mu, target))
    while tuple(mu) != target:
        surplus = [a - b for a, b in zip(mu, target)]
        src = max(range(G.q), key=lambda i: (surplus[i], -i))
        dst = min(range(G.q), key=lambda i: (surplus[i], i))
        if len(outcome.steps) >= max_steps:
            outcome.failure = RecolorFailure(src, dst, tuple(mu), "step budget exhausted")
            break
        cycle = _shortest_swap_cycle(G, outcome.final, src, dst)
        if cycle is None:
            outcome.failure = RecolorFailure(src, dst, tuple(mu))
            break
        outcome.final = apply_cycle(G, outcome.final, cycle)
        mu[src] -= 1
        mu[dst] += 1
        outcome.steps.append((src, dst, cycle))
        outcome.profile_trajectory.append(tuple(mu))
    return outcome
