"""Layered expansion around a matching edge, as a read-only diagnostic.

Given a perfect matching ``M`` with color classes ``A_src, A_dst`` (A
endpoints of matching edges of each color) this builds

* ``D0'``: vertices of ``A_dst`` with at least ``alpha*beta*ln n/10``
  ``dst``-neighbors in ``B_dst``;
* ``D0``: vertices of ``A_src`` with at most ``k0 = 10 ln n/ln ln n``
  ``dst``-neighbors in ``M(A_dst minus D0')``;
* the absorbing sequence ``W_0 = A_src minus D0``, growing by the lowest
  vertex ``a`` of ``A_dst`` with ``|N_dst(a) & M(W_j)| >= k0`` until none is left;
* ``R0 = A_dst minus W_t*``;
* layers ``X_0 = {a0}``, ``Y_i = N_dst(X_i)``,
  ``X_{i+1} = (M^-1(Y_i) minus X_0..X_i) & R0`` until a layer reaches
  ``alpha*beta*n/5000`` or the growth stalls;

and the mirror image of all of it on the B side starting from ``b0 = M(a0)``.
Thresholds are compared as reals; nothing is rounded.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from .graph import ColoredBipartiteGraph
from .matching import Matching, is_perfect, profile, validate_matching

__all__ = ["ExpansionTrace", "SideTrace", "expansion_trace", "trace_constants"]


def trace_constants(n: int, alpha: float, beta: float) -> dict[str, float]:
    if n < 3:
        raise ValueError("expansion thresholds need n >= 3")
    ln = math.log(n)
    return {
        "k0": 10 * ln / math.log(ln),
        "low_degree_threshold": alpha * beta * ln / 10,
        "growth_factor": alpha * beta * ln / 25,
        "layer_goal": alpha * beta * n / 5000,
        "growth_premise_cap": n / (200 * ln),
        "w_length_bound": 4 * n / ln,
    }


@dataclass
class SideTrace:
    """One half of the construction; ``own`` is the side the root lives on."""

    D0_prime: list[int]
    D0: list[int]
    W0: list[int]
    W_added: list[int]
    R0: list[int]
    root: int
    root_in_R0: bool
    # layers on the root's side (X for A, Y-hat for B) and the neighbor layers
    layers: list[list[int]] = field(default_factory=list)
    neighbor_layers: list[list[int]] = field(default_factory=list)
    goal_index: int | None = None
    stalled: bool = False
    growth: list[dict] = field(default_factory=list)

    @property
    def t_star(self) -> int:
        return len(self.W_added)

    @property
    def reached_goal(self) -> bool:
        return self.goal_index is not None

    @property
    def growth_claim_holds(self) -> bool:
        """Every transition before the goal layer whose premise applies grew enough."""
        return all(g["ok"] for g in self.growth if g["premise"])

    @property
    def growth_all_layers(self) -> bool:
        return all(g["ok"] for g in self.growth)

    def summary(self, one_based: bool = True) -> dict:
        off = 1 if one_based else 0
        shift = lambda xs: [x + off for x in xs]  # noqa: E731
        return {
            "root": self.root + off,
            "root_in_R0": self.root_in_R0,
            "sizes": {
                "D0_prime": len(self.D0_prime),
                "D0": len(self.D0),
                "W0": len(self.W0),
                "t_star": self.t_star,
                "R0": len(self.R0),
                "layers": [len(x) for x in self.layers],
                "neighbor_layers": [len(y) for y in self.neighbor_layers],
            },
            "W_added": shift(self.W_added),
            "layers": [shift(x) for x in self.layers],
            "goal_index": self.goal_index,
            "reached_goal": self.reached_goal,
            "stalled": self.stalled,
            "growth": self.growth,
            "growth_claim_holds": self.growth_claim_holds,
        }


@dataclass
class ExpansionTrace:
    n: int
    src: int
    dst: int
    beta: float
    alpha_dst: float
    constants: dict[str, float]
    a_side: SideTrace
    b_side: SideTrace
    bridge_pairs: int | None = None

    @property
    def a0(self) -> int:
        return self.a_side.root

    @property
    def b0(self) -> int:
        return self.b_side.root

    @property
    def w_within_bound(self) -> bool:
        return self.a_side.t_star <= self.constants["w_length_bound"]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "src": self.src + 1,
            "dst": self.dst + 1,
            "beta": self.beta,
            "alpha_dst": self.alpha_dst,
            "constants": dict(self.constants),
            "a_side": self.a_side.summary(),
            "b_side": self.b_side.summary(),
            "w_within_bound": self.w_within_bound,
            "bridge_pairs": self.bridge_pairs,
        }


def _side(n, nbrs_own, nbrs_other, mate_own, mate_other, own_src, own_dst, consts, root, full):
    """Run the filtering and layering on one side.

    ``nbrs_own[v]`` are the ``dst``-neighbors (opposite side) of own-side
    vertex ``v``; ``nbrs_other`` is the same map from the opposite side.
    """
    k0 = consts["k0"]
    in_dst = [False] * n
    for v in own_dst:
        in_dst[v] = True
    other_dst = {mate_own[v] for v in own_dst}

    d0_prime = [v for v in own_dst if sum(1 for u in nbrs_own[v] if u in other_dst) >= consts["low_degree_threshold"]]
    d0p = set(d0_prime)
    sparse_partners = {mate_own[v] for v in own_dst if v not in d0p}
    d0 = [v for v in own_src if sum(1 for u in nbrs_own[v] if u in sparse_partners) <= k0]
    d0s = set(d0)
    w0 = [v for v in own_src if v not in d0s]

    in_w = [False] * n
    count = [0] * n
    heap: list[int] = []

    def absorb(v):
        in_w[v] = True
        for v2 in nbrs_other[mate_own[v]]:
            count[v2] += 1
            if in_dst[v2] and not in_w[v2] and count[v2] >= k0:
                heapq.heappush(heap, v2)

    for v in w0:
        absorb(v)
    added = []
    while heap:
        v = heapq.heappop(heap)
        if in_w[v]:
            continue
        added.append(v)
        absorb(v)

    r0 = [v for v in own_dst if not in_w[v]]
    trace = SideTrace(d0_prime, d0, w0, added, r0, root, root_in_R0=not in_w[root])
    if not trace.root_in_R0:
        return trace

    in_r0 = [False] * n
    for v in r0:
        in_r0[v] = True
    seen = {root}
    layer = [root]
    goal = consts["layer_goal"]
    while True:
        i = len(trace.layers)
        trace.layers.append(layer)
        if trace.goal_index is None and len(layer) >= goal:
            trace.goal_index = i
            if not full:
                break
        nbr = sorted({u for v in layer for u in nbrs_own[v]})
        trace.neighbor_layers.append(nbr)
        nxt = sorted({mate_other[u] for u in nbr} - seen)
        nxt = [v for v in nxt if in_r0[v]]
        if trace.goal_index is None:
            trace.growth.append(
                {
                    "index": i,
                    "size": len(layer),
                    "next_size": len(nxt),
                    "premise": len(layer) <= consts["growth_premise_cap"],
                    "ok": len(nxt) >= consts["growth_factor"] * len(layer),
                }
            )
        if not nxt:
            trace.stalled = trace.goal_index is None
            break
        seen.update(nxt)
        layer = nxt
    return trace


def expansion_trace(
    G: ColoredBipartiteGraph,
    M: Matching,
    src: int,
    dst: int,
    beta: float,
    a0: int,
    alpha_dst: float | None = None,
    full: bool = False,
    overrides: dict[str, float] | None = None,
) -> ExpansionTrace:
    """Build the layered expansion from ``a0`` and from ``M(a0)``.

    ``alpha_dst`` is the color probability used in the thresholds; it
    defaults to ``1/q``.  With ``full=True`` layering continues past the goal
    layer until it stalls.  A root outside ``R0`` is recorded, not raised.

    ``overrides`` replaces entries of :func:`trace_constants`.  At practical
    ``n`` the low-degree threshold is below 1, so ``D0'`` is all of ``A_dst``
    and ``W`` stays empty; overriding the thresholds is the only way to watch
    the absorbing sequence do anything.
    """
    G._check_color(src)
    G._check_color(dst)
    if src == dst:
        raise ValueError("src and dst colors must differ")
    validate_matching(G, M)
    if not is_perfect(G, M):
        raise ValueError("expansion trace needs a perfect matching")
    n = G.n
    if not (0 < beta < 1):
        raise ValueError("beta must lie in (0, 1)")
    mu = profile(G, M)
    if mu[src] < beta * n or mu[dst] < beta * n:
        raise ValueError(f"profile {mu} has fewer than beta*n edges of color {src} or {dst}")
    if alpha_dst is None:
        alpha_dst = 1.0 / G.q
    mate_a, mate_b = M.mate_a, M.mate_b
    if not (0 <= a0 < n) or G.color(a0, mate_a[a0]) != dst:
        raise ValueError(f"a0={a0} must be an A endpoint of a matching edge of color {dst}")

    consts = trace_constants(n, alpha_dst, beta)
    for key, value in (overrides or {}).items():
        if key not in consts:
            raise ValueError(f"unknown trace constant {key!r}")
        consts[key] = float(value)
    mcolor = [G.color(a, mate_a[a]) for a in range(n)]
    a_src = [a for a in range(n) if mcolor[a] == src]
    a_dst = [a for a in range(n) if mcolor[a] == dst]
    b_src = sorted(mate_a[a] for a in a_src)
    b_dst = sorted(mate_a[a] for a in a_dst)
    nbrs_a, nbrs_b = G.adj_a[dst], G.adj_b[dst]

    a_side = _side(n, nbrs_a, nbrs_b, mate_a, mate_b, a_src, a_dst, consts, a0, full)
    b_side = _side(n, nbrs_b, nbrs_a, mate_b, mate_a, b_src, b_dst, consts, mate_a[a0], full)
    trace = ExpansionTrace(n, src, dst, beta, alpha_dst, consts, a_side, b_side)

    if a_side.reached_goal and b_side.reached_goal:
        x_k = set(a_side.layers[a_side.goal_index])
        y_l = set(b_side.layers[b_side.goal_index])
        trace.bridge_pairs = sum(
            1
            for x0 in a_src
            if any(u in y_l for u in nbrs_a[x0]) and any(v in x_k for v in nbrs_b[mate_a[x0]])
        )
    return trace
