"""Exact matching color profile ``mcp(G)`` for small graphs.

Profiles live in ``{0..n}^q`` (zero coordinates allowed).  Both oracles
refuse instances above their cap instead of falling back to sampling.
"""

from __future__ import annotations

from typing import Sequence

from .errors import SizeCapError
from .graph import ColoredBipartiteGraph
from .matching import Matching

__all__ = [
    "BRUTEFORCE_CAP",
    "DP_CAP",
    "contains_profile",
    "mcp_bruteforce",
    "mcp_subset_dp",
]

BRUTEFORCE_CAP = 10
DP_CAP = 14


def mcp_bruteforce(G: ColoredBipartiteGraph, cap: int = BRUTEFORCE_CAP) -> list[tuple[int, ...]]:
    """Enumerate every perfect matching by backtracking and collect profiles."""
    if G.n > cap:
        raise SizeCapError(f"n={G.n} exceeds brute-force cap {cap}")
    n, q = G.n, G.q
    adj = [[(b, G.color(a, b)) for b in G.adjacency[a]] for a in range(n)]
    used = [False] * n
    counts = [0] * q
    found: set[tuple[int, ...]] = set()

    def rec(a: int) -> None:
        if a == n:
            found.add(tuple(counts))
            return
        for b, c in adj[a]:
            if not used[b]:
                used[b] = True
                counts[c] += 1
                rec(a + 1)
                counts[c] -= 1
                used[b] = False

    rec(0)
    return sorted(found)


class _ProfileCodec:
    """Packs the first ``q-1`` coordinates into one int, base ``n+1``.

    The last coordinate is implied by the total ``n``.
    """

    def __init__(self, n: int, q: int):
        self.n, self.q = n, q
        base = n + 1
        self.delta = [base**c for c in range(q - 1)] + [0]

    def decode(self, code: int) -> tuple[int, ...]:
        base = self.n + 1
        head = []
        for _ in range(self.q - 1):
            code, r = divmod(code, base)
            head.append(r)
        return tuple(head) + (self.n - sum(head),)

    def encode(self, m: Sequence[int]) -> int:
        return sum(int(x) * d for x, d in zip(m, self.delta))


def _subset_tables(G: ColoredBipartiteGraph, cap: int):
    if G.n > cap:
        raise SizeCapError(f"n={G.n} exceeds subset-DP cap {cap}")
    n = G.n
    codec = _ProfileCodec(n, G.q)
    adj = [[(b, codec.delta[G.color(a, b)]) for b in G.adjacency[a]] for a in range(n)]
    # table[S] = achievable truncated-profile codes after matching rows 0..|S|-1 onto S
    table: dict[int, set[int]] = {0: {0}}
    layer = [0]
    for a in range(n):
        nxt: dict[int, set[int]] = {}
        for S in layer:
            codes = table[S]
            for b, d in adj[a]:
                bit = 1 << b
                if S & bit:
                    continue
                target = nxt.setdefault(S | bit, set())
                target.update(code + d for code in codes)
        table.update(nxt)
        layer = sorted(nxt)
    return codec, adj, table


def mcp_subset_dp(G: ColoredBipartiteGraph, cap: int = DP_CAP) -> list[tuple[int, ...]]:
    """Dynamic program over subsets of B; equals :func:`mcp_bruteforce`."""
    codec, _, table = _subset_tables(G, cap)
    full = (1 << G.n) - 1
    return sorted(codec.decode(c) for c in table.get(full, ()))


def contains_profile(
    G: ColoredBipartiteGraph, m: Sequence[int], cap: int = DP_CAP
) -> tuple[bool, Matching | None]:
    """Decide ``m in mcp(G)``; on success also return a witness perfect matching."""
    m = tuple(int(x) for x in m)
    if len(m) != G.q:
        raise ValueError(f"profile must have {G.q} entries, got {len(m)}")
    if any(x < 0 for x in m) or sum(m) != G.n:
        raise ValueError(f"profile {m} must be nonnegative and sum to n={G.n}")
    codec, adj, table = _subset_tables(G, cap)
    S = (1 << G.n) - 1
    code = codec.encode(m)
    if code not in table.get(S, ()):
        return False, None
    pairs = []
    for a in range(G.n - 1, -1, -1):
        for b, d in adj[a]:
            bit = 1 << b
            if S & bit and (code - d) in table.get(S ^ bit, ()):
                pairs.append((a, b))
                S ^= bit
                code -= d
                break
        else:  # pragma: no cover - table is consistent by construction
            raise AssertionError("backtrace lost the witness")
    return True, Matching(G.n, pairs)
