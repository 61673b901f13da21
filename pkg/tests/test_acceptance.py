"""Acceptance criteria, one test each; every test logs a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s`` to see the lines as
they are produced; they are also repeated in the terminal summary.
"""

import itertools
import math
import time

import numpy as np
import pytest

from mcprofile.audit import CONDITIONS, LemmaParams, audit_random
from mcprofile.cli import main
from mcprofile.experiments import derive_seed, run_full_cube_check, run_isolated_vertex_check, run_theorem_demo
from mcprofile.expansion import expansion_trace
from mcprofile.graph import ColoredBipartiteGraph, ColorLaw, edge_probability, generate_with_p
from mcprofile.matching import is_perfect, maximum_matching, profile, validate_matching
from mcprofile.oracle import mcp_bruteforce, mcp_subset_dp
from mcprofile.recolor import apply_cycle, find_swap_cycle

from .conftest import random_graph
from .test_cli import CLI_RUNS

pytestmark = pytest.mark.slow

HALF = ColorLaw((0.5, 0.5))


def report(log, number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    log.append(line)
    print(line)
    return ok


def test_c1_oracle_equivalence(acceptance_log):
    rng = np.random.default_rng(20240601)
    started = time.perf_counter()
    count = mismatches = 0
    for n, q, p in itertools.product(range(4, 9), (2, 3), (0.3, 0.6, 0.9)):
        for _ in range(7):
            G = random_graph(rng, n, q, p)
            mismatches += set(mcp_subset_dp(G)) != set(mcp_bruteforce(G))
            count += 1
    elapsed = time.perf_counter() - started
    ok = count >= 200 and mismatches == 0 and elapsed < 60
    assert report(acceptance_log, 1, ok, f"{count} instances, {mismatches} mismatches, {elapsed:.1f}s")


def test_c2_gap_instance(acceptance_log, gap_graph):
    M = maximum_matching(gap_graph)
    mcp = set(mcp_bruteforce(gap_graph))
    cycle = find_swap_cycle(gap_graph, M, 0, 1)
    ok = mcp == {(2, 0), (0, 2)} and cycle is None
    assert report(acceptance_log, 2, ok, f"mcp={sorted(mcp)}, cycle={cycle}")


def test_c3_cycle_soundness(acceptance_log):
    want = 100_000
    rng = np.random.default_rng(7)
    triples = bad = graphs = 0
    while triples < want:
        n = int(rng.integers(3, 11))
        q = int(rng.integers(2, 4))
        G = random_graph(rng, n, q, float(rng.uniform(0.4, 0.95)))
        M = maximum_matching(G)
        if not is_perfect(G, M):
            continue
        graphs += 1
        mu = profile(G, M)
        misses = 0
        # random walk through profile space until cycles run dry
        while misses < 2 * q * q and triples < want:
            src, dst = (int(x) for x in rng.choice(q, size=2, replace=False))
            cycle = find_swap_cycle(G, M, src, dst)
            if cycle is None:
                misses += 1
                continue
            misses = 0
            M2 = apply_cycle(G, M, cycle)
            validate_matching(G, M2)
            shifted = list(mu)
            shifted[src] -= 1
            shifted[dst] += 1
            mu2 = profile(G, M2)
            bad += not is_perfect(G, M2) or mu2 != tuple(shifted)
            triples += 1
            M, mu = M2, mu2
    assert report(acceptance_log, 3, bad == 0, f"{triples} triples on {graphs} graphs, {bad} bad")


def test_c4_theorem_desk_scale(acceptance_log):
    n, trials = 1000, 50
    details, ok = [], True
    for k, target in enumerate([(300, 700), (500, 500), (700, 300)]):
        started = time.perf_counter()
        r = run_theorem_demo(n, None, HALF, 0.3, target, trials, derive_seed(4, k))
        rate = r["success_given_pm"]
        ok &= rate is not None and rate >= 0.95
        details.append(f"{target}: {r['success_count']}/{r['pm_count']} in {time.perf_counter() - started:.0f}s")
    assert report(acceptance_log, 4, ok, "; ".join(details))


def test_c5_isolated_vertices(acceptance_log):
    r = run_isolated_vertex_check(2000, None, HALF, 100, 5)
    ok = r["frequency"] >= 0.9
    assert report(acceptance_log, 5, ok, f"frequency {r['frequency']:.2f} over 100 trials")


def test_c6_full_cube(acceptance_log):
    r = run_full_cube_check(500, None, HALF, 50, 6)
    ok = all(f >= 0.9 for f in r["frequencies"])
    assert report(acceptance_log, 6, ok, f"per-color PM frequency {r['frequencies']}")


def test_c7_lemma_audit(acceptance_log):
    n, graphs, per_condition = 2000, 5, 10_000
    p = edge_probability(n, math.log(math.log(n)))
    # the per-condition budget applies to each graph, split over the colors
    per_run = per_condition // HALF.q
    totals = {c: [0, 0, 0] for c in CONDITIONS}  # violations, samples, vacuous runs
    for g in range(graphs):
        G = generate_with_p(n, p, HALF, derive_seed(7, g))
        for color in range(HALF.q):
            params = LemmaParams(beta=0.3, eta=1, delta=5, gamma=2, color=color)
            for c in CONDITIONS:
                rep = audit_random(G, c, params, per_run, derive_seed(7, g, color, ord(c)))
                totals[c][0] += rep.violations
                totals[c][1] += rep.samples_uniform + rep.samples_adversarial
                totals[c][2] += rep.vacuous

    # planted: wipe color 1 between S and T, then hand the pair to the audit
    G = generate_with_p(n, p, HALF, derive_seed(7, 99))
    s = math.ceil(0.3 * n / 10)
    S, T = set(range(s)), set(range(n - s, n))
    keep = [e for e in G.edges.tolist() if not (e[2] == 0 and e[0] in S and e[1] in T)]
    planted = audit_random(ColoredBipartiteGraph(n, 2, keep), "f", LemmaParams(0.3), 2, 0,
                           pool=[{"S": sorted(S), "T": sorted(T)}])
    planted_ok = planted.violations >= 1

    ok = planted_ok and all(v == 0 for v, _, _ in totals.values())
    detail = ", ".join(
        f"({c}) {v}/{m} violations" + (f" [{vac} vacuous runs]" if vac else "") for c, (v, m, vac) in totals.items()
    )
    assert report(acceptance_log, 7, ok, f"{detail}; planted (f) found: {planted_ok}")


def test_c8_expansion_trace(acceptance_log):
    n, beta = 1000, 0.3
    p = edge_probability(n, math.log(math.log(n)))
    runs = reached = 0
    w_ok = True
    seed = 0
    graphs = 0
    while graphs < 5:
        G = generate_with_p(n, p, HALF, derive_seed(8, seed))
        seed += 1
        M = maximum_matching(G)
        if not is_perfect(G, M) or min(profile(G, M)) < beta * n:
            continue
        graphs += 1
        rng = np.random.default_rng(seed)
        probe = expansion_trace(G, M, 0, 1, beta, next(a for a in range(n) if G.color(a, M.mate_a[a]) == 1))
        for a0 in rng.choice(probe.a_side.R0, size=4, replace=False):
            tr = expansion_trace(G, M, 0, 1, beta, int(a0))
            runs += 1
            reached += tr.a_side.reached_goal and tr.a_side.growth_claim_holds
            w_ok &= tr.w_within_bound
    ok = reached >= 0.9 * runs and w_ok
    assert report(acceptance_log, 8, ok, f"{reached}/{runs} reach the goal layer with growth; W bound held: {w_ok}")


def test_c9_cli_determinism(acceptance_log, tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("2 2\n1 1 1\n1 2 2\n2 1 2\n2 2 2\n")
    m = tmp_path / "m.txt"
    m.write_text("1 1\n2 2\n")
    files = {"g": str(g), "m": str(m)}
    differing = []
    for name, argv in CLI_RUNS.items():
        blobs = []
        for k in (1, 2):
            out = tmp_path / f"{name}.{k}"
            code = main([a.format(**files) for a in argv] + ["--out", str(out)])
            extra = out.with_name(out.name + ".json")
            blobs.append((code, out.read_bytes(), extra.read_bytes() if extra.exists() else b""))
        if blobs[0] != blobs[1] or blobs[0][0] != 0:
            differing.append(name)
    ok = not differing
    assert report(acceptance_log, 9, ok, f"{len(CLI_RUNS)} subcommand runs, differing: {differing or 'none'}")
