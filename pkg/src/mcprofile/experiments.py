"""Seeded Monte Carlo experiments and threshold sweeps.

Every trial draws its graph from a seed derived from the master seed and the
trial's coordinates, so rows do not depend on execution order.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph import ColorLaw, color_subgraph, default_omega, edge_probability, generate_with_p
from .errors import ModelDomainError
from .matching import is_perfect, maximum_matching, profile, validate_matching
from .recolor import recolor_to_target

__all__ = [
    "SWEEP_SCHEMA",
    "SweepSpec",
    "beta_floor",
    "derive_seed",
    "make_target",
    "run_full_cube_check",
    "run_isolated_vertex_check",
    "run_sweep",
    "run_theorem_demo",
    "sweep_to_csv",
    "sweep_to_json",
]

SWEEP_SCHEMA = "mcprofile-sweep/1"


def derive_seed(master: int, *keys: int) -> int:
    """64-bit seed for the trial addressed by ``keys`` under ``master``."""
    ss = np.random.SeedSequence(int(master), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def beta_floor(beta: float, n: int) -> int:
    """Smallest admissible coordinate ``ceil(beta*n)``, immune to float fuzz."""
    return math.ceil(beta * n - 1e-9)


def make_target(name: str, n: int, q: int, beta: float = 0.0) -> tuple[int, ...]:
    """Target profile by name.

    ``balanced`` splits ``n`` evenly (remainder to the lowest colors),
    ``beta-corner`` puts every color but the first at ``ceil(beta*n)``, and
    ``m1;m2;...`` (or ``m1,m2,...``) is taken literally.
    """
    if name == "balanced":
        base, rem = divmod(n, q)
        return tuple(base + (1 if i < rem else 0) for i in range(q))
    if name == "beta-corner":
        low = beta_floor(beta, n)
        return (n - (q - 1) * low,) + (low,) * (q - 1)
    parts = name.replace(";", ",").split(",")
    target = tuple(int(x) for x in parts)
    if len(target) != q:
        raise ValueError(f"target {name!r} needs {q} entries")
    return target


def _resolve_omega(n: int, omega: float | None) -> float:
    return default_omega(n) if omega is None else float(omega)


def run_theorem_demo(
    n: int,
    omega: float | None,
    law: ColorLaw,
    beta: float,
    target: Sequence[int],
    trials: int,
    seed: int,
) -> dict:
    """Generate, match, and recolor towards ``target`` in each trial.

    Trials without a perfect matching are counted apart from recolor
    failures.  Successes are re-validated before they are counted.
    """
    target = tuple(int(x) for x in target)
    q = law.q
    if len(target) != q or sum(target) != n:
        raise ValueError(f"target {target} must have {q} entries summing to n={n}")
    low = beta_floor(beta, n)
    if any(m < low for m in target):
        raise ValueError(f"every target coordinate must be >= ceil(beta*n) = {low}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    omega = _resolve_omega(n, omega)
    p = edge_probability(n, omega)

    pm = success = 0
    steps = []
    failures = []
    for trial in range(trials):
        G = generate_with_p(n, p, law, derive_seed(seed, trial))
        M = maximum_matching(G)
        if not is_perfect(G, M):
            continue
        pm += 1
        outcome = recolor_to_target(G, M, target)
        if outcome.success:
            validate_matching(G, outcome.final)
            assert is_perfect(G, outcome.final) and profile(G, outcome.final) == target
            success += 1
            steps.append(len(outcome.steps))
        else:
            failures.append({"trial": trial, **outcome.failure.to_dict()})
    return {
        "n": n,
        "omega": omega,
        "p": p,
        "q": q,
        "alphas": list(law.alphas),
        "beta": beta,
        "target": list(target),
        "trials": trials,
        "seed": seed,
        "pm_count": pm,
        "success_count": success,
        "pm_freq": pm / trials,
        "success_given_pm": success / pm if pm else None,
        "mean_steps": float(np.mean(steps)) if steps else None,
        "failures": failures,
    }


def _has_isolated(G, color: int) -> bool:
    return bool((G.color_degrees(color, "A") == 0).any() or (G.color_degrees(color, "B") == 0).any())


def run_isolated_vertex_check(n: int, omega: float | None, law: ColorLaw, trials: int, seed: int, color: int = 0) -> dict:
    """Frequency with which one color class leaves a vertex isolated on either side."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    omega = _resolve_omega(n, omega)
    p = edge_probability(n, omega)
    hits = 0
    for trial in range(trials):
        G = generate_with_p(n, p, law, derive_seed(seed, trial))
        hits += _has_isolated(G, color)
    return {"n": n, "omega": omega, "p": p, "color": color + 1, "trials": trials, "seed": seed,
            "isolated_count": hits, "frequency": hits / trials}


def full_cube_probability(n: int, omega: float, law: ColorLaw) -> float:
    p = law.q * (math.log(n) + omega) / (law.alpha_min * n)
    if not (0 < p <= 1):
        raise ModelDomainError(f"q(ln n + omega)/(alpha_min n) = {p!r} is not a probability")
    return p


def run_full_cube_check(n: int, omega: float | None, law: ColorLaw, trials: int, seed: int) -> dict:
    """Per color, how often the color class alone has a perfect matching.

    The graph is drawn at ``p = q(ln n + omega)/(alpha_min n)``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    omega = _resolve_omega(n, omega)
    p = full_cube_probability(n, omega, law)
    counts = [0] * law.q
    for trial in range(trials):
        G = generate_with_p(n, p, law, derive_seed(seed, trial))
        for c in range(law.q):
            H = color_subgraph(G, c)
            counts[c] += is_perfect(H, maximum_matching(H))
    return {"n": n, "omega": omega, "p": p, "q": law.q, "trials": trials, "seed": seed,
            "mono_pm_count": counts, "frequencies": [k / trials for k in counts]}


# -- sweeps ----------------------------------------------------------------


@dataclass(frozen=True)
class SweepSpec:
    """Full factorial over ``n_values x c_values x targets``; ``p = c ln n / n``."""

    n_values: tuple[int, ...]
    c_values: tuple[float, ...]
    law: ColorLaw
    beta: float
    targets: tuple[str, ...] = ("balanced",)
    trials: int = 10
    seed: int = 0
    timing: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.n_values or not self.c_values or not self.targets:
            raise ValueError("sweep needs at least one n, c and target")
        for n in self.n_values:
            for name in self.targets:
                t = make_target(name, n, self.law.q, self.beta)
                if sum(t) != n or min(t) < 0:
                    raise ValueError(f"target {name!r} does not give a profile summing to n={n}")

    def cells(self) -> list[tuple[int, int, int]]:
        return [
            (ni, ci, ti)
            for ni in range(len(self.n_values))
            for ci in range(len(self.c_values))
            for ti in range(len(self.targets))
        ]


def _run_cell(spec: SweepSpec, cell: tuple[int, int, int]) -> dict:
    ni, ci, ti = cell
    n, c, name = spec.n_values[ni], spec.c_values[ci], spec.targets[ti]
    q = spec.law.q
    target = make_target(name, n, q, spec.beta)
    row = {"n": n, "c": c, "p": c * math.log(n) / n, "target_name": name,
           "target": ";".join(map(str, target)), "trials": spec.trials}
    pm = success = isolated = 0
    mono = [0] * q
    steps = []
    started = time.perf_counter()
    try:
        if not (0 < row["p"] <= 1):
            raise ModelDomainError(f"p = c ln n/n = {row['p']!r} outside (0, 1]")
        for trial in range(spec.trials):
            G = generate_with_p(n, row["p"], spec.law, derive_seed(spec.seed, n, ci, ti, trial))
            isolated += _has_isolated(G, 0)
            for col in range(q):
                H = color_subgraph(G, col)
                mono[col] += is_perfect(H, maximum_matching(H))
            M = maximum_matching(G)
            if not is_perfect(G, M):
                continue
            pm += 1
            outcome = recolor_to_target(G, M, target)
            if outcome.success:
                assert profile(G, outcome.final) == target and is_perfect(G, outcome.final)
                success += 1
                steps.append(len(outcome.steps))
        row["error"] = ""
    except ValueError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    t = spec.trials
    row.update(
        pm_count=pm,
        pm_freq=pm / t,
        success_count=success,
        success_freq=success / t,
        success_given_pm=success / pm if pm else None,
        mean_steps=float(np.mean(steps)) if steps else None,
        isolated_freq=isolated / t,
    )
    for col in range(q):
        row[f"mono_pm_freq_{col + 1}"] = mono[col] / t
    if spec.timing:
        row["mean_runtime_s"] = (time.perf_counter() - started) / t
    return row


def run_sweep(spec: SweepSpec, workers: int = 1, order: Sequence[int] | None = None) -> list[dict]:
    """Run every cell; rows come back in factorial order whatever the execution order.

    A cell that hits a domain error is reported in its ``error`` column and
    the sweep carries on.
    """
    cells = spec.cells()
    run_order = list(range(len(cells))) if order is None else list(order)
    if sorted(run_order) != list(range(len(cells))):
        raise ValueError("order must be a permutation of the cell indices")
    results: dict[int, dict] = {}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {k: pool.submit(_run_cell, spec, cells[k]) for k in run_order}
            for k, fut in futures.items():
                results[k] = fut.result()
    else:
        for k in run_order:
            results[k] = _run_cell(spec, cells[k])
    return [results[k] for k in range(len(cells))]


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(round(v, 10))
    return str(v)


def sweep_to_csv(spec: SweepSpec, rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {SWEEP_SCHEMA}\n")
    buf.write(f"# q={spec.law.q} alphas={','.join(map(repr, spec.law.alphas))} beta={spec.beta!r} "
              f"trials={spec.trials} seed={spec.seed}\n")
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_value(v) for k, v in row.items()})
    return buf.getvalue()


def sweep_to_json(spec: SweepSpec, rows: list[dict]) -> str:
    doc = {
        "schema": SWEEP_SCHEMA,
        "spec": {
            "n_values": list(spec.n_values),
            "c_values": list(spec.c_values),
            "alphas": list(spec.law.alphas),
            "beta": spec.beta,
            "targets": list(spec.targets),
            "trials": spec.trials,
            "seed": spec.seed,
        },
        "rows": rows,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
