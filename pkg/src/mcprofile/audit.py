"""Empirical checks of the structural lemma's six conditions.

:func:`evaluate_condition` decides one witness family deterministically;
:func:`audit_random` samples witness families (uniformly and with greedy
adversarial heuristics) and collects violations.  Sampling is evidence, not
proof: the conditions quantify over all subsets.

A condition *holds* for a witness when the lemma's bad event does not occur.
Size thresholds are ceiled when building sets and compared as reals when
checking them.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .graph import ColoredBipartiteGraph

__all__ = [
    "CONDITIONS",
    "ConditionResult",
    "LemmaParams",
    "PaperConstants",
    "ViolationReport",
    "audit_random",
    "evaluate_condition",
    "paper_constants",
]

CONDITIONS = ("a", "b", "c", "d", "e", "f")


@dataclass(frozen=True)
class LemmaParams:
    beta: float
    eta: float = 1.0
    delta: float = 5.0
    gamma: float = 2.0
    color: int = 0

    def validate(self, q: int) -> None:
        if not (0 < self.beta < 1 / q):
            raise ValueError(f"beta must lie in (0, 1/q) = (0, {1 / q}), got {self.beta}")
        for name in ("eta", "delta", "gamma"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if not (0 <= self.color < q):
            raise ValueError(f"color {self.color} out of range for q={q}")


@dataclass(frozen=True)
class PaperConstants:
    gamma_a: float
    gamma_b: float
    gamma_d: float
    k: float
    k0: float
    low_degree_threshold: float
    growth_factor: float
    layer_goal: float


def paper_constants(n: int, alpha_i: float, params: LemmaParams) -> PaperConstants:
    if n < 3:
        raise ValueError("constants need ln ln n > 0, i.e. n >= 3")
    if not (0 < alpha_i < 1):
        raise ValueError("alpha_i must lie in (0, 1)")
    ln = math.log(n)
    k = 10 * ln / math.log(ln)
    log_e_beta = math.log(math.e / params.beta)
    return PaperConstants(
        gamma_a=params.eta / (20 * alpha_i),
        gamma_b=10 * log_e_beta / alpha_i,
        gamma_d=4 * log_e_beta / alpha_i,
        k=k,
        k0=k,
        low_degree_threshold=alpha_i * params.beta * ln / 10,
        growth_factor=alpha_i * params.beta * ln / 25,
        layer_goal=alpha_i * params.beta * n / 5000,
    )


@dataclass
class ConditionResult:
    condition: str
    holds: bool
    observed: dict
    thresholds: dict


def _as_index(G, name, values) -> np.ndarray:
    arr = np.unique(np.asarray(list(values), dtype=np.int64))
    if len(arr) and (arr[0] < 0 or arr[-1] >= G.n):
        raise ValueError(f"set {name} has a vertex outside 0..{G.n - 1}")
    return arr


def _need(ok: bool, constraint: str) -> None:
    if not ok:
        raise ValueError(f"size constraint violated: {constraint}")


def _mask(n: int, idx: np.ndarray) -> np.ndarray:
    m = np.zeros(n, dtype=bool)
    m[idx] = True
    return m


def _degrees_into(mat, rows: np.ndarray, cols_mask: np.ndarray) -> np.ndarray:
    return np.asarray(mat[rows] @ cols_mask.astype(np.int64)).ravel()


def evaluate_condition(
    G: ColoredBipartiteGraph,
    condition: str,
    sets: dict,
    params: LemmaParams,
    alpha: float | None = None,
) -> ConditionResult:
    """Check one condition for one witness family.

    ``sets`` maps ``"S"``, ``"T"`` and, for (b)/(c), ``"X"`` and ``"Z"`` to
    vertex collections (``S``, ``X`` on side A; ``T``, ``Z`` on side B).
    """
    if condition not in CONDITIONS:
        raise ValueError(f"unknown condition {condition!r}")
    params.validate(G.q)
    alpha = 1.0 / G.q if alpha is None else alpha
    n = G.n
    ln = math.log(n)
    const = paper_constants(n, alpha, params)
    mat = G.color_matrix(params.color)
    S = _as_index(G, "S", sets.get("S", ()))
    T = _as_index(G, "T", sets.get("T", ()))
    s, t = len(S), len(T)
    beta_n = params.beta * n

    if condition == "a":
        lo, hi = const.gamma_a * ln, const.gamma_a * n / ln
        _need(lo <= s <= hi, f"gamma_a ln n <= |S| <= gamma_a n/ln n ({lo:.4g} <= {s} <= {hi:.4g})")
        cap = alpha * params.eta * s * ln
        _need(t <= cap, f"|T| <= alpha eta |S| ln n ({t} <= {cap:.4g})")
        e = int(_degrees_into(mat, S, _mask(n, T)).sum())
        bound = 2 * alpha * params.eta * s * ln
        return ConditionResult("a", e <= bound, {"e": e, "S": s, "T": t}, {"max_edges": bound})

    if condition in ("b", "c", "d"):
        _need(s >= beta_n and t >= beta_n, f"|S|, |T| >= beta n ({s}, {t} vs {beta_n:.4g})")

    if condition == "b":
        X = _as_index(G, "X", sets.get("X", ()))
        want = math.ceil(const.gamma_b * s / ln)
        _need(len(X) == want, f"|X| = ceil(gamma_b |S|/ln n) = {want}, got {len(X)}")
        _need(bool(np.isin(X, S).all()), "X subset of S")
        deg = _degrees_into(mat, X, _mask(n, T))
        thr = const.low_degree_threshold
        low = int((deg < thr).sum())
        bad = len(X) > 0 and low == len(X)
        return ConditionResult("b", not bad, {"low_degree_vertices": low, "X": len(X), "max_degree": int(deg.max(initial=0))}, {"low_degree_threshold": thr})

    if condition == "c":
        X = _as_index(G, "X", sets.get("X", ()))
        Z = _as_index(G, "Z", sets.get("Z", ()))
        want_x = math.ceil(s / ln)
        want_z = math.ceil(const.gamma_b * n / ln)
        _need(len(X) == want_x, f"|X| = ceil(|S|/ln n) = {want_x}, got {len(X)}")
        _need(len(Z) == want_z, f"|Z| = ceil(gamma_b n/ln n) = {want_z}, got {len(Z)}")
        _need(bool(np.isin(X, S).all()), "X subset of S")
        _need(bool(np.isin(Z, T).all()), "Z subset of T")
        deg = _degrees_into(mat, X, _mask(n, Z))
        heavy = int((deg >= const.k).sum())
        bad = len(X) > 0 and heavy == len(X)
        return ConditionResult("c", not bad, {"heavy_vertices": heavy, "X": len(X), "min_degree": int(deg.min(initial=0))}, {"k": const.k})

    if condition == "d":
        covered = np.zeros(n, dtype=bool)
        covered[mat[S].indices] = True
        missed = int((~covered[T]).sum())
        cap = const.gamma_d * n / ln
        return ConditionResult("d", missed <= cap, {"uncovered_in_T": missed}, {"max_uncovered": cap})

    if condition == "e":
        size = math.ceil(params.gamma * n / ln)
        _need(s == size and t == size, f"|S| = |T| = ceil(gamma n/ln n) = {size}, got {s}, {t}")
        e = int(_degrees_into(mat, S, _mask(n, T)).sum())
        bound = params.delta * s * ln / math.log(ln)
        return ConditionResult("e", e < bound, {"e": e}, {"min_bad_edges": bound})

    # condition f
    lo = beta_n / 10
    _need(s >= lo and t >= lo, f"|S|, |T| >= beta n/10 ({s}, {t} vs {lo:.4g})")
    e = int(_degrees_into(mat, S, _mask(n, T)).sum())
    return ConditionResult("f", e > 0, {"e": e}, {"min_edges": 1})


# -- sampling --------------------------------------------------------------


@dataclass
class ViolationReport:
    condition: str
    color: int
    seed: int
    trials: int
    samples_uniform: int = 0
    samples_adversarial: int = 0
    samples_pool: int = 0
    vacuous: bool = False
    vacuous_reason: str | None = None
    violations: int = 0
    witnesses: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["color"] = self.color + 1
        return out


class _Sampler:
    """Draws witness families for one condition, or reports the size window empty."""

    def __init__(self, G, condition, params, alpha):
        self.G, self.condition, self.params, self.alpha = G, condition, params, alpha
        n = G.n
        self.n = n
        self.ln = math.log(n)
        self.const = paper_constants(n, alpha, params)
        self.mat = G.color_matrix(params.color)
        self.deg_a = G.color_degrees(params.color, "A")
        self.deg_b = G.color_degrees(params.color, "B")
        self.reason = self._window()

    def _window(self) -> str | None:
        n, ln, c, beta_n = self.n, self.ln, self.const, self.params.beta * self.n
        cond = self.condition
        if cond == "a":
            self.s_lo = max(1, math.ceil(c.gamma_a * ln))
            self.s_hi = min(n, math.floor(c.gamma_a * n / ln))
            if self.s_lo > self.s_hi:
                return f"no integer |S| in [{c.gamma_a * ln:.4g}, {c.gamma_a * n / ln:.4g}]"
        elif cond in ("b", "c", "d"):
            self.s_lo = self.t_lo = math.ceil(beta_n)
            if self.s_lo > n:
                return "beta n exceeds n"
            if cond == "b":
                feasible = [s for s in range(self.s_lo, n + 1) if math.ceil(c.gamma_b * s / self.ln) <= s]
                if not feasible:
                    return f"|X| = gamma_b |S|/ln n exceeds |S| for every |S| >= beta n (gamma_b = {c.gamma_b:.4g}, ln n = {ln:.4g})"
                self.s_lo = feasible[0]
            if cond == "c":
                self.z = math.ceil(c.gamma_b * n / ln)
                if self.z > n:
                    return f"|Z| = gamma_b n/ln n = {c.gamma_b * n / ln:.4g} exceeds n"
                self.t_lo = max(self.t_lo, self.z)
        elif cond == "e":
            self.size = math.ceil(self.params.gamma * n / ln)
            if self.size > n:
                return f"|S| = gamma n/ln n = {self.size} exceeds n"
        else:
            self.s_lo = self.t_lo = max(1, math.ceil(self.params.beta * n / 10))
            if self.s_lo > n:
                return "beta n/10 exceeds n"
        return None

    # helpers

    def _pick(self, rng, k, pool=None):
        pool = np.arange(self.n) if pool is None else pool
        return np.sort(rng.choice(pool, size=k, replace=False))

    def _ranked(self, rng, score, k, lowest=True):
        """The ``k`` indices with smallest (or largest) score, random tie-breaks."""
        jitter = rng.random(len(score))
        key = np.lexsort((jitter, score if lowest else -score))
        return np.sort(key[:k])

    def _fill(self, rng, core, k):
        rest = np.setdiff1d(np.arange(self.n), core)
        extra = rng.choice(rest, size=k - len(core), replace=False) if k > len(core) else []
        return np.sort(np.concatenate([core, extra]).astype(np.int64))

    def draw(self, rng, adversarial: bool) -> dict:
        return getattr(self, "_draw_" + self.condition)(rng, adversarial)

    def _draw_a(self, rng, adv):
        s = int(rng.integers(self.s_lo, self.s_hi + 1))
        t_hi = min(self.n, math.floor(self.alpha * self.params.eta * s * self.ln))
        if not adv:
            t = int(rng.integers(min(1, t_hi), t_hi + 1))
            return {"S": self._pick(rng, s), "T": self._pick(rng, t)}
        pool = self._ranked(rng, self.deg_a, max(s, self.n // 10), lowest=False)
        S = self._pick(rng, s, pool)
        into = np.asarray(self.mat[S].sum(axis=0)).ravel()
        T = self._ranked(rng, into, t_hi, lowest=False)
        return {"S": S, "T": T}

    def _draw_b(self, rng, adv):
        s = int(rng.integers(self.s_lo, self.n + 1))
        t = int(rng.integers(self.t_lo, self.n + 1))
        x = math.ceil(self.const.gamma_b * s / self.ln)
        T = self._pick(rng, t)
        if adv:
            deg = _degrees_into(self.mat, np.arange(self.n), _mask(self.n, T))
            X = self._ranked(rng, deg, x)
            S = self._fill(rng, X, s)
        else:
            S = self._pick(rng, s)
            X = self._pick(rng, x, S)
        return {"S": S, "T": T, "X": X}

    def _draw_c(self, rng, adv):
        s = int(rng.integers(self.s_lo, self.n + 1))
        t = int(rng.integers(self.t_lo, self.n + 1))
        x = math.ceil(s / self.ln)
        T = self._pick(rng, t)
        if adv:
            Z = T[self._ranked(rng, self.deg_b[T], self.z, lowest=False)]
            deg = _degrees_into(self.mat, np.arange(self.n), _mask(self.n, Z))
            X = self._ranked(rng, deg, x, lowest=False)
            S = self._fill(rng, X, s)
        else:
            Z = self._pick(rng, self.z, T)
            S = self._pick(rng, s)
            X = self._pick(rng, x, S)
        return {"S": S, "T": T, "X": X, "Z": Z}

    def _draw_d(self, rng, adv):
        s = int(rng.integers(self.s_lo, self.n + 1))
        t = int(rng.integers(self.t_lo, self.n + 1))
        if not adv:
            return {"S": self._pick(rng, s), "T": self._pick(rng, t)}
        S = self._ranked(rng, self.deg_a, s)
        covered = np.zeros(self.n, dtype=bool)
        covered[self.mat[S].indices] = True
        T = self._ranked(rng, covered.astype(np.int64), t)
        return {"S": S, "T": T}

    def _draw_e(self, rng, adv):
        k = self.size
        if not adv:
            return {"S": self._pick(rng, k), "T": self._pick(rng, k)}
        pool = self._ranked(rng, self.deg_a, min(self.n, 2 * k), lowest=False)
        S = self._pick(rng, k, pool)
        into = np.asarray(self.mat[S].sum(axis=0)).ravel()
        return {"S": S, "T": self._ranked(rng, into, k, lowest=False)}

    def _draw_f(self, rng, adv):
        s = int(rng.integers(self.s_lo, self.n + 1))
        t = int(rng.integers(self.t_lo, self.n + 1))
        if not adv:
            return {"S": self._pick(rng, s), "T": self._pick(rng, t)}
        s, t = self.s_lo, self.t_lo
        S = self._ranked(rng, self.deg_a, s)
        into = np.asarray(self.mat[S].sum(axis=0)).ravel()
        return {"S": S, "T": self._ranked(rng, into, t)}


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(trial,))
    return np.random.Generator(np.random.Philox(ss))


def _witness(sets: dict, result: ConditionResult, source: str) -> dict:
    out = {key: (np.asarray(v, dtype=np.int64) + 1).tolist() for key, v in sorted(sets.items())}
    return {"sets": out, "observed": result.observed, "thresholds": result.thresholds, "source": source}


def audit_random(
    G: ColoredBipartiteGraph,
    condition: str,
    params: LemmaParams,
    trials: int,
    seed: int,
    alpha: float | None = None,
    pool: list[dict] | None = None,
    max_witnesses: int = 5,
) -> ViolationReport:
    """Sample ``trials`` witness families and count violations.

    Even trial indices sample uniformly among valid sets, odd ones use the
    greedy heuristic for the condition.  Families in ``pool`` are evaluated
    before sampling.  Trial ``i`` uses its own stream derived from
    ``(seed, i)``, so results do not depend on execution order.  Stored
    witnesses use 1-based vertex labels.
    """
    if condition not in CONDITIONS:
        raise ValueError(f"unknown condition {condition!r}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    params.validate(G.q)
    alpha = 1.0 / G.q if alpha is None else alpha
    report = ViolationReport(condition, params.color, seed, trials)

    def record(sets, result, source):
        if not result.holds:
            report.violations += 1
            if len(report.witnesses) < max_witnesses:
                report.witnesses.append(_witness(sets, result, source))

    for sets in pool or ():
        record(sets, evaluate_condition(G, condition, sets, params, alpha), "pool")
        report.samples_pool += 1

    sampler = _Sampler(G, condition, params, alpha)
    if sampler.reason is not None:
        report.vacuous = True
        report.vacuous_reason = sampler.reason
        return report
    for i in range(trials):
        adv = i % 2 == 1
        sets = sampler.draw(_trial_rng(seed, i), adv)
        record(sets, evaluate_condition(G, condition, sets, params, alpha), "adversarial" if adv else "uniform")
        if adv:
            report.samples_adversarial += 1
        else:
            report.samples_uniform += 1
    return report
