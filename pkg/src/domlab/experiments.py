"""Seeded Monte Carlo harnesses comparing analytic predictions with solver output.

Trial ``i`` of an experiment draws all of its randomness from
``mix(master_seed, i)``, and results are gathered in trial order, so a report
does not depend on how many worker processes produced it. Wall-clock
timings are kept on the records (and in the CSV export) but left out of the
JSON report, which is therefore byte-for-byte reproducible whenever no trial
hits its time budget.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from functools import lru_cache

import numpy as np
from scipy import stats

from . import __version__
from .analytics import (
    critical_r_hat,
    crucial_edge_law,
    deletion_probability,
    log_set_dominates,
    predicted_interval,
    survival_probability,
    talagrand_tail_product_bound,
)
from .errors import DomainError
from .graph import GnpParams, VertexSet, crucial_set, delete_edges, is_dominating, sample_gnp
from .rng import mix
from .solver import EXACT, alteration_dominating_set, domination_number_exact, greedy_dominating_set

CONCENTRATION = "concentration"
DELETION = "deletion"
CRUCIAL_DISTRIBUTION = "crucial_distribution"
ALTERATION = "alteration"
TALAGRAND_SANITY = "talagrand_sanity"
KINDS = (CONCENTRATION, DELETION, CRUCIAL_DISTRIBUTION, ALTERATION, TALAGRAND_SANITY)

# knob -> the one kind it belongs to
_KNOBS = {
    "x": DELETION,
    "fixed_graph": DELETION,
    "r": CRUCIAL_DISTRIBUTION,
    "b_grid": TALAGRAND_SANITY,
    "t_grid": TALAGRAND_SANITY,
    "slack": TALAGRAND_SANITY,
    "mass_target": CONCENTRATION,
}
_REQUIRED = {DELETION: ("x",), CRUCIAL_DISTRIBUTION: ("r",), TALAGRAND_SANITY: ("b_grid", "t_grid")}

MIN_ACCEPTANCE = 1e-6
DEFAULT_MASS_TARGET = 0.9
DEFAULT_SLACK = 0.05
CSV_COLUMNS = ("trial_index", "seed", "status", "D", "witness_size", "crucial_count", "survived", "millis")


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    n: int
    p: float
    trials: int
    master_seed: int = 0
    solver_budget: float = 10.0
    x: float | None = None
    fixed_graph: bool | None = None
    r: int | None = None
    b_grid: tuple | None = None
    t_grid: tuple | None = None
    slack: float | None = None
    mass_target: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown experiment kind {self.kind!r}; expected one of {KINDS}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise DomainError(f"trials must be a positive integer, got {self.trials}")
        GnpParams(self.n, self.p)
        if self.solver_budget <= 0:
            raise DomainError("solver budget must be positive")
        for knob, owner in _KNOBS.items():
            if getattr(self, knob) is not None and owner != self.kind:
                raise DomainError(f"knob {knob!r} does not apply to a {self.kind} experiment")
        for knob in _REQUIRED.get(self.kind, ()):
            if getattr(self, knob) is None:
                raise DomainError(f"a {self.kind} experiment needs the {knob!r} knob")
        for knob in ("b_grid", "t_grid"):
            if getattr(self, knob) is not None:
                object.__setattr__(self, knob, tuple(getattr(self, knob)))
        if self.mass_target is not None and not 0.0 <= self.mass_target <= 1.0:
            raise DomainError("mass_target must lie in [0, 1]")
        if self.slack is not None and self.slack < 0:
            raise DomainError("slack must be non-negative")
        if self.r is not None and not 1 <= self.r <= self.n:
            raise DomainError(f"r must satisfy 1 <= r <= n, got {self.r}")

    @classmethod
    def from_dict(cls, data):
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self):
        out = {k: v for k, v in asdict(self).items() if v is not None}
        for knob in ("b_grid", "t_grid"):
            if knob in out:
                out[knob] = list(out[knob])
        return out


@dataclass
class TrialRecord:
    trial_index: int
    derived_seed: int
    status: str | None = None
    D: int | None = None
    witness_size: int | None = None
    witness: list | None = None
    nodes: int | None = None
    crucial_count: int | None = None
    survived: bool | None = None
    still_dominating: bool | None = None
    analytic_survival: float | None = None
    greedy_size: int | None = None
    alteration_size: int | None = None
    millis: float = field(default=0.0, compare=False)

    def to_dict(self):
        return {k: v for k, v in asdict(self).items() if v is not None and k != "millis"}


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    records: list
    summary: dict
    prediction: dict | None = None
    histogram: dict | None = None
    median: int | None = None

    def to_dict(self):
        return {
            "config": self.config.to_dict(),
            "prediction": self.prediction,
            "records": [r.to_dict() for r in self.records],
            "summary": self.summary,
            "histogram": None if self.histogram is None else {str(k): v for k, v in sorted(self.histogram.items())},
            "median": self.median,
            "software": {"package": "domlab", "version": __version__},
            "paths": {
                "sampling": GnpParams(self.config.n, self.config.p).sampling_path,
                "rng": "philox4x64 keyed by splitmix64(master_seed, trial_index)",
            },
        }

    def to_json(self):
        return json.dumps(_plain(self.to_dict()), indent=2, allow_nan=False) + "\n"

    def to_csv(self):
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.records:
            w.writerow([
                r.trial_index, r.derived_seed, _blank(r.status), _blank(r.D), _blank(r.witness_size),
                _blank(r.crucial_count), _blank(r.survived), f"{r.millis:.3f}",
            ])
        return out.getvalue()


def _blank(v):
    return "" if v is None else v


def _plain(obj):
    """Convert to JSON-safe builtins; non-finite floats become null."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        return obj if math.isfinite(obj) else None
    return obj


def _map(fn, items, threads, chunksize=1):
    if threads is None or threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))


def _chunk(n_items, threads):
    return max(1, n_items // (4 * max(1, threads or 1)))


# -- concentration / talagrand ------------------------------------------------


def _solve_trial(args):
    n, p, master, i, budget = args
    seed = mix(master, i)
    t0 = time.perf_counter()
    g = sample_gnp(GnpParams(n, p), seed)
    res = domination_number_exact(g, time_budget=budget)
    return TrialRecord(
        trial_index=i,
        derived_seed=seed,
        status=res.status,
        D=res.size if res.status == EXACT else None,
        witness_size=res.size,
        witness=res.witness.indices(),
        nodes=res.nodes_explored,
        millis=1000.0 * (time.perf_counter() - t0),
    )


def _solve_all(cfg, threads):
    items = [(cfg.n, cfg.p, cfg.master_seed, i, cfg.solver_budget) for i in range(cfg.trials)]
    return _map(_solve_trial, items, threads, _chunk(len(items), threads))


def _histogram(records):
    hist = {}
    for r in records:
        if r.D is not None:
            hist[r.D] = hist.get(r.D, 0) + 1
    return dict(sorted(hist.items()))


def run_concentration_experiment(cfg, threads=1):
    """Solve D(G) exactly on every trial and compare with the two-point prediction."""
    if cfg.kind != CONCENTRATION:
        raise DomainError(f"expected a concentration config, got {cfg.kind}")
    prediction = predicted_interval(cfg.n, cfg.p)
    records = _solve_all(cfg, threads)
    exact = [r.D for r in records if r.D is not None]
    hist = _histogram(records)
    lo, hi = prediction.interval
    target = DEFAULT_MASS_TARGET if cfg.mass_target is None else cfg.mass_target
    median = statistics.median_low(exact) if exact else None
    on_interval = sum(1 for d in exact if lo <= d <= hi)
    mass = on_interval / len(exact) if exact else None
    summary = {
        "trials": cfg.trials,
        "exact_trials": len(exact),
        "exact_fraction": len(exact) / cfg.trials,
        "timeouts": cfg.trials - len(exact),
        "mass_on_interval": mass,
        "mass_target": target,
        "meets_mass_target": mass is not None and mass >= target,
        "r_hat": prediction.r_hat,
        "trials_at_or_below_r_hat": sum(1 for d in exact if d <= prediction.r_hat),
        "median": median,
        "median_minus_r_hat": None if median is None else median - prediction.r_hat,
        "mean_D": statistics.fmean(exact) if exact else None,
    }
    return ExperimentReport(cfg, records, summary, prediction.to_dict(), hist, median)


def run_talagrand_sanity(cfg, threads=1):
    """Check P(D <= b) P(D >= b + t) against exp(-t^2 / 4(n - b)) on a grid."""
    if cfg.kind != TALAGRAND_SANITY:
        raise DomainError(f"expected a talagrand_sanity config, got {cfg.kind}")
    for b in cfg.b_grid:
        if b >= cfg.n:
            raise DomainError(f"grid value b={b} must be below n={cfg.n}")
    for t in cfg.t_grid:
        if t < 0:
            raise DomainError(f"grid value t={t} must be non-negative")
    slack = DEFAULT_SLACK if cfg.slack is None else cfg.slack
    records = _solve_all(cfg, threads)
    exact = np.array([r.D for r in records if r.D is not None])
    hist = _histogram(records)
    cells = []
    for b in cfg.b_grid:
        for t in cfg.t_grid:
            bound = talagrand_tail_product_bound(cfg.n, b, t)
            if len(exact):
                lower = float(np.mean(exact <= b))
                upper = float(np.mean(exact >= b + t))
            else:
                lower = upper = float("nan")
            product = lower * upper
            cells.append({
                "b": b, "t": t, "p_at_most_b": lower, "p_at_least_b_plus_t": upper,
                "product": product, "bound": bound, "satisfied": bool(product <= bound + slack),
            })
    median = int(statistics.median_low(exact.tolist())) if len(exact) else None
    summary = {
        "trials": cfg.trials,
        "exact_trials": int(len(exact)),
        "timeouts": cfg.trials - int(len(exact)),
        "slack": slack,
        "all_satisfied": bool(len(exact)) and all(c["satisfied"] for c in cells),
        "grid": cells,
    }
    return ExperimentReport(cfg, records, summary, None, hist, median)


# -- deletion ------------------------------------------------------------------


@lru_cache(maxsize=8)
def _graph_and_witness(n, p, seed):
    g = sample_gnp(GnpParams(n, p), seed)
    s = greedy_dominating_set(g)
    return g, s, crucial_set(g, s)


def _deletion_trial(args):
    n, p, master, i, p_del, fixed = args
    seed = mix(master, i)
    t0 = time.perf_counter()
    graph_seed = mix(mix(master, 0), 0) if fixed else mix(seed, 0)
    g, s, crucial = _graph_and_witness(n, p, graph_seed)
    f = delete_edges(g, p_del, mix(seed, 1))
    # a crucial vertex had one edge into s; it survives iff that edge is still there
    survived = (crucial - crucial_set(f, s)).bits == 0
    return TrialRecord(
        trial_index=i,
        derived_seed=seed,
        witness_size=len(s),
        crucial_count=len(crucial),
        survived=bool(survived),
        still_dominating=is_dominating(f, s),
        analytic_survival=survival_probability(len(crucial), p_del),
        millis=1000.0 * (time.perf_counter() - t0),
    )


def run_deletion_experiment(cfg, threads=1):
    """Delete edges with probability x/(n sqrt p) and track survival of the greedy witness."""
    if cfg.kind != DELETION:
        raise DomainError(f"expected a deletion config, got {cfg.kind}")
    p_del = deletion_probability(cfg.n, cfg.p, cfg.x)
    fixed = bool(cfg.fixed_graph)
    items = [(cfg.n, cfg.p, cfg.master_seed, i, p_del, fixed) for i in range(cfg.trials)]
    records = _map(_deletion_trial, items, threads, _chunk(len(items), threads))
    survived = np.array([r.survived for r in records], dtype=float)
    analytic = np.array([r.analytic_survival for r in records])
    freq = float(survived.mean())
    expected = float(analytic.mean())
    # each round is Bernoulli(analytic_i); the frequency has variance sum a(1-a)/N^2
    sigma = float(math.sqrt(np.sum(analytic * (1 - analytic))) / len(records))
    summary = {
        "trials": cfg.trials,
        "p_del": p_del,
        "fixed_graph": fixed,
        "survival_frequency": freq,
        "analytic_survival_mean": expected,
        "sigma": sigma,
        "z_score": (freq - expected) / sigma if sigma > 0 else (0.0 if freq == expected else float("inf")),
        "still_dominating_frequency": float(np.mean([r.still_dominating for r in records])),
        "mean_crucial_count": float(np.mean([r.crucial_count for r in records])),
        "mean_witness_size": float(np.mean([r.witness_size for r in records])),
    }
    return ExperimentReport(cfg, records, summary)


# -- crucial-edge distribution ------------------------------------------------------


def _crucial_attempt(args):
    n, p, r, master, j = args
    seed = mix(master, j)
    t0 = time.perf_counter()
    g = sample_gnp(GnpParams(n, p), seed)
    s = VertexSet(n, (1 << r) - 1)
    if not is_dominating(g, s):
        return None
    return TrialRecord(
        trial_index=j,
        derived_seed=seed,
        crucial_count=len(crucial_set(g, s)),
        millis=1000.0 * (time.perf_counter() - t0),
    )


def _attempt_block(args):
    n, p, r, master, start, stop = args
    return [rec for j in range(start, stop) if (rec := _crucial_attempt((n, p, r, master, j))) is not None]


def run_crucial_distribution_experiment(cfg, threads=1):
    """Rejection-sample graphs in which {0..r-1} dominates and tally crucial vertices.

    ``cfg.trials`` is the number of accepted samples collected; attempts are
    indexed, and the first ``trials`` acceptances in index order are kept.
    """
    if cfg.kind != CRUCIAL_DISTRIBUTION:
        raise DomainError(f"expected a crucial_distribution config, got {cfg.kind}")
    n, p, r = cfg.n, cfg.p, cfg.r
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie strictly between 0 and 1, got {p}")
    accept = math.exp(log_set_dominates(n, p, r))
    if accept < MIN_ACCEPTANCE:
        raise DomainError(
            f"acceptance probability {accept:.3g} below {MIN_ACCEPTANCE:g}; rejection sampling infeasible"
        )
    block = max(256, int(1.2 * cfg.trials / accept / max(1, threads or 1)) // 4)
    accepted = []
    start = 0
    while len(accepted) < cfg.trials:
        workers = max(1, threads or 1)
        items = [(n, p, r, cfg.master_seed, start + k * block, start + (k + 1) * block) for k in range(workers)]
        for chunk in _map(_attempt_block, items, threads):
            accepted.extend(chunk)
        start += workers * block
    accepted = accepted[: cfg.trials]
    attempts = accepted[-1].trial_index + 1

    law = crucial_edge_law(n, p, r)
    counts = np.array([rec.crucial_count for rec in accepted])
    k = n - r
    observed = np.bincount(counts, minlength=k + 1)
    expected = stats.binom.pmf(np.arange(k + 1), k, law.p_star) * len(counts)
    obs_b, exp_b = _pool_bins(observed, expected)
    if len(obs_b) > 1:
        chi = stats.chisquare(obs_b, exp_b * obs_b.sum() / exp_b.sum())
        chi_stat, chi_p, dof = float(chi.statistic), float(chi.pvalue), len(obs_b) - 1
    else:
        chi_stat, chi_p, dof = 0.0, 1.0, 0
    sigma_mean = math.sqrt(k * law.p_star * (1 - law.p_star) / len(counts))
    mean = float(counts.mean())
    summary = {
        "accepted": len(counts),
        "attempts": attempts,
        "acceptance_rate": len(counts) / attempts,
        "analytic_acceptance": accept,
        "p_star": law.p_star,
        "mu": law.mu,
        "mean": mean,
        "variance": float(counts.var(ddof=1)) if len(counts) > 1 else 0.0,
        "analytic_variance": k * law.p_star * (1 - law.p_star),
        "sigma_mean": sigma_mean,
        "z_score": (mean - law.mu) / sigma_mean if sigma_mean > 0 else 0.0,
        "chi_square": chi_stat,
        "chi_square_dof": dof,
        "chi_square_p_value": chi_p,
        "pooled_bins": len(obs_b),
    }
    hist = {int(c): int(v) for c, v in enumerate(observed) if v}
    return ExperimentReport(cfg, accepted, summary, None, hist, None)


def _pool_bins(observed, expected, min_expected=5.0):
    """Merge adjacent bins left to right until every expected count is >= min_expected."""
    obs, exp = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(observed, expected):
        acc_o += o
        acc_e += e
        if acc_e >= min_expected:
            obs.append(acc_o)
            exp.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 or acc_o > 0:
        if obs:
            obs[-1] += acc_o
            exp[-1] += acc_e
        else:
            obs.append(acc_o)
            exp.append(acc_e)
    return np.array(obs), np.array(exp)


# -- alteration ------------------------------------------------------------------------


def _alteration_trial(args):
    n, p, master, i, r = args
    seed = mix(master, i)
    t0 = time.perf_counter()
    g = sample_gnp(GnpParams(n, p), seed)
    alt = alteration_dominating_set(g, r)
    greedy = greedy_dominating_set(g)
    return TrialRecord(
        trial_index=i,
        derived_seed=seed,
        witness_size=len(alt),
        alteration_size=len(alt),
        greedy_size=len(greedy),
        millis=1000.0 * (time.perf_counter() - t0),
    )


def run_alteration_experiment(cfg, threads=1):
    """Size of ``{0..r-1}`` plus its undominated vertices, r = floor(n ln d / d)."""
    if cfg.kind != ALTERATION:
        raise DomainError(f"expected an alteration config, got {cfg.kind}")
    d = cfg.n * cfg.p
    if d <= 1.0:
        raise DomainError(f"alteration needs d = n p > 1, got {d:g}")
    scale = cfg.n * math.log(d) / d
    r = min(cfg.n, int(math.floor(scale)))
    r_hat = critical_r_hat(cfg.n, cfg.p) if cfg.p < 1.0 else 0
    items = [(cfg.n, cfg.p, cfg.master_seed, i, r) for i in range(cfg.trials)]
    records = _map(_alteration_trial, items, threads)
    alt = np.array([rec.alteration_size for rec in records])
    greedy = np.array([rec.greedy_size for rec in records])
    miss = (1.0 - cfg.p) ** r
    summary = {
        "trials": cfg.trials,
        "r": r,
        "scale_n_ln_d_over_d": scale,
        "expected_alteration_size": r + (cfg.n - r) * miss,
        "alteration_ratio_max": float(alt.max() / scale),
        "alteration_ratio_mean": float(alt.mean() / scale),
        "greedy_ratio_mean": float(greedy.mean() / scale),
        "r_hat": r_hat,
        "greedy_at_or_below_r_hat": int(np.sum(greedy <= r_hat)),
        "max_alteration_size": int(alt.max()),
    }
    return ExperimentReport(cfg, records, summary)


RUNNERS = {
    CONCENTRATION: run_concentration_experiment,
    DELETION: run_deletion_experiment,
    CRUCIAL_DISTRIBUTION: run_crucial_distribution_experiment,
    ALTERATION: run_alteration_experiment,
    TALAGRAND_SANITY: run_talagrand_sanity,
}


def run_experiment(cfg, threads=1):
    return RUNNERS[cfg.kind](cfg, threads=threads)


__all__ = [
    "ExperimentConfig", "ExperimentReport", "TrialRecord", "run_experiment",
    "run_concentration_experiment", "run_deletion_experiment",
    "run_crucial_distribution_experiment", "run_alteration_experiment", "run_talagrand_sanity",
]
