"""Probing the unit lower-bound conjecture over curve space.

The ground-state energy is minimized over Fourier coefficient vectors with
derivative-free methods; convexity is enforced through a penalty (the
feasible set is star-shaped around the circle but not box-shaped, so
projection would bias the search).  Any minimizer iterate that dips below 1
is treated as an extraordinary claim: it is re-solved on a much finer grid
with both discretizations, a full inequality report is attached, and the
evidence is written to a quarantine directory.
"""

from __future__ import annotations

import enum
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .curve import CurveSpec, Harmonic, _min_slope, build_curve, split_fg
from .errors import BudgetExceeded
from .spectral import Scheme, assemble, converge_lambda, ground_state, solve_ground_state
from . import analysis

#: an extrapolated eigenvalue below 1 - this margin triggers quarantine
QUARANTINE_MARGIN = 1e-5


class SearchMethod(enum.Enum):
    NELDER_MEAD = "NelderMead"
    COORDINATE_PATTERN = "CoordinatePattern"


@dataclass(frozen=True)
class SearchConfig:
    max_n: int = 7
    convexity_floor: float = 0.05
    restarts: int = 4
    seed: int = 0
    method: SearchMethod = SearchMethod.NELDER_MEAD
    eval_tol: float = 1e-8
    budget: int = 400
    start: Optional[CurveSpec] = None

    def __post_init__(self):
        if self.max_n < 2:
            raise ValueError("max_n must be at least 2")
        if self.budget < self.restarts:
            raise ValueError("budget must be at least the number of restarts")
        if not 0.0 < self.convexity_floor < 1.0:
            raise ValueError("convexity_floor must lie in (0, 1)")
        if self.eval_tol < 1e-10:
            raise ValueError("eval_tol must be at least 1e-10")

    @staticmethod
    def from_json_dict(doc: dict) -> "SearchConfig":
        known = {
            "max_n",
            "convexity_floor",
            "restarts",
            "seed",
            "method",
            "eval_tol",
            "budget",
            "start",
        }
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        kwargs = {k: doc[k] for k in doc if k not in ("method", "start")}
        if "method" in doc:
            kwargs["method"] = SearchMethod(doc["method"])
        if doc.get("start") is not None:
            kwargs["start"] = build_curve(doc["start"])
        return SearchConfig(**kwargs)

    def to_json_dict(self) -> dict:
        return {
            "max_n": self.max_n,
            "convexity_floor": self.convexity_floor,
            "restarts": self.restarts,
            "seed": self.seed,
            "method": self.method.value,
            "eval_tol": self.eval_tol,
            "budget": self.budget,
            "start": None
            if self.start is None
            else [{"n": h.n, "a": h.a, "b": h.b} for h in self.start.harmonics],
        }


@dataclass(frozen=True)
class SearchRecord:
    best_spec: CurveSpec
    best_lambda: float
    trace: tuple
    boundary_hits: int
    theorem2_applicable_at_best: bool
    n_lambda_evals: int
    anomalies: int
    quarantined: bool = False
    quarantine_verified: bool = False

    def to_json_dict(self) -> dict:
        return {
            "best_spec": {
                "harmonics": [{"n": h.n, "a": h.a, "b": h.b} for h in self.best_spec.harmonics]
            },
            "best_lambda": self.best_lambda,
            "trace": [[i, lam] for i, lam in self.trace],
            "boundary_hits": self.boundary_hits,
            "theorem2_applicable_at_best": self.theorem2_applicable_at_best,
            "n_lambda_evals": self.n_lambda_evals,
            "anomalies": self.anomalies,
            "quarantined": self.quarantined,
            "quarantine_verified": self.quarantine_verified,
        }


def random_curve(seed: int, max_n: int = 7, convexity_floor: float = 0.05) -> CurveSpec:
    """Deterministic random admissible curve.

    Coefficient variances decay as n^-3 to keep curves smooth; if the raw
    draw is not convex enough, the whole perturbation is shrunk linearly
    toward the circle until the slope clears the floor (always possible).
    """
    rng = np.random.default_rng(seed)
    ns = np.arange(2, max_n + 1)
    sigma = 0.35 * ns.astype(float) ** -1.5
    a = rng.normal(0.0, sigma)
    b = rng.normal(0.0, sigma)
    raw = CurveSpec(
        harmonics=tuple(Harmonic(int(n), float(av), float(bv)) for n, av, bv in zip(ns, a, b)),
        max_n=int(ns[-1]),
        min_slope=0.0,
    )
    m = _min_slope(raw, raw.max_n)
    if m <= convexity_floor:
        scale = 0.999 * (1.0 - convexity_floor) / (1.0 - m)
        a *= scale
        b *= scale
    return build_curve(
        [(int(n), float(av), float(bv)) for n, av, bv in zip(ns, a, b)],
        convexity_floor=min(convexity_floor * 0.5, 1e-6),
    )


class _BudgetUp(Exception):
    pass


class _Objective:
    """Penalized eigenvalue objective over the coefficient vector.

    Infeasible points never reach the spectral solver; they pay a penalty
    above any attainable eigenvalue plus their distance to feasibility.
    Feasible evaluations run at a fixed moderate grid and are budgeted.
    """

    def __init__(self, max_n: int, floor: float, budget: int, eval_n: int = 1024):
        self.max_n = max_n
        self.floor = floor
        self.budget = budget
        self.eval_n = eval_n
        self.penalty_base = 1.0 / (floor * floor) + 1.0
        self.spent = 0
        self.boundary_hits = 0
        self.anomalies = 0
        self.trace: list = []
        self.best_lambda = np.inf
        self.best_theta: Optional[np.ndarray] = None
        self._floor_const = analysis.theorem1_constant() - 1e-5

    def harmonics_of(self, theta: np.ndarray):
        hs = (
            Harmonic(n, float(theta[2 * (n - 2)]), float(theta[2 * (n - 2) + 1]))
            for n in range(2, self.max_n + 1)
        )
        return tuple(h for h in hs if h.a != 0.0 or h.b != 0.0)

    def evaluate(self, theta: np.ndarray, free: bool = False) -> float:
        hs = self.harmonics_of(theta)
        raw = CurveSpec(harmonics=hs, max_n=self.max_n, min_slope=0.0)
        m = _min_slope(raw, self.max_n)
        if m <= self.floor:
            self.boundary_hits += 1
            return self.penalty_base + (self.floor - m)
        if not free:
            if self.spent >= self.budget:
                raise _BudgetUp()
            self.spent += 1
        spec = build_curve(hs)
        lam = ground_state(assemble(spec, self.eval_n, Scheme.CENTRAL_DIFFERENCE_2)).lam
        if lam < self._floor_const:
            # a value below the proven floor signals solver trouble, not a
            # discovery: re-check once on the doubled grid
            lam = ground_state(
                assemble(spec, 2 * self.eval_n, Scheme.CENTRAL_DIFFERENCE_2)
            ).lam
            if lam < self._floor_const:
                self.anomalies += 1
        self.trace.append((len(self.trace), float(lam)))
        if lam < self.best_lambda:
            self.best_lambda = float(lam)
            self.best_theta = np.array(theta, dtype=float)
        return float(lam)

    def __call__(self, theta: np.ndarray) -> float:
        return self.evaluate(theta)


def _pattern_search(obj: _Objective, x0: np.ndarray, step: float) -> None:
    x = np.array(x0, dtype=float)
    fx = obj(x)
    while step > 1e-6:
        improved = False
        for i in range(x.size):
            for sgn in (1.0, -1.0):
                cand = x.copy()
                cand[i] += sgn * step
                fc = obj(cand)
                if fc < fx - 1e-14:
                    x, fx = cand, fc
                    improved = True
                    break
            if improved:
                break
        if not improved:
            step *= 0.5


def minimize_lambda(config: SearchConfig, candidates_dir="candidates") -> SearchRecord:
    """Derivative-free minimization of the ground-state energy.

    Restart 0 begins at ``config.start`` (the circle by default); restart r
    begins at ``random_curve(seed ^ r)``.  All restarts share the evaluation
    budget; each start point itself is evaluated outside the budget so a
    zero-budget run still reports the start.  The best curve is re-verified
    with the convergence ladder, and any verified value below 1 is
    quarantined.
    """
    dim = 2 * (config.max_n - 1)
    obj = _Objective(config.max_n, config.convexity_floor, config.budget)

    def theta_of(spec: CurveSpec) -> np.ndarray:
        theta = np.zeros(dim)
        for h in spec.harmonics:
            theta[2 * (h.n - 2)] = h.a
            theta[2 * (h.n - 2) + 1] = h.b
        return theta

    start0 = config.start if config.start is not None else build_curve([])
    for r in range(max(1, config.restarts)):
        if r == 0:
            x0 = theta_of(start0)
        else:
            x0 = theta_of(
                random_curve(config.seed ^ r, config.max_n, config.convexity_floor)
            )
        obj.evaluate(x0, free=True)
        if obj.spent >= config.budget:
            continue
        scale = 0.12 * 0.75 ** r
        try:
            if config.method is SearchMethod.NELDER_MEAD:
                simplex = np.vstack([x0] + [x0 + scale * e for e in np.eye(dim)])
                minimize(
                    obj,
                    x0,
                    method="Nelder-Mead",
                    options={
                        "initial_simplex": simplex,
                        "xatol": 1e-7,
                        "fatol": max(config.eval_tol, 1e-10),
                        "maxfev": 10 * config.budget + 100,
                    },
                )
            else:
                _pattern_search(obj, x0, scale)
        except _BudgetUp:
            pass

    best_theta = obj.best_theta if obj.best_theta is not None else theta_of(start0)
    best_spec = build_curve(obj.harmonics_of(best_theta))
    try:
        final = converge_lambda(best_spec, config.eval_tol, Scheme.FOURIER_COLLOCATION)
        best_lambda = float(final.best)
    except BudgetExceeded as exc:
        exc.record = _make_record(best_spec, obj.best_lambda, obj)
        raise
    record = _make_record(best_spec, best_lambda, obj)

    if best_lambda < 1.0 - QUARANTINE_MARGIN:
        record = _quarantine(record, config, candidates_dir)
    return record


def _make_record(best_spec: CurveSpec, best_lambda: float, obj: _Objective) -> SearchRecord:
    cas = analysis.critical_angles(split_fg(best_spec))
    return SearchRecord(
        best_spec=best_spec,
        best_lambda=float(best_lambda),
        trace=tuple(obj.trace),
        boundary_hits=obj.boundary_hits,
        theorem2_applicable_at_best=analysis.theorem2_applicable(cas),
        n_lambda_evals=obj.spent,
        anomalies=obj.anomalies,
    )


def _quarantine(record: SearchRecord, config: SearchConfig, candidates_dir) -> SearchRecord:
    """Strongest-available re-check of a sub-1 candidate, persisted to disk."""
    spec = record.best_spec
    cd2_half = solve_ground_state(spec, 4096, Scheme.CENTRAL_DIFFERENCE_2).lam
    cd2_fine = solve_ground_state(spec, 8192, Scheme.CENTRAL_DIFFERENCE_2).lam
    cd2_extrap = (4.0 * cd2_fine - cd2_half) / 3.0
    colloc = solve_ground_state(spec, 8192, Scheme.FOURIER_COLLOCATION).lam
    report = analysis.full_report(spec)
    verified = (
        cd2_extrap < 1.0 - QUARANTINE_MARGIN and colloc < 1.0 - QUARANTINE_MARGIN
    )
    out = replace(record, quarantined=True, quarantine_verified=bool(verified))
    path = Path(candidates_dir)
    path.mkdir(parents=True, exist_ok=True)
    doc = {
        "record": out.to_json_dict(),
        "cd2_extrapolated_8192": cd2_extrap,
        "collocation_8192": colloc,
        "report": report.to_json_dict(),
        "config": config.to_json_dict(),
    }
    fname = path / f"candidate_seed{config.seed}_lam{record.best_lambda:.9f}.json"
    with open(fname, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
    return out


def _worker_count(n_tasks: int) -> int:
    env = os.environ.get("OVALSPEC_THREADS")
    if env:
        cap = max(1, int(env))
    else:
        cap = min(4, os.cpu_count() or 1)
    return max(1, min(cap, n_tasks))


_HIST_EDGES = np.round(np.arange(0.60, 2.0001, 0.05), 10)


def frontier_scan(
    config: SearchConfig,
    count: int,
    records_path=None,
    summary_path=None,
    candidates_dir="candidates",
):
    """Run ``count`` independent minimizations and merge their records.

    Run i uses seed ``config.seed + i``.  Runs execute on a thread pool
    capped by OVALSPEC_THREADS and are merged in index order, so results do
    not depend on scheduling.  Returns ``(summary, records)``; records and
    the summary are additionally written as JSON lines / JSON when paths are
    given.
    """
    if count < 1:
        raise ValueError("count must be at least 1")

    def one(i: int) -> SearchRecord:
        return minimize_lambda(replace(config, seed=config.seed + i), candidates_dir)

    workers = _worker_count(count)
    if workers == 1:
        records = [one(i) for i in range(count)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(one, range(count)))

    lams = np.array([r.best_lambda for r in records])
    clipped = np.clip(lams, _HIST_EDGES[0], _HIST_EDGES[-1])
    counts, edges = np.histogram(clipped, bins=_HIST_EDGES)
    violations = sum(
        1
        for r in records
        if r.theorem2_applicable_at_best and r.best_lambda < 1.0 - QUARANTINE_MARGIN
    )
    summary = {
        "count": count,
        "min_lambda": float(lams.min()),
        "max_lambda": float(lams.max()),
        "histogram": {"edges": [float(e) for e in edges], "counts": [int(c) for c in counts]},
        "fraction_gap_above_half_pi": float(
            sum(1 for r in records if not r.theorem2_applicable_at_best) / count
        ),
        "theorem2_violations": int(violations),
        "quarantined": int(sum(1 for r in records if r.quarantined)),
        "quarantine_verified": int(sum(1 for r in records if r.quarantine_verified)),
    }
    if records_path is not None:
        with open(records_path, "w", encoding="utf-8") as fh:
            for r in records:
                fh.write(json.dumps(r.to_json_dict()) + "\n")
    if summary_path is not None:
        with open(summary_path, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=1)
            fh.write("\n")
    return summary, records
