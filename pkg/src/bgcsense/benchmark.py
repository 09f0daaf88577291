"""Phase-transition experiments for l1 decoding.

For each ensemble and undersampling ratio ``delta = m / n`` the sparsity
``k`` is scanned upward, estimating the fraction of trials in which basis
pursuit recovers the planted signal.  The transition point ``k_star`` is the
largest scanned ``k`` whose success rate exceeds the bar.

Seeds are positional: the BGC graph for a given ``m`` comes from
``(master_seed, 0, m)``, and trial ``t`` at ``(m, k)`` draws its signal and
matrix randomness from ``(point_seed, t, ...)`` with
``point_seed = derive((master_seed, 1, m, k))``.  Every ensemble therefore
sees the same signals, and results do not depend on execution order.
"""
from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .construct import ConstructionConfig, bgc_construct
from .graph import BipartiteGraph
from .matrix import realize_binary, realize_ternary_from
from .recovery import OPTIMAL, SIGNINGS, Tolerances, basis_pursuit, generate_signal
from .rng import Stream, derive_seed

log = logging.getLogger(__name__)

ENSEMBLES = ("bgc-binary", "bgc-ternary", "gaussian")


def delta_grid(start: float, stop: float, steps: int) -> tuple[float, ...]:
    """``steps`` equal steps from ``start`` to ``stop`` (``steps + 1`` values)."""
    return tuple(round(float(d), 12) for d in np.linspace(start, stop, steps + 1))


@dataclass(frozen=True)
class BenchmarkPlan:
    n: int = 100
    delta_grid: tuple = delta_grid(0.1, 1.0, 9)
    trials_per_point: int = 200
    ensembles: tuple = ENSEMBLES
    signing: str = "signed"
    success_threshold: float = 1e-4
    success_rate_bar: float = 0.99
    master_seed: int = 0
    normalize_columns: bool = False
    hysteresis: int = 2
    k_max: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "delta_grid", tuple(float(d) for d in self.delta_grid))
        object.__setattr__(self, "ensembles", tuple(self.ensembles))
        if self.n < 1:
            raise ValueError("n must be positive")
        if not self.delta_grid:
            raise ValueError("delta grid is empty")
        if any(not 0 < d <= 1 for d in self.delta_grid):
            raise ValueError(f"delta values must lie in (0, 1], got {self.delta_grid}")
        if any(b <= a for a, b in zip(self.delta_grid, self.delta_grid[1:])):
            raise ValueError("delta values must be strictly increasing")
        if any(m < 1 for m in self.rows()):
            raise ValueError(f"some delta gives m < 1 at n={self.n}")
        if self.trials_per_point < 1:
            raise ValueError("trials_per_point must be at least 1")
        unknown = set(self.ensembles) - set(ENSEMBLES)
        if unknown or not self.ensembles:
            raise ValueError(f"unknown ensembles {sorted(unknown)}")
        if self.signing not in SIGNINGS:
            raise ValueError(f"signing must be one of {SIGNINGS}")
        if not 0 < self.success_rate_bar < 1:
            raise ValueError("success_rate_bar must lie in (0, 1)")
        if self.hysteresis < 0:
            raise ValueError("hysteresis must be non-negative")

    def rows(self) -> list[int]:
        return [int(round(d * self.n)) for d in self.delta_grid]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["delta_grid"] = list(self.delta_grid)
        d["ensembles"] = list(self.ensembles)
        d["m_values"] = self.rows()
        return d


@dataclass(frozen=True)
class PointResult:
    ensemble: str
    delta: float
    m: int
    k: int
    trials: int
    successes: int

    @property
    def rate(self) -> float:
        return self.successes / self.trials


@dataclass
class PhaseTransitionResult:
    plan: BenchmarkPlan
    points: list = field(default_factory=list)
    k_star: dict = field(default_factory=dict)  # (ensemble, delta) -> int

    def rate(self, ensemble: str, delta: float, k: int) -> Optional[float]:
        for p in self.points:
            if p.ensemble == ensemble and p.delta == delta and p.k == k:
                return p.rate
        return None

    def curve(self, ensemble: str) -> list[tuple[float, int]]:
        return [(d, self.k_star[(ensemble, d)]) for d in self.plan.delta_grid
                if (ensemble, d) in self.k_star]


@lru_cache(maxsize=64)
def _bgc_graph(m: int, n: int, seed: int) -> BipartiteGraph:
    return bgc_construct(ConstructionConfig(m, n, seed)).graph


def graph_seed_for(master_seed: int, m: int) -> int:
    return derive_seed(master_seed, 0, m)


def point_seed_for(master_seed: int, m: int, k: int) -> int:
    return derive_seed(master_seed, 1, m, k)


def _trial_matrix(ensemble: str, m: int, n: int, graph: Optional[BipartiteGraph],
                  stream: Stream) -> np.ndarray:
    if ensemble == "bgc-binary":
        return realize_binary(graph).entries
    if ensemble == "bgc-ternary":
        return realize_ternary_from(graph, stream).entries
    return stream.normal((m, n))


def run_point(ensemble: str, m: int, n: int, k: int, signing: str, trials: int, seed: int,
              threshold: float = 1e-4, normalize_columns: bool = False,
              graph_seed: Optional[int] = None,
              tolerances: Tolerances = Tolerances()) -> int:
    """Number of trials in which basis pursuit recovers a ``k``-sparse signal.

    The BGC graph (for the ``bgc-*`` ensembles) is built once from
    ``graph_seed`` (default ``seed``) and reused across trials; ternary signs,
    Gaussian draws and signals are fresh per trial.  A trial succeeds when
    the relative l2 error is below ``threshold``; solver failures count as
    unsuccessful trials.
    """
    if ensemble not in ENSEMBLES:
        raise ValueError(f"unknown ensemble {ensemble!r}")
    if m < 1 or not 0 <= k <= n:
        raise ValueError(f"bad point m={m}, k={k}, n={n}")
    if k == 0:
        return trials
    graph = None
    if ensemble.startswith("bgc"):
        graph = _bgc_graph(m, n, seed if graph_seed is None else graph_seed)
    successes = 0
    for t in range(trials):
        x = generate_signal(n, k, signing, stream=Stream(seed, t, 0)).dense()
        a = _trial_matrix(ensemble, m, n, graph, Stream(seed, t, 1))
        if normalize_columns:
            a = a / np.linalg.norm(a, axis=0)
        out = basis_pursuit(a, a @ x, tolerances).score(x)
        if out.status != OPTIMAL:
            log.info("%s m=%d k=%d trial %d: solver status %s", ensemble, m, k, t, out.status)
        if out.relative_error < threshold:
            successes += 1
    return successes


def _scan_series(plan: BenchmarkPlan, ensemble: str, delta: float, m: int) -> tuple[list, int]:
    points, k_star, misses = [], 0, 0
    k_max = min(plan.n, plan.k_max if plan.k_max is not None else plan.n)
    graph_seed = graph_seed_for(plan.master_seed, m)
    for k in range(1, k_max + 1):
        succ = run_point(ensemble, m, plan.n, k, plan.signing, plan.trials_per_point,
                         point_seed_for(plan.master_seed, m, k), plan.success_threshold,
                         plan.normalize_columns, graph_seed=graph_seed)
        point = PointResult(ensemble, delta, m, k, plan.trials_per_point, succ)
        points.append(point)
        if point.rate > plan.success_rate_bar:
            k_star, misses = k, 0
        else:
            misses += 1
            if misses > plan.hysteresis:
                break
    log.info("%s delta=%g m=%d: k_star=%d", ensemble, delta, m, k_star)
    return points, k_star


def _scan_task(args):
    return _scan_series(*args)


def run_plan(plan: BenchmarkPlan, sink: Optional[Callable[[PointResult], None]] = None,
             workers: int = 1) -> PhaseTransitionResult:
    """Scan every (ensemble, delta) series of ``plan``.

    ``sink`` receives each point in plan order as its series completes.
    With ``workers > 1`` series run in separate processes; results are
    identical to a sequential run.
    """
    tasks = [(plan, e, d, m) for e in plan.ensembles for d, m in zip(plan.delta_grid, plan.rows())]
    result = PhaseTransitionResult(plan)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = pool.map(_scan_task, tasks)
            _collect(result, tasks, outputs, sink)
    else:
        _collect(result, tasks, map(_scan_task, tasks), sink)
    return result


def _collect(result, tasks, outputs, sink):
    for (_, ensemble, delta, _), (points, k_star) in zip(tasks, outputs):
        for p in points:
            result.points.append(p)
            if sink is not None:
                sink(p)
        result.k_star[(ensemble, delta)] = k_star


POINT_COLUMNS = ("ensemble", "delta", "m", "k", "trials", "successes", "rate")
SUMMARY_COLUMNS = ("ensemble", "delta", "k_star")


def _fmt_delta(d: float) -> str:
    return format(d, ".12g")


def point_row(p: PointResult) -> list:
    return [p.ensemble, _fmt_delta(p.delta), p.m, p.k, p.trials, p.successes,
            format(p.rate, ".6g")]


class CsvSink:
    """Streams point rows to a CSV file, headed by an optional manifest line."""

    def __init__(self, fh, manifest: Optional[dict] = None):
        self._fh = fh
        if manifest is not None:
            fh.write("# manifest: " + json.dumps(manifest, sort_keys=True,
                                                  separators=(",", ":")) + "\n")
        self._writer = csv.writer(fh, lineterminator="\n")
        self._writer.writerow(POINT_COLUMNS)

    def __call__(self, point: PointResult) -> None:
        self._writer.writerow(point_row(point))
        self._fh.flush()


def summary_csv(result: PhaseTransitionResult, manifest: Optional[dict] = None) -> str:
    buf = io.StringIO()
    if manifest is not None:
        buf.write("# manifest: " + json.dumps(manifest, sort_keys=True, separators=(",", ":")) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for e in result.plan.ensembles:
        for d in result.plan.delta_grid:
            w.writerow([e, _fmt_delta(d), result.k_star[(e, d)]])
    return buf.getvalue()


def points_csv(result: PhaseTransitionResult, manifest: Optional[dict] = None) -> str:
    buf = io.StringIO()
    sink = CsvSink(buf, manifest)
    for p in result.points:
        sink(p)
    return buf.getvalue()


def result_json(result: PhaseTransitionResult, manifest: Optional[dict] = None) -> str:
    doc = {
        "manifest": manifest,
        "plan": result.plan.to_dict(),
        "points": [dict(zip(POINT_COLUMNS, point_row(p))) for p in result.points],
        "summary": [
            {"ensemble": e, "delta": _fmt_delta(d), "k_star": result.k_star[(e, d)]}
            for e in result.plan.ensembles for d in result.plan.delta_grid
        ],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def read_points_csv(text: str) -> list[PointResult]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = list(csv.DictReader(lines))
    return [PointResult(r["ensemble"], float(r["delta"]), int(r["m"]), int(r["k"]),
                        int(r["trials"]), int(r["successes"])) for r in rows]


def ordering_holds(values: Sequence[int]) -> bool:
    """Whether ``values`` is non-increasing (ties allowed)."""
    return all(a >= b for a, b in zip(values, values[1:]))
