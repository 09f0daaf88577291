"""Girth-6 bipartite graph construction.

:func:`bgc_construct` grows a graph edge by edge.  Each visited variable
node gets one new edge per pass: to a check on the third floor of its
subgraph when one exists (closing a 6-cycle), otherwise to a check outside
its first two floors (closing no cycle).  A variable whose first two floors
already cover every check is retired.  The result has no 4-cycles and no
edge can be added without creating one.

:func:`peg_construct` is the progressive edge-growth baseline for uniform
column degrees, and :func:`estimate_regular_degree` the regular-graph degree
estimate used to sanity-check both.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .graph import BipartiteGraph, GraphBuilder, has_four_cycle
from .rng import Stream

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConstructionConfig:
    num_checks: int
    num_vars: int
    seed: int = 0
    balance_checks: bool = False

    def __post_init__(self):
        if self.num_checks < 1 or self.num_vars < 1:
            raise ValueError(
                f"need num_checks >= 1 and num_vars >= 1, got {self.num_checks}, {self.num_vars}"
            )
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass
class ConstructionReport:
    graph: BipartiteGraph
    iterations_used: int
    degree_histogram_vars: dict = field(default_factory=dict)
    degree_histogram_checks: dict = field(default_factory=dict)
    average_var_degree: Fraction = Fraction(0)
    min_var_degree: int = 0
    succeeded: bool = True
    attempts: int = 1

    @classmethod
    def from_graph(cls, graph: BipartiteGraph, iterations_used: int, **kw) -> "ConstructionReport":
        vdeg = graph.var_degrees()
        cdeg = graph.check_degrees()
        return cls(
            graph=graph,
            iterations_used=iterations_used,
            degree_histogram_vars=dict(sorted(Counter(vdeg.tolist()).items())),
            degree_histogram_checks=dict(sorted(Counter(cdeg.tolist()).items())),
            average_var_degree=Fraction(graph.num_edges, graph.num_vars),
            min_var_degree=int(vdeg.min()),
            **kw,
        )


class _GrowthState:
    """Dense working state for BGC: incidence plus column-overlap counts."""

    def __init__(self, m: int, n: int):
        self.m, self.n = m, n
        self.incidence = np.zeros((n, m), dtype=bool)  # variable-major
        self.overlap = np.zeros((n, n), dtype=np.int32)
        self.check_degree = np.zeros(m, dtype=np.int64)

    def floors(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        """Masks of checks on floors 1-2 combined, and on floor 3."""
        near = self.overlap[v] > 0  # v and its floor-1 variables
        if not near.any():
            empty = np.zeros(self.m, dtype=bool)
            return empty, empty
        c12 = self.incidence[near].any(axis=0)
        far_vars = (self.overlap[near] > 0).any(axis=0) & ~near
        c3 = self.incidence[far_vars].any(axis=0) & ~c12
        return c12, c3

    def add_edge(self, v: int, c: int) -> None:
        others = self.incidence[:, c]
        self.overlap[v, others] += 1
        self.overlap[others, v] += 1
        self.overlap[v, v] += 1
        self.incidence[v, c] = True
        self.check_degree[c] += 1

    def to_graph(self) -> BipartiteGraph:
        return BipartiteGraph(
            self.m, self.n, [np.flatnonzero(row).tolist() for row in self.incidence]
        )


def _pick_check(candidates: np.ndarray, state: _GrowthState, stream: Stream, balance: bool) -> int:
    idx = np.flatnonzero(candidates)
    if balance:
        deg = state.check_degree[idx]
        idx = idx[deg == deg.min()]
    return int(idx[stream.below(len(idx))])


def bgc_construct(config: ConstructionConfig) -> ConstructionReport:
    """Build a maximal bipartite graph of girth at least 6.

    Parameters
    ----------
    config : ConstructionConfig
        Matrix size, seed, and whether to prefer low-degree checks among the
        candidates (off by default).

    Returns
    -------
    ConstructionReport
        The graph with degree statistics.  ``iterations_used`` counts the
        passes over the active variable set.

    Notes
    -----
    At most ``m`` passes run.  Each pass visits a snapshot of the active set
    in a freshly shuffled order; variables retired during a pass are not
    revisited.
    """
    m, n = config.num_checks, config.num_vars
    stream = Stream(config.seed)
    state = _GrowthState(m, n)
    active = list(range(n))
    retired = np.zeros(n, dtype=bool)
    iterations = 0
    for _ in range(m):
        if not active:
            break
        iterations += 1
        order = list(active)
        stream.shuffle(order)
        for v in order:
            c12, c3 = state.floors(v)
            if c3.any():
                state.add_edge(v, _pick_check(c3, state, stream, config.balance_checks))
            elif not c12.all():
                state.add_edge(v, _pick_check(~c12, state, stream, config.balance_checks))
            else:
                retired[v] = True
        active = [v for v in active if not retired[v]]
    graph = state.to_graph()
    log.debug("bgc m=%d n=%d seed=%d: %d edges in %d passes", m, n, config.seed,
              graph.num_edges, iterations)
    return ConstructionReport.from_graph(graph, iterations)


class PegFailure(RuntimeError):
    """PEG kept producing a 4-cycle; ``report`` holds the last attempt."""

    def __init__(self, report: ConstructionReport):
        super().__init__(f"girth-4 after {report.attempts} attempts")
        self.report = report


def _peg_candidates(builder: GraphBuilder, v: int) -> set[int]:
    # Expand the tree from v level by level; stop when the reached check set
    # either covers everything at the next level or stops growing, then
    # return the checks not reached at the current level.
    m = builder.num_checks
    reached = set(builder.checks_of(v))
    if not reached:
        return set(range(m))
    seen_vars = {v}
    frontier = set(reached)
    while True:
        next_vars = set()
        for c in frontier:
            next_vars.update(builder.vars_of(c))
        next_vars -= seen_vars
        seen_vars |= next_vars
        new_checks = set()
        for u in next_vars:
            new_checks.update(builder.checks_of(u))
        new_checks -= reached
        if not new_checks or len(reached) + len(new_checks) == m:
            return set(range(m)) - reached
        reached |= new_checks
        frontier = new_checks


def _closes_four_cycle(builder: GraphBuilder, v: int, c: int) -> bool:
    return any(len(builder.checks_of(u) & builder.checks_of(v)) > 0
               for u in builder.vars_of(c) if u != v)


def _peg_attempt(m: int, n: int, degree: int, stream: Stream,
                 abort_on_four_cycle: bool = False) -> BipartiteGraph | None:
    builder = GraphBuilder(m, n)
    check_degree = [0] * m
    for v in range(n):
        for _ in range(degree):
            candidates = sorted(_peg_candidates(builder, v))
            low = min(check_degree[c] for c in candidates)
            lowest = [c for c in candidates if check_degree[c] == low]
            c = stream.pick(lowest)
            if abort_on_four_cycle and _closes_four_cycle(builder, v, c):
                return None
            builder.add_edge(v, c)
            check_degree[c] += 1
    return builder.freeze()


def peg_construct(config: ConstructionConfig, uniform_degree: int, max_retries: int = 1000,
                  raise_on_failure: bool = False) -> ConstructionReport:
    """Progressive edge-growth with every column of degree ``uniform_degree``.

    Variables are processed in index order.  Each attempt is checked for
    4-cycles and retried on a fresh random stream, up to ``max_retries``
    extra attempts.  On failure the last attempt is returned with
    ``succeeded=False`` (or raised as :class:`PegFailure` if
    ``raise_on_failure``).
    """
    m, n = config.num_checks, config.num_vars
    if not 1 <= uniform_degree <= m:
        raise ValueError(f"uniform_degree must be in [1, {m}], got {uniform_degree}")
    if max_retries < 0:
        raise ValueError("max_retries must be non-negative")
    graph = None
    for attempt in range(max_retries + 1):
        # doomed attempts stop early, except the last, which is returned on failure
        last = attempt == max_retries
        graph = _peg_attempt(m, n, uniform_degree, Stream(config.seed, attempt),
                             abort_on_four_cycle=not last)
        if graph is not None and not has_four_cycle(graph).has_four_cycle:
            return ConstructionReport.from_graph(graph, uniform_degree, attempts=attempt + 1)
    report = ConstructionReport.from_graph(graph, uniform_degree, succeeded=False,
                                           attempts=max_retries + 1)
    if raise_on_failure:
        raise PegFailure(report)
    return report


def best_peg_degree(config: ConstructionConfig, max_retries: int = 1000,
                    start: int = 1) -> tuple[int, ConstructionReport | None]:
    """Largest uniform degree, scanning upward from ``start``, that PEG achieves."""
    best, best_report = 0, None
    for d in range(start, config.num_checks + 1):
        report = peg_construct(config, d, max_retries)
        if not report.succeeded:
            break
        best, best_report = d, report
    return best, best_report


def regular_degree_residual(d: float, m: int, n: int) -> float:
    """``f(d) - m`` with ``f(d) = d + d (d n / m - 1)(d - 1)``."""
    return d + d * (d * n / m - 1.0) * (d - 1.0) - m


def estimate_regular_degree(m: int, n: int) -> tuple[float, int]:
    """Uniform column degree of an ideal regular girth-6 saturated graph.

    Counts the checks covered by one variable's first two floors when every
    column has degree ``d`` and every row degree ``d n / m``, and solves
    ``d + d (d n / m - 1)(d - 1) = m``.

    Returns
    -------
    d_real : float
        Largest real root of the cubic (at least 1).
    d_int : int
        Positive integer minimizing ``|f(d) - m|``, ties toward the smaller.
    """
    if m < 1 or n < 1:
        raise ValueError(f"m and n must be positive, got {m}, {n}")
    if m == 1:
        return 1.0, 1
    a = n / m
    # a d^3 - (a + 1) d^2 + 2 d - m = 0
    roots = np.roots([a, -(a + 1.0), 2.0, -float(m)])
    real = [r.real for r in roots if abs(r.imag) < 1e-7 and r.real >= 1.0]
    d = max(real)
    # polish by bisection on a bracket around the root; f is increasing there
    lo, hi = max(1.0, d - 1e-3), d + 1e-3
    while regular_degree_residual(lo, m, n) > 0:
        lo = max(1.0, lo - 1e-2)
    while regular_degree_residual(hi, m, n) < 0:
        hi += 1e-2
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if regular_degree_residual(mid, m, n) < 0:
            lo = mid
        else:
            hi = mid
    d_real = 0.5 * (lo + hi)

    best_d, best_err = 1, abs(regular_degree_residual(1, m, n))
    d_try = 2
    while d_try <= m:
        err = abs(regular_degree_residual(d_try, m, n))
        if err < best_err:
            best_d, best_err = d_try, err
        if regular_degree_residual(d_try, m, n) > 0 and d_try > d_real:
            break
        d_try += 1
    return d_real, best_d
