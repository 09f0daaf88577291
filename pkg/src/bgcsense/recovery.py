"""Sparse test signals and l1-minimization decoding.

:func:`basis_pursuit` solves ``min ||x||_1  s.t.  A x = y`` as a linear
program over the split ``x = u - v`` with ``u, v >= 0``.  The LP itself is
handed to HiGHS (dual simplex); the returned vertex is then polished by a
least-squares solve on its support and checked against the feasibility
tolerance.  :func:`brute_force_l1` is an independent exhaustive oracle for
tiny instances.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from .matrix import SensingMatrix, ZeroColumnError
from .rng import Stream

SIGNINGS = ("signed", "unsigned")

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
ITERATION_LIMIT = "iteration-limit"
NUMERICAL = "numerical-error"


@dataclass(frozen=True)
class SparseSignal:
    n: int
    support: tuple[int, ...]
    values: tuple[float, ...]
    signing: str

    @property
    def k(self) -> int:
        return len(self.support)

    def dense(self) -> np.ndarray:
        x = np.zeros(self.n)
        x[list(self.support)] = self.values
        return x


def generate_signal(n: int, k: int, signing: str = "signed", seed: int = 0,
                    stream: Optional[Stream] = None) -> SparseSignal:
    """A ``k``-sparse vector of length ``n`` with unit-magnitude nonzeros.

    ``signing="signed"`` draws each nonzero from {-1, +1} with equal
    probability, ``"unsigned"`` sets them all to +1.  The support is uniform
    without replacement.  Pass ``stream`` to draw from an existing stream
    instead of ``Stream(seed)``.
    """
    if signing not in SIGNINGS:
        raise ValueError(f"signing must be one of {SIGNINGS}, got {signing!r}")
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    stream = stream if stream is not None else Stream(seed)
    support = sorted(stream.sample(n, k))
    if signing == "signed":
        values = tuple(stream.signs(k).tolist())
    else:
        values = (1.0,) * k
    return SparseSignal(n, tuple(support), values, signing)


@dataclass(frozen=True)
class Tolerances:
    feas_tol: float = 1e-8
    opt_tol: float = 1e-8
    max_iter: int = 100_000


@dataclass
class RecoveryOutcome:
    estimate: np.ndarray
    residual: float
    status: str
    objective: float
    relative_error: Optional[float] = None

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL

    def score(self, truth) -> "RecoveryOutcome":
        """Fill ``relative_error`` against the planted signal."""
        x = truth.dense() if isinstance(truth, SparseSignal) else np.asarray(truth, dtype=float)
        denom = np.linalg.norm(x)
        err = np.linalg.norm(self.estimate - x)
        self.relative_error = float(err / denom) if denom > 0 else float(err)
        return self


def _as_array(matrix) -> np.ndarray:
    if isinstance(matrix, SensingMatrix):
        return matrix.entries
    return np.asarray(matrix, dtype=np.float64)


def _check_problem(a: np.ndarray, y: np.ndarray) -> None:
    if a.ndim != 2:
        raise ValueError("matrix must be two-dimensional")
    if y.shape != (a.shape[0],):
        raise ValueError(f"y has shape {y.shape}, expected ({a.shape[0]},)")
    zero = np.flatnonzero(~a.any(axis=0))
    if zero.size:
        raise ZeroColumnError(int(zero[0]))


def _polish(a: np.ndarray, y: np.ndarray, x: np.ndarray) -> np.ndarray:
    scale = max(1.0, float(np.abs(x).max(initial=0.0)))
    support = np.flatnonzero(np.abs(x) > 1e-9 * scale)
    out = np.zeros_like(x)
    if support.size == 0:
        return out
    sub = a[:, support]
    if support.size > a.shape[0] or np.linalg.matrix_rank(sub) < support.size:
        return x
    out[support] = np.linalg.lstsq(sub, y, rcond=None)[0]
    return out


def basis_pursuit(matrix, y, tolerances: Tolerances = Tolerances()) -> RecoveryOutcome:
    """Minimum-l1 solution of ``A x = y``.

    Parameters
    ----------
    matrix : SensingMatrix or array_like
        ``m x n`` sensing matrix without all-zero columns.
    y : array_like
        Observation of length ``m``.
    tolerances : Tolerances
        ``feas_tol`` bounds ``||A x - y||_inf`` for an optimal outcome;
        ``opt_tol`` is passed to the solver as its optimality tolerance.

    Returns
    -------
    RecoveryOutcome
        ``status`` is ``"optimal"``, ``"infeasible"``, ``"iteration-limit"``
        or ``"numerical-error"``; the estimate is the best iterate available.
    """
    a = _as_array(matrix)
    y = np.asarray(y, dtype=np.float64)
    _check_problem(a, y)
    m, n = a.shape
    if not y.any():
        return RecoveryOutcome(np.zeros(n), 0.0, OPTIMAL, 0.0)
    res = linprog(
        np.ones(2 * n),
        A_eq=np.hstack([a, -a]),
        b_eq=y,
        bounds=(0, None),
        method="highs-ds",
        options={
            "primal_feasibility_tolerance": min(1e-10, tolerances.feas_tol),
            "dual_feasibility_tolerance": min(1e-10, tolerances.opt_tol),
            "maxiter": tolerances.max_iter,
            "presolve": True,
        },
    )
    if res.status == 2:
        return RecoveryOutcome(np.zeros(n), float("inf"), INFEASIBLE, float("inf"))
    if res.x is None:
        status = ITERATION_LIMIT if res.status == 1 else NUMERICAL
        return RecoveryOutcome(np.zeros(n), float("inf"), status, float("inf"))
    x = res.x[:n] - res.x[n:]
    polished = _polish(a, y, x)
    if np.abs(polished).sum() <= np.abs(x).sum() * (1 + tolerances.opt_tol) + tolerances.opt_tol:
        x = polished
    residual = float(np.abs(a @ x - y).max())
    if res.status == 1:
        status = ITERATION_LIMIT
    elif res.status != 0 or residual > tolerances.feas_tol:
        status = NUMERICAL
    else:
        status = OPTIMAL
    return RecoveryOutcome(x, residual, status, float(np.abs(x).sum()))


def brute_force_l1(matrix, y, tol: float = 1e-9, max_n: int = 14) -> RecoveryOutcome:
    """Exhaustive minimum-l1 solution for tiny systems.

    Every set of linearly independent columns of size at most ``m`` is
    tried; the least-squares solution on each is kept when it satisfies
    ``A x = y`` to ``tol`` (relative to ``1 + ||y||_inf``).  Some optimum of
    the LP lies on such a support, so the minimum over them is the l1
    optimum.
    """
    a = _as_array(matrix)
    y = np.asarray(y, dtype=np.float64)
    _check_problem(a, y)
    m, n = a.shape
    if n > max_n:
        raise ValueError(f"brute force refused for n={n} > {max_n}")
    slack = tol * (1.0 + float(np.abs(y).max(initial=0.0)))
    best_x, best_val = None, float("inf")
    if not y.any():
        return RecoveryOutcome(np.zeros(n), 0.0, OPTIMAL, 0.0)
    for size in range(1, min(m, n) + 1):
        for cols in itertools.combinations(range(n), size):
            sub = a[:, cols]
            coef, _, rank, _ = np.linalg.lstsq(sub, y, rcond=None)
            if rank < size:
                continue
            if np.abs(sub @ coef - y).max() > slack:
                continue
            val = float(np.abs(coef).sum())
            if val < best_val:
                best_val = val
                best_x = np.zeros(n)
                best_x[list(cols)] = coef
    if best_x is None:
        return RecoveryOutcome(np.zeros(n), float("inf"), INFEASIBLE, float("inf"))
    return RecoveryOutcome(best_x, float(np.abs(a @ best_x - y).max()), OPTIMAL, best_val)
