"""Small dense nonlinear solvers.

Damped Newton for square systems and minimum-norm Gauss-Newton for
systems with at most as many equations as unknowns.  Everything is
sequential and deterministic: the same inputs give bit-identical iterates.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .errors import NonConvergenceError, RankDeficiencyError, SingularJacobianError

PIVOT_TOL = 1e-14
GRAM_PIVOT_TOL = 1e-12
MAX_HALVINGS = 30


@dataclass(frozen=True)
class SolverConfig:
    tol_residual: float = 1e-12
    max_iter: int = 50
    fd_step: float = 1e-6
    damping: float = 0.5

    def __post_init__(self):
        if not self.tol_residual > 0:
            raise ValueError("tol_residual must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not self.fd_step > 0:
            raise ValueError("fd_step must be positive")
        if not 0 < self.damping <= 1:
            raise ValueError("damping must lie in (0, 1]")


@dataclass
class SolveReport:
    solution: np.ndarray
    residual_norm: float
    iterations: int
    converged: bool
    history: list = field(default_factory=list)


def finite_diff_jacobian(f: Callable, x, h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian, one column per coordinate of ``x``."""
    if not h > 0:
        raise ValueError("step must be positive")
    x = np.asarray(x, dtype=np.float64)
    cols = []
    for j in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[j] += h
        xm[j] -= h
        cols.append((np.atleast_1d(f(xp)) - np.atleast_1d(f(xm))) / (2.0 * h))
    return np.column_stack(cols)


def lu_solve_checked(M: np.ndarray, rhs: np.ndarray, pivot_tol: float):
    """Solve ``M x = rhs`` with partial pivoting; ``None`` if a pivot is below ``pivot_tol``."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(M, check_finite=True)
    if np.min(np.abs(np.diag(lu))) < pivot_tol:
        return None
    return scipy.linalg.lu_solve((lu, piv), rhs)


def _inf_norm(r) -> float:
    return float(np.max(np.abs(r))) if np.size(r) else 0.0


def _iterate(residual, jacobian, x0, cfg: SolverConfig, step_fn):
    x = np.array(x0, dtype=np.float64)
    r = np.atleast_1d(np.asarray(residual(x), dtype=np.float64))
    rn = _inf_norm(r)
    history = [rn]
    best_x, best_rn = x.copy(), rn
    for it in range(cfg.max_iter + 1):
        if rn <= cfg.tol_residual:
            return SolveReport(x, rn, it, True, history)
        if it == cfg.max_iter:
            break
        J = jacobian(x) if jacobian is not None else finite_diff_jacobian(residual, x, cfg.fd_step)
        step = step_fn(np.atleast_2d(J), r, x, rn, history)
        t = 1.0
        for _ in range(MAX_HALVINGS + 1):
            x_new = x + t * step
            r_new = np.atleast_1d(np.asarray(residual(x_new), dtype=np.float64))
            rn_new = _inf_norm(r_new)
            if rn_new < rn:
                break
            t *= cfg.damping
        else:
            report = SolveReport(best_x, best_rn, it, False, history)
            raise NonConvergenceError(f"line search stalled at residual {rn:.3e}", report)
        x, r, rn = x_new, r_new, rn_new
        history.append(rn)
        if rn < best_rn:
            best_x, best_rn = x.copy(), rn
    report = SolveReport(best_x, best_rn, cfg.max_iter, False, history)
    raise NonConvergenceError(f"no convergence in {cfg.max_iter} iterations (residual {best_rn:.3e})", report)


def newton_solve(
    residual: Callable,
    x0,
    cfg: SolverConfig = SolverConfig(),
    jacobian: Optional[Callable] = None,
) -> SolveReport:
    """Newton's method with step-halving line search on the residual inf-norm.

    Raises SingularJacobianError when a pivot falls below 1e-14 and
    NonConvergenceError (carrying the best iterate) when the budget runs out.
    """

    def step(J, r, x, rn, history):
        if J.shape[0] != J.shape[1]:
            raise ValueError(f"newton_solve needs a square system, got Jacobian {J.shape}")
        dx = lu_solve_checked(J, -r, PIVOT_TOL)
        if dx is None:
            raise SingularJacobianError("singular Jacobian", SolveReport(x, rn, len(history) - 1, False, history))
        return dx

    return _iterate(residual, jacobian, x0, cfg, step)


def gauss_newton_min_norm(
    residual: Callable,
    x0,
    cfg: SolverConfig = SolverConfig(),
    jacobian: Optional[Callable] = None,
) -> SolveReport:
    """Gauss-Newton whose steps are minimum-norm solutions of ``J dx = -r``.

    The step is ``J^T (J J^T)^{-1} (-r)``; for affine residuals one step lands
    on the orthogonal projection of ``x0`` onto the solution set.  Square
    full-rank systems reduce to plain Newton steps.
    """

    def step(J, r, x, rn, history):
        k, m = J.shape
        if k > m:
            raise ValueError(f"more equations ({k}) than unknowns ({m})")
        w = lu_solve_checked(J @ J.T, -r, GRAM_PIVOT_TOL)
        if w is None:
            raise RankDeficiencyError("Jacobian lost full row rank", SolveReport(x, rn, len(history) - 1, False, history))
        return J.T @ w

    return _iterate(residual, jacobian, x0, cfg, step)
