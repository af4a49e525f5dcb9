"""Riemannian conjugate-gradient descent on the product-of-circles manifold.

The feasible set of phase profiles is M^N = {w in C^N : |w_i| = 1}, a
Riemannian submanifold of C^N under the real inner product
<x, y> = Re(x^H y).  Received-power maximization is run as minimization
of f(w) = -w^H R w with:

* Euclidean gradient  -2 R w,
* tangent projection  xi - Re(xi * conj(w)) * w  (element-wise),
* retraction          (w + v) / |w + v|          (element-wise),
* Armijo backtracking with sufficient decrease measured against the
  squared norm of the search direction,
* Polak-Ribiere conjugate directions with the previous gradient and
  direction projected onto the new tangent space, and a steepest-descent
  restart whenever the coupling parameter turns negative or the line
  search stalls.

The optimizer is deterministic: randomized starting profiles are the
caller's job (see :func:`random_profile`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class DegenerateRetractionError(RuntimeError):
    """Retraction hit a near-zero entry w_i + v_i and cannot normalize."""


class LineSearchError(RuntimeError):
    """Armijo backtracking found no sufficient decrease within the cap."""


@dataclass(frozen=True)
class OptimizerConfig:
    """Stopping and line-search parameters of the descent."""

    epsilon: float = 1e-10
    alpha_bar: float = 1.0
    sigma: float = 0.4
    beta: float = 0.5
    max_iters: int = 500
    max_backtracks: int = 50

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not self.alpha_bar > 0:
            raise ValueError("alpha_bar must be positive")
        if not 0 < self.sigma < 1:
            raise ValueError("sigma must lie in (0, 1)")
        if not 0 < self.beta < 1:
            raise ValueError("beta must lie in (0, 1)")
        if self.max_iters < 1 or self.max_backtracks < 1:
            raise ValueError("max_iters and max_backtracks must be >= 1")


@dataclass
class OptimizerTrace:
    """Per-iteration history of one descent run.

    ``objective``, ``grad_norm`` and ``iterates`` have one entry per
    visited point (initial point included); ``step_size``,
    ``backtracks``, ``pr_parameter`` and ``search_directions`` have one
    entry per accepted step.
    """

    objective: list = field(default_factory=list)
    grad_norm: list = field(default_factory=list)
    iterates: list = field(default_factory=list)
    step_size: list = field(default_factory=list)
    backtracks: list = field(default_factory=list)
    pr_parameter: list = field(default_factory=list)
    search_directions: list = field(default_factory=list)
    restarts: int = 0
    flips: int = 0
    converged: bool = False
    stop_reason: str = ""

    @property
    def iterations(self) -> int:
        return len(self.step_size)

    def summary(self) -> dict:
        """Compact JSON-ready view (no per-iteration arrays)."""
        return {
            "iterations": self.iterations,
            "converged": self.converged,
            "stop_reason": self.stop_reason,
            "initial_objective": self.objective[0] if self.objective else None,
            "final_objective": self.objective[-1] if self.objective else None,
            "final_grad_norm": self.grad_norm[-1] if self.grad_norm else None,
            "total_backtracks": int(sum(self.backtracks)),
            "restarts": self.restarts,
            "flips": self.flips,
        }

    def history(self) -> dict:
        """JSON-ready per-iteration curves for convergence reports."""
        return {
            "objective": [float(v) for v in self.objective],
            "grad_norm": [float(v) for v in self.grad_norm],
            "step_size": [float(v) for v in self.step_size],
            "backtracks": [int(v) for v in self.backtracks],
            "pr_parameter": [float(v) for v in self.pr_parameter],
        }


def manifold_inner(x: np.ndarray, y: np.ndarray) -> float:
    """Real inner product Re(x^H y) on the embedding space."""
    return float(np.real(np.vdot(x, y)))


def cost(quadratic_form: np.ndarray, w: np.ndarray) -> float:
    """f(w) = -w^H R w (minimized by the descent)."""
    return float(-np.real(np.conj(w) @ quadratic_form @ w))


def euclidean_gradient(quadratic_form: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Gradient -2 R w of f(w) = -w^H R w under the real metric."""
    return -2.0 * (quadratic_form @ w)


def tangent_project(w: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """Orthogonal projection of xi onto the tangent space at w."""
    return xi - np.real(xi * np.conj(w)) * w


def riemannian_gradient(quadratic_form: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Tangent-space projection of the Euclidean gradient at w."""
    return tangent_project(w, euclidean_gradient(quadratic_form, w))


def retract(w: np.ndarray, v: np.ndarray, degeneracy_tol: float = 1e-15) -> np.ndarray:
    """Element-wise normalization of w + v back onto the manifold."""
    moved = w + v
    mag = np.abs(moved)
    if np.any(mag < degeneracy_tol):
        raise DegenerateRetractionError(
            "retraction hit |w_i + v_i| below the normalization tolerance"
        )
    return moved / mag


def armijo_step(
    quadratic_form: np.ndarray,
    w: np.ndarray,
    direction: np.ndarray,
    config: OptimizerConfig = OptimizerConfig(),
) -> tuple[float, int]:
    """Backtracking step size alpha_bar * beta^m along a tangent direction.

    Returns the first (alpha, m) satisfying
    f(R_w(alpha*d)) <= f(w) - sigma*alpha*<d, d>.  A degenerate
    retraction counts as a failed trial and shrinks the step like any
    other backtrack; more than 10 consecutive degenerate trials raise.
    Raises :class:`LineSearchError` when the backtrack cap is exhausted.
    """
    f0 = cost(quadratic_form, w)
    dir_sq = manifold_inner(direction, direction)
    alpha = config.alpha_bar
    degenerate_run = 0
    for m in range(config.max_backtracks + 1):
        try:
            trial = retract(w, alpha * direction)
        except DegenerateRetractionError:
            degenerate_run += 1
            if degenerate_run > 10:
                raise
            alpha *= config.beta
            continue
        degenerate_run = 0
        if cost(quadratic_form, trial) <= f0 - config.sigma * alpha * dir_sq:
            return alpha, m
        alpha *= config.beta
    raise LineSearchError(
        f"no sufficient decrease within {config.max_backtracks} backtracks"
    )


def polak_ribiere(
    grad_next: np.ndarray,
    grad_prev: np.ndarray,
    w_next: np.ndarray,
    denom_tol: float = 1e-30,
) -> float:
    """Polak-Ribiere coupling with the old gradient moved to the new tangent space.

    Returns 0 (a restart) when the previous gradient is numerically zero.
    """
    denom = manifold_inner(grad_prev, grad_prev)
    if denom < denom_tol:
        return 0.0
    transported = tangent_project(w_next, grad_prev)
    return manifold_inner(grad_next, grad_next - transported) / denom


def _best_sign_flip(quadratic_form: np.ndarray, w: np.ndarray) -> tuple[int, float]:
    """Element whose sign flip increases w^H R w the most, and the gain.

    Flipping w_i -> -w_i changes w^H R w by -4*(Re(conj(w_i)*(Rw)_i) - R_ii),
    so any element with Re(conj(w_i)*(Rw)_i) < R_ii offers a strict
    improvement.  At a maximizer no element does.
    """
    scores = np.real(np.conj(w) * (quadratic_form @ w)) - np.real(
        np.diag(quadratic_form)
    )
    i = int(np.argmin(scores))
    return i, float(-4.0 * scores[i])


def rgd_optimize(
    quadratic_form: np.ndarray,
    w0: np.ndarray | None = None,
    config: OptimizerConfig = OptimizerConfig(),
) -> tuple[np.ndarray, OptimizerTrace]:
    """Maximize w^H R w over the product-of-circles manifold.

    Starts from ``w0`` (all-ones by default), runs conjugate-gradient
    descent on f = -w^H R w until the Riemannian gradient 2-norm drops
    to ``config.epsilon`` or ``config.max_iters`` steps were taken, and
    returns the final profile together with the full trace.  The
    objective is non-increasing in f along accepted steps.

    Descent alone can park on a saddle where some element sits exactly
    anti-phase to the others' resultant (symmetric boards started from
    the all-ones profile reproducibly do this).  Whenever progress
    stalls or a stationary point is reached, the optimizer therefore
    checks for a sign flip that strictly increases the objective and
    applies the best one as an extra zero-step-size trace entry before
    resuming descent; at a true maximizer no such flip exists.
    """
    quadratic_form = np.asarray(quadratic_form, dtype=complex)
    n = quadratic_form.shape[0]
    if w0 is None:
        w = np.ones(n, dtype=complex)
    else:
        w = np.asarray(w0, dtype=complex).copy()
        mod_err = np.max(np.abs(1.0 - np.abs(w)))
        if mod_err > 1e-9:
            raise ValueError("w0 must lie on the unit-modulus manifold")

    trace = OptimizerTrace()
    grad = riemannian_gradient(quadratic_form, w)
    direction = -grad
    on_steepest = True
    f_curr = cost(quadratic_form, w)
    trace.objective.append(f_curr)
    trace.grad_norm.append(float(np.linalg.norm(grad)))
    trace.iterates.append(w.copy())

    def flip_if_profitable() -> bool:
        """Apply the best profitable sign flip as a zero-length step."""
        nonlocal w, grad, direction, on_steepest, f_curr
        if trace.flips >= max(16, n):
            return False
        i, gain = _best_sign_flip(quadratic_form, w)
        if gain <= 1e-10 * (1.0 + abs(f_curr)):
            return False
        w = w.copy()
        w[i] = -w[i]
        grad = riemannian_gradient(quadratic_form, w)
        direction = -grad
        on_steepest = True
        f_curr = cost(quadratic_form, w)
        trace.flips += 1
        trace.step_size.append(0.0)
        trace.backtracks.append(0)
        trace.pr_parameter.append(0.0)
        trace.search_directions.append(np.zeros(n, dtype=complex))
        trace.objective.append(f_curr)
        trace.grad_norm.append(float(np.linalg.norm(grad)))
        trace.iterates.append(w.copy())
        return True

    while trace.iterations < config.max_iters:
        if trace.grad_norm[-1] <= config.epsilon:
            if flip_if_profitable():
                continue
            trace.converged = True
            trace.stop_reason = "gradient norm below epsilon"
            break
        try:
            alpha, m = armijo_step(quadratic_form, w, direction, config)
        except LineSearchError:
            if not on_steepest:
                # Conjugate direction failed; fall back to steepest descent.
                direction = -grad
                on_steepest = True
                trace.restarts += 1
                continue
            if flip_if_profitable():
                continue
            trace.stop_reason = "line search exhausted at numerical precision"
            break

        w_next = retract(w, alpha * direction)
        grad_next = riemannian_gradient(quadratic_form, w_next)
        u = polak_ribiere(grad_next, grad, w_next)
        if u < 0.0:
            u = 0.0
            trace.restarts += 1
        direction_next = -grad_next + u * tangent_project(w_next, direction)
        f_next = cost(quadratic_form, w_next)

        trace.step_size.append(alpha)
        trace.backtracks.append(m)
        trace.pr_parameter.append(u)
        trace.search_directions.append(direction.copy())
        trace.objective.append(f_next)
        trace.grad_norm.append(float(np.linalg.norm(grad_next)))
        trace.iterates.append(w_next.copy())

        stalled_progress = f_curr - f_next <= 1e-11 * (1.0 + abs(f_next))
        w, grad, direction, f_curr = w_next, grad_next, direction_next, f_next
        on_steepest = u == 0.0
        if stalled_progress:
            flip_if_profitable()
    else:
        trace.stop_reason = "maximum iterations reached"

    if trace.grad_norm[-1] <= config.epsilon:
        trace.converged = True

    return w, trace


def random_profile(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random manifold point, for seeded multi-start callers."""
    return np.exp(1j * rng.uniform(-np.pi, np.pi, size=n))
