"""Fiducial search: seeded random restarts of Riemannian descent on the unit sphere.

The objective is the summed squared violation of the quartic fiducial
equations.  Its global minimum value is exactly zero at fiducials, it is
invariant under global phase and under every displacement, and being free of
phase factors it is cheap to differentiate in conjugate coordinates.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .verify import gram_residual, quartic_defects, quartic_residual
from .wh import as_state_vector, check_dim

__all__ = [
    "RestartOutcome",
    "SearchConfig",
    "SicCandidate",
    "objective",
    "objective_gradient",
    "polish",
    "search",
    "search_detailed",
]

_ARMIJO = 1e-4
_SHRINK = 0.5
_MIN_STEP = 1e-14
_MAX_STEP = 1e6
_REFINE_SWITCH = 1e-10  # objective level where the least-squares refinement takes over
_REFINE_MAX_ITERS = 60

THREADS_ENV = "SIC_FORGE_THREADS"


@dataclass(frozen=True)
class SearchConfig:
    """Knobs of one search run.

    ``accept_tol`` is an objective value: a candidate counts as certified when
    its recomputed quartic residual is within sqrt(accept_tol).  Each restart
    draws its start from a counter-based stream keyed by (seed, restart), so
    serial and thread-pooled runs explore identical points.
    """

    dim: int
    restarts: int = 32
    seed: int = 0
    max_iters: int = 4000
    accept_tol: float = 1e-18
    step_tol: float = 1e-13


@dataclass(frozen=True)
class SicCandidate:
    """Best vector found by a search; residuals are recomputed from scratch."""

    fiducial: np.ndarray
    objective_value: float
    gram_residual: float
    quartic_residual: float
    restarts_used: int
    iterations: int
    certified: bool


@dataclass(frozen=True)
class RestartOutcome:
    """Final objective and iteration count of one restart."""

    restart: int
    objective_value: float
    iterations: int


def objective(psi) -> float:
    """Sum of squared moduli of the quartic defects; zero exactly at fiducials."""
    e = quartic_defects(psi)
    return float(np.sum(e.real**2 + e.imag**2))


def _ambient_gradient(psi: np.ndarray, e: np.ndarray) -> np.ndarray:
    """Gradient of the objective in conjugate coordinates, times 2.

    Differentiating each quartic term with respect to conj(psi_m) leaves three
    distinct contraction patterns of the defect matrix against shifted copies
    of psi (the k <-> l symmetric pair collapses into the factor 2 on t1).
    """
    d = psi.shape[0]
    idx = np.arange(d)
    add = (idx[:, None] + idx[None, :]) % d
    sub = (idx[None, :] - idx[:, None]) % d  # sub[a, m] = (m - a) % d

    p_plus = psi[add]
    pc_plus = psi.conj()[add]
    p_minus = psi[sub]
    pc_minus = psi.conj()[sub]

    t1 = np.einsum("kl,km,klm,lm->m", e.conj(), p_minus, pc_plus[sub], p_plus)
    t2 = np.einsum("kl,km,lm,klm->m", e, p_plus, p_plus, pc_plus[add])
    t3 = np.einsum("kl,klm,lm,km->m", e, pc_minus[add], p_minus, p_minus)
    return 2.0 * (2.0 * t1 + t2 + t3)


def objective_gradient(psi) -> np.ndarray:
    """Riemannian gradient of the objective on the unit sphere.

    The ambient gradient is projected orthogonal to psi; phase invariance of
    the objective makes the projection coefficient real, so the result is
    orthogonal to psi in the full complex inner product.
    """
    psi = as_state_vector(psi)
    g = _ambient_gradient(psi, quartic_defects(psi))
    return g - np.vdot(psi, g) * psi


def _gradient_descent(
    psi: np.ndarray,
    max_iters: int,
    objective_floor: float,
    step_tol: float,
) -> tuple[np.ndarray, float, int]:
    """Backtracking descent with Barzilai-Borwein step seeding.

    Each accepted step renormalizes back onto the sphere and satisfies an
    Armijo decrease, so the objective is nonincreasing along the trajectory.
    """
    f = objective(psi)
    g = objective_gradient(psi)
    step = 1.0 / max(1.0, float(np.linalg.norm(g)))
    iterations = 0
    while iterations < max_iters:
        if f <= objective_floor:
            break
        gnorm_sq = float(np.vdot(g, g).real)
        if gnorm_sq <= 0.0:
            break
        alpha = min(max(step, _MIN_STEP), _MAX_STEP)
        trial, f_trial = None, f
        while alpha >= _MIN_STEP:
            cand = psi - alpha * g
            cand = cand / np.linalg.norm(cand)
            f_cand = objective(cand)
            if f_cand <= f - _ARMIJO * alpha * gnorm_sq:
                trial, f_trial = cand, f_cand
                break
            alpha *= _SHRINK
        if trial is None:
            break  # line search stalled: at the numerical floor of the basin
        iterations += 1
        g_new = objective_gradient(trial)
        s = trial - psi
        y = g_new - g
        sy = float(np.vdot(s, y).real)
        ss = float(np.vdot(s, s).real)
        step = ss / sy if sy > 1e-300 else alpha * 2.0
        psi, f, g = trial, f_trial, g_new
        if math.sqrt(ss) <= step_tol:
            break
    return psi, f, iterations


def _quartic_jacobian(psi: np.ndarray) -> np.ndarray:
    """Real Jacobian of the quartic defects with respect to (Re psi, Im psi).

    Rows stack Re then Im of the d^2 defects; columns stack the 2d real
    coordinates.  Built from the two Wirtinger derivative patterns of each
    quartic term.
    """
    d = psi.shape[0]
    idx = np.arange(d)
    add = (idx[:, None] + idx[None, :]) % d
    sub = (idx[None, :] - idx[:, None]) % d  # sub[a, m] = (m - a) % d

    p_plus = psi[add]
    pc_plus = psi.conj()[add]
    p_minus = psi[sub]
    pc_minus = psi.conj()[sub]

    # a[k*d+l, m] = dT_kl / dpsi_m, b[k*d+l, m] = dT_kl / dconj(psi_m)
    a = (
        np.einsum("km,lm,klm->klm", pc_plus, pc_plus, p_plus[add])
        + np.einsum("klm,lm,km->klm", p_minus[add], pc_minus, pc_minus)
    ).reshape(d * d, d)
    b = (
        np.einsum("km,klm,lm->klm", p_minus, pc_plus[sub], p_plus)
        + np.einsum("lm,klm,km->klm", p_minus, pc_plus[sub.T], p_plus)
    ).reshape(d * d, d)

    d_re = a + b
    d_im = 1j * (a - b)
    return np.block([[d_re.real, d_im.real], [d_re.imag, d_im.imag]])


def _least_squares_refine(
    psi: np.ndarray,
    f: float,
    objective_floor: float,
    max_iters: int = _REFINE_MAX_ITERS,
) -> tuple[np.ndarray, float, int]:
    """Gauss-Newton refinement of the quartic residual system.

    Solves the linearized defects in the least-squares sense (the minimal-norm
    solution ignores the flat directions along fiducial orbits), retracts onto
    the sphere, and keeps a step only if the objective decreases, damping the
    step by halves otherwise.  Quadratic tail convergence where the plain
    descent turns algebraic, e.g. on the continuous fiducial family at d=3.
    """
    d = psi.shape[0]
    iterations = 0
    while iterations < max_iters and f > objective_floor:
        e = quartic_defects(psi)
        rhs = -np.concatenate([e.reshape(-1).real, e.reshape(-1).imag])
        delta, *_ = np.linalg.lstsq(_quartic_jacobian(psi), rhs, rcond=None)
        direction = delta[:d] + 1j * delta[d:]
        accepted = None
        scale = 1.0
        for _ in range(20):
            cand = psi + scale * direction
            cand = cand / np.linalg.norm(cand)
            f_cand = objective(cand)
            if f_cand < f:
                accepted, f = cand, f_cand
                break
            scale *= 0.5
        if accepted is None:
            break
        psi = accepted
        iterations += 1
    return psi, f, iterations


def _descend(
    psi: np.ndarray,
    max_iters: int,
    objective_floor: float,
    step_tol: float,
) -> tuple[np.ndarray, float, int]:
    """Two-phase minimization, sharing the max_iters budget across both phases:
    global descent first, then least-squares refinement of the tail."""
    switch = max(objective_floor, _REFINE_SWITCH)
    psi, f, iters = _gradient_descent(psi, max_iters, switch, step_tol)
    budget = min(_REFINE_MAX_ITERS, max_iters - iters)
    psi, f, extra = _least_squares_refine(psi, f, objective_floor, max_iters=budget)
    return psi, f, iters + extra


def _random_start(d: int, seed: int, restart: int) -> np.ndarray:
    """Uniform point on the unit sphere from the (seed, restart) Philox stream."""
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, restart], dtype=np.uint64)))
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {value}")
    return value


def _candidate(psi: np.ndarray, restarts_used: int, iterations: int, residual_tol: float) -> SicCandidate:
    # Residuals come from the certification module, never from optimizer state.
    psi = psi.copy()
    psi.setflags(write=False)
    quartic = quartic_residual(psi)
    return SicCandidate(
        fiducial=psi,
        objective_value=objective(psi),
        gram_residual=gram_residual(psi),
        quartic_residual=quartic,
        restarts_used=restarts_used,
        iterations=iterations,
        certified=bool(quartic <= residual_tol),
    )


def search_detailed(config: SearchConfig) -> tuple[SicCandidate, tuple[RestartOutcome, ...]]:
    """Run all restarts and return the best candidate plus per-restart outcomes.

    Every restart is explored regardless of earlier successes and the winner
    is the lowest objective value, ties broken by lowest restart index, so the
    result does not depend on the worker count.
    """
    d = check_dim(config.dim)
    if config.restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {config.restarts}")
    if config.max_iters < 1:
        raise ValueError(f"max_iters must be >= 1, got {config.max_iters}")
    if not config.accept_tol > 0.0:
        raise ValueError(f"accept_tol must be positive, got {config.accept_tol}")
    if not 0 <= int(config.seed) < 2**64:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {config.seed}")

    floor = config.accept_tol * 1e-4  # converge comfortably past acceptance

    def run(restart: int) -> tuple[float, int, np.ndarray, int]:
        start = _random_start(d, int(config.seed), restart)
        psi, f, iters = _descend(start, config.max_iters, floor, config.step_tol)
        return f, restart, psi, iters

    workers = min(_thread_count(), config.restarts)
    if workers == 1:
        results = [run(i) for i in range(config.restarts)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(config.restarts)))

    _, _, best_psi, best_iters = min(results, key=lambda r: (r[0], r[1]))
    candidate = _candidate(
        best_psi,
        restarts_used=config.restarts,
        iterations=best_iters,
        residual_tol=math.sqrt(config.accept_tol),
    )
    outcomes = tuple(
        RestartOutcome(restart=i, objective_value=f, iterations=n)
        for f, i, _, n in sorted(results, key=lambda r: r[1])
    )
    return candidate, outcomes


def search(config: SearchConfig) -> SicCandidate:
    """Run seeded random-restart descents and return the best candidate found.

    Failure is reported, not raised: an unconverged run comes back with its
    honest objective value and ``certified=False``.
    """
    return search_detailed(config)[0]


def polish(psi, max_iters: int = 4000, residual_tol: float = 1e-9) -> SicCandidate:
    """Refine a near-minimum candidate with the same descent and a tighter floor.

    Inputs already at a minimum are returned unchanged (the objective floor is
    hit immediately); far-from-minimum inputs still come back with the best
    point found and honest residuals.
    """
    psi = as_state_vector(psi)
    refined, _, iterations = _descend(psi, max_iters, 1e-28, 0.0)
    return _candidate(refined, restarts_used=0, iterations=iterations, residual_tol=residual_tol)
