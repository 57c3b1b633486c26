"""Analytic side games: the trivariate score function with maximum 1/4, the
fixed-density meta game it scores, and the width-k meta game score
(1-a)^k * a with argmax 1/(k+1)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import ParameterError


def _check_unit(**kwargs):
    for name, value in kwargs.items():
        if not 0 <= value <= 1:
            raise ParameterError(f"{name}={value} must lie in [0,1]")


def phi(alpha, beta, gamma):
    """(1-a)(a - a^2 b) + a((g - g^2 b) - g(1 - b))."""
    _check_unit(alpha=alpha, beta=beta, gamma=gamma)
    return (1 - alpha) * (alpha - alpha**2 * beta) + alpha * (
        (gamma - gamma**2 * beta) - gamma * (1 - beta)
    )


def phi_simplified(alpha, beta, gamma):
    """Algebraically equal form (1-a)(a - a^2 b) + a b (g - g^2)."""
    _check_unit(alpha=alpha, beta=beta, gamma=gamma)
    return (1 - alpha) * (alpha - alpha**2 * beta) + alpha * beta * (
        gamma - gamma**2
    )


def mbeta_strategy_score(alpha, beta, gamma):
    """Per-n score of the two-threshold strategy in the fixed-density meta
    game: equals phi pointwise (the redundancy is the test surface)."""
    return phi(alpha, beta, gamma)


def mt_score(alpha, k):
    """Per-pair score of the fixed-fraction strategy in the width-k meta
    game: (1-a)^k * a."""
    if k < 0 or int(k) != k:
        raise ParameterError(f"k={k} must be a nonnegative integer")
    _check_unit(alpha=alpha)
    return (1 - alpha) ** k * alpha


def mt_argmax(k, grid_step=0.001):
    """Grid argmax of mt_score over [0,1] (analytically 1/(k+1))."""
    grid = np.arange(0.0, 1.0 + grid_step / 2, grid_step)
    vals = (1 - grid) ** k * grid
    best = int(np.argmax(vals))
    return float(grid[best]), float(vals[best])


@dataclass(frozen=True)
class PhiMaximum:
    max_value: float
    maximizers: tuple  # refined (alpha, beta, gamma) triples near the max


def maximize_phi(grid_step=0.01, refine_tol=1e-9, report_tol=1e-6):
    """Grid scan of phi over [0,1]^3 plus local refinement.

    Returns the maximum and representative maximizers (grid points whose
    refined value is within report_tol of the max); the true maximizer set
    is a union of curves, so representatives only.
    """
    if grid_step > 0.01 or refine_tol > 1e-9:
        raise ParameterError("need grid_step <= 0.01 and refine_tol <= 1e-9")
    axis = np.arange(0.0, 1.0 + grid_step / 2, grid_step)
    a, b, g = np.meshgrid(axis, axis, axis, indexing="ij")
    vals = (1 - a) * (a - a**2 * b) + a * b * (g - g**2)
    grid_max = float(vals.max())

    def negated(x):
        aa, bb, gg = np.clip(x, 0.0, 1.0)
        return -((1 - aa) * (aa - aa**2 * bb) + aa * bb * (gg - gg**2))

    # the maximizer set is flat curves at the max; a tight cut keeps the
    # curve points without dragging in their curved-direction neighbors
    near = np.argwhere(vals >= grid_max - 5e-5)
    maximizers = []
    best = grid_max
    for idx in near:
        x0 = np.array([axis[idx[0]], axis[idx[1]], axis[idx[2]]])
        res = optimize.minimize(
            negated,
            x0,
            method="L-BFGS-B",
            bounds=[(0, 1)] * 3,
            options={"ftol": refine_tol * 1e-2, "gtol": 1e-12},
        )
        value = -res.fun
        best = max(best, value)
        maximizers.append((value, tuple(np.clip(res.x, 0.0, 1.0))))
    kept = tuple(pt for value, pt in maximizers if value >= best - report_tol)
    return PhiMaximum(best, kept)
