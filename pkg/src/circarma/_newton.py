"""Damped Newton minimization used by every dual solver in the package."""

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

EPS = np.finfo(float).eps


@dataclass
class NewtonResult:
    x: np.ndarray
    value: float
    grad_norm: float
    iterations: int
    status: str  # converged | diverged | boundary | max_iter | line_search
    values: list = field(default_factory=list)


def newton_step(g, H):
    """Solve H dx = -g; fall back to a least-squares step if H is not PD."""
    try:
        cf = linalg.cho_factor(H, check_finite=False)
        return -linalg.cho_solve(cf, g, check_finite=False)
    except linalg.LinAlgError:
        return -np.linalg.lstsq(H, g, rcond=None)[0]


def minimize(objective, derivatives, x0, *, max_iter=200, gtol=1e-10, armijo=1e-4,
             backtrack=0.5, blowup=1e12, boundary_gap=None, step=newton_step):
    """Minimize a smooth convex function with an implicit barrier.

    ``objective`` returns +inf outside the domain, which the backtracking
    line search treats as a rejected step.  ``boundary_gap(x)`` (optional)
    measures the relative distance to the boundary of the domain; when it
    drops below 1e-10 while the Newton decrement stops shrinking for five
    consecutive iterations the run ends with status ``boundary``.  Iterates
    whose norm grows by ``blowup`` relative to the start end with status
    ``diverged``; the objective is then unbounded below.
    """
    x = np.array(x0, dtype=float)
    f = objective(x)
    if not np.isfinite(f):
        raise ValueError("initial point is outside the domain")
    scale0 = 1.0 + np.linalg.norm(x)
    values = [f]
    stall = 0
    prev_dec = np.inf
    gnorm = np.inf
    for it in range(max_iter):
        g, H = derivatives(x)
        gnorm = float(np.linalg.norm(g))
        if gnorm <= gtol:
            return NewtonResult(x, f, gnorm, it, "converged", values)
        dx = step(g, H)
        dec = float(-g @ dx)
        if dec <= 0:
            dx, dec = -g, float(g @ g)

        if np.linalg.norm(x) > blowup * scale0:
            return NewtonResult(x, f, gnorm, it, "diverged", values)
        if boundary_gap is not None and boundary_gap(x) < 1e-10:
            stall = stall + 1 if dec >= 0.9 * prev_dec else 0
            if stall >= 5:
                return NewtonResult(x, f, gnorm, it, "boundary", values)
        prev_dec = dec

        slack = 8 * EPS * max(1.0, abs(f))
        t = 1.0
        while True:
            xn = x + t * dx
            fn = objective(xn)
            if np.isfinite(fn) and fn <= f - armijo * t * dec + slack:
                break
            t *= backtrack
            if t < 1e-20:
                return NewtonResult(x, f, gnorm, it, "line_search", values)
        x, f = xn, fn
        values.append(f)
    g, _ = derivatives(x)
    gnorm = float(np.linalg.norm(g))
    status = "converged" if gnorm <= gtol else "max_iter"
    return NewtonResult(x, f, gnorm, max_iter, status, values)
