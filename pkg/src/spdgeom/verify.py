"""
Finite-difference checks of the differential identities of exp
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
Central-difference approximations of the first and mixed second
differentials of the matrix exponential, the defect between the invariant
metric pulled back through exp and the flat trace metric, and the residual
of the geodesic equation ``gamma'' = gamma' gamma^-1 gamma'``.

Also holds the dense Taylor-series exponential used as an independent
oracle for the spectral routines in :mod:`spdgeom.symmat`.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import manifold
from .symmat import SelfAdjointMatrix, frechet_dexp, mat_exp, trace_inner

UNIT_ROUNDOFF = 2.0**-53
DEFAULT_STEPS = (1e-2, 5e-3, 2.5e-3, 1.25e-3)
ORDER_WINDOW = (1.8, 2.2)


@dataclass(frozen=True)
class ConvergenceReport:
    step_sizes: tuple
    errors: tuple
    fitted_order: Optional[float]
    passed: bool

    def as_dict(self):
        return {
            "step_sizes": list(self.step_sizes),
            "errors": list(self.errors),
            "fitted_order": self.fitted_order,
            "pass": self.passed,
        }


def fit_order(step_sizes, errors):
    """Least-squares slope of ``log(error)`` against ``log(step)``."""
    x = np.log(np.asarray(step_sizes, dtype=float))
    y = np.log(np.asarray(errors, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def convergence_report(
    error_at: Callable[[float], float],
    step_sizes: Sequence[float] = DEFAULT_STEPS,
    window=ORDER_WINDOW,
    floor=0.0,
):
    """Evaluate ``error_at`` on descending steps and fit the order of decay.

    Refinement stops at the first step whose error exceeds the previous one
    (rounding has taken over).  Only errors above ``floor`` enter the fit;
    ``floor`` is a constant or a function of the step.  If every error is at
    or below the floor the quantity vanishes to working precision and the
    report passes with no fitted order.
    """
    floor_at = floor if callable(floor) else (lambda h: floor)
    steps = [float(h) for h in step_sizes]
    if any(h <= 0 for h in steps) or any(a <= b for a, b in zip(steps, steps[1:])):
        raise ValueError("step sizes must be positive and strictly decreasing")
    used, errs = [], []
    for h in steps:
        e = float(error_at(h))
        if errs and e > errs[-1]:
            break
        used.append(h)
        errs.append(e)
    pts = [(h, e) for h, e in zip(used, errs) if e > floor_at(h)]
    if len(pts) < 2:
        vanishing = all(e <= floor_at(h) for h, e in zip(used, errs))
        return ConvergenceReport(tuple(used), tuple(errs), None, vanishing)
    order = fit_order(*zip(*pts))
    return ConvergenceReport(
        tuple(used), tuple(errs), order, window[0] <= order <= window[1]
    )


def rounding_floor(scale, derivative_order):
    """``100 u scale / h**k``: the noise level of a k-th order difference."""
    return lambda h: 100.0 * UNIT_ROUNDOFF * scale / h**derivative_order


def _sa(x):
    return x if isinstance(x, SelfAdjointMatrix) else SelfAdjointMatrix(x)


def default_step(T):
    return 1e-3 / (1.0 + _sa(T).norm())


def fd_dexp(T, A, h=None):
    """Central difference ``(exp(T + hA) - exp(T - hA)) / 2h``."""
    T, A = _sa(T), _sa(A)
    if h is None:
        h = default_step(T)
    if h <= 0:
        raise ValueError("step must be positive")
    plus = mat_exp(T + h * A).entries
    minus = mat_exp(T - h * A).entries
    return SelfAdjointMatrix((plus - minus) / (2.0 * h))


def fd_second_mixed(A, B, h=1e-3):
    """Four-point mixed difference of ``exp(sA + tB)`` at ``s = t = 0``."""
    A, B = _sa(A), _sa(B)
    if h <= 0:
        raise ValueError("step must be positive")
    f = lambda s, t: mat_exp(s * A + t * B).entries
    num = f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)
    return SelfAdjointMatrix(num / (4.0 * h * h))


def second_order_agreement_error(T, A, B):
    """``|<dexp_T(A), dexp_T(B)>_{exp T} - tr(AB)|`` with the exact derivative."""
    T, A, B = _sa(T), _sa(A), _sa(B)
    base = mat_exp(T)
    da = frechet_dexp(T, A)
    db = frechet_dexp(T, B)
    return abs(manifold.metric(base, da, db) - trace_inner(A, B))


def curve_residual(curve, t, h=1e-3):
    """``||gamma'' - gamma' gamma^-1 gamma'||_F`` with central differences at ``t``.

    ``curve`` maps a real time to a raw matrix.
    """
    if h <= 0:
        raise ValueError("step must be positive")
    g0 = np.asarray(curve(t))
    gp = np.asarray(curve(t + h))
    gm = np.asarray(curve(t - h))
    d1 = (gp - gm) / (2.0 * h)
    d2 = (gp - 2.0 * g0 + gm) / (h * h)
    return float(np.linalg.norm(d2 - d1 @ np.linalg.solve(g0, d1)))


def geodesic_residual(g, t, h=1e-3):
    return curve_residual(g.at, t, h)


def perturbed_curve(g, t0, E):
    """``gamma(t) + (t - t0)^2 E``: same point and velocity at ``t0``, wrong acceleration."""
    e = np.asarray(getattr(E, "entries", E))
    return lambda t: g.at(t) + (t - t0) ** 2 * e


def series_expm(M, terms=30):
    """Taylor series with scaling and squaring, for any square matrix.

    Independent of the spectral path; intended as a test oracle.
    """
    m = np.asarray(M)
    norm = np.linalg.norm(m, 1)
    squarings = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0
    x = m / (2.0**squarings)
    out = np.eye(m.shape[0], dtype=np.result_type(m, float))
    term = out.copy()
    for j in range(1, terms + 1):
        term = term @ x / j
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


def block_dexp(T, A):
    """Frechet derivative of exp read off ``exp([[T, A], [0, T]])``."""
    t = np.asarray(getattr(T, "entries", T))
    a = np.asarray(getattr(A, "entries", A))
    n = t.shape[0]
    big = np.zeros((2 * n, 2 * n), dtype=np.result_type(t, a))
    big[:n, :n] = t
    big[n:, n:] = t
    big[:n, n:] = a
    return series_expm(big)[:n, n:]
