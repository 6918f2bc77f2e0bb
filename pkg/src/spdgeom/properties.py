"""
Seeded property suites
~~~~~~~~~~~~~~~~~~~~~~
Each suite draws its own inputs from a SplitMix64 stream, runs ``trials``
independent cases cycling through ``dims``, and returns a
:class:`PropertyResult` holding the worst residual seen.

Conditioning policy: every positive-definite matrix formed inside a trial,
including congruence images and whitened pairs, has condition number at
most 1e4.  Base points are drawn with condition number at most 100 and
GL/SL elements with condition number at most 10.
"""

from dataclasses import dataclass, field
from typing import List

import numpy as np

from . import manifold, verify
from .groups import GroupTag, random_group_element, random_selfadjoint, random_spd
from .manifold import Geodesic, TangentVector
from .rng import SplitMix64
from .symmat import (
    SpdMatrix,
    congruence,
    frechet_dexp,
    mat_exp,
    mat_log,
    mat_sqrt,
    trace_inner,
)

BASE_COND = 100.0
GROUP_COND = 10.0
GEODESIC_COND = 10.0


@dataclass
class PropertyResult:
    name: str
    passed: bool
    worst: float
    tolerance: object
    trials: int
    details: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "name": self.name,
            "pass": bool(self.passed),
            "worst": self.worst,
            "tolerance": self.tolerance,
            "trials": self.trials,
            "details": self.details,
        }


def _stream(seed, salt):
    return SplitMix64(seed * 0x100000001B3 + salt)


def _cases(seed, salt, trials, dims):
    rng = _stream(seed, salt)
    for i in range(trials):
        yield i, dims[i % len(dims)], rng.spawn()


def _sa(rng, n, fld, norm=1.0):
    return random_selfadjoint(n, fld, rng.next_u64(), norm)


def _spd(rng, n, fld, cond=BASE_COND):
    return random_spd(n, fld, rng.next_u64(), cond)


def _group(rng, tag, n, fld):
    return random_group_element(tag, n, fld, rng.next_u64(), cond_cap=GROUP_COND)


def _det(m):
    return complex(np.linalg.det(m))


def metric_invariance(tag, trials=200, dims=range(2, 9), seed=0, fld="real", tol=1e-9):
    dims = list(dims)
    worst = 0.0
    for _, n, rng in _cases(seed, 1 + list(GroupTag).index(tag), trials, dims):
        P = _spd(rng, n, fld)
        A, B = _sa(rng, n, fld), _sa(rng, n, fld)
        T = _group(rng, tag, n, fld)
        a = TangentVector(P, A)
        ta = manifold.pushforward(T, a)
        tb = TangentVector(ta.base, congruence(T, B))
        before = manifold.metric(P, a, TangentVector(P, B))
        after = manifold.metric(ta.base, ta, tb)
        worst = max(worst, abs(after - before) / (1.0 + abs(before)))
    return PropertyResult(f"metric_invariance[{tag.value}]", worst <= tol, worst, tol, trials)


def flat_reduction(trials=200, dims=range(2, 9), seed=0, fld="real", tol=1e-13):
    dims = list(dims)
    worst = 0.0
    for _, n, rng in _cases(seed, 11, trials, dims):
        A, B = _sa(rng, n, fld), _sa(rng, n, fld)
        flat = trace_inner(A, B)
        ident = SpdMatrix(np.eye(n, dtype=A.entries.dtype))
        worst = max(worst, abs(manifold.metric(ident, A, B) - flat) / (1.0 + abs(flat)))
    return PropertyResult("flat_reduction", worst <= tol, worst, tol, trials)


def metric_positive_symmetric(trials=200, dims=range(2, 9), seed=0, fld="real", tol=1e-12):
    dims = list(dims)
    worst = 0.0
    positive = True
    for _, n, rng in _cases(seed, 12, trials, dims):
        P = _spd(rng, n, fld)
        A, B = _sa(rng, n, fld), _sa(rng, n, fld)
        ab = manifold.metric(P, A, B)
        worst = max(worst, abs(ab - manifold.metric(P, B, A)) / (1.0 + abs(ab)))
        positive = positive and manifold.metric(P, A, A) > 0.0
    return PropertyResult(
        "metric_positive_symmetric", positive and worst <= tol, worst, tol, trials,
        {"positive": positive},
    )


def exp_log_roundtrip(trials=200, dims=range(2, 9), seed=0, fld="real", tol=1e-9):
    """``log(exp A) = A`` for ``||A||_F <= 5`` and ``exp(log P) = P``.

    Results are re-wrapped from raw entries so the eigensolver runs on every
    leg rather than reusing a cached spectrum.
    """
    dims = list(dims)
    worst = 0.0
    for _, n, rng in _cases(seed, 21, trials, dims):
        A = _sa(rng, n, fld, norm=5.0 * (1.0 - rng.uniform()))
        E = SpdMatrix(mat_exp(A).entries)
        err = np.linalg.norm(mat_log(E).entries - A.entries) / (1.0 + A.norm())
        P = SpdMatrix(_spd(rng, n, fld).entries)
        L = mat_log(P)
        back = mat_exp(type(L)(L.entries)).entries
        err2 = np.linalg.norm(back - P.entries) / np.linalg.norm(P.entries)
        worst = max(worst, err, err2)
    return PropertyResult("exp_log_roundtrip", worst <= tol, worst, tol, trials)


def det_trace_identity(trials=200, dims=range(2, 9), seed=0, fld="real", tol=1e-10):
    dims = list(dims)
    worst = 0.0
    for _, n, rng in _cases(seed, 22, trials, dims):
        A = _sa(rng, n, fld, norm=5.0 * (1.0 - rng.uniform()))
        target = np.exp(A.trace())
        worst = max(worst, abs(_det(mat_exp(A).entries) - target) / target)
    return PropertyResult("det_trace_identity", worst <= tol, worst, tol, trials)


def trace_zero_det_one(trials=200, dims=range(2, 9), seed=0, fld="real", tol=1e-10):
    dims = list(dims)
    worst = 0.0
    for _, n, rng in _cases(seed, 23, trials, dims):
        A = _sa(rng, n, fld, norm=5.0 * (1.0 - rng.uniform()))
        C = manifold.project_trace0(A)
        E = mat_exp(C)
        worst = max(worst, abs(_det(E.entries) - 1.0), abs(E.det() - 1.0))
    return PropertyResult("trace_zero_det_one", worst <= tol, worst, tol, trials)


def sl_orbit_closure(trials=200, dims=range(2, 9), seed=0, fld="real", tol=1e-10):
    dims = list(dims)
    worst = 0.0
    for _, n, rng in _cases(seed, 24, trials, dims):
        M = manifold.project_det1(_spd(rng, n, fld))
        T = _group(rng, GroupTag.SpecialLinear, n, fld)
        image = congruence(T, M)
        worst = max(worst, abs(image.det() - 1.0), abs(_det(image.entries) - 1.0))
    return PropertyResult("sl_orbit_closure", worst <= tol, worst, tol, trials)


def dexp_at_origin(trials=20, dims=range(2, 9), seed=0, fld="real", window=verify.ORDER_WINDOW):
    """Central differences of ``exp(tA)`` at 0 converge to ``A`` at order two."""
    dims = list(dims)
    orders, ok = [], True
    for _, n, rng in _cases(seed, 31, trials, dims):
        A = _sa(rng, n, fld)
        zero = type(A)(np.zeros_like(A.entries))
        rep = verify.convergence_report(
            lambda h: np.linalg.norm(verify.fd_dexp(zero, A, h).entries - A.entries),
            window=window,
            floor=verify.rounding_floor(1.0 + A.norm(), 1),
        )
        ok = ok and rep.passed
        orders.append(rep.fitted_order)
    return _order_result("dexp_at_origin_order", ok, orders, window, trials)


def _order_result(name, ok, orders, window, trials, **extra):
    fitted = [o for o in orders if o is not None]
    worst = max((abs(o - 2.0) for o in fitted), default=0.0)
    details = {
        "min_order": min(fitted, default=None),
        "max_order": max(fitted, default=None),
    }
    details.update(extra)
    return PropertyResult(name, ok, worst, list(window), trials, details)


def second_mixed(trials=20, dims=range(2, 9), seed=0, fld="real",
                 window=verify.ORDER_WINDOW, zero_tol=1e-8):
    """Mixed second difference of ``exp(sA + tB)`` converges to ``(AB + BA)/2``."""
    dims = list(dims)
    orders, ok = [], True
    for _, n, rng in _cases(seed, 32, trials, dims):
        A, B = _sa(rng, n, fld), _sa(rng, n, fld)
        target = 0.5 * (A.entries @ B.entries + B.entries @ A.entries)
        rep = verify.convergence_report(
            lambda h: np.linalg.norm(verify.fd_second_mixed(A, B, h).entries - target),
            window=window,
            floor=verify.rounding_floor(1.0 + A.norm() + B.norm(), 2),
        )
        ok = ok and rep.passed
        orders.append(rep.fitted_order)
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    z = np.array([[1.0, 0.0], [0.0, -1.0]])
    anti = float(np.linalg.norm(verify.fd_second_mixed(x, z, 1e-3).entries))
    ok = ok and anti <= zero_tol
    return _order_result(
        "second_mixed_order", ok, orders, window, trials,
        anticommuting_residual=anti, anticommuting_tol=zero_tol,
    )


def second_order_agreement(trials=20, dims=range(2, 9), seed=0, fld="real",
                           window=verify.ORDER_WINDOW, origin_tol=1e-12):
    """Defect of the pulled-back metric decays like ``||T||^2``."""
    dims = list(dims)
    scales = (1.0, 0.5, 0.25, 0.125)
    orders, ok, origin = [], True, 0.0
    for _, n, rng in _cases(seed, 33, trials, dims):
        T0 = _sa(rng, n, fld, norm=0.5)
        A, B = _sa(rng, n, fld), _sa(rng, n, fld)
        flat = abs(trace_inner(A, B))
        zero = type(T0)(np.zeros_like(T0.entries))
        origin = max(origin, verify.second_order_agreement_error(zero, A, B) / (1.0 + flat))
        rep = verify.convergence_report(
            lambda s: verify.second_order_agreement_error(s * T0, A, B),
            step_sizes=scales,
            window=window,
            floor=100.0 * verify.UNIT_ROUNDOFF * (1.0 + flat),
        )
        ok = ok and rep.passed
        orders.append(rep.fitted_order)
    ok = ok and origin <= origin_tol
    return _order_result(
        "second_order_agreement", ok, orders, window, trials,
        origin_defect=origin, origin_tol=origin_tol,
    )


def dexp_fd_agreement(trials=20, dims=range(2, 9), seed=0, fld="real",
                      ratio_window=(3.5, 4.5), richardson_tol=1e-6):
    """Exact ``frechet_dexp`` against central differences at a general base.

    Checks the median error ratio under one halving of ``h`` and the
    Richardson-extrapolated difference quotient.
    """
    dims = list(dims)
    ratios, worst_rich = [], 0.0
    for _, n, rng in _cases(seed, 34, trials, dims):
        T = _sa(rng, n, fld, norm=2.0 * (1.0 - rng.uniform()))
        A = _sa(rng, n, fld, norm=2.0 * (1.0 - rng.uniform()))
        exact = frechet_dexp(T, A).entries
        coarse = verify.fd_dexp(T, A, 1e-2).entries
        fine = verify.fd_dexp(T, A, 5e-3).entries
        ratios.append(np.linalg.norm(coarse - exact) / np.linalg.norm(fine - exact))
        h = 1e-3
        rich = (4.0 * verify.fd_dexp(T, A, h / 2).entries - verify.fd_dexp(T, A, h).entries) / 3.0
        worst_rich = max(worst_rich, np.linalg.norm(rich - exact) / np.linalg.norm(exact))
    med = float(np.median(ratios))
    ok = ratio_window[0] <= med <= ratio_window[1] and worst_rich <= richardson_tol
    return PropertyResult(
        "dexp_fd_agreement", ok, worst_rich, richardson_tol, trials,
        {"median_halving_ratio": med, "ratio_window": list(ratio_window)},
    )


def frechet_block_oracle(trials=50, dims=range(2, 9), seed=0, fld="real", tol=1e-10):
    dims = list(dims)
    worst = 0.0
    for _, n, rng in _cases(seed, 35, trials, dims):
        T = _sa(rng, n, fld, norm=2.0 * (1.0 - rng.uniform()))
        A = _sa(rng, n, fld, norm=2.0 * (1.0 - rng.uniform()))
        oracle = verify.block_dexp(T, A)
        err = np.linalg.norm(frechet_dexp(T, A).entries - oracle) / np.linalg.norm(oracle)
        worst = max(worst, err)
    return PropertyResult("frechet_block_oracle", worst <= tol, worst, tol, trials)


def geodesic_equation(trials=20, times=10, dims=range(2, 9), seed=0, fld="real",
                      tol=1e-5, h=1e-3, control_ratio=1e3, window=verify.ORDER_WINDOW):
    """Identity geodesics moved by congruence satisfy the geodesic equation.

    For each geodesic and time: residual at ``h`` within ``tol``, order-two
    decay under halving of ``h``, and a quadratically perturbed curve (same
    point and velocity) exceeding the residual by ``control_ratio``.

    Geodesics have unit speed and start on the determinant-one submanifold,
    which keeps truncation error comparable across samples.
    """
    dims = list(dims)
    worst, min_ratio, ok = 0.0, np.inf, True
    orders = []
    for _, n, rng in _cases(seed, 41, trials, dims):
        P = manifold.project_det1(_spd(rng, n, fld, cond=GEODESIC_COND))
        velocity = congruence(mat_sqrt(P).entries, _sa(rng, n, fld))
        g = Geodesic(P, TangentVector(P, velocity))
        E = _sa(rng, n, fld)
        for _ in range(times):
            t = -2.0 + 4.0 * rng.uniform()
            res = verify.geodesic_residual(g, t, h)
            rep = verify.convergence_report(
                lambda step: verify.geodesic_residual(g, t, step),
                window=window,
                floor=verify.rounding_floor(np.linalg.norm(g.at(t)), 2),
            )
            control = verify.curve_residual(verify.perturbed_curve(g, t, E), t, h)
            ratio = control / res if res > 0 else np.inf
            worst = max(worst, res)
            min_ratio = min(min_ratio, ratio)
            orders.append(rep.fitted_order)
            ok = ok and rep.passed
    ok = ok and worst <= tol and min_ratio >= control_ratio
    return _order_result(
        "geodesic_equation", ok, orders, window, trials * times,
        worst_residual=worst, residual_tol=tol,
        min_control_ratio=float(min_ratio), control_ratio=control_ratio,
    )


def distance_axioms(trials=200, dims=range(2, 9), seed=0, fld="real",
                    sym_tol=1e-12, tri_slack=1e-9, inv_tol=1e-9):
    dims = list(dims)
    sym = tri = inv = 0.0
    separated = True
    for _, n, rng in _cases(seed, 51, trials, dims):
        P, Q, R = (_spd(rng, n, fld) for _ in range(3))
        T = _group(rng, GroupTag.GeneralLinear, n, fld)
        pq = manifold.distance(P, Q)
        sym = max(sym, abs(pq - manifold.distance(Q, P)))
        excess = pq - manifold.distance(P, R) - manifold.distance(R, Q)
        tri = max(tri, excess)
        moved = manifold.distance(congruence(T, P), congruence(T, Q))
        inv = max(inv, abs(moved - pq) / pq)
        zero_tol = 1e-9 * (1.0 + mat_log(P).norm() + mat_log(Q).norm())
        separated = separated and pq > zero_tol and manifold.distance(P, P) == 0.0
    ok = sym <= sym_tol and tri <= tri_slack and inv <= inv_tol and separated
    return PropertyResult(
        "distance_axioms", ok, max(sym, inv), {"symmetry": sym_tol, "triangle": tri_slack,
                                               "invariance": inv_tol}, trials,
        {"symmetry": sym, "triangle_excess": tri, "invariance": inv, "separated": separated},
    )


def riemannian_roundtrip(trials=200, dims=range(2, 9), seed=0, fld="real", tol=1e-9):
    dims = list(dims)
    worst = 0.0
    for _, n, rng in _cases(seed, 52, trials, dims):
        P, Q = _spd(rng, n, fld), _spd(rng, n, fld)
        back = manifold.riem_exp(P, manifold.riem_log(P, Q))
        worst = max(worst, np.linalg.norm(back.entries - Q.entries) / np.linalg.norm(Q.entries))
    return PropertyResult("riemannian_roundtrip", worst <= tol, worst, tol, trials)


def run_suite(dim=5, trials=50, seed=0, fld="real") -> List[PropertyResult]:
    """Every property at one dimension; used by ``spdgeom check``."""
    dims = [dim]
    out = [metric_invariance(tag, trials, dims, seed, fld) for tag in GroupTag]
    out += [
        flat_reduction(trials, dims, seed, fld),
        metric_positive_symmetric(trials, dims, seed, fld),
        exp_log_roundtrip(trials, dims, seed, fld),
        det_trace_identity(trials, dims, seed, fld),
        trace_zero_det_one(trials, dims, seed, fld),
        sl_orbit_closure(trials, dims, seed, fld),
        dexp_at_origin(trials, dims, seed, fld),
        second_mixed(trials, dims, seed, fld),
        second_order_agreement(trials, dims, seed, fld),
        dexp_fd_agreement(trials, dims, seed, fld),
        frechet_block_oracle(trials, dims, seed, fld),
        geodesic_equation(trials, 10, dims, seed, fld),
        distance_axioms(trials, dims, seed, fld),
        riemannian_roundtrip(trials, dims, seed, fld),
    ]
    return out
