"""
Riemannian structure of the positive-definite cone
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
Invariant metric ``<A, B>_P = tr(P^-1 A P^-1 B)``, pushforward by
congruence, geodesics, Riemannian exp/log, geodesic distance and the
determinant-one submanifold.

Geodesics through a base point ``P`` are translates of identity geodesics::

    gamma(t) = P^(1/2) exp(t W) P^(1/2),    W = P^(-1/2) V P^(-1/2)

i.e. ``exp(tW)`` moved by the isometry ``X -> T* X T`` with ``T = P^(1/2)``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import BaseMismatchError, DimensionMismatchError, NotPositiveDefiniteError
from .symmat import (
    SelfAdjointMatrix,
    SpdMatrix,
    _spectral,
    congruence,
    mat_exp,
    mat_log,
    sym_eig,
)

TOL_DET1 = 1e-10


class UnitDetSpd(SpdMatrix):
    """Positive-definite matrix with determinant one (within 1e-10)."""

    __slots__ = ()

    def __init__(self, entries, eps_pd=1e-12):
        super().__init__(entries, eps_pd=eps_pd)
        self._check_det()

    @classmethod
    def _from_eig(cls, eigenvalues, eigenvectors, entries=None):
        obj = super()._from_eig(eigenvalues, eigenvectors, entries)
        obj._check_det()
        return obj

    def _check_det(self):
        d = self.det()
        if abs(d - 1.0) > TOL_DET1:
            raise NotPositiveDefiniteError(f"determinant {d!r} is not 1")


def _same_point(P, Q):
    return P is Q or (P.dim == Q.dim and np.array_equal(P.entries, Q.entries))


@dataclass(frozen=True)
class TangentVector:
    base: SpdMatrix
    value: SelfAdjointMatrix

    def __post_init__(self):
        if not isinstance(self.value, SelfAdjointMatrix):
            object.__setattr__(self, "value", SelfAdjointMatrix(self.value))
        if self.value.dim != self.base.dim:
            raise DimensionMismatchError(
                f"tangent value has dimension {self.value.dim}, base has {self.base.dim}"
            )


def _tangent_at(P, V):
    if isinstance(V, TangentVector):
        if not _same_point(V.base, P):
            raise BaseMismatchError("tangent vector is attached to another base point")
        return V.value
    if not isinstance(V, SelfAdjointMatrix):
        V = SelfAdjointMatrix(V)
    if V.dim != P.dim:
        raise DimensionMismatchError(f"dimensions differ: {P.dim} vs {V.dim}")
    return V


def metric(P, A, B):
    """Invariant inner product ``tr(P^-1 A P^-1 B)`` of tangent vectors at ``P``."""
    a = _tangent_at(P, A).entries
    b = _tangent_at(P, B).entries
    pinv = P.inv().entries
    return float(np.einsum("ij,ji->", pinv @ a, pinv @ b).real)


def pushforward(T, V):
    """Image of ``V`` under the differential of ``P -> T* P T``: ``T* V T`` at ``T* P T``."""
    return TangentVector(congruence(T, V.base), congruence(T, V.value))


def geodesic_from_identity(C, t):
    """The curve ``exp(t C)``."""
    if not isinstance(C, SelfAdjointMatrix):
        C = SelfAdjointMatrix(C)
    return mat_exp(t * C)


@dataclass(frozen=True)
class Geodesic:
    """Geodesic with ``gamma(0) = base`` and ``gamma'(0) = velocity``.

    The square root of the base and the spectrum of the whitened velocity
    are computed once at construction.
    """

    base: SpdMatrix
    velocity: TangentVector
    _root: np.ndarray = field(init=False, repr=False, compare=False)
    _white: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        v = self.velocity
        if not isinstance(v, TangentVector):
            v = TangentVector(self.base, v)
            object.__setattr__(self, "velocity", v)
        elif not _same_point(v.base, self.base):
            raise BaseMismatchError("velocity is not attached to the geodesic base")
        lam, q = self.base.eig
        root = _spectral(q, np.sqrt(lam))
        inv_root = _spectral(q, 1.0 / np.sqrt(lam))
        w = SelfAdjointMatrix._wrap(inv_root @ v.value.entries @ inv_root)
        object.__setattr__(self, "_root", root)
        object.__setattr__(self, "_white", sym_eig(w))

    def at(self, t):
        """Raw matrix ``gamma(t)``; the base itself at ``t = 0`` or for zero velocity."""
        mu, u = self._white
        if t == 0 or not mu.any():
            return self.base.entries
        e = _spectral(u, np.exp(t * mu))
        return self._root @ e @ self._root


def geodesic(g, t):
    if t == 0 or not g._white.eigenvalues.any():
        return g.base
    return SpdMatrix(g.at(t))


def riem_exp(P, V):
    """Riemannian exponential: the geodesic from ``P`` with velocity ``V`` at time 1."""
    if not isinstance(V, TangentVector):
        V = TangentVector(P, V)
    return geodesic(Geodesic(P, V), 1.0)


def _whiten(P, Q):
    lam, q = P.eig
    inv_root = _spectral(q, 1.0 / np.sqrt(lam))
    return inv_root @ Q.entries @ inv_root, _spectral(q, np.sqrt(lam))


def riem_log(P, Q):
    """Riemannian logarithm ``P^(1/2) log(P^(-1/2) Q P^(-1/2)) P^(1/2)`` at ``P``."""
    if P.dim != Q.dim:
        raise DimensionMismatchError(f"dimensions differ: {P.dim} vs {Q.dim}")
    if _same_point(P, Q):
        return TangentVector(P, SelfAdjointMatrix(np.zeros_like(P.entries)))
    w, root = _whiten(P, Q)
    lw = mat_log(SpdMatrix(w)).entries
    return TangentVector(P, SelfAdjointMatrix._wrap(root @ lw @ root))


def distance(P, Q):
    """Geodesic distance ``sqrt(sum log(mu_i)^2)`` over eigenvalues of ``P^-1 Q``."""
    if P.dim != Q.dim:
        raise DimensionMismatchError(f"dimensions differ: {P.dim} vs {Q.dim}")
    if _same_point(P, Q):
        return 0.0
    w, _ = _whiten(P, Q)
    mu = sym_eig(SelfAdjointMatrix._wrap(w)).eigenvalues
    if mu[0] <= 0.0:
        raise NotPositiveDefiniteError("whitened matrix lost positive-definiteness")
    return float(np.sqrt(np.sum(np.log(mu) ** 2)))


def project_det1(P):
    """Rescale ``P`` to determinant one, ``P / det(P)^(1/n)``."""
    lam, q = P.eig
    scale = float(np.exp(-np.mean(np.log(lam))))
    return UnitDetSpd._from_eig(lam * scale, q, entries=P.entries * scale)


def project_trace0(A):
    """Trace-free part ``A - (tr A / n) I``."""
    if not isinstance(A, SelfAdjointMatrix):
        A = SelfAdjointMatrix(A)
    shift = np.trace(A.entries).real / A.dim
    return SelfAdjointMatrix._wrap(A.entries - shift * np.eye(A.dim))
