"""
Self-adjoint matrix kernels
~~~~~~~~~~~~~~~~~~~~~~~~~~~
Real symmetric and complex Hermitian matrices, their eigendecomposition by
cyclic Jacobi rotations, spectral matrix functions, the congruence action
``A -> T* A T`` and the exact Frechet derivative of the exponential.

All values are immutable after construction.
"""

import functools
from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionMismatchError,
    EigenSolverError,
    NotPositiveDefiniteError,
    SingularMatrixError,
)

EPS_PD = 1e-12
TOL_RECON = 1e-12
TOL_ORTH = 1e-12
EPS_INV = 1e-12
MAX_SWEEPS = 30
JACOBI_TOL = 1e-14
CONFLUENT_GAP = 1e-7


def _as_array(entries):
    a = np.array(entries)
    if a.dtype.kind == "c":
        a = a.astype(np.complex128)
    elif a.dtype.kind in "biuf":
        a = a.astype(np.float64)
    else:
        raise TypeError(f"unsupported dtype {a.dtype}")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise DimensionMismatchError("dimension must be at least 1")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def _freeze(a):
    a.flags.writeable = False
    return a


class SelfAdjointMatrix:
    """A real symmetric or complex Hermitian matrix.

    The constructor symmetrizes its input, ``M <- (M + M*)/2``, which is
    exactly self-adjoint in floating point.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries):
        a = _as_array(entries)
        a = 0.5 * (a + a.conj().T)
        # exact: IEEE addition commutes and negation is exact
        assert np.array_equal(a, a.conj().T)
        self._entries = _freeze(a)

    @classmethod
    def _wrap(cls, a):
        obj = SelfAdjointMatrix.__new__(SelfAdjointMatrix)
        a = 0.5 * (a + a.conj().T)
        obj._entries = _freeze(a)
        return obj

    @property
    def entries(self):
        return self._entries

    @property
    def dim(self):
        return self._entries.shape[0]

    @property
    def field(self):
        return "complex" if self._entries.dtype.kind == "c" else "real"

    def trace(self):
        return float(np.trace(self._entries).real)

    def norm(self):
        """Frobenius norm."""
        return float(np.linalg.norm(self._entries))

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._entries.copy()
        return self._entries.astype(dtype)

    def _check_same(self, other):
        if other.dim != self.dim:
            raise DimensionMismatchError(f"dimensions differ: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, SelfAdjointMatrix):
            return NotImplemented
        self._check_same(other)
        return SelfAdjointMatrix._wrap(self._entries + other._entries)

    def __sub__(self, other):
        if not isinstance(other, SelfAdjointMatrix):
            return NotImplemented
        self._check_same(other)
        return SelfAdjointMatrix._wrap(self._entries - other._entries)

    def __mul__(self, scalar):
        if isinstance(scalar, (int, float, np.floating, np.integer)):
            return SelfAdjointMatrix._wrap(float(scalar) * self._entries)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __neg__(self):
        return SelfAdjointMatrix._wrap(-self._entries)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, field={self.field!r})"


class EigenPair(NamedTuple):
    """Ascending real eigenvalues and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _fix_signs(q):
    # largest-magnitude entry of each column made positive real
    idx = np.argmax(np.abs(q), axis=0)
    lead = q[idx, np.arange(q.shape[1])]
    phase = lead / np.abs(lead)
    return q * phase.conj()


@functools.lru_cache(maxsize=None)
def _round_robin(n):
    """Pairings of 0..n-1 into disjoint pairs; every pair occurs once per sweep."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < n and q < n]
        rounds.append((np.array([p for p, _ in pairs]), np.array([q for _, q in pairs])))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _jacobi(a, max_sweeps, tol):
    # cyclic Jacobi in round-robin order: each round applies disjoint
    # rotations together, which is identical to applying them one by one
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n, dtype=a.dtype)
    scale = np.linalg.norm(a)
    rounds = _round_robin(n)
    off = 0.0
    for _ in range(max_sweeps + 1):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            return a, v
        for p, q in rounds:
            apq = a[p, q]
            mag = np.abs(apq)
            live = mag > 0.0
            if not live.any():
                continue
            p, q, apq, mag = p[live], q[live], apq[live], mag[live]
            app = a[p, p].real
            aqq = a[q, q].real
            theta = (aqq - app) / (2.0 * mag)
            t = np.copysign(1.0, theta) / (np.abs(theta) + np.hypot(1.0, theta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # phase rotates a_pq onto the positive real axis first
            wc = (apq / mag).conj()
            j = np.eye(n, dtype=a.dtype)
            j[p, p] = c
            j[p, q] = s
            j[q, p] = -s * wc
            j[q, q] = c * wc
            a = j.conj().T @ a @ j
            a = 0.5 * (a + a.conj().T)
            a[p, p] = app - t * mag
            a[q, q] = aqq + t * mag
            a[p, q] = 0.0
            a[q, p] = 0.0
            v = v @ j
    raise EigenSolverError(
        f"Jacobi iteration did not converge in {max_sweeps} sweeps "
        f"(relative off-diagonal mass {off / scale:.3e})",
        residual=off / scale,
    )


def sym_eig(S, max_sweeps=MAX_SWEEPS, tol=JACOBI_TOL):
    """Eigendecomposition of a self-adjoint matrix by cyclic Jacobi sweeps.

    Eigenvalues are returned in ascending order; each eigenvector column is
    normalized so that its largest-magnitude entry is positive real.

    Raises
    ------
    EigenSolverError
        If the off-diagonal mass is still above ``tol * ||S||_F`` after
        ``max_sweeps`` sweeps.
    """
    if isinstance(S, SpdMatrix):
        return S.eig
    if not isinstance(S, SelfAdjointMatrix):
        S = SelfAdjointMatrix(S)
    d, v = _jacobi(S.entries, max_sweeps, tol)
    lam = np.diag(d).real.copy()
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    q = _fix_signs(v[:, order])
    return EigenPair(_freeze(lam), _freeze(q))


def _spectral(q, values):
    return (q * values) @ q.conj().T


class SpdMatrix(SelfAdjointMatrix):
    """A positive-definite self-adjoint matrix with its cached spectrum.

    Construction rejects any eigenvalue at or below
    ``eps_pd * max|lambda|``.
    """

    __slots__ = ("_eig",)

    def __init__(self, entries, eps_pd=EPS_PD):
        if isinstance(entries, SelfAdjointMatrix):
            entries = entries.entries
        super().__init__(entries)
        eig = sym_eig(SelfAdjointMatrix._wrap(self._entries))
        lam, q = eig
        top = float(np.max(np.abs(lam)))
        if top == 0.0 or lam[0] <= eps_pd * top:
            raise NotPositiveDefiniteError(
                f"smallest eigenvalue {lam[0]:.6e} is not above the floor "
                f"{eps_pd:g} * {top:.6e}"
            )
        recon = np.linalg.norm(_spectral(q, lam) - self._entries)
        if recon > TOL_RECON * np.linalg.norm(self._entries):
            raise EigenSolverError(
                f"eigendecomposition reconstruction error {recon:.3e}", residual=recon
            )
        self._eig = eig

    @classmethod
    def _from_eig(cls, eigenvalues, eigenvectors, entries=None):
        # spectrum known exactly; strict positivity only, no relative floor
        lam = np.asarray(eigenvalues, dtype=float)
        if not np.all(lam > 0.0) or not np.all(np.isfinite(lam)):
            raise NotPositiveDefiniteError(
                "eigenvalues must be finite and strictly positive"
            )
        q = np.asarray(eigenvectors)
        order = np.argsort(lam, kind="stable")
        lam = lam[order]
        q = _fix_signs(q[:, order])
        if entries is None:
            entries = _spectral(q, lam)
        obj = cls.__new__(cls)
        a = 0.5 * (entries + entries.conj().T)
        obj._entries = _freeze(a)
        obj._eig = EigenPair(_freeze(lam), _freeze(q))
        return obj

    @property
    def eig(self):
        return self._eig

    @property
    def eigenvalues(self):
        return self._eig.eigenvalues

    @property
    def eigenvectors(self):
        return self._eig.eigenvectors

    def det(self):
        return float(np.prod(self._eig.eigenvalues))

    def logdet(self):
        return float(np.sum(np.log(self._eig.eigenvalues)))

    def cond(self):
        lam = self._eig.eigenvalues
        return float(lam[-1] / lam[0])

    def inv(self):
        lam, q = self._eig
        return SpdMatrix._from_eig(1.0 / lam, q)

    def power(self, p):
        lam, q = self._eig
        return SpdMatrix._from_eig(lam**p, q)


def mat_exp(S):
    """Matrix exponential of a self-adjoint matrix, ``Q diag(exp(lambda)) Q*``."""
    lam, q = sym_eig(S)
    return SpdMatrix._from_eig(np.exp(lam), q)


def mat_log(P):
    """Principal logarithm of a positive-definite matrix."""
    if not isinstance(P, SpdMatrix):
        P = SpdMatrix(P)
    lam, q = P.eig
    return SelfAdjointMatrix._wrap(_spectral(q, np.log(lam)))


def mat_sqrt(P):
    if not isinstance(P, SpdMatrix):
        P = SpdMatrix(P)
    return P.power(0.5)


def _matrix_of(T):
    m = getattr(T, "matrix", T)
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    return m


def congruence(T, A):
    """Congruence action ``T* A T``.

    ``T`` is a :class:`~spdgeom.groups.GroupElement` or any invertible square
    matrix.  Positive-definite input yields an :class:`SpdMatrix`.
    """
    m = _matrix_of(T)
    if not isinstance(A, SelfAdjointMatrix):
        A = SelfAdjointMatrix(A)
    if m.shape[0] != A.dim:
        raise DimensionMismatchError(
            f"group element has dimension {m.shape[0]}, matrix has {A.dim}"
        )
    if not hasattr(T, "tag") and abs(np.linalg.det(m)) <= EPS_INV:
        raise SingularMatrixError("congruence by a singular matrix")
    out = m.conj().T @ A.entries @ m
    if isinstance(A, SpdMatrix):
        return SpdMatrix(out)
    return SelfAdjointMatrix._wrap(out)


def trace_inner(A, B):
    """Flat inner product ``Re tr(A B)``."""
    a = np.asarray(getattr(A, "entries", A))
    b = np.asarray(getattr(B, "entries", B))
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shapes differ: {a.shape} vs {b.shape}")
    return float(np.einsum("ij,ji->", a, b).real)


def _exp_divided_differences(lam):
    """Matrix of ``(e^a - e^b)/(a - b)`` over eigenvalue pairs.

    Written as ``exp((a+b)/2) * sinh(x)/x`` with ``x = (a-b)/2``, which has
    no cancellation; near-coincident pairs use the series ``1 + x^2/6``.
    """
    a = lam[:, None]
    b = lam[None, :]
    mid = np.exp(0.5 * (a + b))
    x = 0.5 * (a - b)
    gap = CONFLUENT_GAP * float(np.max(np.abs(lam)))
    confluent = np.abs(a - b) <= gap
    safe_x = np.where(confluent, 1.0, x)
    sinhc = np.where(confluent, 1.0 + x * x / 6.0, np.sinh(safe_x) / safe_x)
    return mid * sinhc


def frechet_dexp(T, A):
    """Directional derivative ``d/ds exp(T + s A)`` at ``s = 0``.

    Computed in the eigenbasis of ``T``: with ``T = Q diag(lambda) Q*`` and
    ``A~ = Q* A Q`` the derivative is ``Q (A~ o D) Q*`` where ``D`` holds the
    divided differences of ``exp`` over eigenvalue pairs.
    """
    if not isinstance(T, SelfAdjointMatrix):
        T = SelfAdjointMatrix(T)
    if not isinstance(A, SelfAdjointMatrix):
        A = SelfAdjointMatrix(A)
    if T.dim != A.dim:
        raise DimensionMismatchError(f"dimensions differ: {T.dim} vs {A.dim}")
    lam, q = sym_eig(T)
    at = q.conj().T @ A.entries @ q
    return SelfAdjointMatrix._wrap(q @ (at * _exp_divided_differences(lam)) @ q.conj().T)
