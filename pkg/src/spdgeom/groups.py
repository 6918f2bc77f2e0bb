"""
Matrix groups GL, SL, O/U and SO/SU
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
Seeded samplers and membership predicates.  Over the complex field the
orthogonal tags stand for the unitary groups U(n) and SU(n).

Samplers are deterministic functions of their arguments; see
:mod:`spdgeom.rng` for the stream definition.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import GroupMembershipError
from .rng import SplitMix64
from .symmat import EPS_INV, SelfAdjointMatrix, SpdMatrix

TOL_GRP = 1e-10


class GroupTag(enum.Enum):
    GeneralLinear = "GL"
    SpecialLinear = "SL"
    OrthogonalOrUnitary = "O"
    SpecialOrthogonalOrUnitary = "SO"

    @classmethod
    def parse(cls, name):
        aliases = {"U": "O", "SU": "SO"}
        return cls(aliases.get(name, name))


def _tag(tag):
    return tag if isinstance(tag, GroupTag) else GroupTag.parse(tag)


def _det(m):
    return complex(np.linalg.det(m))


def membership_residuals(T, tag):
    """Defining residuals of ``tag`` evaluated at ``T``.

    Keys are ``"det"`` (``|det T|``, GL only), ``"det_one"`` (``|det T - 1|``)
    and ``"orth"`` (``||T* T - I||_F``).
    """
    m = np.asarray(T)
    tag = _tag(tag)
    out = {}
    if tag is GroupTag.GeneralLinear:
        out["det"] = abs(_det(m))
    if tag in (GroupTag.SpecialLinear, GroupTag.SpecialOrthogonalOrUnitary):
        out["det_one"] = abs(_det(m) - 1.0)
    if tag in (GroupTag.OrthogonalOrUnitary, GroupTag.SpecialOrthogonalOrUnitary):
        out["orth"] = float(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0])))
    return out


def is_member(T, tag, tol=TOL_GRP):
    """True iff every defining residual of ``tag`` is within ``tol``.

    For GL the test is invertibility, ``|det T| > tol``.
    """
    m = np.asarray(getattr(T, "matrix", T))
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    res = membership_residuals(m, _tag(tag))
    if "det" in res:
        return res["det"] > tol
    return all(r <= tol for r in res.values())


@dataclass(frozen=True)
class GroupElement:
    matrix: np.ndarray
    tag: GroupTag
    field: str = "real"

    def __post_init__(self):
        object.__setattr__(self, "tag", _tag(self.tag))
        if self.field not in ("real", "complex"):
            raise ValueError(f"field must be 'real' or 'complex', got {self.field!r}")
        m = np.array(self.matrix, dtype=complex if self.field == "complex" else float)
        tol = EPS_INV if self.tag is GroupTag.GeneralLinear else TOL_GRP
        if not is_member(m, self.tag, tol):
            raise GroupMembershipError(
                f"matrix is not in {self.tag.value}: {membership_residuals(m, self.tag)}"
            )
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def __matmul__(self, other):
        tag = self.tag if self.tag is other.tag else GroupTag.GeneralLinear
        field = "complex" if "complex" in (self.field, other.field) else "real"
        return GroupElement(self.matrix @ other.matrix, tag, field)


def _cond(m):
    s = np.linalg.svd(m, compute_uv=False)
    return s[0] / s[-1]


def _orthonormalize(g):
    # modified Gram-Schmidt, two passes
    q = g.astype(g.dtype, copy=True)
    n = q.shape[1]
    for j in range(n):
        v = q[:, j]
        for _ in range(2):
            for k in range(j):
                v = v - np.vdot(q[:, k], v) * q[:, k]
        q[:, j] = v / np.linalg.norm(v)
    return q


def _random_orthogonal(rng, dim, field, special):
    q = _orthonormalize(rng.normal_matrix(dim, dim, field))
    if special:
        d = _det(q)
        if field == "real":
            if d.real < 0:
                q[:, 0] = -q[:, 0]
        else:
            q[:, 0] = q[:, 0] * (d / abs(d)).conjugate()
    return q


def _random_special_linear(rng, dim, field):
    while True:
        g = rng.normal_matrix(dim, dim, field)
        d = _det(g)
        if abs(d) > EPS_INV:
            break
    if field == "real":
        if d.real < 0:
            g[:, 0] = -g[:, 0]
        return g * abs(d) ** (-1.0 / dim)
    # principal complex root; det(g * r) = d * r**dim = 1
    return g * complex(d) ** (-1.0 / dim)


def random_group_element(tag, dim, field="real", seed=0, cond_cap=None):
    """Seeded sample from the group named by ``tag``.

    Orthogonal and unitary elements come from Gram-Schmidt applied to a
    Gaussian matrix, with the first column rotated to force ``det = 1`` for
    the special groups.  SL elements are Gaussian matrices divided by the
    ``dim``-th root of their determinant.  GL elements are Gaussian
    matrices, redrawn in the (measure zero) event of a vanishing determinant.

    With ``cond_cap`` set, GL and SL draws continue along the same stream
    until the 2-norm condition number is at most ``cond_cap``.
    """
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    tag = _tag(tag)
    rng = SplitMix64(seed)
    if tag in (GroupTag.GeneralLinear, GroupTag.SpecialLinear):
        while True:
            if tag is GroupTag.GeneralLinear:
                g = rng.normal_matrix(dim, dim, field)
                if abs(_det(g)) <= EPS_INV:
                    continue
            else:
                g = _random_special_linear(rng, dim, field)
            if cond_cap is None or _cond(g) <= cond_cap:
                break
    else:
        g = _random_orthogonal(
            rng, dim, field, special=tag is GroupTag.SpecialOrthogonalOrUnitary
        )
    return GroupElement(g, tag, field)


def random_selfadjoint(dim, field="real", seed=0, norm=1.0):
    """Gaussian self-adjoint matrix rescaled to Frobenius norm ``norm``."""
    rng = SplitMix64(seed)
    g = rng.normal_matrix(dim, dim, field)
    a = 0.5 * (g + g.conj().T)
    size = np.linalg.norm(a)
    if size == 0.0:
        return SelfAdjointMatrix(a)
    return SelfAdjointMatrix(a * (norm / size))


def random_spd(dim, field="real", seed=0, cond_cap=100.0):
    """Seeded positive-definite matrix with condition number at most ``cond_cap``.

    Eigenvalues are log-uniform in ``[1, cond_cap]``; eigenvectors are a
    random orthogonal (unitary) basis.  ``cond_cap = 1`` gives the identity.
    """
    if cond_cap < 1.0:
        raise ValueError("cond_cap must be at least 1")
    rng = SplitMix64(seed)
    q = _random_orthogonal(rng, dim, field, special=False)
    logs = np.array([rng.uniform() for _ in range(dim)]) * math.log(cond_cap)
    lam = np.exp(logs)
    if cond_cap == 1.0:
        return SpdMatrix._from_eig(lam, np.eye(dim, dtype=q.dtype))
    return SpdMatrix._from_eig(lam, q)
