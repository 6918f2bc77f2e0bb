"""
JSON matrix interchange
~~~~~~~~~~~~~~~~~~~~~~~
One matrix per record::

    {"data": [...], "dim": 2, "field": "real", "kind": "spd"}

``data`` is row-major; complex entries are ``[re, im]`` pairs.  ``kind`` is
``selfadjoint``, ``spd`` or ``group:<TAG>`` with TAG one of GL, SL, O, SO
(U and SU are accepted as aliases over the complex field).

Output has sorted keys and every float printed with 17 significant digits,
so a load of a dump reproduces the same doubles bit for bit.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import NotPositiveDefiniteError
from .groups import GroupElement, GroupTag, is_member, membership_residuals
from .symmat import SelfAdjointMatrix, SpdMatrix

KINDS = ("selfadjoint", "spd")
FIELDS = ("real", "complex")


class EnvelopeParseError(ValueError):
    """Malformed JSON or a record that does not follow the schema."""


class EnvelopeInvariantError(ValueError):
    """A well-formed record whose matrix violates its declared kind."""


@dataclass(frozen=True)
class MatrixEnvelope:
    dim: int
    field: str
    kind: str
    matrix: np.ndarray

    def to_object(self):
        """The matrix as a library value matching ``kind``."""
        if self.kind == "selfadjoint":
            return SelfAdjointMatrix(self.matrix)
        if self.kind == "spd":
            return SpdMatrix(self.matrix)
        return GroupElement(self.matrix, GroupTag.parse(self.kind[6:]), self.field)


def _fmt(x):
    x = float(x) + 0.0  # folds -0.0 into 0.0
    return format(x, ".17g")


def _data(m, field):
    flat = np.asarray(m).reshape(-1)
    if field == "real":
        return "[" + ", ".join(_fmt(x.real) for x in flat) + "]"
    return "[" + ", ".join(f"[{_fmt(x.real)}, {_fmt(x.imag)}]" for x in flat) + "]"


def dumps(env):
    return (
        f'{{"data": {_data(env.matrix, env.field)}, "dim": {env.dim}, '
        f'"field": {json.dumps(env.field)}, "kind": {json.dumps(env.kind)}}}'
    )


def dumps_many(envs):
    return "[\n" + ",\n".join(dumps(e) for e in envs) + "\n]"


def from_matrix(value, kind=None):
    """Envelope for a library value; ``kind`` defaults from its type."""
    if isinstance(value, GroupElement):
        return MatrixEnvelope(value.dim, value.field, f"group:{value.tag.value}", value.matrix)
    if kind is None:
        kind = "spd" if isinstance(value, SpdMatrix) else "selfadjoint"
    m = value.entries
    field = "complex" if m.dtype.kind == "c" else "real"
    return MatrixEnvelope(value.dim, field, kind, m)


def _number(x):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise EnvelopeParseError(f"expected a number, got {x!r}")
    x = float(x)
    if not np.isfinite(x):
        raise EnvelopeParseError("non-finite entry")
    return x


def _reject_constant(name):
    raise EnvelopeParseError(f"invalid numeric constant {name}")


def parse(obj, tol=1e-10):
    """Validate a decoded record and build the envelope.

    Raises :class:`EnvelopeParseError` for schema problems and
    :class:`EnvelopeInvariantError` when self-adjointness, positive
    definiteness or group membership fails.
    """
    if not isinstance(obj, dict):
        raise EnvelopeParseError("envelope must be a JSON object")
    missing = {"data", "dim", "field", "kind"} - obj.keys()
    if missing:
        raise EnvelopeParseError(f"missing keys: {sorted(missing)}")
    dim, field, kind, data = obj["dim"], obj["field"], obj["kind"], obj["data"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise EnvelopeParseError(f"dim must be a positive integer, got {dim!r}")
    if field not in FIELDS:
        raise EnvelopeParseError(f"field must be one of {FIELDS}, got {field!r}")
    if not isinstance(kind, str):
        raise EnvelopeParseError("kind must be a string")
    tag = None
    if kind.startswith("group:"):
        try:
            tag = GroupTag.parse(kind[6:])
        except ValueError:
            raise EnvelopeParseError(f"unknown group {kind[6:]!r}") from None
    elif kind not in KINDS:
        raise EnvelopeParseError(f"unknown kind {kind!r}")
    if not isinstance(data, list) or len(data) != dim * dim:
        raise EnvelopeParseError(f"data must be a list of {dim * dim} entries")
    if field == "real":
        flat = [_number(x) for x in data]
        m = np.array(flat, dtype=float).reshape(dim, dim)
    else:
        pairs = []
        for x in data:
            if not isinstance(x, list) or len(x) != 2:
                raise EnvelopeParseError("complex entries must be [re, im] pairs")
            pairs.append(complex(_number(x[0]), _number(x[1])))
        m = np.array(pairs, dtype=complex).reshape(dim, dim)

    if tag is not None:
        if not is_member(m, tag, tol):
            raise EnvelopeInvariantError(
                f"matrix is not in {tag.value}: {membership_residuals(m, tag)}"
            )
        return MatrixEnvelope(dim, field, f"group:{tag.value}", m)
    skew = np.linalg.norm(m - m.conj().T)
    if skew > tol * (1.0 + np.linalg.norm(m)):
        raise EnvelopeInvariantError(f"matrix is not self-adjoint (skew part {skew:.3e})")
    if kind == "spd":
        try:
            SpdMatrix(m)
        except NotPositiveDefiniteError as exc:
            raise EnvelopeInvariantError(str(exc)) from None
    return MatrixEnvelope(dim, field, kind, m)


def loads(text, tol=1e-10):
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise EnvelopeParseError(f"invalid JSON: {exc}") from None
    return parse(obj, tol)


def load(path, tol=1e-10):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise EnvelopeParseError(f"cannot read {path}: {exc}") from None
    return loads(text, tol)

