"""Command-line front end.

Exit codes: 0 success, 1 a ``check`` property failed, 2 unreadable or
malformed input, 3 input that violates a mathematical invariant.
"""

import argparse
import json
import sys

from . import envelope, manifold, properties
from .envelope import EnvelopeInvariantError, EnvelopeParseError
from .errors import (
    BaseMismatchError,
    DimensionMismatchError,
    EigenSolverError,
    GroupMembershipError,
    NotPositiveDefiniteError,
    SingularMatrixError,
)
from .groups import GroupElement
from .symmat import SpdMatrix, congruence, mat_exp, mat_log, mat_sqrt

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_PARSE = 2
EXIT_INVARIANT = 3

_INVARIANT_ERRORS = (
    EnvelopeInvariantError,
    NotPositiveDefiniteError,
    DimensionMismatchError,
    SingularMatrixError,
    GroupMembershipError,
    BaseMismatchError,
    EigenSolverError,
)


def _load(path, args, kinds=None):
    env = envelope.load(path, args.tol)
    if args.field is not None and env.field != args.field:
        raise EnvelopeInvariantError(f"{path}: field is {env.field}, expected {args.field}")
    if kinds is not None and env.kind not in kinds:
        raise EnvelopeInvariantError(f"{path}: kind {env.kind!r} not accepted here")
    return env


def _spd(path, args):
    env = _load(path, args, ("selfadjoint", "spd"))
    return SpdMatrix(env.matrix)


def _selfadjoint(path, args):
    return _load(path, args, ("selfadjoint", "spd")).to_object()


def _emit(value, kind=None):
    print(envelope.dumps(envelope.from_matrix(value, kind)))


def cmd_exp(args):
    _emit(mat_exp(_selfadjoint(args.input, args)))


def cmd_log(args):
    _emit(mat_log(_spd(args.input, args)))


def cmd_sqrt(args):
    _emit(mat_sqrt(_spd(args.input, args)))


def cmd_project_det1(args):
    _emit(manifold.project_det1(_spd(args.input, args)), "spd")


def cmd_project_trace0(args):
    _emit(manifold.project_trace0(_selfadjoint(args.input, args)))


def cmd_congruence(args):
    t = _load(args.group, args).to_object()
    if not isinstance(t, GroupElement):
        raise EnvelopeInvariantError(f"{args.group}: expected a group:<TAG> envelope")
    a = _load(args.input, args, ("selfadjoint", "spd")).to_object()
    _emit(congruence(t, a))


def cmd_dist(args):
    p = _spd(args.p, args)
    q = _spd(args.q, args)
    print(format(manifold.distance(p, q), ".17g"))


def cmd_geodesic(args):
    if args.samples < 1:
        raise EnvelopeInvariantError("--samples must be at least 1")
    p = _spd(args.p, args)
    q = _spd(args.q, args)
    g = manifold.Geodesic(p, manifold.riem_log(p, q))
    k = args.samples
    points = [manifold.geodesic(g, i / k) for i in range(k + 1)]
    print(envelope.dumps_many([envelope.from_matrix(x, "spd") for x in points]))


def cmd_check(args):
    if args.dim < 1 or args.trials < 1:
        raise EnvelopeInvariantError("--dim and --trials must be at least 1")
    field = args.field or "real"
    results = properties.run_suite(args.dim, args.trials, args.seed, field)
    ok = all(r.passed for r in results)
    report = {
        "dim": args.dim,
        "field": field,
        "pass": ok,
        "properties": [r.as_dict() for r in results],
        "seed": args.seed,
        "trials": args.trials,
    }
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK if ok else EXIT_PROPERTY


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--tol", type=float, default=1e-10,
        help="tolerance for validating input envelopes (default 1e-10)",
    )
    common.add_argument("--field", choices=("real", "complex"), default=None)

    parser = argparse.ArgumentParser(
        prog="spdgeom",
        description="Affine-invariant geometry of positive-definite matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def unary(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("input")
        p.set_defaults(func=func)

    unary("exp", cmd_exp, "matrix exponential of a self-adjoint matrix")
    unary("log", cmd_log, "matrix logarithm of a positive-definite matrix")
    unary("sqrt", cmd_sqrt, "positive square root")
    unary("project-det1", cmd_project_det1, "rescale to determinant one")
    unary("project-trace0", cmd_project_trace0, "remove the trace")

    p = sub.add_parser("congruence", parents=[common], help="T* A T for a group element T")
    p.add_argument("group")
    p.add_argument("input")
    p.set_defaults(func=cmd_congruence)

    p = sub.add_parser("dist", parents=[common], help="geodesic distance")
    p.add_argument("p")
    p.add_argument("q")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("geodesic", parents=[common], help="sample the geodesic from P to Q")
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("--samples", type=int, default=10)
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("check", parents=[common], help="run the property suite")
    p.add_argument("--dim", type=int, default=5)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except EnvelopeParseError as exc:
        print(f"spdgeom: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except _INVARIANT_ERRORS as exc:
        print(f"spdgeom: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
