"""Mutation smoke test: flip the sign of the invariant metric, run ``check``.

A healthy property suite notices the injected bug, so this script is
expected to exit with status 1.  Extra arguments are passed to ``check``.
"""

import sys

import spdgeom.manifold as manifold
from spdgeom.cli import main

_metric = manifold.metric


def _flipped(P, A, B):
    return -_metric(P, A, B)


if __name__ == "__main__":
    manifold.metric = _flipped
    sys.exit(main(["check", *sys.argv[1:]]))
