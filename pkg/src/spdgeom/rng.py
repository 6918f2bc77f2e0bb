"""SplitMix64 stream used for every seeded sample in the package.

The generator is fully determined by its constants so that the same seed
reproduces the same matrices on any platform or language::

    state <- state + 0x9E3779B97F4A7C15            (mod 2**64)
    z <- state
    z <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9     (mod 2**64)
    z <- (z ^ (z >> 27)) * 0x94D049BB133111EB     (mod 2**64)
    output z ^ (z >> 31)

Uniform doubles take the top 53 bits: ``(x >> 11) * 2**-53`` in [0, 1).
Normal deviates use the Box-Muller cosine branch with ``u1`` replaced by
``1 - u1`` so the logarithm never sees zero; one normal per two uniforms.
Complex normals draw the real part first, then the imaginary part, each
scaled by ``1/sqrt(2)``.  Matrices are filled in row-major order.
"""

import math

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed):
        self.state = int(seed) & _MASK

    def next_u64(self):
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def uniform(self):
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def normal(self):
        u1 = 1.0 - self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def normal_matrix(self, rows, cols, field="real"):
        if field == "real":
            return np.array(
                [[self.normal() for _ in range(cols)] for _ in range(rows)]
            )
        s = 1.0 / math.sqrt(2.0)
        out = np.empty((rows, cols), dtype=complex)
        for i in range(rows):
            for j in range(cols):
                re = self.normal()
                im = self.normal()
                out[i, j] = complex(s * re, s * im)
        return out

    def spawn(self):
        """Child generator seeded from the next output of this one."""
        return SplitMix64(self.next_u64())
