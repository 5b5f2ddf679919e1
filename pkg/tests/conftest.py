"""Shared helpers for the test suite.

Deterministic noise comes from a 64-bit linear congruential generator with
Knuth's MMIX constants (a = 6364136223846793005, c = 1442695040888963407,
modulus 2**64).  Uniform deviates use the top 53 bits, u = (x >> 11) / 2**53,
so the stream is bit-for-bit reproducible on any IEEE-754 platform and easy
to re-implement in another language.
"""

import numpy as np

LCG_A = 6364136223846793005
LCG_C = 1442695040888963407
LCG_MASK = (1 << 64) - 1


def lcg_stream(seed, n):
    """n uniforms on [0, 1) from the documented LCG."""
    x = seed & LCG_MASK
    out = np.empty(n)
    for i in range(n):
        x = (LCG_A * x + LCG_C) & LCG_MASK
        out[i] = (x >> 11) * 2.0 ** -53
    return out


def lcg_noise(seed, n):
    """n uniforms on (-1, 1), same stream."""
    return 2.0 * lcg_stream(seed, n) - 1.0
