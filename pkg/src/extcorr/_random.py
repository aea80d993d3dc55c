"""Portable seeded random stream.

Every random draw in the package comes from MT19937 (Matsumoto & Nishimura,
reference ``mt19937ar.c``).  A 64-bit seed ``s`` is split into two 32-bit
words ``[s & 0xFFFFFFFF, s >> 32]`` and passed to ``init_by_array``.  Floats
in ``[0, 1)`` use ``genrand_res53``::

    a = genrand_int32() >> 5
    b = genrand_int32() >> 6
    u = (a * 67108864 + b) / 9007199254740992

i.e. a 53-bit mantissa divided by 2**53.  numpy's legacy ``RandomState``
implements exactly this seeding and mapping, so any other language can
reproduce the stream from the reference C code.
"""

import numpy as np

from .exceptions import ParameterError

_MASK64 = (1 << 64) - 1


def make_rng(seed):
    """Return a ``RandomState`` seeded with the 64-bit integer ``seed``."""
    seed = int(seed)
    if seed < 0 or seed > _MASK64:
        raise ParameterError(f"seed must be a 64-bit unsigned integer, got {seed}")
    key = np.array([seed & 0xFFFFFFFF, seed >> 32], dtype=np.uint32)
    return np.random.RandomState(key)


def uniform(rng, low, high, size):
    """Draw ``low + (high - low) * u`` with ``u`` from ``genrand_res53``."""
    return low + (high - low) * rng.random_sample(size)
