"""
Seeded counter-based randomness with per-draw substreams
========================================================

All randomness in this package flows through Philox-4x64-10 (the numpy
implementation of the Random123 counter-based generator).  A 64-bit seed
and a 64-bit draw index name a substream bit-exactly:

    key     = (seed, 0)              # two 64-bit key words
    counter = (0, 0, 0, draw_index)  # four 64-bit counter words

i.e. the draw index occupies the highest counter word, giving every
substream 2**192 raw words before any overlap.  Within a substream, raw
64-bit words are consumed in Philox output order.

Derived outputs are defined exactly in terms of raw words w:

- uniform integer in {1, ..., m}: masked rejection.  Let mask be the
  smallest 2**b - 1 >= m - 1; take v = w & mask, reject while v >= m,
  then return v + 1.  One word is consumed per attempt.
- uniform double in [0, 1): (w >> 11) * 2.0**-53.

Gaussian variates (used only for synthetic test functions) come from
``numpy.random.Generator.standard_normal`` seated on the named substream;
they are deterministic for a fixed numpy version but not specified
word-by-word here.
"""

from __future__ import annotations

import numpy as np

__all__ = ["substream", "generator", "uniform_ints_one_based", "uniform_unit_vector"]

_U64 = np.uint64


def substream(seed: int, draw_index: int) -> np.random.Philox:
    """The Philox bit generator for (seed, draw_index)."""
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, 0], dtype=_U64)
    counter = np.array([0, 0, 0, draw_index & 0xFFFFFFFFFFFFFFFF], dtype=_U64)
    return np.random.Philox(key=key, counter=counter)


def generator(seed: int, draw_index: int) -> np.random.Generator:
    """A numpy Generator seated on the named substream."""
    return np.random.Generator(substream(seed, draw_index))


def uniform_ints_one_based(seed: int, draw_index: int, m: int, count: int) -> list[int]:
    """
    ``count`` independent uniform integers in {1, ..., m} from one substream,
    via masked rejection on raw 64-bit words.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    bg = substream(seed, draw_index)
    mask = (1 << max(int(m - 1).bit_length(), 1)) - 1
    out: list[int] = []
    buf: list[int] = []
    while len(out) < count:
        if not buf:
            buf = [int(w) for w in bg.random_raw(64)]
        v = buf.pop(0) & mask
        if v < m:
            out.append(v + 1)
    return out


def uniform_unit_vector(seed: int, draw_index: int, dim: int) -> np.ndarray:
    """A point uniform in [0, 1)^dim: (w >> 11) * 2**-53 per component."""
    bg = substream(seed, draw_index)
    words = bg.random_raw(dim).astype(np.uint64)
    return (words >> np.uint64(11)).astype(np.float64) * np.float64(2.0**-53)
