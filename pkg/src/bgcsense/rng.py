"""Seeded random streams with positional key derivation.

Every stochastic decision in the package draws from a :class:`Stream`.  A
stream is identified by a master seed plus an integer key path, so the draw
for, say, trial 17 of a benchmark point never depends on how many draws were
made elsewhere.

Discrete draws (bounded integers, shuffles, picks) are computed here from the
raw 64-bit output of a Philox counter-based bit generator using Lemire's
multiply-shift rejection method, so their semantics do not depend on the
numpy distribution code.  Continuous draws (normals) go through
``numpy.random.Generator``.
"""
from __future__ import annotations

from typing import MutableSequence, Sequence, TypeVar

import numpy as np

T = TypeVar("T")

_MASK64 = (1 << 64) - 1


def derive_seed(seed: int, *key: int) -> int:
    """Derive a 64-bit child seed from ``seed`` and a positional ``key``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


class Stream:
    """A reproducible random stream keyed by ``(seed, *key)``."""

    def __init__(self, seed: int, *key: int):
        self.seed = int(seed)
        self.key = tuple(int(k) for k in key)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self._bits = np.random.Philox(ss)
        self.generator = np.random.Generator(self._bits)

    def _raw(self) -> int:
        return int(self._bits.random_raw())

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)``."""
        if bound <= 0:
            raise ValueError(f"bound must be positive, got {bound}")
        if bound == 1:
            return 0
        # Lemire: unbiased bounded integer from one 64-bit word (rarely two).
        x = self._raw()
        product = x * bound
        low = product & _MASK64
        if low < bound:
            threshold = ((1 << 64) - bound) % bound
            while low < threshold:
                x = self._raw()
                product = x * bound
                low = product & _MASK64
        return product >> 64

    def pick(self, items: Sequence[T]) -> T:
        if len(items) == 0:
            raise ValueError("cannot pick from an empty sequence")
        return items[self.below(len(items))]

    def shuffle(self, items: MutableSequence[T]) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, population: int, k: int) -> list[int]:
        """``k`` distinct integers from ``range(population)``, in draw order."""
        if not 0 <= k <= population:
            raise ValueError(f"cannot sample {k} items from {population}")
        # partial Fisher-Yates over a lazily materialized permutation
        swapped: dict[int, int] = {}
        out = []
        for i in range(k):
            j = i + self.below(population - i)
            vj = swapped.get(j, j)
            swapped[j] = swapped.get(i, i)
            out.append(vj)
        return out

    def signs(self, size: int) -> np.ndarray:
        """``size`` independent fair signs in {-1, +1} as float64."""
        if size == 0:
            return np.zeros(0)
        words = np.asarray(self._bits.random_raw((size + 63) // 64), dtype="<u8")
        bits = np.unpackbits(words.view(np.uint8), bitorder="little")[:size]
        return 1.0 - 2.0 * bits.astype(np.float64)

    def normal(self, shape) -> np.ndarray:
        return self.generator.standard_normal(shape)
