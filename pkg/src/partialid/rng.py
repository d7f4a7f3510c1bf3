"""Deterministic, worker-invariant random number streams.

Every source of randomness in the package is an :class:`RngStream`, keyed by
``(master_seed, stream_index)`` plus an optional child path.  The key is mixed
into the generator state by ``numpy``'s ``SeedSequence``, so a stream's draw
sequence depends only on its key, never on how many other streams exist or on
which process consumes it.  Monte Carlo loops assign one stream per draw index,
which makes results invariant to the worker count.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError

_SEED_MOD = 2**64


class RngStream:
    """Single-owner deterministic uniform generator.

    Identical keys reproduce identical draw sequences; distinct keys give
    statistically independent sequences.  Streams are stateful and must not
    be shared between concurrent consumers.
    """

    __slots__ = ("master_seed", "stream_index", "subkey", "_gen")

    def __init__(self, master_seed: int, stream_index: int, subkey: tuple = ()):
        if stream_index < 0:
            raise ParameterError(f"stream_index must be >= 0, got {stream_index}")
        self.master_seed = int(master_seed) % _SEED_MOD
        self.stream_index = int(stream_index)
        self.subkey = tuple(int(k) for k in subkey)
        entropy = (self.master_seed, self.stream_index, *self.subkey)
        self._gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))

    def uniform(self, size=None):
        """Uniform draws on [0, 1): a float for ``size=None``, else an array."""
        if size is None:
            return self._gen.random()
        return self._gen.random(size)

    def split(self, k: int) -> "RngStream":
        """Derive an independent child stream keyed by ``k``.

        Used where one logical draw needs several mutually independent
        sources (e.g. two independent processes inside one scenario draw).
        The child's sequence is unrelated to the parent's and to siblings'.
        """
        return RngStream(self.master_seed, self.stream_index, self.subkey + (int(k),))

    def __repr__(self):
        return (
            f"RngStream(master_seed={self.master_seed}, "
            f"stream_index={self.stream_index}, subkey={self.subkey})"
        )


def substream(master_seed: int, index: int) -> RngStream:
    """Return the deterministic stream keyed by ``(master_seed, index)``."""
    return RngStream(master_seed, index)
