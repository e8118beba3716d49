"""Counter-based random number streams.

Every stochastic routine in the package receives either an explicit
``numpy.random.Generator`` or an :class:`RngStream`, which wraps a Philox
counter-based generator keyed by ``(seed, stream_id)``.  Distinct stream ids
give statistically independent sequences, so a sampler can hand each
(series, component, iteration) task its own substream and stay bit-reproducible
regardless of execution order or thread count.
"""

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    # Standard splitmix64 finalizer; used to derive child stream ids.
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def _key_part(value) -> int:
    if isinstance(value, (int, np.integer)):
        return int(value) & _MASK64
    if isinstance(value, str):
        acc = 0xCBF29CE484222325
        for byte in value.encode("utf-8"):
            acc = ((acc ^ byte) * 0x100000001B3) & _MASK64
        return acc
    raise TypeError(f"substream keys must be int or str, got {type(value)!r}")


@dataclass(frozen=True)
class RngStream:
    """A (seed, stream_id) pair identifying one Philox substream."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed & _MASK64, self.stream_id & _MASK64],
                       dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, *keys) -> "RngStream":
        """Derive a child stream; same keys always give the same child."""
        sid = self.stream_id & _MASK64
        for key in keys:
            sid = _splitmix64(sid ^ _key_part(key))
        return RngStream(self.seed, sid)
