"""Honest-party randomness: biased sources over Z_n, biased-bit generators,
and XOR bias reduction.

A `SourceModel` is the declared behaviour of one party's random number
generator: a probability vector over Z_n together with a bias bound epsilon
that every entry respects.  The bound is always the exact computed maximum
deviation, never an estimate, because the protocol's security margin
consumes it directly.

Entropy is drawn from deterministic streams so every simulation is
replayable: seeded streams never run out, while streams replayed from a
fixed list of uniforms raise `ExhaustedEntropyError` when overdrawn (which
is how contract violations by strategies surface).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

#: Slack for float probability-sum and bias checks.
PROB_TOL = 1e-12


class EntropyError(RuntimeError):
    pass


class ExhaustedEntropyError(EntropyError):
    """A finite replay stream was asked for more uniforms than it holds."""


class EntropyStream:
    """A single-owner stream of uniforms on [0, 1).

    Never share one stream between concurrent consumers; spawn children
    instead.
    """

    def __init__(self, *, generator: Optional[np.random.Generator] = None,
                 seed_seq: Optional[np.random.SeedSequence] = None,
                 values: Optional[Sequence[float]] = None) -> None:
        if (generator is None) == (values is None):
            raise ValueError("construct via from_seed() or from_values()")
        self._generator = generator
        self._seed_seq = seed_seq
        self._values = None if values is None else list(values)
        self._cursor = 0

    @classmethod
    def from_seed(cls, seed) -> "EntropyStream":
        ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        return cls(generator=np.random.Generator(np.random.PCG64(ss)), seed_seq=ss)

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "EntropyStream":
        vals = [float(v) for v in values]
        for v in vals:
            if not 0.0 <= v < 1.0:
                raise ValueError(f"replay values must lie in [0, 1), got {v!r}")
        return cls(values=vals)

    def uniform(self) -> float:
        if self._values is not None:
            if self._cursor >= len(self._values):
                raise ExhaustedEntropyError(
                    f"replay stream exhausted after {len(self._values)} draws"
                )
            v = self._values[self._cursor]
            self._cursor += 1
            return v
        return float(self._generator.random())

    def spawn(self, k: int) -> list["EntropyStream"]:
        if self._seed_seq is None:
            raise EntropyError("only seeded streams can spawn children")
        return [EntropyStream.from_seed(child) for child in self._seed_seq.spawn(k)]


def make_cdf(probs: Sequence[float]) -> np.ndarray:
    """Cumulative table used by every sampler in the package.

    The last entry is clamped to exactly 1.0 so that uniforms in [0, 1)
    always land in a class; both the compiled and the pure kernels consume
    this same array, which keeps their draws bit-identical.
    """
    cdf = np.cumsum(np.asarray(probs, dtype=np.float64))
    cdf[-1] = 1.0
    return cdf


def _invcdf_one(cdf: np.ndarray, u: float) -> int:
    # smallest index i with u < cdf[i]; mirrors kernel.invcdf
    return int(np.searchsorted(cdf, u, side="right"))


class SourceModelError(ValueError):
    pass


@dataclass(frozen=True)
class SourceModel:
    """A (possibly biased) message source over Z_n with declared bias bound."""

    n: int
    probs: tuple[float, ...]
    epsilon: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if self.n < 2:
            raise SourceModelError(f"need n >= 2, got {self.n}")
        if len(self.probs) != self.n:
            raise SourceModelError(f"{len(self.probs)} probabilities for n={self.n}")
        if any(p < 0.0 for p in self.probs):
            raise SourceModelError("probabilities must be >= 0")
        total = math.fsum(self.probs)
        if abs(total - 1.0) > PROB_TOL:
            raise SourceModelError(f"probabilities sum to {total!r}, not 1")
        if self.epsilon < 0.0:
            raise SourceModelError("epsilon must be >= 0")
        realized = self.realized_bias
        if realized > self.epsilon + PROB_TOL:
            raise SourceModelError(
                f"declared epsilon {self.epsilon} smaller than realized maximum "
                f"deviation {realized}"
            )

    @property
    def realized_bias(self) -> float:
        return max(abs(p - 1.0 / self.n) for p in self.probs)

    @classmethod
    def uniform(cls, n: int) -> "SourceModel":
        return cls(n=n, probs=(1.0 / n,) * n, epsilon=0.0)

    @classmethod
    def from_probs(cls, probs: Sequence[float]) -> "SourceModel":
        """Declare epsilon as the exact realized deviation."""
        probs = tuple(float(p) for p in probs)
        n = len(probs)
        eps = max(abs(p - 1.0 / n) for p in probs)
        return cls(n=n, probs=probs, epsilon=eps)

    @cached_property
    def cdf(self) -> np.ndarray:
        return make_cdf(self.probs)


def sample(model: SourceModel, entropy: EntropyStream) -> int:
    """One draw from the model; deterministic given the stream state."""
    return _invcdf_one(model.cdf, entropy.uniform())


@dataclass(frozen=True)
class BitSourceModel:
    """A generator of independent bits, bit i being 0 with probability 1/2 + e_i.

    Biases must lie strictly inside (0, 1/2).
    """

    biases: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "biases", tuple(float(e) for e in self.biases))
        if not self.biases:
            raise SourceModelError("need at least one bit")
        for i, e in enumerate(self.biases):
            if not 0.0 < e < 0.5:
                raise SourceModelError(
                    f"bit {i} bias {e!r} outside the open interval (0, 1/2)"
                )

    @property
    def n_bits(self) -> int:
        return len(self.biases)

    def sample_bit(self, i: int, entropy: EntropyStream) -> int:
        return 0 if entropy.uniform() < 0.5 + self.biases[i] else 1

    def sample_xor(self, rounds: int, entropy: EntropyStream) -> int:
        """Draw the first `rounds` bits and return their XOR."""
        if not 1 <= rounds <= self.n_bits:
            raise SourceModelError(f"rounds {rounds} outside 1..{self.n_bits}")
        x = 0
        for i in range(rounds):
            x ^= self.sample_bit(i, entropy)
        return x


def pile_up(bits: BitSourceModel, rounds: int) -> float:
    """Exact bias of the XOR of the first `rounds` bits: 2^(j-1) * prod e_i.

    The XOR of j independent bits with biases e_i is 0 with probability
    1/2 + 2^(j-1) * prod(e_i), so the combined bias shrinks geometrically
    with every extra round.
    """
    if not 1 <= rounds <= bits.n_bits:
        raise SourceModelError(f"rounds {rounds} outside 1..{bits.n_bits}")
    prod = 1.0
    for e in bits.biases[:rounds]:
        prod *= e
    return 2.0 ** (rounds - 1) * prod


def build_source_from_bits(bits: BitSourceModel, n: int, rounds_per_bit: int) -> SourceModel:
    """Combine XORed bit blocks into a message source over Z_n, n = 2^b.

    Output bit i (i = 0 the least significant digit of the message) is the
    XOR of the raw-bit block [i*rounds, (i+1)*rounds), so the b output bits
    are independent.  The declared epsilon is the exact maximum deviation of
    the resulting product distribution from uniform.

    Moduli that are not powers of two are rejected: mapping bits onto them
    (e.g. by rejection sampling) would change the bias accounting, and the
    security margin consumes the declared epsilon directly.
    """
    if n < 2 or n & (n - 1) != 0:
        raise SourceModelError(
            f"n={n} is not a power of two; supply an explicit SourceModel instead"
        )
    b = n.bit_length() - 1
    if rounds_per_bit < 1:
        raise SourceModelError("rounds_per_bit must be >= 1")
    needed = b * rounds_per_bit
    if needed > bits.n_bits:
        raise SourceModelError(
            f"need {needed} raw bits for {b} output bits x {rounds_per_bit} rounds, "
            f"have {bits.n_bits}"
        )
    combined = []
    for i in range(b):
        block = BitSourceModel(bits.biases[i * rounds_per_bit:(i + 1) * rounds_per_bit])
        combined.append(pile_up(block, rounds_per_bit))
    probs = []
    for m in range(n):
        p = 1.0
        for i, beta in enumerate(combined):
            p *= (0.5 + beta) if (m >> i) & 1 == 0 else (0.5 - beta)
        probs.append(p)
    eps = max(abs(p - 1.0 / n) for p in probs)
    return SourceModel(n=n, probs=tuple(probs), epsilon=eps)
