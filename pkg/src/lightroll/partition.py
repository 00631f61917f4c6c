"""Outcome partitions of Z_n realizing a target distribution.

Class sizes are assigned by largest-remainder apportionment of n*P_o and the
classes themselves are consecutive integer blocks in outcome order: which
residues land in which class is irrelevant to the security margin (only the
class sizes enter it), so the canonical layout is the simplest one.

Probabilities are held as `fractions.Fraction`, so apportionment and the
realized tolerance `alpha` are exact.  Floats are converted to their exact
binary value; pass Fraction/int/str entries (e.g. "1/3") to get true
rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from numbers import Rational
from typing import Iterable, Sequence, Union

ProbLike = Union[int, float, str, Fraction]

#: Slack allowed when checking that probabilities sum to one.
PROB_SUM_TOL = Fraction(1, 10**12)


class PartitionError(ValueError):
    pass


def _as_fraction(value: ProbLike) -> Fraction:
    try:
        f = Fraction(value)
    except (ValueError, TypeError) as exc:
        raise PartitionError(f"cannot interpret probability {value!r}") from exc
    return f


@dataclass(frozen=True)
class IdealDistribution:
    """The agreed outcome distribution the parties want to realize."""

    probs: tuple[Fraction, ...]

    def __init__(self, probs: Iterable[ProbLike]) -> None:
        entries = tuple(_as_fraction(p) for p in probs)
        if len(entries) < 2:
            raise PartitionError("need at least two outcomes")
        for o, p in enumerate(entries):
            if not 0 <= p <= 1:
                raise PartitionError(f"P_{o} = {p} outside [0, 1]")
        if abs(sum(entries) - 1) > PROB_SUM_TOL:
            raise PartitionError(f"probabilities sum to {float(sum(entries))!r}, not 1")
        object.__setattr__(self, "probs", entries)

    @property
    def N(self) -> int:
        return len(self.probs)

    @property
    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(p) for p in self.probs)

    @classmethod
    def uniform(cls, N: int) -> "IdealDistribution":
        if N < 2:
            raise PartitionError(f"need at least two outcomes, got N={N}")
        return cls([Fraction(1, N)] * N)

    def is_rational_with_denominator_bound(self, bound: int) -> bool:
        return lcm(*(p.denominator for p in self.probs)) <= bound


@dataclass(frozen=True)
class OutcomePartition:
    """Disjoint classes covering Z_n, one per outcome, plus the realized alpha.

    `alpha` is the exact maximum over outcomes of | |class_o|/n - P_o | for
    the distribution the partition was built from.
    """

    n: int
    classes: tuple[frozenset[int], ...]
    alpha: Fraction

    def __post_init__(self) -> None:
        if self.n < len(self.classes):
            raise PartitionError(f"n={self.n} smaller than N={len(self.classes)}")
        if len(self.classes) < 2:
            raise PartitionError("need at least two outcome classes")
        seen: set[int] = set()
        for o, cls in enumerate(self.classes):
            if not cls <= set(range(self.n)):
                raise PartitionError(f"class {o} not a subset of Z_{self.n}")
            if cls & seen:
                raise PartitionError(f"class {o} overlaps an earlier class")
            seen |= cls
        if len(seen) != self.n:
            raise PartitionError(
                f"classes cover {len(seen)} of {self.n} residues; must cover all"
            )
        if self.alpha < 0:
            raise PartitionError("alpha must be >= 0")

    @property
    def N(self) -> int:
        return len(self.classes)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    @property
    def max_size(self) -> int:
        return max(self.sizes)

    @cached_property
    def class_of(self) -> tuple[int, ...]:
        """Lookup table residue -> outcome index."""
        table = [0] * self.n
        for o, cls in enumerate(self.classes):
            for x in cls:
                table[x] = o
        return tuple(table)

    def outcome_of(self, x: int) -> int:
        return self.class_of[x % self.n]

    def deviation(self, dist: IdealDistribution) -> Fraction:
        """Exact max_o | |class_o|/n - P_o | against a given distribution."""
        if dist.N != self.N:
            raise PartitionError(f"distribution has N={dist.N}, partition N={self.N}")
        return max(abs(Fraction(s, self.n) - p) for s, p in zip(self.sizes, dist.probs))


def _blocks(sizes: Sequence[int]) -> tuple[frozenset[int], ...]:
    classes = []
    start = 0
    for s in sizes:
        classes.append(frozenset(range(start, start + s)))
        start += s
    return tuple(classes)


def largest_remainder_sizes(dist: IdealDistribution, n: int) -> list[int]:
    """Apportion n seats to the outcomes by quota flooring plus largest remainder.

    Remainder ties go to the lower outcome index, which makes the result
    deterministic.
    """
    quotas = [n * p for p in dist.probs]
    sizes = [int(q) for q in quotas]  # floor; quotas are >= 0
    remainders = [q - s for q, s in zip(quotas, sizes)]
    extra = n - sum(sizes)
    for o in sorted(range(dist.N), key=lambda o: (-remainders[o], o))[:extra]:
        sizes[o] += 1
    return sizes


def build_partition(dist: IdealDistribution, n: int) -> OutcomePartition:
    """Build the canonical n-residue partition for a distribution.

    Every outcome with P_o > 0 is guaranteed a nonempty class: in the rare
    case largest-remainder leaves such a class empty, single residues are
    transferred from the currently most over-represented class (ties to the
    lower index).  Outcomes with P_o = 0 may legitimately get empty classes.
    """
    if n < dist.N:
        raise PartitionError(
            f"n={n} < N={dist.N}: cannot give every outcome a class"
        )
    sizes = largest_remainder_sizes(dist, n)

    def overshoot(o: int) -> Fraction:
        return Fraction(sizes[o], n) - dist.probs[o]

    for o in range(dist.N):
        while sizes[o] == 0 and dist.probs[o] > 0:
            donors = [
                d for d in range(dist.N)
                if d != o and (sizes[d] > 1 or (sizes[d] == 1 and dist.probs[d] == 0))
            ]
            donor = max(donors, key=lambda d: (overshoot(d), -d))
            sizes[donor] -= 1
            sizes[o] += 1

    classes = _blocks(sizes)
    alpha = max(abs(Fraction(s, n) - p) for s, p in zip(sizes, dist.probs))
    return OutcomePartition(n=n, classes=classes, alpha=alpha)


def unbiased_partition(N: int) -> OutcomePartition:
    """The uniform case: n = N, singleton classes, alpha exactly 0."""
    if N < 2:
        raise PartitionError(f"need at least two outcomes, got N={N}")
    part = build_partition(IdealDistribution.uniform(N), N)
    assert part.sizes == (1,) * N and part.alpha == 0
    return part


@dataclass(frozen=True)
class FeasibilityViolation:
    k: int
    o: int
    value: float

    def __str__(self) -> str:
        return (
            f"alpha + eps_k * |class_o| = {self.value:.6g} > 1 for party k={self.k},"
            f" outcome o={self.o}"
        )


def check_feasibility(
    partition: OutcomePartition, epsilons: Sequence[float]
) -> list[FeasibilityViolation]:
    """Check alpha + eps_k * |class_o| <= 1 for every party and outcome."""
    out = []
    alpha = float(partition.alpha)
    for k, eps in enumerate(epsilons):
        if eps < 0:
            raise PartitionError(f"epsilon for party {k} must be >= 0, got {eps}")
        for o, size in enumerate(partition.sizes):
            value = alpha + eps * size
            if value > 1.0:
                out.append(FeasibilityViolation(k=k, o=o, value=value))
    return out


class RationalityError(PartitionError):
    """alpha = 0 was requested but no feasible modulus exists within the cap."""


def suggest_n(
    dist: IdealDistribution,
    target_alpha: ProbLike,
    max_n: int = 10**6,
) -> tuple[int, Fraction]:
    """Smallest n whose canonical partition realizes alpha <= target.

    A target of exactly 0 requires every probability to be rational with a
    common denominator; the answer is then the smallest multiple of the lcm
    of the denominators that is >= N.  Positive targets are found by scanning
    n upward from N (largest-remainder keeps alpha < 1/n, so the scan always
    terminates quickly).
    """
    target = _as_fraction(target_alpha)
    if target < 0:
        raise PartitionError(f"target alpha must be >= 0, got {target}")
    if target == 0:
        denom = lcm(*(p.denominator for p in dist.probs))
        n = denom * max(1, -(-dist.N // denom))  # smallest multiple >= N
        if n > max_n:
            raise RationalityError(
                "alpha = 0 needs every probability to be a rational number with "
                f"workable denominator; these need n = {n} > cap {max_n}. "
                "Pick a small positive alpha instead."
            )
        part = build_partition(dist, n)
        assert part.alpha == 0
        return n, part.alpha
    for n in range(dist.N, max_n + 1):
        part = build_partition(dist, n)
        if part.alpha <= target:
            return n, part.alpha
    raise PartitionError(f"no n <= {max_n} realizes alpha <= {float(target)}")
