"""Minkowski-geometry primitives: events, interval classification, and the
ball-and-deadline layout the protocol runs on.

All coordinates live in one agreed inertial frame with c = 1, so one unit of
time equals one unit of distance.  Interval classification uses an absolute
tolerance ``GEOM_TOL``: pairs within the tolerance of the light cone are
reported as lightlike rather than silently pushed to either side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Optional, Sequence

#: Absolute tolerance (coordinate units) for lightlike classification.
GEOM_TOL = 1e-9

Vec3 = tuple[float, float, float]


class Separation(Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"


def _vec3(pos: Sequence[float]) -> Vec3:
    v = tuple(float(c) for c in pos)
    if len(v) != 3:
        raise ValueError(f"position needs 3 components, got {len(v)}")
    if not all(math.isfinite(c) for c in v):
        raise ValueError(f"position components must be finite: {v!r}")
    return v  # type: ignore[return-value]


@dataclass(frozen=True)
class SpacetimeEvent:
    """A point (t; x, y, z) in the agreed frame."""

    t: float
    pos: Vec3

    def __post_init__(self) -> None:
        t = float(self.t)
        if not math.isfinite(t):
            raise ValueError(f"time coordinate must be finite: {self.t!r}")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "pos", _vec3(self.pos))

    def shifted(self, dt: float = 0.0, dpos: Sequence[float] = (0.0, 0.0, 0.0)) -> "SpacetimeEvent":
        d = _vec3(dpos)
        return SpacetimeEvent(self.t + dt, tuple(p + q for p, q in zip(self.pos, d)))


def separation(a: SpacetimeEvent, b: SpacetimeEvent) -> Separation:
    """Classify the interval between two events.

    Spacelike iff |dt| < |dx|, timelike iff |dt| > |dx|; equality within
    GEOM_TOL is lightlike.  Symmetric and translation invariant.
    """
    dt = abs(a.t - b.t)
    dx = math.dist(a.pos, b.pos)
    if abs(dt - dx) <= GEOM_TOL:
        return Separation.LIGHTLIKE
    return Separation.TIMELIKE if dt > dx else Separation.SPACELIKE


def lightcone_deficit(cause: SpacetimeEvent, effect: SpacetimeEvent) -> float:
    """Signed distance of `effect` from the future light cone of `cause`.

    Positive when `effect` cannot be influenced by `cause` (spacelike, or
    `effect` earlier than `cause`); zero on the cone; negative strictly
    inside.  A flow of information cause -> effect is admissible iff the
    deficit is <= GEOM_TOL.
    """
    return math.dist(cause.pos, effect.pos) - (effect.t - cause.t)


@dataclass(frozen=True)
class Ball:
    """A closed spatial ball hosting the laboratories of one site."""

    center: Vec3
    radius: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", _vec3(self.center))
        r = float(self.radius)
        if not (math.isfinite(r) and r > 0.0):
            raise ValueError(f"ball radius must be finite and > 0, got {self.radius!r}")
        object.__setattr__(self, "radius", r)

    def contains(self, pos: Sequence[float], tol: float = GEOM_TOL) -> bool:
        return math.dist(self.center, _vec3(pos)) <= self.radius + tol


@dataclass(frozen=True)
class LayoutViolation:
    """One violated layout constraint, identified by its party indices."""

    constraint: str
    i: int
    j: Optional[int]
    detail: str

    def __str__(self) -> str:
        where = f"i={self.i}" if self.j is None else f"i={self.i}, j={self.j}"
        return f"{self.constraint} ({where}): {self.detail}"


@dataclass(frozen=True)
class Layout:
    """The M site balls plus their per-site message deadlines.

    Structural requirements (M >= 2, one deadline per ball) are enforced on
    construction; the geometric protocol constraints are checked by
    `validate_layout`, which reports violations as data.
    """

    balls: tuple[Ball, ...]
    deadlines: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "balls", tuple(self.balls))
        object.__setattr__(self, "deadlines", tuple(float(t) for t in self.deadlines))
        if len(self.balls) < 2:
            raise ValueError("layout needs at least two balls")
        if len(self.deadlines) != len(self.balls):
            raise ValueError(
                f"{len(self.balls)} balls but {len(self.deadlines)} deadlines"
            )
        if not all(math.isfinite(t) for t in self.deadlines):
            raise ValueError("deadlines must be finite")

    @property
    def M(self) -> int:
        return len(self.balls)

    def center_distance(self, i: int, j: int) -> float:
        return math.dist(self.balls[i].center, self.balls[j].center)

    def gap_distance(self, i: int, j: int) -> float:
        """Shortest distance between any point of ball i and any point of ball j."""
        bi, bj = self.balls[i], self.balls[j]
        return self.center_distance(i, j) - bi.radius - bj.radius

    @cached_property
    def pair_distances(self) -> tuple[tuple[float, ...], ...]:
        """Symmetric matrix of gap distances; diagonal entries are 0."""
        m = self.M
        return tuple(
            tuple(0.0 if i == j else self.gap_distance(i, j) for j in range(m))
            for i in range(m)
        )

    @property
    def max_gap(self) -> float:
        return max(
            self.pair_distances[i][j]
            for i in range(self.M)
            for j in range(self.M)
            if i != j
        )

    @property
    def min_deadline(self) -> float:
        return min(self.deadlines)


def validate_layout(layout: Layout) -> list[LayoutViolation]:
    """Check all geometric protocol constraints; an empty list means ok.

    Three constraint families are checked for every party pair i != j:
    balls must be separated by a positive gap d_ij, each ball must satisfy
    2*r_i < d_ij, and each deadline must satisfy 0 < t_i < d_ij.
    """
    out: list[LayoutViolation] = []
    m = layout.M
    d = layout.pair_distances
    for i in range(m):
        for j in range(i + 1, m):
            if d[i][j] <= 0.0:
                out.append(
                    LayoutViolation(
                        "positive_gap", i, j,
                        f"gap distance {d[i][j]:.6g} <= 0 (balls intersect or touch)",
                    )
                )
    for i in range(m):
        ri = layout.balls[i].radius
        for j in range(m):
            if j == i:
                continue
            if not 2.0 * ri < d[i][j]:
                out.append(
                    LayoutViolation(
                        "ball_diameter", i, j,
                        f"2*r_i = {2.0 * ri:.6g} not < d_ij = {d[i][j]:.6g}",
                    )
                )
    for i in range(m):
        ti = layout.deadlines[i]
        if not ti > 0.0:
            out.append(
                LayoutViolation("deadline_positive", i, None, f"t_i = {ti:.6g} not > 0")
            )
        for j in range(m):
            if j == i:
                continue
            if not ti < d[i][j]:
                out.append(
                    LayoutViolation(
                        "deadline_upper", i, j,
                        f"t_i = {ti:.6g} not < d_ij = {d[i][j]:.6g}",
                    )
                )
    return out


def regions_spacelike(layout: Layout, i: int, k: int) -> bool:
    """Whether the delivery region at ball i is spacelike from the one at ball k.

    The delivery region for ball i is the full ball with times in [0, t_i]
    (worst case over laboratory placement, so no trust in reported lab
    positions is needed).  Over the product of the two regions, |dt| is
    maximised by max(t_i, t_k) and |dx| is minimised by the gap distance
    d_ik, and the two extremes are attained simultaneously at region
    corners; the regions are therefore spacelike separated iff
    max(t_i, t_k) < d_ik.  The lightlike band of width GEOM_TOL counts as
    not spacelike.
    """
    m = layout.M
    if i == k:
        raise ValueError("regions_spacelike needs two distinct parties")
    if not (0 <= i < m and 0 <= k < m):
        raise IndexError(f"party indices out of range for M={m}: {(i, k)}")
    worst_dt = max(layout.deadlines[i], layout.deadlines[k])
    gap = layout.pair_distances[i][k]
    return gap - worst_dt > GEOM_TOL


def translate_layout(layout: Layout, offset: Sequence[float]) -> Layout:
    """Rigid spatial translation; used by invariance tests."""
    off = _vec3(offset)
    return Layout(
        balls=tuple(
            Ball(tuple(c + o for c, o in zip(b.center, off)), b.radius)
            for b in layout.balls
        ),
        deadlines=layout.deadlines,
    )
