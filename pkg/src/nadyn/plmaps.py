"""Piecewise-linear self-maps and time-varying schedules of them.

A :class:`PLMap` is finitely many exact affine pieces tiling a closed
domain interval; construction verifies the tiling (no gaps, no overlaps,
flags honored) and the self-map property, both exactly.  A
:class:`Schedule` realizes a time-varying iteration x_{n+1} = f_n(x_n)
as an eventually-periodic sequence of maps; the orbit map for the first
n steps is the composition of f_0 .. f_{n-1}.

Forward images and preimages of interval sets are exact.  Iterated
preimages can grow their part count exponentially, so every iteration is
guarded by a :class:`PropagationBudget`: exceeding it raises hard, never
truncates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BudgetExceeded,
    MalformedInterval,
    NotSelfMap,
    OutOfDomain,
    PieceGap,
    PieceOverlap,
    UnknownExample,
)
from .intervals import Interval, IntervalSet, as_rational, canonicalize


def _affine_interval(iv: Interval, slope: Fraction, intercept: Fraction) -> Interval:
    """Exact image of one interval under x -> slope*x + intercept."""
    if slope == 0:
        return Interval(intercept, intercept)
    a = slope * iv.lo + intercept
    b = slope * iv.hi + intercept
    if slope > 0:
        return Interval(a, b, iv.lo_open, iv.hi_open)
    return Interval(b, a, iv.hi_open, iv.lo_open)


@dataclass(frozen=True, slots=True)
class Piece:
    on: Interval
    slope: Fraction
    intercept: Fraction

    def __post_init__(self):
        if not isinstance(self.on, Interval):
            raise MalformedInterval(f"piece interval must be an Interval, got {self.on!r}")
        object.__setattr__(self, "slope", as_rational(self.slope))
        object.__setattr__(self, "intercept", as_rational(self.intercept))

    def __str__(self) -> str:
        return f"{self.on}: {self.slope}*x + {self.intercept}"


@dataclass(frozen=True, slots=True)
class PLMap:
    """Validated piecewise-linear self-map of a closed interval."""

    domain: Interval
    pieces: tuple[Piece, ...]

    def __post_init__(self):
        d = self.domain
        if d.lo_open or d.hi_open or d.is_point:
            raise MalformedInterval(f"domain must be a closed nondegenerate interval, got {d}")
        if not self.pieces:
            raise PieceGap("no pieces: the whole domain is uncovered")
        pieces = tuple(sorted(self.pieces, key=lambda p: p.on.sort_key()))
        object.__setattr__(self, "pieces", pieces)
        first, last = pieces[0].on, pieces[-1].on
        if first.lo > d.lo or (first.lo == d.lo and first.lo_open):
            raise PieceGap(f"domain start {d.lo} uncovered (first piece begins at {first})")
        if first.lo < d.lo:
            raise PieceOverlap(f"piece {first} extends below the domain start")
        for a, b in zip(pieces, pieces[1:]):
            if b.on.lo > a.on.hi:
                raise PieceGap(f"gap between {a.on} and {b.on}")
            if b.on.lo < a.on.hi:
                raise PieceOverlap(f"{a.on} and {b.on} overlap")
            covered_left = not a.on.hi_open
            covered_right = not b.on.lo_open
            if covered_left and covered_right:
                raise PieceOverlap(f"point {a.on.hi} covered by both {a.on} and {b.on}")
            if not covered_left and not covered_right:
                raise PieceGap(f"point {a.on.hi} covered by neither {a.on} nor {b.on}")
        if last.hi < d.hi or (last.hi == d.hi and last.hi_open):
            raise PieceGap(f"domain end {d.hi} uncovered (last piece ends at {last})")
        if last.hi > d.hi:
            raise PieceOverlap(f"piece {last} extends beyond the domain end")
        for p in pieces:
            img = _affine_interval(p.on, p.slope, p.intercept)
            if img.lo < d.lo or img.hi > d.hi:
                raise NotSelfMap(
                    f"piece {p} maps onto {img}, outside the domain {d}",
                    piece=p,
                    image=img,
                )

    def piece_at(self, x: Fraction) -> Piece:
        for p in self.pieces:
            if p.on.contains(x):
                return p
        raise OutOfDomain(f"{x} is not in the domain {self.domain}")

    def eval_point(self, x) -> Fraction:
        """Exact value at a domain point."""
        x = as_rational(x)
        if not self.domain.contains(x):
            raise OutOfDomain(f"{x} is not in the domain {self.domain}")
        p = self.piece_at(x)
        return p.slope * x + p.intercept

    def image_set(self, s: IntervalSet) -> IntervalSet:
        """Exact forward image of a subset of the domain."""
        if not s.is_empty and (s.infimum < self.domain.lo or s.supremum > self.domain.hi):
            raise OutOfDomain(f"set {s} is not contained in the domain {self.domain}")
        out: list[Interval] = []
        for p in self.pieces:
            for part in s.parts:
                got = part.intersect(p.on)
                if got is not None:
                    out.append(_affine_interval(got, p.slope, p.intercept))
        return canonicalize(out)

    def preimage_set(self, s: IntervalSet) -> IntervalSet:
        """Exact preimage within the domain; s may be any interval set."""
        out: list[Interval] = []
        for p in self.pieces:
            if p.slope == 0:
                # a constant piece contributes all of itself or nothing
                if s.contains_point(p.intercept):
                    out.append(p.on)
                continue
            inv_slope = Fraction(1) / p.slope
            inv_intercept = -p.intercept * inv_slope
            run: list[Interval] = []
            for part in s.parts:
                cand = _affine_interval(part, inv_slope, inv_intercept).intersect(p.on)
                if cand is not None:
                    run.append(cand)
            if p.slope < 0:
                run.reverse()
            out.extend(run)
        # runs are emitted piece-by-piece in domain order: already sorted
        return canonicalize(out)


def make_plmap(domain: Interval, pieces) -> PLMap:
    """Build a validated PLMap from (interval, slope, intercept) triples."""
    built = tuple(
        p if isinstance(p, Piece) else Piece(p[0], p[1], p[2]) for p in pieces
    )
    return PLMap(domain, built)


@dataclass(frozen=True, slots=True)
class Schedule:
    """Eventually-periodic sequence of maps sharing one domain.

    ``map_at(n)`` is ``preamble[n]`` while the preamble lasts, then the
    cycle repeats forever.  A constant schedule (empty preamble, cycle of
    one) recovers an autonomous system.
    """

    preamble: tuple[PLMap, ...]
    cycle: tuple[PLMap, ...]
    domain: Interval

    def __post_init__(self):
        if not self.cycle:
            raise MalformedInterval("schedule cycle must be nonempty")
        for m in self.preamble + self.cycle:
            if m.domain != self.domain:
                raise MalformedInterval(
                    f"all maps must share the domain {self.domain}, got {m.domain}"
                )

    @classmethod
    def constant(cls, m: PLMap) -> "Schedule":
        return cls((), (m,), m.domain)

    @classmethod
    def cycling(cls, maps) -> "Schedule":
        maps = tuple(maps)
        return cls((), maps, maps[0].domain)

    def map_at(self, n: int) -> PLMap:
        if n < 0:
            raise ValueError("map index must be nonnegative")
        if n < len(self.preamble):
            return self.preamble[n]
        return self.cycle[(n - len(self.preamble)) % len(self.cycle)]

    def shift(self, m: int) -> "Schedule":
        """The schedule as seen from time m: shift.map_at(j) == map_at(m+j)."""
        if m < 0:
            raise ValueError("shift must be nonnegative")
        p = len(self.preamble)
        if m < p:
            return Schedule(self.preamble[m:], self.cycle, self.domain)
        k = (m - p) % len(self.cycle)
        return Schedule((), self.cycle[k:] + self.cycle[:k], self.domain)


@dataclass(frozen=True, slots=True)
class PropagationBudget:
    """Hard cap on interval-set part counts during iteration."""

    max_parts: int = 1 << 20

    def __post_init__(self):
        if self.max_parts < 1:
            raise ValueError("max_parts must be >= 1")

    def check(self, step: int, s: IntervalSet) -> None:
        if len(s.parts) > self.max_parts:
            raise BudgetExceeded(step, len(s.parts), self.max_parts)


DEFAULT_BUDGET = PropagationBudget()


def prefix_image(
    sch: Schedule, s: IntervalSet, n: int, budget: PropagationBudget = DEFAULT_BUDGET
) -> IntervalSet:
    """Image of s under the first n maps; n = 0 returns s unchanged."""
    if n < 0:
        raise ValueError("n must be >= 0")
    cur = s
    for i in range(n):
        cur = sch.map_at(i).image_set(cur)
        budget.check(i + 1, cur)
    return cur


def prefix_preimage(
    sch: Schedule, s: IntervalSet, n: int, budget: PropagationBudget = DEFAULT_BUDGET
) -> IntervalSet:
    """Preimage of s under the composition of the first n maps."""
    if n < 0:
        raise ValueError("n must be >= 0")
    cur = s
    for step, i in enumerate(reversed(range(n)), start=1):
        cur = sch.map_at(i).preimage_set(cur)
        budget.check(step, cur)
    return cur


# ---------------------------------------------------------------------------
# bundled example systems
# ---------------------------------------------------------------------------

_UNIT = Interval(0, 1)


def _tent() -> PLMap:
    return make_plmap(
        _UNIT,
        [
            (Interval(0, Fraction(1, 2)), 2, 0),
            (Interval(Fraction(1, 2), 1, lo_open=True), -2, 2),
        ],
    )


def _doubling() -> PLMap:
    return make_plmap(
        _UNIT,
        [
            (Interval(0, Fraction(1, 2), hi_open=True), 2, 0),
            (Interval(Fraction(1, 2), 1), 2, -1),
        ],
    )


def _three_branch() -> PLMap:
    # tent on [0,1] extended by an expanding branch folding (1,3/2] onto (0,1];
    # [0,1] is forward-invariant, so nothing above 1 is ever hit again.
    dom = Interval(0, Fraction(3, 2))
    return make_plmap(
        dom,
        [
            (Interval(0, Fraction(1, 2)), 2, 0),
            (Interval(Fraction(1, 2), 1, lo_open=True), -2, 2),
            (Interval(1, Fraction(3, 2), lo_open=True), 2, -2),
        ],
    )


_EXAMPLES = {
    "tent": lambda: Schedule.constant(_tent()),
    "doubling": lambda: Schedule.constant(_doubling()),
    "example31": lambda: Schedule.constant(_three_branch()),
    "tent_doubling_alternating": lambda: Schedule.cycling([_tent(), _doubling()]),
}


def bundled_example(name: str) -> Schedule:
    """Return a documented example schedule by name.

    tent / doubling: the classic expanding maps on [0,1].
    example31: the three-branch map on [0,3/2] that is sensitive but not
    topologically transitive (its left unit interval is invariant).
    tent_doubling_alternating: a genuinely time-varying cycle of two maps.
    """
    try:
        builder = _EXAMPLES[name]
    except KeyError:
        raise UnknownExample(
            f"unknown example {name!r}; choose from {sorted(_EXAMPLES)}"
        ) from None
    return builder()


BUNDLED_EXAMPLE_NAMES = tuple(sorted(_EXAMPLES))
