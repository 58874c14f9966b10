"""Hitting times, finite-resolution verdicts, and exact certificates.

The asymptotic properties checked here (transitivity, weak mixing,
mixing, sensitivity) cannot be decided by finitely many operations, so
every analysis returns one of three honest outcomes:

* ``WITNESSED_UP_TO`` -- an exhaustive finite witness at the stated grid
  granularity and horizon (every required hitting time was found);
* ``CERTIFIED_FAIL`` -- a machine-checkable certificate that the
  property fails at every horizon (only a forward-invariant separating
  set can justify this);
* ``INCONCLUSIVE`` -- neither, with the unhit pairs listed.

Hitting-time indices start at 1 (the first applied map); correlation
lags elsewhere start at 0.  Both conventions are surfaced in reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DegeneratePair,
    GridMismatch,
    NotInvariant,
    ScaleMismatch,
)
from .intervals import Interval, IntervalSet, as_rational
from .mixing import IndexSet
from .plmaps import DEFAULT_BUDGET, PropagationBudget, Schedule

CERTIFIED_FAIL = "CERTIFIED_FAIL"
WITNESSED_UP_TO = "WITNESSED_UP_TO"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True, slots=True)
class HittingSet:
    """The times n in {1..horizon} at which the n-step image of U meets V."""

    u: IntervalSet
    v: IntervalSet
    horizon: int
    members: tuple[int, ...]

    def __post_init__(self):
        if self.members and not (1 <= self.members[0] and self.members[-1] <= self.horizon):
            raise ValueError("hitting times must lie in {1..horizon}")

    @property
    def is_empty(self) -> bool:
        return not self.members

    def least(self) -> int | None:
        return self.members[0] if self.members else None

    def as_index_set(self) -> IndexSet:
        """View over {0..horizon} for density machinery (0 never present)."""
        return IndexSet(self.horizon + 1, self.members)


def hitting_set(
    sch: Schedule,
    u: IntervalSet,
    v: IntervalSet,
    horizon: int,
    budget: PropagationBudget = DEFAULT_BUDGET,
) -> HittingSet:
    """Exact membership for every n in {1..horizon} via forward images."""
    if u.is_empty or v.is_empty:
        raise ValueError("U and V must be nonempty")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    members = []
    cur = u
    for n in range(1, horizon + 1):
        cur = sch.map_at(n - 1).image_set(cur)
        budget.check(n, cur)
        if cur.meets(v):
            members.append(n)
    return HittingSet(u=u, v=v, horizon=horizon, members=tuple(members))


@dataclass(frozen=True, slots=True)
class InvariantSetCertificate:
    """Exact proof that no forward image of U ever meets V.

    Verified at construction: the first image of U lands in W, every
    scheduled map sends W into itself, and W misses V.  Together these
    force the n-step image of U inside W for all n >= 1, so the hitting
    set of (U, V) is empty at every horizon -- a sound negative verdict
    for transitivity, weak mixing, and mixing alike.
    """

    w: IntervalSet
    u: IntervalSet
    v: IntervalSet
    checked_maps: int


def invariant_set_certificate(
    sch: Schedule, u: IntervalSet, v: IntervalSet, w: IntervalSet
) -> InvariantSetCertificate:
    """Check the three certificate conditions exactly; raise NotInvariant."""
    if u.is_empty or v.is_empty or w.is_empty:
        raise ValueError("U, V, W must be nonempty")
    first = sch.map_at(0).image_set(u)
    if not first.subset_of(w):
        raise NotInvariant(
            "first_image",
            first,
            f"the first image of U is {first}, not contained in W = {w}",
        )
    maps = tuple(sch.preamble) + tuple(sch.cycle)
    for i, m in enumerate(maps):
        img = m.image_set(w)
        if not img.subset_of(w):
            raise NotInvariant(
                "forward_invariance",
                img,
                f"scheduled map #{i} sends W onto {img}, escaping W = {w}",
            )
    if w.meets(v):
        raise NotInvariant(
            "separation",
            w.intersect(v),
            f"W meets V in {w.intersect(v)}",
        )
    return InvariantSetCertificate(w=w, u=u, v=v, checked_maps=len(maps))


def recheck_certificate(cert: InvariantSetCertificate, sch: Schedule) -> bool:
    """Re-run the certificate conditions from scratch."""
    try:
        invariant_set_certificate(sch, cert.u, cert.v, cert.w)
    except NotInvariant:
        return False
    return True


# ---------------------------------------------------------------------------
# grid verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Verdict:
    """Three-valued outcome of a finite-resolution property check.

    witnesses maps each tested pair (or pair of pairs) to a concrete
    hitting index; unhit lists the pairs that block a WITNESSED verdict.
    tail is the mixing tail start (mixing property only).  A
    CERTIFIED_FAIL verdict carries the underlying certificate.
    """

    property_name: str
    kind: str
    grid: Fraction | None
    horizon: int
    tail: int | None = None
    witnesses: tuple = ()
    unhit: tuple = ()
    certificate: InvariantSetCertificate | None = None

    @property
    def witnessed(self) -> bool:
        return self.kind == WITNESSED_UP_TO


def open_grid(domain: Interval, g: Fraction) -> tuple[IntervalSet, ...]:
    """Open cells of exact width g tiling the domain; g must divide it."""
    g = as_rational(g)
    length = domain.hi - domain.lo
    if g <= 0 or g > length:
        raise GridMismatch(f"grid width {g} does not fit the domain {domain}")
    cells = length / g
    if cells.denominator != 1:
        raise GridMismatch(f"grid width {g} does not divide the domain length {length}")
    return tuple(
        IntervalSet(
            (Interval(domain.lo + i * g, domain.lo + (i + 1) * g, True, True),)
        )
        for i in range(int(cells))
    )


def closed_grid(domain: Interval, g: Fraction) -> tuple[Interval, ...]:
    g = as_rational(g)
    length = domain.hi - domain.lo
    if g <= 0 or g > length:
        raise ScaleMismatch(f"cell width {g} does not fit the domain {domain}")
    cells = length / g
    if cells.denominator != 1:
        raise ScaleMismatch(f"cell width {g} does not divide the domain length {length}")
    return tuple(
        Interval(domain.lo + i * g, domain.lo + (i + 1) * g) for i in range(int(cells))
    )


def _hitting_masks(
    sch: Schedule,
    cells: tuple[IntervalSet, ...],
    horizon: int,
    budget: PropagationBudget,
) -> list[list[int]]:
    """masks[u][v]: bit n-1 set iff the n-step image of cell u meets cell v."""
    k = len(cells)
    masks = [[0] * k for _ in range(k)]
    for ui, cell in enumerate(cells):
        cur = cell
        for n in range(1, horizon + 1):
            cur = sch.map_at(n - 1).image_set(cur)
            budget.check(n, cur)
            bit = 1 << (n - 1)
            row = masks[ui]
            for vi, target in enumerate(cells):
                if cur.meets(target):
                    row[vi] |= bit
    return masks


def _least_bit(mask: int) -> int:
    return (mask & -mask).bit_length()  # 1-based hitting index


def transitivity_verdict(
    sch: Schedule,
    g: Fraction,
    horizon: int,
    budget: PropagationBudget = DEFAULT_BUDGET,
) -> Verdict:
    """Witness every ordered cell pair hitting within the horizon.

    Never claims CERTIFIED_FAIL on its own; a negative claim needs an
    invariant-set certificate.
    """
    cells = open_grid(sch.domain, g)
    masks = _hitting_masks(sch, cells, horizon, budget)
    k = len(cells)
    witnesses = []
    unhit = []
    for ui in range(k):
        for vi in range(k):
            mask = masks[ui][vi]
            if mask:
                witnesses.append(((ui, vi), _least_bit(mask)))
            else:
                unhit.append((ui, vi))
    kind = WITNESSED_UP_TO if not unhit else INCONCLUSIVE
    return Verdict(
        property_name="transitivity",
        kind=kind,
        grid=as_rational(g),
        horizon=horizon,
        witnesses=tuple(witnesses),
        unhit=tuple(unhit),
    )


def weakmix_verdict(
    sch: Schedule,
    g: Fraction,
    horizon: int,
    budget: PropagationBudget = DEFAULT_BUDGET,
) -> Verdict:
    """Witness a shared hitting time for every two ordered cell pairs."""
    cells = open_grid(sch.domain, g)
    masks = _hitting_masks(sch, cells, horizon, budget)
    k = len(cells)
    pairs = [(ui, vi) for ui in range(k) for vi in range(k)]
    witnesses = []
    unhit = []
    for p1 in pairs:
        m1 = masks[p1[0]][p1[1]]
        for p2 in pairs:
            common = m1 & masks[p2[0]][p2[1]]
            if common:
                witnesses.append(((p1, p2), _least_bit(common)))
            else:
                unhit.append((p1, p2))
    kind = WITNESSED_UP_TO if not unhit else INCONCLUSIVE
    return Verdict(
        property_name="weak_mixing",
        kind=kind,
        grid=as_rational(g),
        horizon=horizon,
        witnesses=tuple(witnesses),
        unhit=tuple(unhit),
    )


def mixing_verdict(
    sch: Schedule,
    g: Fraction,
    horizon: int,
    budget: PropagationBudget = DEFAULT_BUDGET,
) -> Verdict:
    """Find the least tail start N with every pair hit at all n in {N..horizon}."""
    cells = open_grid(sch.domain, g)
    masks = _hitting_masks(sch, cells, horizon, budget)
    k = len(cells)
    full = (1 << horizon) - 1
    witnesses = []
    unhit = []
    tail = 1
    for ui in range(k):
        for vi in range(k):
            mask = masks[ui][vi]
            missing = full & ~mask
            start = missing.bit_length() + 1  # first index past the last miss
            if start > horizon:
                unhit.append((ui, vi))
            else:
                witnesses.append(((ui, vi), start))
                tail = max(tail, start)
    if unhit:
        return Verdict(
            property_name="mixing",
            kind=INCONCLUSIVE,
            grid=as_rational(g),
            horizon=horizon,
            witnesses=tuple(witnesses),
            unhit=tuple(unhit),
        )
    return Verdict(
        property_name="mixing",
        kind=WITNESSED_UP_TO,
        grid=as_rational(g),
        horizon=horizon,
        tail=tail,
        witnesses=tuple(witnesses),
    )


def certified_fail_verdict(
    property_name: str, cert: InvariantSetCertificate, horizon: int
) -> Verdict:
    """Package an invariant-set certificate as a negative verdict."""
    return Verdict(
        property_name=property_name,
        kind=CERTIFIED_FAIL,
        grid=None,
        horizon=horizon,
        certificate=cert,
    )


# ---------------------------------------------------------------------------
# sensitivity
# ---------------------------------------------------------------------------


def sensitivity_constant(x0, y0) -> Fraction:
    """Separation constant guaranteed by weak mixing: |x0 - y0| / 8.

    Splitting the distance between any two reference points as 8*delta
    leaves every point at least 4*delta from one of them, and steering a
    neighborhood toward both targets costs 2*delta of slack -- hence
    delta survives as a sensitivity constant.
    """
    x0, y0 = as_rational(x0), as_rational(y0)
    if x0 == y0:
        raise DegeneratePair("reference points must differ")
    return abs(x0 - y0) / 8


@dataclass(frozen=True, slots=True)
class CellWitness:
    cell: Interval
    n: int
    diameter: Fraction


@dataclass(frozen=True, slots=True)
class CellFailure:
    cell: Interval
    max_diameter: Fraction


@dataclass(frozen=True, slots=True)
class SensitivityCertificate:
    """Per-cell separation witnesses, re-checkable exactly.

    For every closed width-`scale` cell of the domain grid some time
    n <= horizon has the n-step image exceed diameter 2*delta.  A set of
    diameter > 2*delta leaves, for each of its points, another point more
    than delta away -- so every orbit leaving from anywhere in a cell has
    a companion in that cell separating beyond delta by time n.  This is
    a scale-bounded statement; smaller neighborhoods than `scale` are
    simply not examined.
    """

    delta: Fraction
    scale: Fraction
    horizon: int
    per_cell: tuple[CellWitness, ...]

    @property
    def passed(self) -> bool:
        return True


@dataclass(frozen=True, slots=True)
class SensitivityFailure:
    """Cells whose images never exceeded diameter 2*delta within the horizon."""

    delta: Fraction
    scale: Fraction
    horizon: int
    failures: tuple[CellFailure, ...]

    @property
    def passed(self) -> bool:
        return False


def sensitivity_certificate(
    sch: Schedule,
    delta,
    scale,
    horizon: int,
    budget: PropagationBudget = DEFAULT_BUDGET,
) -> SensitivityCertificate | SensitivityFailure:
    """Search each grid cell for the least n with image diameter > 2*delta."""
    delta = as_rational(delta)
    scale = as_rational(scale)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    cells = closed_grid(sch.domain, scale)
    goal = 2 * delta
    found: list[CellWitness] = []
    failed: list[CellFailure] = []
    for cell in cells:
        cur = IntervalSet((cell,))
        best = cur.diameter()
        hit = None
        for n in range(1, horizon + 1):
            cur = sch.map_at(n - 1).image_set(cur)
            budget.check(n, cur)
            d = cur.diameter()
            if d > best:
                best = d
            if d > goal:
                hit = CellWitness(cell=cell, n=n, diameter=d)
                break
        if hit is None:
            failed.append(CellFailure(cell=cell, max_diameter=best))
        else:
            found.append(hit)
    if failed:
        return SensitivityFailure(
            delta=delta, scale=scale, horizon=horizon, failures=tuple(failed)
        )
    return SensitivityCertificate(
        delta=delta, scale=scale, horizon=horizon, per_cell=tuple(found)
    )
