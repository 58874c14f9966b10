"""Floating-point Monte Carlo cross-check of the exact engine.

Orbits are simulated directly in doubles; correlations become hit
fractions of uniform samples, separations become sampled maxima.  The
point is cross-validation (exact values must land within a few standard
errors) and rough analysis of non-PL maps the exact engine rejects.
Estimates from non-PL maps carry an estimate-only flag downstream.

Same seed, same estimate: sampling is deterministic given the config.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .intervals import IntervalSet
from .plmaps import PLMap, Schedule


@dataclass(frozen=True, slots=True)
class SampleConfig:
    sample_count: int
    seed: int = 0

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")


@dataclass(frozen=True, slots=True)
class QuadraticMap:
    """Closed-form map c0 + c1*x + c2*x**2, evaluated in doubles only."""

    c0: float
    c1: float
    c2: float

    def __call__(self, xs: np.ndarray) -> np.ndarray:
        return self.c0 + xs * (self.c1 + xs * self.c2)


def _compile_plmap(m: PLMap) -> Callable[[np.ndarray], np.ndarray]:
    # boundary ties go to the lower piece; boundary hits are measure-null
    uppers = np.array([float(p.on.hi) for p in m.pieces[:-1]])
    slopes = np.array([float(p.slope) for p in m.pieces])
    intercepts = np.array([float(p.intercept) for p in m.pieces])

    def step(xs: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(uppers, xs, side="left")
        return slopes[idx] * xs + intercepts[idx]

    return step


@dataclass(frozen=True, slots=True)
class FloatSchedule:
    """Float-evaluated schedule; the estimate-only twin of Schedule."""

    lo: float
    hi: float
    preamble: tuple[Callable[[np.ndarray], np.ndarray], ...]
    cycle: tuple[Callable[[np.ndarray], np.ndarray], ...]
    estimate_only: bool = False

    @classmethod
    def from_schedule(cls, sch: Schedule) -> "FloatSchedule":
        return cls(
            lo=float(sch.domain.lo),
            hi=float(sch.domain.hi),
            preamble=tuple(_compile_plmap(m) for m in sch.preamble),
            cycle=tuple(_compile_plmap(m) for m in sch.cycle),
            estimate_only=False,
        )

    @classmethod
    def from_steps(cls, lo: float, hi: float, preamble, cycle) -> "FloatSchedule":
        return cls(
            lo=lo,
            hi=hi,
            preamble=tuple(preamble),
            cycle=tuple(cycle),
            estimate_only=True,
        )

    def map_at(self, n: int) -> Callable[[np.ndarray], np.ndarray]:
        if n < len(self.preamble):
            return self.preamble[n]
        return self.cycle[(n - len(self.preamble)) % len(self.cycle)]

    def orbit(self, xs: np.ndarray, n: int) -> np.ndarray:
        for i in range(n):
            xs = self.map_at(i)(xs)
        return xs


def _as_float_schedule(system: Schedule | FloatSchedule) -> FloatSchedule:
    if isinstance(system, FloatSchedule):
        return system
    return FloatSchedule.from_schedule(system)


def _member_mask(s: IntervalSet, xs: np.ndarray) -> np.ndarray:
    # openness flags matter even here: a constant piece parks positive
    # mass exactly on an endpoint, so strict/non-strict cannot be fudged
    mask = np.zeros(xs.shape, dtype=bool)
    for p in s.parts:
        lo, hi = float(p.lo), float(p.hi)
        at_lo = (xs > lo) if p.lo_open else (xs >= lo)
        at_hi = (xs < hi) if p.hi_open else (xs <= hi)
        mask |= at_lo & at_hi
    return mask


def mc_correlation(
    system: Schedule | FloatSchedule,
    a: IntervalSet,
    b: IntervalSet,
    n: int,
    cfg: SampleConfig,
) -> tuple[float, float]:
    """Estimate the lag-n normalized correlation of (A, B) by simulation.

    Returns (estimate, stderr) where the estimate is the fraction of
    uniform domain samples that start in A and land in B after n steps,
    an unbiased estimator of the exact normalized value; stderr is the
    binomial sqrt(p*(1-p)/m).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    fs = _as_float_schedule(system)
    rng = np.random.default_rng(cfg.seed)
    xs = rng.uniform(fs.lo, fs.hi, cfg.sample_count)
    in_a = _member_mask(a, xs)
    ys = fs.orbit(xs, n)
    hits = in_a & _member_mask(b, ys)
    p_hat = float(np.count_nonzero(hits)) / cfg.sample_count
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / cfg.sample_count)
    return p_hat, stderr


def mc_separation(
    system: Schedule | FloatSchedule,
    x: float,
    epsilon: float,
    n: int,
    cfg: SampleConfig,
) -> float:
    """Sampled maximum of |orbit(x) - orbit(y)| over y near x.

    y is drawn uniformly from the epsilon-ball around x clipped to the
    domain; the result is a lower bound on the true supremum.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    fs = _as_float_schedule(system)
    if not (fs.lo <= x <= fs.hi):
        raise ValueError(f"x = {x} outside the domain [{fs.lo}, {fs.hi}]")
    rng = np.random.default_rng(cfg.seed)
    ys = rng.uniform(max(fs.lo, x - epsilon), min(fs.hi, x + epsilon), cfg.sample_count)
    fx = fs.orbit(np.array([x]), n)[0]
    fy = fs.orbit(ys, n)
    return float(np.max(np.abs(fy - fx)))
