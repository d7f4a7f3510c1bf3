"""Monte Carlo estimation for random interval identified sets.

Coverage functions, capacity functionals, credible regions, and point
estimates, all computed from batches of simulated interval draws.  Intervals
are closed everywhere: a grid point sitting exactly on an endpoint counts as
covered, and two intervals sharing only an endpoint count as hitting.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEstimateError, ParameterError

#: Skip fraction above which a batch carries a data-quality warning.
HIGH_SKIP_RATE = 0.05


@dataclass(frozen=True)
class IntervalSet:
    """A closed interval [lo, hi]; one realization of a random identified set."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ParameterError(f"inverted interval [{self.lo}, {self.hi}]")

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def intersects(self, other: "IntervalSet") -> bool:
        return self.lo <= other.hi and self.hi >= other.lo

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


class SetDrawBatch:
    """A batch of interval draws from one source, with skip accounting.

    ``skipped`` counts draws the scenario rejected (guard violations such as
    inverted bounds); they are surfaced here rather than silently reordered.
    ``attempt_indices`` optionally records which attempt produced each stored
    draw, which lets run outputs reconcile rows against skips.
    """

    __slots__ = ("lo", "hi", "source", "scenario_id", "skipped", "attempt_indices",
                 "high_skip_warning")

    def __init__(self, lo, hi, source: str, scenario_id: str, skipped: int = 0,
                 attempt_indices=None):
        lo = np.array(lo, dtype=float)
        hi = np.array(hi, dtype=float)
        if lo.ndim != 1 or lo.shape != hi.shape:
            raise ParameterError("lo and hi must be 1-d arrays of equal length")
        if np.any(lo > hi):
            raise ParameterError("inverted draws must be skipped, not stored")
        if source not in ("prior", "posterior"):
            raise ParameterError(f"source must be 'prior' or 'posterior', got {source!r}")
        if skipped < 0:
            raise ParameterError("skipped count cannot be negative")
        self.lo = lo
        self.hi = hi
        self.source = source
        self.scenario_id = scenario_id
        self.skipped = int(skipped)
        if attempt_indices is not None:
            attempt_indices = np.array(attempt_indices, dtype=int)
            if attempt_indices.shape != lo.shape:
                raise ParameterError("attempt_indices must align with the draws")
        self.attempt_indices = attempt_indices
        self.lo.setflags(write=False)
        self.hi.setflags(write=False)
        self.high_skip_warning = self.skip_rate > HIGH_SKIP_RATE
        if self.high_skip_warning:
            warnings.warn(
                f"{scenario_id} {source} batch skipped {self.skipped} of "
                f"{self.skipped + len(self)} draws ({self.skip_rate:.1%})",
                stacklevel=2,
            )

    def __len__(self):
        return self.lo.shape[0]

    @property
    def skip_rate(self) -> float:
        total = self.skipped + len(self)
        return self.skipped / total if total else 0.0

    def as_intervals(self) -> list[IntervalSet]:
        return [IntervalSet(float(a), float(b)) for a, b in zip(self.lo, self.hi)]

    def __repr__(self):
        return (
            f"SetDrawBatch({self.scenario_id!r}, {self.source}, n={len(self)}, "
            f"skipped={self.skipped})"
        )


@dataclass(frozen=True)
class CoverageCurve:
    """Pointwise Monte Carlo coverage estimates over a grid."""

    grid: np.ndarray
    values: np.ndarray
    mc_draws: int

    def value_at(self, gamma: float) -> float:
        idx = int(np.argmin(np.abs(self.grid - gamma)))
        if not np.isclose(self.grid[idx], gamma):
            raise ParameterError(f"{gamma} is not a grid point")
        return float(self.values[idx])


def _require_nonempty(batch: SetDrawBatch):
    if len(batch) == 0:
        raise ParameterError("batch is empty")


def estimate_coverage(batch: SetDrawBatch, grid) -> CoverageCurve:
    """Fraction of draws covering each grid point."""
    _require_nonempty(batch)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ParameterError("grid must be a nonempty 1-d array")
    if np.any(np.diff(grid) <= 0):
        raise ParameterError("grid must be strictly increasing")
    inside = (batch.lo[None, :] <= grid[:, None]) & (grid[:, None] <= batch.hi[None, :])
    values = inside.mean(axis=1)
    return CoverageCurve(grid=grid.copy(), values=values, mc_draws=len(batch))


def estimate_capacity(batch: SetDrawBatch, probe: IntervalSet) -> float:
    """Fraction of draws hitting the probe interval (closed-interval overlap)."""
    _require_nonempty(batch)
    return float(np.mean((batch.lo <= probe.hi) & (batch.hi >= probe.lo)))


@dataclass(frozen=True)
class CredibleRegion:
    """An interval containing the whole random set with the target probability."""

    region: IntervalSet
    containment: float
    alpha: float


def credible_region(batch: SetDrawBatch, alpha: float) -> CredibleRegion:
    """Smallest endpoint-quantile interval containing a fraction >= alpha of draws.

    Starts from the (1-alpha)/2 lower quantile of the left endpoints and the
    matching upper quantile of the right endpoints, then walks both cut points
    outward one order statistic at a time until the fraction of draws fully
    inside reaches alpha.  Monotone in alpha by construction; alpha = 1 gives
    the hull of all draws.
    """
    if not 0 < alpha <= 1:
        raise ParameterError(f"alpha must lie in (0, 1], got {alpha}")
    if batch.source != "posterior":
        raise ParameterError("credible regions are defined for posterior batches")
    _require_nonempty(batch)
    n = len(batch)
    lo_sorted = np.sort(batch.lo)
    hi_sorted = np.sort(batch.hi)
    k = int(np.floor((1.0 - alpha) / 2.0 * n))
    while True:
        q_lo = lo_sorted[k]
        q_hi = hi_sorted[n - 1 - k]
        contained = float(np.mean((batch.lo >= q_lo) & (batch.hi <= q_hi)))
        if contained >= alpha or k == 0:
            break
        k -= 1
    return CredibleRegion(IntervalSet(float(q_lo), float(q_hi)), contained, alpha)


def point_estimate_set(batch: SetDrawBatch) -> IntervalSet:
    """Interval of Monte Carlo mean endpoints (the posterior-mean bounds)."""
    _require_nonempty(batch)
    lo = float(batch.lo.mean())
    hi = float(batch.hi.mean())
    if lo > hi:
        raise DegenerateEstimateError(
            f"mean bounds crossed: [{lo}, {hi}] for {batch.scenario_id}"
        )
    return IntervalSet(lo, hi)
