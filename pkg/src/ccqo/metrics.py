"""Solution-quality and timing summaries: relative gap, performance profiles, box plots."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence

import numpy as np

from .errors import EmptySample, MissingCell, ZeroBest


def relative_gap_percent(f_tilde: float, f_star: float) -> float:
    """``100 * (f_tilde - f_star) / f_star``; undefined when ``f_star == 0``."""
    if f_star == 0:
        raise ZeroBest("relative gap is undefined for a zero best value")
    return 100.0 * (f_tilde - f_star) / f_star


@dataclass(frozen=True)
class ProfilePoint:
    tau: float
    fraction: float


def performance_ratios(table: Mapping[str, Mapping[str, float]]) -> Dict[str, Dict[str, float]]:
    """``r[problem][solver] = t / min_s t`` for a ``{problem: {solver: t}}`` table."""
    solvers = sorted({s for row in table.values() for s in row})
    out = {}
    for problem, row in table.items():
        missing = [s for s in solvers if s not in row]
        if missing:
            raise MissingCell(f"{problem!r} has no measurement for {missing}")
        t = np.array([row[s] for s in solvers], dtype=float)
        if np.any(t <= 0):
            raise ValueError(f"measurements must be positive ({problem!r})")
        out[problem] = dict(zip(solvers, (t / t.min()).tolist()))
    return out


def performance_profile(table: Mapping[str, Mapping[str, float]]) -> Dict[str, List[ProfilePoint]]:
    """Empirical CDF of the performance ratios, one step per distinct ratio."""
    ratios = performance_ratios(table)
    n = len(ratios)
    solvers = sorted({s for row in ratios.values() for s in row})
    profile = {}
    for s in solvers:
        r = np.sort([row[s] for row in ratios.values()])
        taus = np.unique(r)
        counts = np.searchsorted(r, taus, side="right")
        profile[s] = [ProfilePoint(float(t), c / n) for t, c in zip(taus, counts)]
    return profile


@dataclass(frozen=True)
class BoxplotSummary:
    q25: float
    median: float
    q75: float
    lower_extreme: float
    upper_extreme: float
    outliers: tuple


def boxplot_stats(sample: Sequence[float]) -> BoxplotSummary:
    """Quartiles by linear interpolation between order statistics; 1.5 IQR whiskers.

    Outliers are the points strictly beyond 1.5 IQR from the box; the extremes
    are the most distant remaining points.
    """
    x = np.asarray(sample, dtype=float)
    if x.size == 0:
        raise EmptySample("box plot of an empty sample")
    q25, med, q75 = np.percentile(x, [25, 50, 75])
    iqr = q75 - q25
    lo_fence, hi_fence = q25 - 1.5 * iqr, q75 + 1.5 * iqr
    inside = x[(x >= lo_fence) & (x <= hi_fence)]
    outliers = tuple(sorted(float(v) for v in x[(x < lo_fence) | (x > hi_fence)]))
    return BoxplotSummary(float(q25), float(med), float(q75), float(inside.min()),
                          float(inside.max()), outliers)
