"""Interval colorings of the irrational rotation graph on [0, 1).

``x`` and ``y`` are adjacent when ``y - x = ±alpha (mod 1)``.  Every orbit is
a bi-infinite path ``x0 + k*alpha``.  A labeling rule here is piecewise
constant on finitely many half-open intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

GOLDEN = (math.sqrt(5) - 1) / 2


class NearRationalError(ValueError):
    pass


def nearest_rational(alpha: float, max_den: int = 10**6) -> tuple[Fraction, float]:
    """Best approximation ``p/q`` with ``q <= max_den`` and its distance from ``alpha``."""
    frac = Fraction(alpha).limit_denominator(max_den)
    return frac, abs(alpha - float(frac))


def check_irrational(alpha: float, max_den: int = 10**6, tol: float = 1e-13) -> None:
    """Reject ``alpha`` outside (0, 1) or within ``tol`` of a rational with denominator ``<= max_den``."""
    if not 0 < alpha < 1:
        raise NearRationalError(f"alpha={alpha} is not in (0, 1)")
    frac, err = nearest_rational(alpha, max_den)
    if err <= tol:
        raise NearRationalError(f"alpha={alpha!r} is within {err:.3g} of {frac}; treat it as rational")


def quadratic_irrationals(count: int = 10) -> list[float]:
    """``frac(sqrt(m))`` for the first non-square ``m >= 2``, plus the golden ratio."""
    out = [GOLDEN]
    m = 2
    while len(out) < count:
        r = math.isqrt(m)
        if r * r != m:
            out.append(math.sqrt(m) - r)
        m += 1
    return out


@dataclass(frozen=True)
class IntervalRule:
    """Label ``labels[i]`` on ``[cuts[i], cuts[i+1])`` with ``cuts[0] = 0`` and an implicit end at 1."""

    cuts: tuple[float, ...]
    labels: tuple[int, ...]

    def __post_init__(self):
        if len(self.cuts) != len(self.labels) or not self.cuts or self.cuts[0] != 0:
            raise ValueError("need one label per interval and a first cut at 0")
        if any(b <= a for a, b in zip(self.cuts, self.cuts[1:])) or self.cuts[-1] >= 1:
            raise ValueError("cuts must increase strictly inside [0, 1)")

    def label(self, x: float) -> int:
        return int(self.labels_at(np.asarray([x]))[0])

    def labels_at(self, xs: np.ndarray) -> np.ndarray:
        i = np.searchsorted(np.asarray(self.cuts), xs, side="right") - 1
        return np.asarray(self.labels)[i]

    def intervals(self) -> list[tuple[float, float, int]]:
        ends = list(self.cuts[1:]) + [1.0]
        return [(a, b, lab) for a, b, lab in zip(self.cuts, ends, self.labels)]

    def classes(self) -> dict[int, list[tuple[float, float]]]:
        out: dict[int, list[tuple[float, float]]] = {}
        for a, b, lab in self.intervals():
            out.setdefault(lab, []).append((a, b))
        return out

    def to_json(self) -> dict[str, Any]:
        return {"intervals": [[a, b, lab] for a, b, lab in self.intervals()]}


def rotation_coloring(alpha: float) -> IntervalRule:
    """Three-label interval rule with no monochromatic edge in the rotation graph.

    With ``a = min(alpha, 1 - alpha)`` and ``m = floor(1/a)``, the rung
    ``[k a, (k+1) a)`` gets label ``1 + k % 2``.  The leftover piece gets label
    3: it is ``[m a, 1)`` when ``m`` is even, and ``[1 - a, 1)`` when ``m`` is
    odd (which cuts the last rung short so that it cannot meet rung 0).
    """
    check_irrational(alpha)
    a = min(alpha, 1 - alpha)
    m = math.floor(1 / a)
    cuts = [k * a for k in range(m)]
    labels = [1 + k % 2 for k in range(m)]
    tail = m * a if m % 2 == 0 else 1 - a
    cuts.append(tail)
    labels.append(3)
    return IntervalRule(tuple(cuts), tuple(labels))


@dataclass(frozen=True)
class OrbitSegment:
    alpha: float
    x0: float
    length: int

    def points(self) -> np.ndarray:
        k = np.arange(self.length, dtype=np.float64)
        return np.mod(self.x0 + k * self.alpha, 1.0)

    def steps_ok(self, tol: float = 1e-9) -> bool:
        """Consecutive points differ by ``alpha`` mod 1."""
        d = np.mod(np.diff(self.points()) - self.alpha, 1.0)
        return bool(np.all((d < tol) | (d > 1 - tol)))


def check_rotation(rule: IntervalRule, alpha: float, x0: float, length: int) -> list[int]:
    """Indices ``k`` with ``rule(x_k) == rule(x_{k+1})`` along the orbit segment from ``x0``."""
    lab = rule.labels_at(OrbitSegment(alpha, x0, length).points())
    return np.flatnonzero(lab[:-1] == lab[1:]).tolist()


def grid_conflicts(rule: IntervalRule, alpha: float, grid: int = 10**6) -> int:
    """Grid points ``x = i/grid`` with ``rule(x) == rule(x + alpha mod 1)``."""
    xs = np.arange(grid, dtype=np.float64) / grid
    return int(np.sum(rule.labels_at(xs) == rule.labels_at(np.mod(xs + alpha, 1.0))))


def interval_independent(a: float, b: float, alpha: float, grid: int = 10**6) -> bool:
    """Grid oracle: no point of ``[a, b)`` has a neighbor ``x ± alpha`` inside ``[a, b)``."""
    xs = a + (b - a) * np.arange(grid, dtype=np.float64) / grid
    for y in (np.mod(xs + alpha, 1.0), np.mod(xs - alpha, 1.0)):
        if np.any((y >= a) & (y < b)):
            return False
    return True


def two_label_candidates(count: int = 1000, seed: int = 0, alpha: float | None = None) -> list[IntervalRule]:
    """Deterministic sweep of two-label interval rules.

    Includes the halves split, the three-label rule for ``alpha`` with label 3
    folded into 1 or 2, and random partitions into up to 12 pieces.
    """
    out = [IntervalRule((0.0,), (1,)), IntervalRule((0.0, 0.5), (1, 2))]
    if alpha is not None:
        base = rotation_coloring(alpha)
        for fold in (1, 2):
            out.append(_merge(base.cuts, tuple(fold if lab == 3 else lab for lab in base.labels)))
    rng = np.random.default_rng(seed)
    while len(out) < count:
        pieces = int(rng.integers(2, 13))
        cuts = np.unique(np.round(rng.random(pieces - 1), 12))
        cuts = tuple([0.0] + [float(c) for c in cuts if 0 < c < 1])
        labels = tuple(int(v) for v in rng.integers(1, 3, size=len(cuts)))
        out.append(_merge(cuts, labels))
    return out[:count]


def _merge(cuts: Sequence[float], labels: Sequence[int]) -> IntervalRule:
    """Drop cuts between equal labels."""
    keep_c, keep_l = [cuts[0]], [labels[0]]
    for c, lab in zip(cuts[1:], labels[1:]):
        if lab != keep_l[-1]:
            keep_c.append(c)
            keep_l.append(lab)
    return IntervalRule(tuple(keep_c), tuple(keep_l))


@dataclass
class SweepResult:
    alpha: float
    candidates: int
    failed: int
    survivors: list[IntervalRule]

    @property
    def all_fail(self) -> bool:
        return self.failed == self.candidates


def falsification_sweep(
    alpha: float, count: int = 1000, seed: int = 0, x0: float = 0.1, length: int = 10**4
) -> SweepResult:
    """Check every two-label candidate along one orbit; a candidate fails on its first conflict."""
    cands = two_label_candidates(count, seed, alpha)
    xs = OrbitSegment(alpha, x0, length).points()
    survivors = []
    for rule in cands:
        lab = rule.labels_at(xs)
        if not np.any(lab[:-1] == lab[1:]):
            survivors.append(rule)
    return SweepResult(alpha, len(cands), len(cands) - len(survivors), survivors)
