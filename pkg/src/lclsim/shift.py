"""Desk-scale shift graph of Z: aperiodic bit sequences and adaptive window rules.

A vertex of the shift graph is a bi-infinite aperiodic 0/1 sequence; its two
neighbors are the shifts by +1 and -1, so along one orbit the graph is a
bi-infinite path whose position ``q`` sees the sequence re-centered at ``q``.
Here a sequence is materialized on a finite range ``[lo, hi]`` and a labeling
rule may read as many bits around a position as it needs.  Every rule tracks
the exact interval of bits each output depends on.  A position whose interval
would leave the materialized range is reported as a radius-cap failure rather
than silently guessed.

All array kernels work in index coordinates ``0..N-1``; :class:`RuleOutput`
converts back to positions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .engine import IdAssignment, LocalAlgorithm, ceil_log2, run
from .graph import make_path
from .lcl import ColoringProblem, LclProblem, MisProblem

INF = np.iinfo(np.int64).max // 4


class AperiodicityError(ValueError):
    """A sequence has a period within the certified bound, or sampling gave up."""


class RadiusCapError(RuntimeError):
    """The rule needs bits beyond the materialized range."""


# sequences


@dataclass(frozen=True)
class BitSequence:
    """Bits at positions ``lo..hi`` with aperiodicity certified up to ``p_max``."""

    lo: int
    bits: np.ndarray = field(repr=False, compare=False)
    p_max: int
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        b = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if b.ndim != 1 or b.size == 0:
            raise ValueError("bits must be a nonempty 1-d array")
        if np.any(b > 1):
            raise ValueError("bits must be 0 or 1")
        b.setflags(write=False)
        object.__setattr__(self, "bits", b)
        if self.p_max >= b.size:
            raise AperiodicityError(f"cannot certify periods up to {self.p_max} on {b.size} bits")
        p = first_period(b, self.p_max)
        if p is not None:
            raise AperiodicityError(f"sequence has period {p} <= p_max={self.p_max}")

    @classmethod
    def from_string(cls, s: str, lo: int = 0, p_max: int = 1, provenance: dict | None = None) -> "BitSequence":
        bits = np.frombuffer(s.strip().encode(), dtype=np.uint8) - ord("0")
        return cls(lo, bits, p_max, provenance or {"source": "string"})

    @property
    def hi(self) -> int:
        return self.lo + self.bits.size - 1

    def __len__(self) -> int:
        return self.bits.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitSequence):
            return NotImplemented
        return self.lo == other.lo and self.p_max == other.p_max and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.lo, self.p_max, self.bits.tobytes()))

    def bit(self, i: int) -> int:
        if not self.lo <= i <= self.hi:
            raise RadiusCapError(f"position {i} outside materialized range [{self.lo}, {self.hi}]")
        return int(self.bits[i - self.lo])

    def window(self, center: int, radius: int) -> str:
        if center - radius < self.lo or center + radius > self.hi:
            raise RadiusCapError(f"window of radius {radius} at {center} leaves [{self.lo}, {self.hi}]")
        i = center - self.lo
        return "".join("01"[b] for b in self.bits[i - radius : i + radius + 1])

    def restrict(self, lo: int, hi: int) -> "BitSequence":
        """Sub-sequence on ``[lo, hi]``; aperiodicity is not re-certified (``p_max`` becomes 0)."""
        if lo < self.lo or hi > self.hi or lo > hi:
            raise ValueError(f"[{lo}, {hi}] is not inside [{self.lo}, {self.hi}]")
        return BitSequence(lo, self.bits[lo - self.lo : hi - self.lo + 1], 0, dict(self.provenance))

    def to_string(self) -> str:
        return (self.bits + ord("0")).tobytes().decode()

    def dumps(self) -> str:
        return (
            f"@offset {self.lo}\n@p_max {self.p_max}\n"
            f"@provenance {json.dumps(self.provenance, sort_keys=True)}\n{self.to_string()}\n"
        )

    @classmethod
    def loads(cls, text: str) -> "BitSequence":
        header: dict[str, str] = {}
        body = []
        for line in text.splitlines():
            if line.startswith("@"):
                key, _, value = line[1:].partition(" ")
                header[key] = value
            elif line.strip():
                body.append(line.strip())
        return cls.from_string(
            "".join(body),
            int(header.get("offset", 0)),
            int(header.get("p_max", 0)),
            json.loads(header.get("provenance", "{}")),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def load(cls, path: str | Path) -> "BitSequence":
        return cls.loads(Path(path).read_text())


def first_period(bits: np.ndarray, p_max: int) -> int | None:
    """Smallest ``1 <= p <= p_max`` with ``bits[i] == bits[i+p]`` everywhere, if any."""
    for p in range(1, p_max + 1):
        if p >= bits.size or not np.any(bits[p:] != bits[:-p]):
            return p
    return None


def sample_aperiodic(W: int, p_max: int = 64, seed: int = 0, index: int = 0, budget: int = 100) -> BitSequence:
    """Uniform bits on ``[-W, W]`` conditioned on having no period ``<= p_max``."""
    if not W > p_max >= 1:
        raise ValueError("need W > p_max >= 1")
    for attempt in range(budget):
        rng = np.random.default_rng([seed, index, attempt])
        bits = rng.integers(0, 2, size=2 * W + 1, dtype=np.uint8)
        if first_period(bits, p_max) is None:
            return BitSequence(-W, bits, p_max, {"seed": seed, "index": index, "attempt": attempt})
    raise AperiodicityError(f"no aperiodic sample within {budget} attempts (W={W}, p_max={p_max})")


def sample_many(count: int, W: int, p_max: int = 64, seed: int = 0) -> list[BitSequence]:
    return [sample_aperiodic(W, p_max, seed, i) for i in range(count)]


# window identifiers


def _nearest_true(D: np.ndarray) -> np.ndarray:
    """Distance from each index to the nearest True entry of ``D`` (INF if none)."""
    n = D.size
    idx = np.arange(n, dtype=np.int64)
    prev = np.maximum.accumulate(np.where(D, idx, -INF))
    nxt = np.minimum.accumulate(np.where(D, idx, INF)[::-1])[::-1]
    return np.minimum(idx - prev, nxt - idx)


def _next_pow2(x: np.ndarray) -> np.ndarray:
    """Least power of two ``>= x`` for ``x >= 1`` (exact below 2**53)."""
    _, e = np.frexp((x - 1).astype(np.float64))
    return np.int64(1) << e.astype(np.int64)


@dataclass
class WindowIds:
    """Per-index window identifiers; ``ids`` is int64 when every window fits, else object."""

    rho: np.ndarray
    ids: np.ndarray
    valid: np.ndarray
    dep_lo: np.ndarray
    dep_hi: np.ndarray


def window_id_arrays(bits: np.ndarray, r: int) -> WindowIds:
    """Window identifiers with separation ``r`` for every index of ``bits``.

    ``rho[i]`` is the least power of two such that the radius-``rho`` window at
    ``i`` differs from the window at every ``i'`` with ``1 <= |i - i'| <= r``.
    The identifier is the window read as a binary number behind a leading 1,
    so windows of different radii never collide.  Deciding ``rho`` reads bits
    up to distance ``rho + r`` from ``i``.
    """
    if r < 1:
        raise ValueError("separation must be >= 1")
    b = np.asarray(bits, dtype=np.uint8)
    n = b.size
    need = np.zeros(n, dtype=np.int64)
    for e in range(1, r + 1):
        dist = np.full(n, INF, dtype=np.int64)
        if e < n:
            dist[: n - e] = _nearest_true(b[:-e] != b[e:])
        need = np.maximum(need, dist)
        shifted = np.full(n, INF, dtype=np.int64)
        if e < n:
            shifted[e:] = dist[: n - e]
        need = np.maximum(need, shifted)
    found = need < INF
    rho = np.where(found, _next_pow2(np.maximum(np.where(found, need, 1), 1)), 0)
    idx = np.arange(n, dtype=np.int64)
    dep_lo = idx - r - rho
    dep_hi = idx + r + rho
    valid = found & (dep_lo >= 0) & (dep_hi <= n - 1)
    big = bool(np.any(rho[valid] > 30))
    ids = np.zeros(n, dtype=object if big else np.int64)
    for p in np.unique(rho[valid]):
        sel = np.flatnonzero(valid & (rho == p))
        w = 2 * int(p) + 1
        mat = b[sel[:, None] + np.arange(-p, p + 1)[None, :]]
        if w + 1 <= 62:
            weights = np.int64(1) << np.arange(w - 1, -1, -1, dtype=np.int64)
            ids[sel] = (np.int64(1) << w) | (mat.astype(np.int64) @ weights)
        else:
            for j, row in zip(sel, mat):
                ids[j] = int("1" + (row + ord("0")).tobytes().decode(), 2)
    return WindowIds(rho, ids, valid, dep_lo, dep_hi)


def window_ids(seq: BitSequence, position: int, r: int) -> tuple[str, int]:
    """``(window content, radius_used)`` at ``position``: the window grows by doubling
    until it differs from the windows of all positions within distance ``r``."""
    out = _adaptive(seq, position, lambda bits: window_id_arrays(bits, r))
    i, wid = out
    rho = int(wid.rho[i])
    return _bits_of(wid.ids[i], 2 * rho + 1), rho + r


def _bits_of(value: int, width: int) -> str:
    return format(int(value), "b")[1:].zfill(width)


def _adaptive(seq: BitSequence, position: int, compute):
    """Evaluate ``compute`` on growing sub-ranges around ``position`` until it is valid there."""
    if not seq.lo <= position <= seq.hi:
        raise RadiusCapError(f"position {position} outside [{seq.lo}, {seq.hi}]")
    h = 32
    while True:
        lo, hi = max(seq.lo, position - h), min(seq.hi, position + h)
        res = compute(seq.bits[lo - seq.lo : hi - seq.lo + 1])
        i = position - lo
        if res.valid[i]:
            return i, res
        if lo == seq.lo and hi == seq.hi:
            raise RadiusCapError(
                f"sequence insufficiently aperiodic at this scale: position {position} "
                f"needs bits beyond [{seq.lo}, {seq.hi}]"
            )
        h *= 2


# chains: the anchors of a path, each linked to the next one


def _cv_step(c: np.ndarray, nxt: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """One color-reduction step toward the successor; returns (new colors, ok)."""
    if c.dtype == object:
        out = np.zeros(c.size, dtype=np.int64)
        ok = np.ones(c.size, dtype=bool)
        for j, (a, b) in enumerate(zip(c, nxt)):
            x = int(a) ^ int(b)
            if x == 0:
                ok[j] = False
                continue
            i = (x & -x).bit_length() - 1
            out[j] = 2 * i + ((int(a) >> i) & 1)
        return out, ok
    x = c ^ nxt
    ok = x != 0
    i = np.bitwise_count((x & -x) - 1).astype(np.int64)
    return 2 * i + ((c >> i) & 1), ok


CV_STEPS = 6


@dataclass
class _Chain:
    """State on anchors ``0..m-1``; link ``k`` joins anchor ``k`` to ``k+1``."""

    color: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    ok: np.ndarray
    link_lo: np.ndarray
    link_hi: np.ndarray
    link_ok: np.ndarray

    def pull_next(self, sel: np.ndarray | None = None) -> None:
        """Anchors (all, or those in ``sel``) absorb the dependency of their successor."""
        lo = np.append(np.minimum(self.link_lo, self.lo[1:]), INF)
        hi = np.append(np.maximum(self.link_hi, self.hi[1:]), -INF)
        ok = np.append(self.link_ok & self.ok[1:], False)
        self._absorb(lo, hi, ok, sel)

    def pull_prev(self, sel: np.ndarray | None = None) -> None:
        lo = np.insert(np.minimum(self.link_lo, self.lo[:-1]), 0, INF)
        hi = np.insert(np.maximum(self.link_hi, self.hi[:-1]), 0, -INF)
        ok = np.insert(self.link_ok & self.ok[:-1], 0, False)
        self._absorb(lo, hi, ok, sel)

    def _absorb(self, lo, hi, ok, sel) -> None:
        if sel is None:
            np.minimum(self.lo, lo, out=self.lo)
            np.maximum(self.hi, hi, out=self.hi)
            self.ok &= ok
        else:
            self.lo = np.where(sel, np.minimum(self.lo, lo), self.lo)
            self.hi = np.where(sel, np.maximum(self.hi, hi), self.hi)
            self.ok = np.where(sel, self.ok & ok, self.ok)

    def neighbors(self, values: np.ndarray, fill) -> tuple[np.ndarray, np.ndarray]:
        prev = np.concatenate([[fill], values[:-1]]).astype(values.dtype)
        nxt = np.concatenate([values[1:], [fill]]).astype(values.dtype)
        return prev, nxt

    def three_color(self) -> None:
        """Successor-oriented color reduction to < 6 colors, then removal of 5, 4, 3."""
        for _ in range(CV_STEPS):
            c = self.color
            if c.size < 2:
                self.ok[:] = False
                self.color = np.zeros(c.size, dtype=np.int64)
                return
            new = np.zeros(c.size, dtype=np.int64)
            new[:-1], good = _cv_step(c[:-1], c[1:])
            self.pull_next()
            self.ok[:-1] &= good
            self.color = new
        c = self.color
        for t in (5, 4, 3):
            sel = c == t
            prev, nxt = self.neighbors(c, -1)
            choice = np.zeros(c.size, dtype=np.int64)
            for k in (2, 1, 0):
                choice = np.where((prev != k) & (nxt != k), k, choice)
            c = np.where(sel, choice, c)
            self.pull_next(sel)
            self.pull_prev(sel)
        self.color = c

    def mis_by_class(self) -> np.ndarray:
        """Maximal independent set of the chain from a proper 3-coloring, one class per round."""
        member = np.zeros(self.color.size, dtype=bool)
        for t in (0, 1, 2):
            sel = self.color == t
            prev, nxt = self.neighbors(member, False)
            member = member | (sel & ~prev & ~nxt)
            if t > 0:  # the first class joins without looking around
                self.pull_next(sel)
                self.pull_prev(sel)
        return member


def _links(anchors: np.ndarray, s_lo, s_hi, s_ok) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Aggregate status dependency over ``(a_k, a_{k+1}]`` for consecutive anchors."""
    if anchors.size < 2:
        e = np.zeros(0, dtype=np.int64)
        return e, e, np.zeros(0, dtype=bool)
    end = anchors[-1] + 1
    starts = anchors[:-1] + 1
    lo = np.minimum.reduceat(s_lo[:end], starts)
    hi = np.maximum.reduceat(s_hi[:end], starts)
    ok = np.logical_and.reduceat(s_ok[:end], starts)
    return lo, hi, ok


# rules


@dataclass
class RuleOutput:
    """Labels of a rule over a materialized range, in position coordinates."""

    lo: int
    labels: np.ndarray
    valid: np.ndarray
    dep_lo: np.ndarray
    dep_hi: np.ndarray

    @property
    def positions(self) -> np.ndarray:
        return self.lo + np.arange(self.labels.size, dtype=np.int64)

    @property
    def radius(self) -> np.ndarray:
        p = self.positions
        return np.maximum(p - self.dep_lo, self.dep_hi - p)

    def at(self, p: int) -> tuple[int, int]:
        i = p - self.lo
        if not 0 <= i < self.labels.size or not self.valid[i]:
            raise RadiusCapError(f"no certified label at position {p}")
        return int(self.labels[i]), int(self.radius[i])


class AdaptiveRule:
    """A labeling rule on sequences that reads a position-dependent window of bits.

    Subclasses implement :meth:`evaluate_bits` in index coordinates, returning
    ``(labels, valid, dep_lo, dep_hi)`` where ``[dep_lo[i], dep_hi[i]]`` is the
    exact index interval of bits that label ``i`` was computed from.
    """

    name = "rule"
    labels: tuple[int, ...] = ()

    def evaluate_bits(self, bits: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        raise NotImplementedError

    def evaluate_all(self, seq: BitSequence) -> RuleOutput:
        labels, valid, dlo, dhi = self.evaluate_bits(seq.bits)
        return RuleOutput(seq.lo, labels, valid, dlo + seq.lo, dhi + seq.lo)

    def evaluate(self, seq: BitSequence, position: int) -> tuple[int, int]:
        """``(label, radius_used)`` at one position, reading as little of ``seq`` as it can."""

        def compute(bits):
            labels, valid, dlo, dhi = self.evaluate_bits(bits)
            return _Evaluated(labels, valid, dlo, dhi)

        i, res = _adaptive(seq, position, compute)
        return int(res.labels[i]), int(max(i - res.dep_lo[i], res.dep_hi[i] - i))

    def certificate(self, seq: BitSequence, position: int) -> bool:
        """Truncate ``seq`` to the reported radius and confirm the label is reproduced."""
        label, u = self.evaluate(seq, position)
        sub = seq.restrict(position - u, position + u)
        labels, valid, _, _ = self.evaluate_bits(sub.bits)
        return bool(valid[u]) and int(labels[u]) == label

    def describe(self) -> dict[str, Any]:
        return {"name": self.name}


@dataclass
class _Evaluated:
    labels: np.ndarray
    valid: np.ndarray
    dep_lo: np.ndarray
    dep_hi: np.ndarray


class ThreeColoringRule(AdaptiveRule):
    """Proper 3-coloring of every orbit, from window identifiers with separation 1."""

    name = "adaptive-3-coloring"
    labels = (1, 2, 3)

    def evaluate_bits(self, bits):
        n = len(bits)
        wid = window_id_arrays(bits, 1)
        chain = _Chain(
            color=wid.ids,
            lo=wid.dep_lo.copy(),
            hi=wid.dep_hi.copy(),
            ok=wid.valid.copy(),
            link_lo=np.arange(1, n, dtype=np.int64),
            link_hi=np.arange(1, n, dtype=np.int64),
            link_ok=np.ones(max(n - 1, 0), dtype=bool),
        )
        chain.three_color()
        return chain.color + 1, chain.ok, chain.lo, chain.hi


THREE_COLORING = ThreeColoringRule()


def adaptive_three_coloring(seq: BitSequence, position: int) -> tuple[int, int]:
    """``(color in {1,2,3}, radius_used)``; consecutive positions always get different colors."""
    return THREE_COLORING.evaluate(seq, position)


def _segment_prefix(values_lo, values_hi, ok, seg_start) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Running min/max/all of per-index values from the start of each index's segment."""
    n = values_lo.size
    seg = np.cumsum(seg_start) - 1  # -1 before the first segment
    big = np.int64(2 * (np.abs(values_lo).max() + np.abs(values_hi).max() + n + 1))
    run_lo = seg * big - np.maximum.accumulate(seg * big - values_lo)
    run_hi = np.maximum.accumulate(seg * big + values_hi) - seg * big
    bad = np.cumsum(~ok)
    start_idx = np.maximum.accumulate(np.where(seg_start, np.arange(n), 0))
    before = np.where(start_idx > 0, bad[start_idx - 1], 0)
    run_ok = (bad - before == 0) & (seg >= 0)
    return run_lo, run_hi, run_ok


class LiftedRule(AdaptiveRule):
    """A deterministic LOCAL algorithm turned into a rule on sequences.

    Pseudo-identifiers come from the sequence itself: window identifiers feed
    ``J`` levels of ruling sets on the orbit, so that consecutive anchors end
    up between ``2**J > 2T+2`` and ``3**J <= 2**L`` apart.  A position's
    pseudo-identifier is its offset from the nearest anchor on its left, which
    is distinct from every other position within distance ``2T+2`` and fits in
    the ``L`` identifier bits the algorithm expects.  The algorithm then runs
    on the orbit as on a path carrying these identifiers.
    """

    def __init__(self, A: LocalAlgorithm, n_nominal: int):
        if A.mode != "deterministic":
            raise ValueError("only deterministic algorithms can be lifted")
        self.A = A
        self.n_nominal = int(n_nominal)
        self.T = A.radius(self.n_nominal)
        self.R = 2 * self.T + 2
        self.levels = max(1, math.ceil(math.log2(self.R + 1)))
        self.id_length = ceil_log2(self.n_nominal)
        if A.uses_ids and 3**self.levels > 1 << self.id_length:
            raise ValueError(
                f"n_nominal={n_nominal} too small: anchor gaps reach {3**self.levels}, "
                f"identifiers have {self.id_length} bits"
            )
        self.separation = 3 ** (self.levels - 1)
        self.name = f"lifted-{A.name}"
        self.labels = tuple(A.labels)

    def describe(self):
        return {
            "name": self.name,
            "algorithm": self.A.describe(),
            "n_nominal": self.n_nominal,
            "T": self.T,
            "separation": self.separation,
            "levels": self.levels,
        }

    def pseudo_id_arrays(self, bits: np.ndarray):
        """``(ids, valid, dep_lo, dep_hi)`` of the anchor-offset identifiers."""
        n = len(bits)
        idx = np.arange(n, dtype=np.int64)
        wid = window_id_arrays(bits, self.separation)
        s_lo, s_hi, s_ok = idx.copy(), idx.copy(), np.ones(n, dtype=bool)
        anchors = idx.copy()
        for _ in range(self.levels):
            link_lo, link_hi, link_ok = _links(anchors, s_lo, s_hi, s_ok)
            chain = _Chain(
                color=wid.ids[anchors],
                lo=np.minimum(s_lo[anchors], wid.dep_lo[anchors]),
                hi=np.maximum(s_hi[anchors], wid.dep_hi[anchors]),
                ok=s_ok[anchors] & wid.valid[anchors],
                link_lo=link_lo,
                link_hi=link_hi,
                link_ok=link_ok,
            )
            chain.three_color()
            member = chain.mis_by_class()
            s_lo[anchors], s_hi[anchors], s_ok[anchors] = chain.lo, chain.hi, chain.ok
            anchors = anchors[member]
        is_anchor = np.zeros(n, dtype=bool)
        is_anchor[anchors] = True
        run_lo, run_hi, run_ok = _segment_prefix(s_lo, s_hi, s_ok, is_anchor)
        last = np.maximum.accumulate(np.where(is_anchor, idx, -1))
        offset = np.where(last >= 0, idx - last, 0)
        if np.any(offset[run_ok] >= 3**self.levels):
            raise AssertionError("anchor gap exceeds its bound")
        return offset, run_ok, run_lo, run_hi

    def evaluate_bits(self, bits):
        n = len(bits)
        idx = np.arange(n, dtype=np.int64)
        T = self.T
        if not self.A.uses_ids:
            labels = run(make_path(n), self.A, None, self.n_nominal).labels
            return np.asarray(labels, dtype=np.int64), np.ones(n, dtype=bool), idx.copy(), idx.copy()
        ids, ok, dlo, dhi = self.pseudo_id_arrays(bits)
        ids = np.where(ok, ids, 0)
        payload = IdAssignment(tuple(int(v) for v in ids), self.id_length, "within", self.R)
        labels = np.asarray(run(make_path(n), self.A, payload, self.n_nominal).labels, dtype=np.int64)
        valid = np.zeros(n, dtype=bool)
        lo = idx.copy()
        hi = idx.copy()
        if n >= 2 * T + 1:
            win = 2 * T + 1
            sw = np.lib.stride_tricks.sliding_window_view
            inner = slice(T, n - T)
            valid[inner] = sw(ok, win).all(axis=1)
            lo[inner] = sw(dlo, win).min(axis=1)
            hi[inner] = sw(dhi, win).max(axis=1)
        return labels, valid, lo, hi


def window_rule_from_algorithm(A: LocalAlgorithm, n_nominal: int) -> LiftedRule:
    return LiftedRule(A, n_nominal)


# checking


def _path_vertex_violations(problem: LclProblem, labels: np.ndarray) -> np.ndarray:
    """Boolean mask over interior vertices ``1..len-2`` of a path labeling."""
    own, left, right = labels[1:-1], labels[:-2], labels[2:]
    if isinstance(problem, ColoringProblem):
        return (own == left) | (own == right)
    if isinstance(problem, MisProblem):
        return np.where(own == 1, (left == 1) | (right == 1), (left != 1) & (right != 1))
    out = np.zeros(own.size, dtype=bool)
    for j, (a, b, c) in enumerate(zip(own.tolist(), left.tolist(), right.tolist())):
        out[j] = problem.vertex_violation(a, [(0, b, 1), (1, c, 0)], 2) is not None
    return out


@dataclass
class SampleCheck:
    sample: int
    positions: int
    violations: int
    cap_errors: int
    max_radius: int
    median_radius: float
    first_violation: int | None


@dataclass
class WindowReport:
    rule: str
    problem: str
    span: int
    samples: list[SampleCheck]

    @property
    def violations(self) -> int:
        return sum(s.violations for s in self.samples)

    @property
    def cap_errors(self) -> int:
        return sum(s.cap_errors for s in self.samples)

    @property
    def violating_samples(self) -> list[int]:
        return [s.sample for s in self.samples if s.violations]

    def to_json(self) -> dict[str, Any]:
        return {
            "rule": self.rule,
            "problem": self.problem,
            "span": self.span,
            "samples": len(self.samples),
            "violations": self.violations,
            "cap_errors": self.cap_errors,
            "violating_samples": self.violating_samples[:20],
        }


def check_window_rule(
    rule: AdaptiveRule, problem: LclProblem, samples: Iterable[BitSequence], span: int
) -> WindowReport:
    """Evaluate ``rule`` on positions ``-span..span`` of each sample and check the path labeling.

    Only interior vertices whose label and both neighbor labels are certified
    are checked; uncertified positions count as cap errors.
    """
    rows = []
    for k, seq in enumerate(samples):
        if seq.lo > -span or seq.hi < span:
            raise ValueError(f"sample {k} does not cover [-{span}, {span}]")
        out = rule.evaluate_all(seq)
        a, b = -span - seq.lo, span - seq.lo + 1
        labels, valid, radius = out.labels[a:b], out.valid[a:b], out.radius[a:b]
        bad = _path_vertex_violations(problem, labels)
        checked = valid[1:-1] & valid[:-2] & valid[2:]
        hits = np.flatnonzero(bad & checked)
        rv = radius[valid]
        rows.append(
            SampleCheck(
                sample=k,
                positions=int(labels.size),
                violations=int(hits.size),
                cap_errors=int((~valid).sum()),
                max_radius=int(rv.max()) if rv.size else -1,
                median_radius=float(np.median(rv)) if rv.size else float("nan"),
                first_violation=int(hits[0]) + 1 - span if hits.size else None,
            )
        )
    return WindowReport(rule.name, problem.name, span, rows)


@dataclass
class CertificateReport:
    checked: int
    failures: int
    failed_positions: list[int]

    @property
    def ok(self) -> bool:
        return self.failures == 0


def certify_batch(
    rule: AdaptiveRule,
    seq: BitSequence,
    positions: Sequence[int] | None = None,
    out: RuleOutput | None = None,
    filler: int = 4,
    seed: int = 0,
    chunk_bits: int = 1 << 20,
) -> CertificateReport:
    """Locality certificates for many positions at once.

    Each position's bits, truncated to its reported radius, are laid out side
    by side with random filler in between, and the rule is evaluated once per
    chunk of about ``chunk_bits`` bits.  A position passes if its label is
    reproduced and its tracked dependency stays inside its own window.
    """
    out = rule.evaluate_all(seq) if out is None else out
    pos = out.positions[out.valid] if positions is None else np.asarray(positions, dtype=np.int64)
    idx = pos - out.lo
    if not np.all(out.valid[idx]):
        raise RadiusCapError("certificates requested for uncertified positions")
    widths = 2 * out.radius[idx] + 1
    ends = np.cumsum(widths + filler)
    rng = np.random.default_rng(seed)
    failed: list[int] = []
    start = 0
    while start < pos.size:
        base = ends[start - 1] if start else 0
        stop = max(start + 1, int(np.searchsorted(ends, base + chunk_bits, side="right")))
        failed += _certify_chunk(rule, seq, out, pos[start:stop], filler, rng)
        start = stop
    return CertificateReport(int(pos.size), len(failed), failed)


def _certify_chunk(rule, seq, out, pos, filler, rng) -> list[int]:
    idx = pos - out.lo
    u = out.radius[idx]
    widths = 2 * u + 1
    starts = filler + np.concatenate([[0], np.cumsum(widths + filler)[:-1]])
    total = int(starts[-1] + widths[-1] + filler)
    buf = rng.integers(0, 2, size=total, dtype=np.uint8)
    inner = np.arange(widths.sum()) - np.repeat(np.cumsum(widths) - widths, widths)
    buf[np.repeat(starts, widths) + inner] = seq.bits[np.repeat(pos - u - seq.lo, widths) + inner]
    labels, valid, dlo, dhi = rule.evaluate_bits(buf)
    centers = starts + u
    good = (
        valid[centers]
        & (labels[centers] == out.labels[idx])
        & (dlo[centers] >= starts)
        & (dhi[centers] <= starts + widths - 1)
    )
    return pos[~good].tolist()
