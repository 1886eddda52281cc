"""Reference LOCAL algorithms and sequential oracles."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Any, Callable, Sequence

import numpy as np

from .engine import (
    IdAssignment,
    LocalAlgorithm,
    RandomPayload,
    RoundAlgorithm,
    ceil_log2,
    log_star,
    run,
)
from .graph import Graph, make_path
from .lcl import LabelingError, check, coloring_problem
from .randomness import stream_words

# greedy


def greedy_coloring(G: Graph, order: Sequence[int] | None = None) -> list[int]:
    """Each vertex, in ``order``, takes the least color absent among already-colored neighbors."""
    order = range(G.n) if order is None else order
    color = [0] * G.n
    for v in order:
        used = {color[w] for w in G.adj[v]}
        c = 1
        while c in used:
            c += 1
        color[v] = c
    return color


# Linial-style color reduction


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


def _next_prime(q: int) -> int:
    while not _is_prime(q):
        q += 1
    return q


def _iroot_ceil(m: int, e: int) -> int:
    """Smallest integer q >= 1 with q**e >= m."""
    q = max(1, int(round(m ** (1.0 / e))) - 2)
    while q**e < m:
        q += 1
    while q > 1 and (q - 1) ** e >= m:
        q -= 1
    return q


@lru_cache(maxsize=None)
def reduction_step(m: int, d: int) -> tuple[int, int] | None:
    """Best ``(q, k)`` for one polynomial step from ``m`` colors, or None if no step shrinks.

    A color is read as a degree-<=k polynomial over GF(q) (needs ``q**(k+1) >= m``);
    two distinct ones agree on at most ``k`` points, so ``q > d*k`` leaves a
    point where a vertex differs from all its neighbors.  New palette: ``q*q``.
    """
    best = None
    for k in range(1, 64):
        q = _next_prime(max(d * k + 1, _iroot_ceil(m, k + 1), 2))
        if best is None or q * q < best[0] * best[0]:
            best = (q, k)
        if d * k + 1 > m:
            break
    if best is None or best[0] * best[0] >= m:
        return None
    return best


@lru_cache(maxsize=None)
def reduction_schedule(L: int, d: int) -> tuple[tuple[int, int], ...]:
    m = 1 << L
    steps = []
    while (s := reduction_step(m, d)) is not None:
        steps.append(s)
        m = s[0] * s[0]
    return tuple(steps)


def _final_palette(L: int, d: int) -> int:
    steps = reduction_schedule(L, d)
    return steps[-1][0] ** 2 if steps else 1 << L


MAX_ID_BITS = 62


@lru_cache(maxsize=None)
def palette_bound(d: int) -> int:
    """Largest palette the reduction can stall at, over all ID lengths up to 62 bits."""
    return max(_final_palette(L, d) for L in range(1, MAX_ID_BITS + 1))


@lru_cache(maxsize=None)
def padded_steps(L: int, d: int) -> int:
    """Reduction rounds padded to be nondecreasing in ``L``."""
    return max(len(reduction_schedule(j, d)) for j in range(1, L + 1))


def _poly_values(c: int, q: int, k: int) -> list[int]:
    coeffs = []
    for _ in range(k + 1):
        coeffs.append(c % q)
        c //= q
    vals = []
    for x in range(q):
        acc = 0
        for a in reversed(coeffs):
            acc = (acc * x + a) % q
        vals.append(acc)
    return vals


def _reduce_scalar(c: int, nbrs: list[int], q: int, k: int) -> int:
    own = _poly_values(c, q, k)
    others = [_poly_values(b, q, k) for b in nbrs]
    for x in range(q):
        if all(o[x] != own[x] for o in others):
            return x * q + own[x]
    return own[0]  # improper input: some neighbor shares the color


def _reduce_vector(colors: np.ndarray, nbr: np.ndarray, q: int, k: int) -> np.ndarray:
    n = colors.shape[0]
    digits = np.empty((n, k + 1), dtype=np.int64)
    c = colors.copy()
    for i in range(k + 1):
        digits[:, i] = c % q
        c //= q
    xs = np.arange(q, dtype=np.int64)
    powers = np.ones((k + 1, q), dtype=np.int64)
    for i in range(1, k + 1):
        powers[i] = (powers[i - 1] * xs) % q
    vals = (digits @ powers) % q  # (n, q)
    valid = nbr >= 0
    nvals = vals[np.where(valid, nbr, 0)]  # (n, D, q)
    clash = ((nvals == vals[:, None, :]) & valid[:, :, None]).any(axis=1)
    free = ~clash
    x = np.where(free.any(axis=1), free.argmax(axis=1), 0)
    return x * q + vals[np.arange(n), x]


def _eliminate_vector(colors: np.ndarray, nbr: np.ndarray, target: int, d: int) -> np.ndarray:
    sel = np.flatnonzero(colors == target)
    if sel.size == 0:
        return colors
    out = colors.copy()
    nb = nbr[sel]
    ncol = np.where(nb >= 0, colors[np.where(nb >= 0, nb, 0)], -1)
    present = (ncol[:, :, None] == np.arange(d + 1)[None, None, :]).any(axis=1)
    out[sel] = (~present).argmax(axis=1)
    return out


class LinialColoring(RoundAlgorithm):
    """Deterministic (d+1)-coloring in ``log* n + O(d^2)`` rounds.

    Phase 1 runs the polynomial reduction schedule starting from the ID palette
    ``2**L`` (padded with idle rounds so the radius is monotone in n).  Phase 2
    removes colors ``P-1, ..., d+1`` one per round, where ``P`` is
    :func:`palette_bound`.  Labels are ``1..d+1``.
    """

    def __init__(self, d: int, id_bits: Callable[[int], int] = ceil_log2):
        if d < 1:
            raise ValueError("degree bound must be >= 1")
        self.d = d
        self.id_bits = id_bits
        self.name = f"linial-d{d}"
        self.labels = tuple(range(1, d + 2))

    def describe(self):
        c1, c2 = self.constants()
        return {"name": self.name, "d": self.d, "c1": c1, "c2": c2}

    def constants(self) -> tuple[int, int]:
        """``(c1, c2)`` with ``radius(n) <= c1 * log*(2**L) + c2``."""
        return 1, palette_bound(self.d) - (self.d + 1)

    def _plan(self, n_nominal: int) -> tuple[int, tuple[tuple[int, int], ...], int]:
        L = self.id_bits(n_nominal)
        if L > MAX_ID_BITS:
            raise ValueError(f"identifiers of {L} bits are not supported")
        return L, reduction_schedule(L, self.d), padded_steps(L, self.d)

    def radius(self, n_nominal):
        _, _, s = self._plan(n_nominal)
        return s + palette_bound(self.d) - (self.d + 1)

    # round structure: t in 1..len(steps) reduce, then idle up to s, then eliminate

    def _round_action(self, t: int, n_nominal: int):
        _, steps, s = self._plan(n_nominal)
        if t <= len(steps):
            return ("reduce", steps[t - 1])
        if t <= s:
            return ("idle", None)
        return ("eliminate", palette_bound(self.d) - 1 - (t - s - 1))

    def init(self, payload, degree, n_nominal):
        L, _, _ = self._plan(n_nominal)
        if len(payload) != L:
            raise ValueError(f"identifier has {len(payload)} bits, algorithm expects {L}")
        return int(payload, 2)

    def step(self, t, own, nbrs, n_nominal):
        kind, arg = self._round_action(t, n_nominal)
        if kind == "reduce":
            return _reduce_scalar(own, nbrs, *arg)
        if kind == "eliminate" and own == arg:
            used = set(nbrs)
            return min(c for c in range(self.d + 1) if c not in used)
        return own

    def output(self, state):
        return state + 1

    def colors_after(self, G: Graph, ids: IdAssignment, n_nominal: int, rounds: int) -> np.ndarray:
        """Vectorized whole-graph state after ``rounds`` rounds."""
        L, _, _ = self._plan(n_nominal)
        if ids.length != L:
            raise ValueError(f"identifiers have {ids.length} bits, algorithm expects {L}")
        nbr = G.neighbor_array
        colors = ids.array()
        for t in range(1, rounds + 1):
            kind, arg = self._round_action(t, n_nominal)
            if kind == "reduce":
                colors = _reduce_vector(colors, nbr, *arg)
            elif kind == "eliminate":
                colors = _eliminate_vector(colors, nbr, arg, self.d)
        return colors

    def run_global(self, G, payload, n_nominal):
        colors = self.colors_after(G, payload, n_nominal, self.radius(n_nominal))
        return (colors + 1).tolist()


def linial_coloring(G: Graph, ids: IdAssignment, n_nominal: int | None = None, d: int | None = None):
    """Run :class:`LinialColoring` through the engine; returns ``(labels, rounds_used)``."""
    n_nominal = G.n if n_nominal is None else n_nominal
    A = LinialColoring(G.d if d is None else d, id_bits=lambda n: ids.length)
    res = run(G, A, ids, n_nominal)
    return res.labels, res.rounds


class TruncatedLinial(RoundAlgorithm):
    """Linial cut off after ``cap`` rounds, folded to two colors.  Claims a 2-coloring; wrong."""

    def __init__(self, d: int = 2, cap: int = 10):
        self.inner = LinialColoring(d)
        self.cap = cap
        self.name = f"truncated-linial-{cap}"
        self.labels = (1, 2)

    def radius(self, n_nominal):
        return min(self.cap, self.inner.radius(n_nominal))

    def init(self, payload, degree, n_nominal):
        return self.inner.init(payload, degree, n_nominal)

    def step(self, t, own, nbrs, n_nominal):
        return self.inner.step(t, own, nbrs, n_nominal)

    def output(self, state):
        return 1 + state % 2

    def run_global(self, G, payload, n_nominal):
        colors = self.inner.colors_after(G, payload, n_nominal, self.radius(n_nominal))
        return (1 + colors % 2).tolist()


# MIS


class LubyCapError(RuntimeError):
    pass


def luby_cap(n: int) -> int:
    return 64 * ceil_log2(max(n, 2))


def _luby_phases(G: Graph, keys: np.ndarray, cap: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Returns (status, undecided mask, phases); status 1 = in, 0 = out."""
    nbr = G.neighbor_array
    valid = nbr >= 0
    safe = np.where(valid, nbr, 0)
    member = np.zeros(G.n, dtype=bool)
    undecided = np.ones(G.n, dtype=bool)
    phases = 0
    while undecided.any() and phases < cap:
        phases += 1
        w = stream_words(keys, phases - 1)
        nw = w[safe]
        rival = valid & undecided[safe] & (nw >= w[:, None])
        join = undecided & ~rival.any(axis=1)
        member |= join
        undecided &= ~join
        knocked = undecided & (valid & join[safe]).any(axis=1)
        undecided &= ~knocked
    return member, undecided, phases


def luby_mis(G: Graph, seed: int = 0, trial: int = 0) -> tuple[list[int], int]:
    """Luby's MIS; returns ``(labels, phases)``.  Raises :class:`LubyCapError` at the round cap."""
    cap = luby_cap(G.n)
    member, undecided, phases = _luby_phases(G, RandomPayload(seed, trial, G.n).keys, cap)
    if undecided.any():
        raise LubyCapError(
            f"{int(undecided.sum())} vertices still undecided after {cap} phases (seed={seed}, trial={trial})"
        )
    return member.astype(int).tolist(), phases


class LubyMIS(RoundAlgorithm):
    """Luby's MIS as a randomized round algorithm (two rounds per phase).

    Phase ``p`` reads word ``p-1`` of each vertex's stream.  An undecided vertex
    joins when its word is strictly larger than every undecided neighbor's;
    then undecided neighbors of joiners drop out.
    """

    mode = "randomized"
    name = "luby-mis"
    labels = (0, 1)

    def radius(self, n_nominal):
        return 2 * luby_cap(n_nominal)

    def init(self, payload, degree, n_nominal):
        return ("U", payload)

    def step(self, t, own, nbrs, n_nominal):
        status, stream = own
        if status != "U":
            return own
        if t % 2 == 1:
            p = (t + 1) // 2
            w = stream.word(p - 1)
            if all(s != "U" or st.word(p - 1) < w for s, st in nbrs):
                return ("IN", stream)
            return own
        if any(s == "IN" for s, _ in nbrs):
            return ("OUT", stream)
        return own

    def output(self, state):
        return 1 if state[0] == "IN" else 0

    def run_global(self, G, payload, n_nominal):
        member, _, _ = _luby_phases(G, payload.keys, luby_cap(n_nominal))
        return member.astype(int).tolist()


class ColorPriorityMIS(RoundAlgorithm):
    """Deterministic Luby: the per-phase random word is replaced by a Linial color.

    Colors are proper and take ``d+1`` values, so ``d+1`` phases decide everyone.
    """

    def __init__(self, d: int, id_bits: Callable[[int], int] = ceil_log2):
        self.d = d
        self.inner = LinialColoring(d, id_bits)
        self.name = f"color-priority-mis-d{d}"
        self.labels = (0, 1)

    def radius(self, n_nominal):
        return self.inner.radius(n_nominal) + 2 * (self.d + 1)

    def init(self, payload, degree, n_nominal):
        return (self.inner.init(payload, degree, n_nominal), "U")

    def step(self, t, own, nbrs, n_nominal):
        color, status = own
        T0 = self.inner.radius(n_nominal)
        if t <= T0:
            return (self.inner.step(t, color, [c for c, _ in nbrs], n_nominal), status)
        if status != "U":
            return own
        if (t - T0) % 2 == 1:
            if all(s != "U" or c < color for c, s in nbrs):
                return (color, "IN")
            return own
        if any(s == "IN" for _, s in nbrs):
            return (color, "OUT")
        return own

    def output(self, state):
        return 1 if state[1] == "IN" else 0

    def run_global(self, G, payload, n_nominal):
        colors = self.inner.colors_after(G, payload, n_nominal, self.inner.radius(n_nominal))
        nbr = G.neighbor_array
        valid = nbr >= 0
        safe = np.where(valid, nbr, 0)
        member = np.zeros(G.n, dtype=bool)
        undecided = np.ones(G.n, dtype=bool)
        for _ in range(self.d + 1):
            rival = valid & undecided[safe] & (colors[safe] >= colors[:, None])
            join = undecided & ~rival.any(axis=1)
            member |= join
            undecided &= ~join
            undecided &= ~(valid & join[safe]).any(axis=1)
        return member.astype(int).tolist()


# path 2-coloring claims, for the adversary


class IdParity(LocalAlgorithm):
    """Zero rounds: color ``1 + (ID mod 2)``."""

    name = "id-parity"
    labels = (1, 2)

    def radius(self, n_nominal):
        return 0

    def out(self, view, n_nominal):
        return 1 + int(view.payload[0][-1])


class WindowMinParity(LocalAlgorithm):
    """``T`` rounds: parity of (smallest ID in view + its distance).

    A proper 2-coloring of a path carrying consecutive IDs in order, and a
    genuinely T-local function of the view.
    """

    labels = (1, 2)

    def __init__(self, T: int):
        self.T = T
        self.name = f"window-min-parity-{T}"

    def radius(self, n_nominal):
        return self.T

    def out(self, view, n_nominal):
        i = min(range(view.size), key=lambda j: int(view.payload[j], 2))
        return 1 + (int(view.payload[i], 2) + view.dist[i]) % 2


class FullViewPathColoring(LocalAlgorithm):
    """Sees the whole path (radius n); colors by distance parity from the endpoint with smaller ID."""

    name = "full-view-path-2-coloring"
    labels = (1, 2)

    def radius(self, n_nominal):
        return n_nominal

    def out(self, view, n_nominal):
        ends = [i for i in range(view.size) if len(view.adj[i]) <= 1]
        e = min(ends, key=lambda j: int(view.payload[j], 2))
        return 1 + view.dist[e] % 2


# adversary


class ConstructionInapplicable(ValueError):
    """The path is too short for three pairwise far-apart witnesses."""


@dataclass
class AdversaryCertificate:
    algorithm: str
    n: int
    T: int
    x: int
    y: int
    z: int
    kind: str  # "swap" or "base"
    base_ids: tuple[int, ...]
    swapped_ids: tuple[int, ...]
    id_length: int
    base_colors: tuple[Any, Any, Any]
    swapped_colors: tuple[Any, Any, Any]
    violated_pair: tuple[int, int]
    violated_colors: tuple[Any, Any]

    @property
    def failing_ids(self) -> tuple[int, ...]:
        return self.swapped_ids if self.kind == "swap" else self.base_ids

    def to_json(self, with_ids: bool = False) -> dict[str, Any]:
        out = asdict(self)
        if not with_ids:
            out.pop("base_ids")
            out.pop("swapped_ids")
        return out


def _path_violation(labels: Sequence[Any]) -> tuple[int, int] | None:
    for v, lab in enumerate(labels):
        if lab not in (1, 2):
            return (v, v)
    for v in range(len(labels) - 1):
        if labels[v] == labels[v + 1]:
            return (v, v + 1)
    return None


def adversary_positions(T: int) -> tuple[int, int, int]:
    """Leftmost ``x < y < z`` with d(x,y) even, d(x,z) odd, all gaps > 2T, balls inside the path."""
    x = T + 1
    y = x + 2 * T + 2
    z = y + 2 * T + 1
    return x, y, z


def two_color_adversary(A: LocalAlgorithm, n: int) -> AdversaryCertificate:
    """Swap-the-identifiers construction against a claimed path 2-coloring.

    With IDs ``0..n-1`` in path order, if the output is already wrong the base
    assignment is the certificate.  Otherwise the IDs on the radius-T intervals
    around ``y`` and ``z`` are exchanged: a T-local algorithm must then copy
    ``c(z)`` to ``y`` and ``c(y)`` to ``z`` while ``x`` keeps ``c(x)``, and
    parity forces a monochromatic edge somewhere.
    """
    T = A.radius(n)
    if 6 * T + 6 > n:
        raise ConstructionInapplicable(f"need 6T+6 <= n, got T={T}, n={n}")
    G = make_path(n)
    base = IdAssignment(tuple(range(n)), ceil_log2(n))
    x, y, z = adversary_positions(T)
    c = run(G, A, base, n).labels
    perm = list(range(n))
    for k in range(-T, T + 1):
        perm[y + k], perm[z + k] = z + k, y + k
    swapped = base.swapped(perm)
    bad = _path_violation(c)
    if bad is not None:
        kind, c2 = "base", c
    else:
        kind = "swap"
        c2 = run(G, A, swapped, n).labels
        bad = _path_violation(c2)
        if bad is None:
            raise RuntimeError(f"{A.name} produced valid colorings under both assignments; it is not {T}-local")
    return AdversaryCertificate(
        algorithm=A.name,
        n=n,
        T=T,
        x=x,
        y=y,
        z=z,
        kind=kind,
        base_ids=base.values,
        swapped_ids=swapped.values,
        id_length=base.length,
        base_colors=(c[x], c[y], c[z]),
        swapped_colors=(c2[x], c2[y], c2[z]),
        violated_pair=bad,
        violated_colors=(c2[bad[0]], c2[bad[1]]),
    )


def verify_certificate(A: LocalAlgorithm, cert: AdversaryCertificate) -> bool:
    """Re-run ``A`` from the certificate alone and confirm the reported failure."""
    T = cert.T
    if (cert.y - cert.x) % 2 != 0 or (cert.z - cert.x) % 2 != 1:
        return False
    if min(cert.y - cert.x, cert.z - cert.y) <= 2 * T or cert.y + T >= cert.z - T:
        return False
    if A.radius(cert.n) != T:
        return False
    ids = IdAssignment(cert.failing_ids, cert.id_length)
    if ids.has_collision():
        return False
    labels = run(make_path(cert.n), A, ids, cert.n).labels
    u, v = cert.violated_pair
    if u == v:
        return labels[u] not in (1, 2)
    if labels[u] != labels[v] or abs(u - v) != 1:
        return False
    try:
        return bool(check(coloring_problem(2), make_path(cert.n), labels))
    except LabelingError:
        return True


ALGORITHMS: dict[str, Callable[..., LocalAlgorithm]] = {
    "linial": lambda d=2, **_: LinialColoring(int(d)),
    "truncated-linial": lambda d=2, cap=10, **_: TruncatedLinial(int(d), int(cap)),
    "luby": lambda **_: LubyMIS(),
    "color-priority-mis": lambda d=2, **_: ColorPriorityMIS(int(d)),
    "id-parity": lambda **_: IdParity(),
    "window-min-parity": lambda T=1, **_: WindowMinParity(int(T)),
    "full-view-path": lambda **_: FullViewPathColoring(),
}


def algorithm_from_name(name: str, **params: Any) -> LocalAlgorithm:
    from .engine import CoinFlipColoring, ConstantAlgorithm

    extra = {
        "constant": lambda label=1, **_: ConstantAlgorithm(label),
        "coin-flip": lambda **_: CoinFlipColoring(),
    }
    factory = ALGORITHMS.get(name) or extra.get(name)
    if factory is None:
        raise ValueError(f"unknown algorithm {name!r}")
    return factory(**params)

