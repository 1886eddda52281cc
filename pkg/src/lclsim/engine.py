"""View-based execution of LOCAL algorithms.

A T-round algorithm is a function from the canonical radius-T view of a vertex
to that vertex's label.  :func:`run` applies it at every vertex.  Algorithms
may also provide ``run_global``, a whole-graph round simulation used as a fast
path; the two routes must agree and the test suite checks that they do.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .graph import Graph, View, ball
from .lcl import LclProblem, check
from .randomness import BitStream, stream_keys, stream_words


class EngineError(ValueError):
    pass


def log_star(n: float) -> int:
    """Number of times log2 must be applied to ``n`` before the result is <= 1."""
    count = 0
    x = float(n)
    while x > 1:
        x = math.log2(x)
        count += 1
    return count


def ceil_log2(n: int) -> int:
    return max(1, (int(n) - 1).bit_length())


def random_id_length(n: int) -> int:
    """``ceil(3 log2 n)``, computed exactly as the bit length of ``n**3 - 1``."""
    return max(1, (int(n) ** 3 - 1).bit_length())


def wilson_interval(k: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if n <= 0:
        return (0.0, 1.0)
    p = k / n
    denom = 1 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z / denom * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n))
    lo = 0.0 if k == 0 else max(0.0, center - half)
    hi = 1.0 if k == n else min(1.0, center + half)
    return (lo, hi)


# payloads


@dataclass(frozen=True)
class IdAssignment:
    """Per-vertex identifiers of a fixed bit length.

    ``scope`` is ``"global"`` (pairwise distinct), ``"within"`` (distinct for
    vertices at distance <= ``r``) or ``"random"`` (no guarantee).
    """

    values: tuple[int, ...]
    length: int
    scope: str = "global"
    r: int | None = None

    def __post_init__(self):
        if self.scope not in ("global", "within", "random"):
            raise ValueError(f"unknown id scope {self.scope!r}")
        if self.scope == "within" and (self.r is None or self.r < 0):
            raise ValueError("scope 'within' needs a radius r >= 0")
        if any(v < 0 or v >> self.length for v in self.values):
            raise ValueError(f"identifier does not fit in {self.length} bits")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, v: int) -> str:
        return format(self.values[v], f"0{self.length}b")

    def as_strings(self) -> list[str]:
        return [self[v] for v in range(len(self.values))]

    def array(self) -> np.ndarray:
        if self.length > 62:
            raise EngineError("identifiers longer than 62 bits have no int64 form")
        return np.asarray(self.values, dtype=np.int64)

    def has_collision(self) -> bool:
        return len(set(self.values)) != len(self.values)

    def swapped(self, perm: Sequence[int]) -> "IdAssignment":
        """Assignment where vertex ``v`` gets the identifier of ``perm[v]``."""
        return IdAssignment(tuple(self.values[p] for p in perm), self.length, self.scope, self.r)

    def validate(self, G: Graph) -> bool:
        """Check the declared scope against ``G`` by brute force."""
        if self.scope == "random":
            return True
        if self.scope == "global":
            return not self.has_collision()
        for x in range(G.n):
            for y in G.bfs_distances(x, self.r):
                if y != x and self.values[y] == self.values[x]:
                    return False
        return True


def assign_ids(
    G: Graph, n_nominal: int | None = None, source: str = "sequential", seed: int = 0, trial: int = 0
) -> IdAssignment:
    """Sequential distinct IDs of ``ceil(log2 n)`` bits, or random ones of ``ceil(3 log2 n)`` bits."""
    n_nominal = G.n if n_nominal is None else int(n_nominal)
    if source == "sequential":
        if n_nominal < G.n:
            raise EngineError(f"n_nominal={n_nominal} is smaller than |V(G)|={G.n}")
        return IdAssignment(tuple(range(G.n)), ceil_log2(n_nominal), "global")
    if source == "random":
        length = random_id_length(n_nominal)
        payload = RandomPayload(seed, trial, G.n)
        if length <= 64:
            words = stream_words(payload.keys, 0) >> np.uint64(64 - length)
            values = tuple(int(w) for w in words)
        else:
            values = tuple(BitStream(int(k)).prefix_int(length) for k in payload.keys)
        return IdAssignment(values, length, "random")
    raise EngineError(f"unknown id source {source!r}")


class RandomPayload:
    """Independent per-vertex bit streams for one ``(seed, trial)``."""

    def __init__(self, seed: int, trial: int, n: int):
        self.seed = int(seed)
        self.trial = int(trial)
        self.n = int(n)
        self.keys = stream_keys(self.seed, self.trial, self.n)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, v: int) -> BitStream:
        if not 0 <= v < self.n:
            raise IndexError(v)
        return BitStream(int(self.keys[v]))


def random_bits(seed: int, trial: int, G: Graph) -> RandomPayload:
    return RandomPayload(seed, trial, G.n)


# algorithms


class LocalAlgorithm:
    """A view function with a claimed radius.

    ``mode`` is ``"deterministic"`` (payload = identifiers) or ``"randomized"``
    (payload = bit streams).  ``uses_ids=False`` declares that the output
    ignores the payload entirely.
    """

    name = "algorithm"
    mode = "deterministic"
    uses_ids = True
    labels: tuple[int, ...] = ()

    def radius(self, n_nominal: int) -> int:
        raise NotImplementedError

    def out(self, view: View, n_nominal: int) -> Any:
        raise NotImplementedError

    def run_global(self, G: Graph, payload: Any, n_nominal: int) -> list | None:
        return None

    def describe(self) -> dict[str, Any]:
        return {"name": self.name}


class ConstantAlgorithm(LocalAlgorithm):
    """Zero rounds, same label everywhere."""

    uses_ids = False

    def __init__(self, label: Any = 1, mode: str = "deterministic"):
        self.label = label
        self.mode = mode
        self.name = f"constant-{label}"
        self.labels = (label,)

    def radius(self, n_nominal):
        return 0

    def out(self, view, n_nominal):
        return self.label


class FirstBitAlgorithm(LocalAlgorithm):
    """Zero rounds; outputs the first bit of the vertex's own payload."""

    name = "first-bit"
    labels = (0, 1)

    def radius(self, n_nominal):
        return 0

    def out(self, view, n_nominal):
        return int(view.payload[0][0])


class CoinFlipColoring(LocalAlgorithm):
    """Zero rounds; color ``1 + first random bit``.  Fails on an edge half the time."""

    name = "coin-flip-2-coloring"
    mode = "randomized"
    labels = (1, 2)

    def radius(self, n_nominal):
        return 0

    def out(self, view, n_nominal):
        return 1 + view.payload[0].bit(0)


class RoundAlgorithm(LocalAlgorithm):
    """Synchronous state-update algorithm, run on views by shrinking simulation.

    In round ``t`` a vertex replaces its state by ``step(t, own, nbr_states)``
    where ``nbr_states`` follows port order.  On a radius-T view, after round
    ``t`` the states of vertices at distance ``<= T - t`` are exact, so the root
    state after ``T`` rounds is exact.
    """

    def init(self, payload: Any, degree: int, n_nominal: int) -> Any:
        raise NotImplementedError

    def step(self, t: int, own: Any, nbrs: list[Any], n_nominal: int) -> Any:
        raise NotImplementedError

    def output(self, state: Any) -> Any:
        return state

    def out(self, view: View, n_nominal: int) -> Any:
        T = view.radius
        states = [self.init(p, len(a), n_nominal) for p, a in zip(view.payload, view.adj)]
        for t in range(1, T + 1):
            active = [i for i, di in enumerate(view.dist) if di <= T - t]
            new = {i: self.step(t, states[i], [states[j] for _, j in view.adj[i]], n_nominal) for i in active}
            for i, s in new.items():
                states[i] = s
        return self.output(states[0])

    def run_rounds(self, G: Graph, payload: Any, n_nominal: int, rounds: int) -> list[Any]:
        """Plain whole-graph simulation (reference route, Python loops)."""
        states = [self.init(payload[v], G.degree(v), n_nominal) for v in range(G.n)]
        for t in range(1, rounds + 1):
            states = [self.step(t, states[v], [states[w] for w in G.adj[v]], n_nominal) for v in range(G.n)]
        return [self.output(s) for s in states]


# execution


@dataclass
class RunResult:
    labels: list
    rounds: int
    n_nominal: int
    extras: dict[str, Any] = field(default_factory=dict)


def _check_payload(A: LocalAlgorithm, payload: Any, T: int) -> None:
    if A.mode == "deterministic":
        if not A.uses_ids:
            return
        if not isinstance(payload, IdAssignment):
            raise EngineError("deterministic algorithms need an IdAssignment payload")
        if payload.scope == "within" and payload.r < 2 * T:
            raise EngineError(
                f"identifiers are only distinct within distance {payload.r}, algorithm needs {2 * T}"
            )
    elif A.mode == "randomized":
        if not isinstance(payload, RandomPayload):
            raise EngineError("randomized algorithms need a RandomPayload")
    else:
        raise EngineError(f"unknown mode {A.mode!r}")


def run(
    G: Graph,
    A: LocalAlgorithm,
    payload: Any = None,
    n_nominal: int | None = None,
    engine: str = "auto",
    order_seed: int | None = None,
) -> RunResult:
    """Label every vertex ``x`` with ``A.out(ball(G, x, T, payload))``.

    ``engine="view"`` forces per-vertex view evaluation (optionally in a
    shuffled order); ``"global"`` requires the fast path; ``"auto"`` prefers it.
    """
    n_nominal = G.n if n_nominal is None else int(n_nominal)
    T = A.radius(n_nominal)
    if payload is None and not A.uses_ids:
        payload = [0] * G.n
    _check_payload(A, payload, T)
    if len(payload) != G.n:
        raise EngineError("payload must cover every vertex")
    if engine in ("auto", "global"):
        labels = A.run_global(G, payload, n_nominal)
        if labels is not None:
            return RunResult(list(labels), T, n_nominal)
        if engine == "global":
            raise EngineError(f"{A.name} has no whole-graph route")
    order = list(range(G.n))
    if order_seed is not None:
        order = np.random.default_rng(order_seed).permutation(G.n).tolist()
    labels = [None] * G.n
    for x in order:
        labels[x] = A.out(ball(G, x, T, payload), n_nominal)
    return RunResult(labels, T, n_nominal)


@dataclass
class FailureEstimate:
    trials: int
    failures: int
    failed_trials: list[int]
    seed: int

    @property
    def rate(self) -> float:
        return self.failures / self.trials

    @property
    def interval(self) -> tuple[float, float]:
        return wilson_interval(self.failures, self.trials)


def _trial_fails(args) -> bool:
    G, A, problem, seed, trial, n_nominal = args
    res = run(G, A, RandomPayload(seed, trial, G.n), n_nominal)
    return bool(check(problem, G, res.labels))


def estimate_failure(
    G: Graph,
    A: LocalAlgorithm,
    problem: LclProblem,
    trials: int,
    seed: int = 0,
    n_nominal: int | None = None,
    jobs: int = 1,
) -> FailureEstimate:
    """Fraction of seeded trials whose output violates ``problem``; trial ``t`` replays exactly."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if A.mode != "randomized":
        raise EngineError("estimate_failure needs a randomized algorithm")
    args = [(G, A, problem, seed, t, n_nominal) for t in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            fails = list(pool.map(_trial_fails, args, chunksize=max(1, trials // (4 * jobs))))
    else:
        fails = [_trial_fails(a) for a in args]
    failed = [t for t, f in enumerate(fails) if f]
    return FailureEstimate(trials, len(failed), failed, seed)
