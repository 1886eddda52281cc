"""Finite bounded-degree graphs with port numbering, generators, power graphs and balls."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np


class GraphError(ValueError):
    pass


class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    ``adj[x]`` is the ordered neighbor list of ``x``; position ``i`` in it is
    port ``i``.  ``edge_label`` maps a directed edge ``(x, y)`` to its
    generator tag, if any.
    """

    __slots__ = ("n", "adj", "edge_label", "degree_bound", "__dict__")

    def __init__(
        self,
        n: int,
        adj: Sequence[Sequence[int]],
        edge_label: Mapping[tuple[int, int], str] | None = None,
        degree_bound: int | None = None,
        validate: bool = True,
    ):
        self.n = int(n)
        self.adj = tuple(tuple(nbrs) for nbrs in adj)
        self.edge_label = dict(edge_label or {})
        max_deg = max((len(a) for a in self.adj), default=0)
        self.degree_bound = max_deg if degree_bound is None else int(degree_bound)
        if validate:
            self._validate()

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Mapping[tuple[int, int], str] | None = None,
        degree_bound: int | None = None,
    ) -> "Graph":
        """Build a graph; ports are assigned by sorted neighbor index."""
        if n < 1:
            raise GraphError("graph must have at least one vertex")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range")
            if v in nbrs[u]:
                raise GraphError(f"duplicate edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, [sorted(s) for s in nbrs], labels, degree_bound)

    def _validate(self) -> None:
        if self.n < 1 or len(self.adj) != self.n:
            raise GraphError("adjacency length must equal n >= 1")
        adj = self.adj
        for x, nbrs in enumerate(adj):
            if len(nbrs) > self.degree_bound:
                raise GraphError(f"degree of {x} exceeds bound {self.degree_bound}")
            if len(set(nbrs)) != len(nbrs):
                raise GraphError(f"duplicate neighbor at {x}")
            for y in nbrs:
                if y == x:
                    raise GraphError(f"self-loop at {x}")
                if not 0 <= y < self.n:
                    raise GraphError(f"neighbor {y} of {x} out of range")
                if x not in adj[y]:
                    raise GraphError(f"adjacency is not symmetric at ({x}, {y})")

    # basic queries

    @property
    def d(self) -> int:
        return self.degree_bound

    def degree(self, x: int) -> int:
        return len(self.adj[x])

    def neighbor(self, x: int, port: int) -> int:
        return self.adj[x][port]

    def port_of(self, x: int, y: int) -> int:
        """Port at ``x`` leading to ``y``."""
        return self.adj[x].index(y)

    def edges(self) -> list[tuple[int, int]]:
        return [(x, y) for x, nbrs in enumerate(self.adj) for y in nbrs if x < y]

    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    @cached_property
    def neighbor_array(self) -> np.ndarray:
        """``(n, max_degree)`` int64 array of neighbors in port order, padded with -1."""
        width = max(self.max_degree(), 1)
        out = np.full((self.n, width), -1, dtype=np.int64)
        for x, nbrs in enumerate(self.adj):
            out[x, : len(nbrs)] = nbrs
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.adj == other.adj
            and self.edge_label == other.edge_label
            and self.degree_bound == other.degree_bound
        )

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges()}, d={self.degree_bound})"

    # traversal

    def bfs_distances(self, source: int, radius: int | None = None) -> dict[int, int]:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            du = dist[u]
            if radius is not None and du >= radius:
                continue
            for w in self.adj[u]:
                if w not in dist:
                    dist[w] = du + 1
                    queue.append(w)
        return dist

    def bfs_order(self) -> list[int]:
        """Vertices in BFS order, components taken by smallest unvisited index."""
        seen = [False] * self.n
        order: list[int] = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            queue = deque([s])
            while queue:
                u = queue.popleft()
                order.append(u)
                for w in self.adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
        return order


# generators


def _inverse_label(label: str) -> str:
    if label.startswith("+"):
        return "-" + label[1:]
    if label.startswith("-"):
        return "+" + label[1:]
    return label


def _line_labels(n: int, cyclic: bool) -> dict[tuple[int, int], str]:
    labels = {}
    for i in range(n if cyclic else n - 1):
        j = (i + 1) % n
        labels[(i, j)] = "+1"
        labels[(j, i)] = "-1"
    return labels


def make_path(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    adj = [[i - 1, i + 1] for i in range(n)]
    adj[0] = [1] if n > 1 else []
    if n > 1:
        adj[-1] = [n - 2]
    return Graph(n, adj, _line_labels(n, False), degree_bound=2 if n > 2 else None)


def make_cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    adj = [[i - 1, i + 1] for i in range(n)]
    adj[0] = [1, n - 1]
    adj[-1] = [0, n - 2]
    return Graph(n, adj, _line_labels(n, True))


def make_grid_torus(dims: Sequence[int]) -> Graph:
    """Torus ``Z_{k1} x ... x Z_{kr}``; edge ``(x, x+e_i)`` is labeled ``+e{i}``."""
    dims = list(dims)
    if not dims or any(k < 3 for k in dims):
        raise GraphError("torus dims must be nonempty with every size >= 3")
    n = int(np.prod(dims))
    strides = [int(np.prod(dims[i + 1 :])) for i in range(len(dims))]
    edges = []
    labels = {}
    for coords in itertools.product(*(range(k) for k in dims)):
        x = sum(c * s for c, s in zip(coords, strides))
        for i, k in enumerate(dims):
            step = list(coords)
            step[i] = (step[i] + 1) % k
            y = sum(c * s for c, s in zip(step, strides))
            edges.append((x, y))
            labels[(x, y)] = f"+e{i}"
            labels[(y, x)] = f"-e{i}"
    return Graph.from_edges(n, edges, labels)


def make_regular_tree(d: int, depth: int) -> Graph:
    """Radius-``depth`` ball around the root of the infinite d-regular tree."""
    if d < 2:
        raise GraphError("tree degree must be >= 2")
    if depth < 0:
        raise GraphError("depth must be >= 0")
    edges = []
    frontier = [0]
    n = 1
    for level in range(depth):
        nxt = []
        for u in frontier:
            for _ in range(d if level == 0 else d - 1):
                edges.append((u, n))
                nxt.append(n)
                n += 1
        frontier = nxt
    return Graph.from_edges(n, edges, degree_bound=d)


def make_random_graph(n: int, max_degree: int, rng: np.random.Generator, density: float = 0.9) -> Graph:
    """Random graph with degrees bounded by ``max_degree`` (random edge insertion)."""
    deg = [0] * n
    nbrs: list[set[int]] = [set() for _ in range(n)]
    attempts = int(density * n * max_degree / 2) * 2
    us = rng.integers(0, n, size=attempts)
    vs = rng.integers(0, n, size=attempts)
    edges = []
    for u, v in zip(us.tolist(), vs.tolist()):
        if u == v or v in nbrs[u] or deg[u] >= max_degree or deg[v] >= max_degree:
            continue
        nbrs[u].add(v)
        nbrs[v].add(u)
        deg[u] += 1
        deg[v] += 1
        edges.append((u, v))
    return Graph.from_edges(n, edges, degree_bound=max_degree)


FAMILIES = {
    "path": lambda p: make_path(int(p["n"])),
    "cycle": lambda p: make_cycle(int(p["n"])),
    "torus": lambda p: make_grid_torus([int(k) for k in p["dims"]]),
    "tree": lambda p: make_regular_tree(int(p["d"]), int(p["depth"])),
    "random": lambda p: make_random_graph(
        int(p["n"]), int(p["max_degree"]), np.random.default_rng(int(p.get("seed", 0)))
    ),
}


def make_graph(family: str, **params: Any) -> Graph:
    try:
        factory = FAMILIES[family]
    except KeyError:
        raise GraphError(f"unknown graph family {family!r}") from None
    return factory(params)


# power graph


def power_graph(G: Graph, r: int) -> Graph:
    """Graph on V(G) joining x != y iff their distance in G is at most r."""
    if r < 1:
        raise GraphError("power radius must be >= 1")
    adj = []
    for x in range(G.n):
        dist = G.bfs_distances(x, r)
        adj.append(sorted(y for y in dist if y != x))
    return Graph(G.n, adj, validate=False)


def power_degree_bound(d: int, r: int) -> int:
    """Max size of a radius-r sphere union in a degree-d graph: sum d(d-1)^(k-1)."""
    return sum(d * (d - 1) ** (k - 1) for k in range(1, r + 1))


# views


@dataclass(frozen=True)
class View:
    """Canonicalized radius-T ball.  Local vertex 0 is the root.

    ``adj[i]`` lists ``(port, j)`` pairs for the in-view neighbors of local
    vertex ``i``, using that vertex's host port numbers.
    """

    radius: int
    dist: tuple[int, ...]
    adj: tuple[tuple[tuple[int, int], ...], ...]
    payload: tuple[Any, ...]
    host: tuple[int, ...] = field(compare=False, repr=False)

    root = 0

    @property
    def size(self) -> int:
        return len(self.dist)

    def neighbors(self, i: int) -> list[int]:
        return [j for _, j in self.adj[i]]

    def encoding(self) -> tuple:
        return (self.radius, self.dist, self.adj, self.payload)


def ball(G: Graph, v: int, T: int, payload: Sequence[Any] | Mapping[int, Any]) -> View:
    """Radius-``T`` ball around ``v`` with BFS-by-port canonical local indices."""
    if not 0 <= v < G.n:
        raise GraphError(f"vertex {v} out of range")
    if T < 0:
        raise GraphError("radius must be >= 0")
    local = {v: 0}
    order = [v]
    dist = [0]
    head = 0
    while head < len(order):
        u = order[head]
        du = dist[head]
        head += 1
        if du >= T:
            continue
        for w in G.adj[u]:
            if w not in local:
                local[w] = len(order)
                order.append(w)
                dist.append(du + 1)
    adj = tuple(
        tuple((p, local[w]) for p, w in enumerate(G.adj[u]) if w in local) for u in order
    )
    try:
        pl = tuple(payload[u] for u in order)
    except (KeyError, IndexError):
        raise GraphError("payload missing for a vertex of the ball") from None
    if any(p is None for p in pl):
        raise GraphError("payload missing for a vertex of the ball")
    return View(T, tuple(dist), adj, pl, tuple(order))


# edge-list text format


def dumps_graph(G: Graph) -> str:
    lines = [f"{G.n} {G.degree_bound}"]
    for u, v in G.edges():
        fwd = G.edge_label.get((u, v))
        bwd = G.edge_label.get((v, u))
        if fwd is None and bwd is None:
            lines.append(f"{u} {v}")
        elif fwd is not None and bwd == _inverse_label(fwd):
            lines.append(f"{u} {v} {fwd}")
        else:
            lines.append(f"{u} {v} {fwd if fwd is not None else '.'} {bwd if bwd is not None else '.'}")
    return "\n".join(lines) + "\n"


def loads_graph(text: str) -> Graph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise GraphError("edge list must start with a 'n d' header")
    n, d = int(rows[0][0]), int(rows[0][1])
    edges = []
    labels: dict[tuple[int, int], str] = {}
    for row in rows[1:]:
        u, v = int(row[0]), int(row[1])
        edges.append((u, v))
        if len(row) == 3:
            labels[(u, v)] = row[2]
            labels[(v, u)] = _inverse_label(row[2])
        elif len(row) == 4:
            if row[2] != ".":
                labels[(u, v)] = row[2]
            if row[3] != ".":
                labels[(v, u)] = row[3]
        elif len(row) != 2:
            raise GraphError(f"bad edge line: {' '.join(row)}")
    return Graph.from_edges(n, edges, labels, degree_bound=d)


def save_graph(G: Graph, path: str | Path) -> None:
    Path(path).write_text(dumps_graph(G))


def load_graph(path: str | Path) -> Graph:
    return loads_graph(Path(path).read_text())
