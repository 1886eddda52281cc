from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from lclsim.graph import Graph  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def edge_lists(draw, max_n: int = 12, max_degree: int = 5, min_n: int = 1):
    """``(n, edges)`` of a simple graph with degrees at most ``max_degree``."""
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=3 * n)) if pairs else []
    deg = [0] * n
    edges = []
    for u, v in chosen:
        if deg[u] < max_degree and deg[v] < max_degree:
            edges.append((u, v))
            deg[u] += 1
            deg[v] += 1
    return n, edges


@st.composite
def graphs(draw, max_n: int = 12, max_degree: int = 5, min_n: int = 1):
    n, edges = draw(edge_lists(max_n, max_degree, min_n))
    return Graph.from_edges(n, edges)


def rng(seed: int = 0) -> np.random.Generator:
    return np.random.default_rng(seed)
