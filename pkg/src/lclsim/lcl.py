"""Locally checkable labeling problems and the radius-1 checker."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .graph import Graph

Labeling = Sequence[int]


class LabelingError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    vertex: int
    reason: str


class LclProblem:
    """A finite label alphabet plus a radius-1 constraint.

    Subclasses implement :meth:`vertex_violation`, which sees only the
    vertex's own label, one ``(port, neighbor label, back port)`` triple per
    neighbor and its degree, and returns a reason code or ``None``.  The back
    port is the neighbor's port number for the same edge.
    """

    name: str = "lcl"
    labels: tuple[int, ...] = ()

    def vertex_violation(self, own: int, nbrs: list[tuple[int, int, int]], degree: int) -> str | None:
        raise NotImplementedError

    @property
    def params(self) -> dict[str, Any]:
        return {}

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{type(self).__name__}({args})"

    def __eq__(self, other: object) -> bool:
        return type(self) is type(other) and self.params == other.params  # type: ignore[attr-defined]

    def __hash__(self) -> int:
        return hash((type(self).__name__, tuple(sorted(self.params.items()))))


class ColoringProblem(LclProblem):
    def __init__(self, k: int):
        if k < 1:
            raise ValueError("coloring needs k >= 1")
        self.k = k
        self.name = f"{k}-coloring"
        self.labels = tuple(range(1, k + 1))

    @property
    def params(self) -> dict[str, Any]:
        return {"k": self.k}

    def vertex_violation(self, own, nbrs, degree):
        if any(lab == own for _, lab, _ in nbrs):
            return "monochromatic-edge"
        return None


class MisProblem(LclProblem):
    name = "mis"
    labels = (0, 1)

    def vertex_violation(self, own, nbrs, degree):
        if own == 1:
            if any(lab == 1 for _, lab, _ in nbrs):
                return "adjacent-members"
            return None
        if not any(lab == 1 for _, lab, _ in nbrs):
            return "not-dominated"
        return None


class PerfectMatchingProblem(LclProblem):
    """Label ``i`` at ``x`` means ``x`` is matched to its port-``i`` neighbor (1-based).

    With ``exempt_deficient`` set, vertices of degree below ``d`` carry no
    constraint of their own (boundary of a truncated regular graph).
    """

    def __init__(self, d: int, exempt_deficient: bool = False):
        if d < 1:
            raise ValueError("matching needs d >= 1")
        self.d = d
        self.exempt_deficient = exempt_deficient
        self.name = f"perfect-matching-{d}"
        self.labels = tuple(range(1, d + 1))

    @property
    def params(self) -> dict[str, Any]:
        return {"d": self.d, "exempt_deficient": self.exempt_deficient}

    def vertex_violation(self, own, nbrs, degree):
        if self.exempt_deficient and degree < self.d:
            return None
        if own > degree:
            return "dangling-port"
        _, lab, back = nbrs[own - 1]
        if lab != back + 1:
            return "not-reciprocated"
        return None


def coloring_problem(k: int) -> ColoringProblem:
    return ColoringProblem(k)


def mis_problem() -> MisProblem:
    return MisProblem()


def perfect_matching_problem(d: int, exempt_deficient: bool = False) -> PerfectMatchingProblem:
    return PerfectMatchingProblem(d, exempt_deficient)


PROBLEMS = {
    "coloring": lambda p: coloring_problem(int(p["k"])),
    "mis": lambda p: mis_problem(),
    "matching": lambda p: perfect_matching_problem(int(p["d"]), bool(p.get("exempt_deficient", False))),
}


def problem_from_name(name: str, **params: Any) -> LclProblem:
    try:
        return PROBLEMS[name](params)
    except KeyError:
        raise ValueError(f"unknown problem {name!r}") from None


def _validate(problem: LclProblem, G: Graph, L: Labeling) -> None:
    if len(L) != G.n:
        raise LabelingError(f"labeling has {len(L)} entries for {G.n} vertices")
    allowed = set(problem.labels)
    for x, lab in enumerate(L):
        if lab is None:
            raise LabelingError(f"vertex {x} is unlabeled")
        if lab not in allowed:
            raise LabelingError(f"label {lab!r} at vertex {x} is outside the alphabet")


def _fast_reasons(problem: LclProblem, G: Graph, L: Labeling) -> list[str | None] | None:
    """Array route for coloring and MIS; None for problems that need the generic loop."""
    if not isinstance(problem, (ColoringProblem, MisProblem)):
        return None
    lab = np.asarray(L, dtype=np.int64)
    nbr = G.neighbor_array
    valid = nbr >= 0
    nl = np.where(valid, lab[np.where(valid, nbr, 0)], -1)
    if isinstance(problem, ColoringProblem):
        bad = (nl == lab[:, None]).any(axis=1)
        reason = np.where(bad, "monochromatic-edge", "")
    else:
        has_member = (nl == 1).any(axis=1)
        reason = np.where(lab == 1, np.where(has_member, "adjacent-members", ""), np.where(has_member, "", "not-dominated"))
    return [r or None for r in reason.tolist()]


def check(problem: LclProblem, G: Graph, L: Labeling, fast: bool = True) -> list[Violation]:
    """All violating vertices, in vertex order; empty iff ``L`` solves ``problem`` on ``G``.

    ``fast=False`` forces the per-vertex predicate loop, which is the reference route.
    """
    _validate(problem, G, L)
    reasons = _fast_reasons(problem, G, L) if fast else None
    if reasons is not None:
        return [Violation(x, r) for x, r in enumerate(reasons) if r is not None]
    out: list[Violation] = []
    for x in range(G.n):
        nbrs = [(p, L[y], G.adj[y].index(x)) for p, y in enumerate(G.adj[x])]
        reason = problem.vertex_violation(L[x], nbrs, len(nbrs))
        if reason is not None:
            out.append(Violation(x, reason))
    return out


def dumps_labeling(L: Labeling) -> str:
    return "".join(f"{lab}\n" for lab in L)


def loads_labeling(text: str) -> list[int]:
    return [int(tok) for tok in text.split()]


def save_labeling(L: Labeling, path: str | Path) -> None:
    Path(path).write_text(dumps_labeling(L))


def load_labeling(path: str | Path) -> list[int]:
    return loads_labeling(Path(path).read_text())
