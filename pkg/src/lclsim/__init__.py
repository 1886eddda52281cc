"""Simulator for the LOCAL model and locally checkable labeling problems."""

from .engine import IdAssignment, LocalAlgorithm, assign_ids, estimate_failure, run
from .graph import Graph, ball, make_cycle, make_graph, make_grid_torus, make_path, make_regular_tree, power_graph
from .lcl import check, coloring_problem, mis_problem, perfect_matching_problem

__version__ = "0.1.0"
