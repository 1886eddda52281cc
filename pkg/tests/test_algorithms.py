from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from lclsim.algorithms import (
    ConstructionInapplicable,
    FullViewPathColoring,
    IdParity,
    LinialColoring,
    LubyCapError,
    LubyMIS,
    TruncatedLinial,
    WindowMinParity,
    adversary_positions,
    algorithm_from_name,
    greedy_coloring,
    linial_coloring,
    luby_cap,
    luby_mis,
    palette_bound,
    padded_steps,
    reduction_schedule,
    reduction_step,
    two_color_adversary,
    verify_certificate,
    _is_prime,
)
from lclsim.engine import IdAssignment, assign_ids, log_star, run
from lclsim.graph import Graph, make_cycle, make_grid_torus, make_path, make_random_graph
from lclsim.lcl import check, coloring_problem, mis_problem
from oracles import chromatic_number, is_mis, proper


# greedy


def test_greedy_path_three():
    assert greedy_coloring(make_path(3)) == [1, 2, 1]


def test_greedy_clique():
    K4 = Graph.from_edges(4, list(itertools.combinations(range(4), 2)))
    for order in itertools.permutations(range(4)):
        assert sorted(greedy_coloring(K4, order)) == [1, 2, 3, 4]


def test_greedy_random_orders_degree_four():
    rng = np.random.default_rng(0)
    G = make_random_graph(200, 4, rng)
    for _ in range(100):
        L = greedy_coloring(G, rng.permutation(G.n).tolist())
        assert max(L) <= 5
        assert check(coloring_problem(5), G, L) == []


@given(graphs(max_n=9, max_degree=6), st.data())
def test_greedy_bounds_against_chromatic_number(G, data):
    order = data.draw(st.permutations(range(G.n)))
    L = greedy_coloring(G, order)
    assert proper(G.edges(), L)
    assert chromatic_number(G.n, G.edges()) <= max(L) <= G.max_degree() + 1


# color reduction


@pytest.mark.parametrize("d", [1, 2, 3, 4, 6])
def test_reduction_steps_are_valid(d):
    for L in range(1, 40):
        m = 1 << L
        for q, k in reduction_schedule(L, d):
            assert _is_prime(q)
            assert q > d * k
            assert q ** (k + 1) >= m
            assert q * q < m
            m = q * q
        assert reduction_step(m, d) is None
        assert m <= palette_bound(d)


def test_padded_steps_are_monotone():
    for d in (2, 3, 5):
        s = [padded_steps(L, d) for L in range(1, 63)]
        assert s == sorted(s)


def test_linial_constants_for_degree_two():
    A = LinialColoring(2)
    assert A.constants() == (1, 22)
    assert palette_bound(2) == 25
    for e in (8, 12, 16, 20):
        assert A.radius(2**e) <= log_star(2**e) + 22


def test_linial_cycle_2_16():
    G = make_cycle(2**16)
    labels, rounds = linial_coloring(G, assign_ids(G))
    assert check(coloring_problem(3), G, labels) == []
    c1, c2 = LinialColoring(2).constants()
    assert rounds <= c1 * 4 + c2


def test_linial_torus():
    G = make_grid_torus([100, 100])
    labels, _ = linial_coloring(G, assign_ids(G))
    assert max(labels) <= 5
    assert check(coloring_problem(5), G, labels) == []


def test_linial_path_random_ids():
    G = make_path(10)
    rng = np.random.default_rng(5)
    for _ in range(100):
        ids = IdAssignment(tuple(int(v) for v in rng.permutation(2**6)[:10]), 6)
        labels, _ = linial_coloring(G, ids, 64)
        assert check(coloring_problem(3), G, labels) == []


@given(graphs(max_n=12, max_degree=4), st.data())
def test_linial_valid_for_every_id_assignment(G, data):
    vals = data.draw(st.lists(st.integers(0, 2**12 - 1), min_size=G.n, max_size=G.n, unique=True))
    labels, _ = linial_coloring(G, IdAssignment(tuple(vals), 12), 2**12, d=4)
    assert check(coloring_problem(5), G, labels) == []


def test_linial_rejects_wrong_id_length():
    G = make_cycle(8)
    with pytest.raises(ValueError):
        run(G, LinialColoring(2), IdAssignment(tuple(range(8)), 5), 8)


# Luby


def test_luby_single_vertex():
    labels, phases = luby_mis(make_path(1))
    assert labels == [1] and phases == 1


def test_luby_cycle_hundred():
    G = make_cycle(100)
    for trial in range(1000):
        labels, phases = luby_mis(G, seed=0, trial=trial)
        assert check(mis_problem(), G, labels) == []
        assert phases < luby_cap(G.n)


@given(graphs(max_n=10, max_degree=5), st.integers(0, 10**6))
def test_luby_is_a_maximal_independent_set(G, seed):
    labels, _ = luby_mis(G, seed=seed)
    assert is_mis(G.n, G.edges(), labels)


def test_luby_round_algorithm_matches_function():
    G = make_random_graph(60, 4, np.random.default_rng(1))
    from lclsim.engine import RandomPayload

    labels, _ = luby_mis(G, seed=3, trial=2)
    assert run(G, LubyMIS(), RandomPayload(3, 2, G.n)).labels == labels


def test_luby_cap_error_is_raised(monkeypatch):
    import lclsim.algorithms as alg

    monkeypatch.setattr(alg, "luby_cap", lambda n: 1)
    with pytest.raises(LubyCapError):
        alg.luby_mis(make_cycle(50), seed=0)


def test_color_priority_mis():
    G = make_random_graph(300, 4, np.random.default_rng(2))
    labels = run(G, algorithm_from_name("color-priority-mis", d=4), assign_ids(G)).labels
    assert check(mis_problem(), G, labels) == []


# adversary


def test_adversary_positions_invariants():
    for T in range(0, 30):
        x, y, z = adversary_positions(T)
        assert (y - x) % 2 == 0 and (z - x) % 2 == 1
        assert min(y - x, z - y) > 2 * T
        assert x - T >= 0 and y + T < z - T
        assert z + T < 6 * T + 6


def test_adversary_against_id_parity():
    cert = two_color_adversary(IdParity(), 1000)
    assert cert.T == 0
    assert verify_certificate(IdParity(), cert)


def test_adversary_against_truncated_linial():
    A = TruncatedLinial(2, 10)
    cert = two_color_adversary(A, 1000)
    assert cert.T == 10
    assert verify_certificate(A, cert)


@pytest.mark.parametrize("T", [1, 2, 5, 10, 20])
def test_adversary_against_genuine_window_algorithm(T):
    A = WindowMinParity(T)
    cert = two_color_adversary(A, 1000)
    # correct on the sequential assignment, so the swap is what breaks it
    assert cert.kind == "swap"
    bx, by, bz = cert.base_colors
    sx, sy, sz = cert.swapped_colors
    assert sx == bx and sy == bz and sz == by
    assert verify_certificate(A, cert)


def test_full_view_is_inapplicable():
    with pytest.raises(ConstructionInapplicable):
        two_color_adversary(FullViewPathColoring(), 1000)
    labels = run(make_path(50), FullViewPathColoring(), assign_ids(make_path(50))).labels
    assert check(coloring_problem(2), make_path(50), labels) == []


def test_verify_rejects_tampered_certificate():
    A = WindowMinParity(3)
    cert = two_color_adversary(A, 200)
    cert.violated_pair = (0, 1)
    assert not verify_certificate(A, cert)
    cert = two_color_adversary(A, 200)
    assert not verify_certificate(WindowMinParity(4), cert)


def test_certificate_json():
    cert = two_color_adversary(IdParity(), 100)
    js = cert.to_json()
    assert "base_ids" not in js and js["T"] == 0
    assert len(cert.to_json(with_ids=True)["swapped_ids"]) == 100


def test_registry():
    assert algorithm_from_name("linial", d=3).d == 3
    assert algorithm_from_name("constant", label=2).label == 2
    with pytest.raises(ValueError):
        algorithm_from_name("oracle")
