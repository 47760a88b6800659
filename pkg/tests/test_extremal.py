import json

import numpy as np
import pytest
from conftest import all_systems

from cantor_sections import builders, oracle
from cantor_sections.extremal import (CellOrder, OrderError, excluded_cells,
                                      extremal_outer, extremal_theorem_checks,
                                      extremal_tower, inf_point)
from cantor_sections.tower import BudgetError, PointApprox


def labels(system, depth, cells):
    return sorted(system.label(depth, c) for c in cells)


def test_default_order_is_coherent():
    for system in all_systems().values():
        order = CellOrder.default(system)
        assert order.incoherence(4) is None


def test_order_json_round_trip(perm635):
    order = CellOrder(perm635, [[5, 4, 3, 2, 1, 0]])
    again = CellOrder.from_json(perm635, json.loads(json.dumps(order.to_json(2))))
    assert again.cells(2) == order.cells(2) == [5, 4, 3, 2, 1, 0]


def test_incoherent_order_rejected(odo2):
    with pytest.raises(OrderError):
        CellOrder(odo2, [[0], [0, 1], [0, 1, 2, 3]])
    with pytest.raises(OrderError):
        CellOrder(odo2, [[0], [0, 0]])


def test_shift_extremal_depth1(shift2):
    E = extremal_outer(shift2, CellOrder.default(shift2), 1, 4)
    assert labels(shift2, 1, E.sorted()) == ["000", "100", "101", "111"]


def test_shift_survivors_are_all_ones(shift2):
    order = CellOrder.default(shift2)
    for k in range(1, 7):
        keep = ~excluded_cells(shift2, order, 0, k)
        centre = [shift2.label(k, c) for c in np.flatnonzero(keep)
                  if shift2.label(k, c)[k] == "1"]
        assert centre == ["1" * (2 * k + 1)]


def test_inf_point_bounds(shift2):
    order = CellOrder.default(shift2)
    ones = shift2.point("per:1", 6)
    b = inf_point(shift2, order, ones, 1, 3)
    assert shift2.label(1, b.lower) == "000" and shift2.label(1, b.upper) == "111"
    pulse = shift2.point("pulse:1:0", 6)
    b = inf_point(shift2, order, pulse, 1, 3)
    assert shift2.label(1, b.lower) == shift2.label(1, b.upper) == "000"
    with pytest.raises(BudgetError):
        inf_point(shift2, order, ones, 4, 3)


@pytest.mark.parametrize("perm", oracle.generator_perms(count=30))
def test_finite_extremal_matches_orbit_minima(perm):
    n = len(perm)
    system = builders.finite_permutation(perm)
    rng = np.random.default_rng(n * 101 + sum(i * p for i, p in enumerate(perm)))
    order = rng.permutation(n).tolist()
    E = extremal_outer(system, CellOrder(system, [order]), 0, n)
    assert set(E.sorted()) == set(oracle.brute_inf(n, perm, order))
    T = extremal_tower(system, CellOrder(system, [order]), 0, n)
    assert T.clopen_depth(1) == 0


def test_heteroclinic_theorem_report(hetero):
    rep = extremal_theorem_checks(hetero, CellOrder.default(hetero), 8)
    assert labels(hetero, 8, rep["extremal_cells"]) == ["P1", "P2", "b0"]
    assert labels(hetero, 8, rep["transversal_cells"]) == ["P1", "P2"]
    assert rep["strict_containment"]
    assert all(c == [1, 1] for c in rep["counts_by_horizon"])


def test_odometer_extremal_is_lowest_branch(odo2):
    order = CellOrder.default(odo2)
    for d in range(1, 5):
        assert extremal_outer(odo2, order, d, 2 ** d).sorted() == [order.cells(d)[0]]
    # a short horizon cannot reach the smaller point 8 steps back
    assert extremal_outer(odo2, order, 4, 6).sorted() == [0, 8]


def test_point_needs_depth(shift2):
    with pytest.raises(BudgetError):
        inf_point(shift2, CellOrder.default(shift2), PointApprox((0, 0)), 1, 1)
