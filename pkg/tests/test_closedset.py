import numpy as np
import pytest

from cantor_sections.closedset import IN, OUT, PARTIAL, ClosedTower
from cantor_sections.tower import BudgetError


def test_from_cells_statuses(odo2):
    A = ClosedTower.from_cells(odo2, 2, [0, 1])
    assert A.status(0).tolist() == [PARTIAL]
    assert A.status(1).tolist() == [PARTIAL, PARTIAL]
    assert A.status(3).tolist() == [IN, IN, OUT, OUT, IN, IN, OUT, OUT]
    assert A.check(5) == []
    assert A.clopen_depth(5) == 2


def test_points_tower(compact):
    B = ClosedTower.from_points(compact, ["-inf", "0", "+inf"])
    assert B.status(2).tolist() == [PARTIAL, OUT, IN, OUT, PARTIAL]
    assert B.check(6) == []
    assert B.clopen_depth(6) is None


def test_certified_members(compact):
    B = ClosedTower.from_points(compact, ["-inf", "0"])
    assert np.flatnonzero(B.certified_members(2)).tolist() == [2]


def test_from_paths_is_bounded(odo2):
    A = ClosedTower.from_paths(odo2, 3, [0])
    assert A.hull(3).sorted() == [0]
    with pytest.raises(BudgetError):
        A.status(4)


def test_explicit_clopen_extends(perm635):
    A = ClosedTower.explicit(perm635, [[IN, OUT, OUT, IN, OUT, IN]])
    assert A.status(5).tolist() == [IN, OUT, OUT, IN, OUT, IN]


def test_check_reports_broken_invariants(odo2):
    A = ClosedTower.explicit(odo2, [[PARTIAL], [OUT, OUT]])
    problems = A.check(1)
    assert any("every cell is OUT" in p for p in problems)
    assert any("no non-OUT child" in p for p in problems)
    B = ClosedTower.explicit(odo2, [[IN], [IN, PARTIAL]])
    assert any("IN parent" in p for p in B.check(1))


def test_union_and_json(odo2):
    A = ClosedTower.union(ClosedTower.from_cells(odo2, 2, [0]),
                          ClosedTower.from_cells(odo2, 2, [3]))
    assert A.hull(2).sorted() == [0, 3]
    js = A.to_json(2)
    assert js["levels"][1] == [[0, "PARTIAL"], [1, "PARTIAL"]]


def test_empty_generators_rejected(odo2):
    with pytest.raises(ValueError):
        ClosedTower.from_cells(odo2, 1, [])
    with pytest.raises(ValueError):
        ClosedTower.from_points(odo2, [])
