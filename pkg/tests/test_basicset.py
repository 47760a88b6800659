import pytest

from cantor_sections import builders, oracle
from cantor_sections.basicset import (find_double_hit, is_basic_set, strip_interior,
                                      transversal_from_minimal_sets)
from cantor_sections.certificates import replay
from cantor_sections.closedset import ClosedTower
from cantor_sections.recurrence import minimal_set_reps
from cantor_sections.sections import interior_status, minimize_quasi_section
from cantor_sections.tower import PreconditionError, Status


def test_permutation_basic_sets(perm635):
    A = ClosedTower.from_cells(perm635, 0, [0, 3, 5])
    v = is_basic_set(perm635, A, 2)
    assert v.label == "True" and replay(perm635, v.to_json(), A)
    B = ClosedTower.from_cells(perm635, 0, [0, 1, 3, 5])
    w = is_basic_set(perm635, B, 2)
    assert w.status is Status.FALSE
    assert {k: w.certificate[k] for k in ("kind", "depth", "cell", "j")} == \
        {"kind": "double_hit", "depth": 1, "cell": 0, "j": 1}
    assert replay(perm635, w.to_json(), B)
    C = ClosedTower.from_cells(perm635, 0, [0, 3])
    assert is_basic_set(perm635, C, 2).certificate["kind"] == "not_quasi_section"


@pytest.mark.parametrize("perm", oracle.generator_perms(count=20, max_n=5))
def test_matches_brute_force(perm):
    system = builders.finite_permutation(perm)
    n = len(perm)
    for mask in range(1, 1 << n):
        A = [i for i in range(n) if mask >> i & 1]
        got = is_basic_set(system, ClosedTower.from_cells(system, 0, A), 1)
        assert got.exact
        assert (got.status is Status.TRUE) == oracle.brute_classify(n, perm, A)["basic_set"]


def test_compactified_boundary(compact):
    B = ClosedTower.from_points(compact, ["-inf", "0", "+inf"])
    assert is_basic_set(compact, B, 5).label == "True-at-budget"
    stripped = strip_interior(compact, B, 5)
    assert sorted(compact.label(5, c) for c in stripped.hull(5).sorted()) == ["L", "R"]
    assert is_basic_set(compact, stripped, 5).label == "True-at-budget"
    assert interior_status(compact, stripped, 5).label == "EmptyAtBudget"
    T = transversal_from_minimal_sets(compact, B, 5)
    assert sorted(compact.label(5, c) for c in T.hull(5).sorted()) == ["L", "R"]


def test_strip_without_interior_is_identity(odo2):
    A = ClosedTower.from_points(odo2, ["0"])
    assert strip_interior(odo2, A, 4) is A


def test_strip_preconditions(perm635, compact):
    with pytest.raises(PreconditionError):
        strip_interior(perm635, ClosedTower.from_cells(perm635, 0, [0, 3, 5]), 2)
    with pytest.raises(PreconditionError):
        strip_interior(compact, ClosedTower.from_points(compact, ["0"]), 4)


def test_transversal_hits_each_rep_once(prod_odo):
    with pytest.raises(PreconditionError):
        transversal_from_minimal_sets(prod_odo, ClosedTower.whole(prod_odo), 3)
    B = minimize_quasi_section(prod_odo, ClosedTower.whole(prod_odo), 3)
    T = transversal_from_minimal_sets(prod_odo, B, 3)
    hull = T.hull_mask(3)
    assert [int(hull[list(r.cells)].sum()) for r in minimal_set_reps(prod_odo, 3)] == \
        [1] * len(minimal_set_reps(prod_odo, 3))


def test_double_hit_on_odometer_interval(odo2):
    A = ClosedTower.from_cells(odo2, 1, [0])
    assert find_double_hit(odo2, A, 3) is None
    hit = find_double_hit(odo2, A, 5)
    assert hit is not None and replay(odo2, {"status": "False", "certificate": hit}, A)
