import numpy as np
import pytest

from cantor_sections.closedset import ClosedTower
from cantor_sections.sections import (CharacterizationConflict, cross_check_characterizations,
                                      interior_status, is_complete_section, is_quasi_section,
                                      minimize_quasi_section)
from cantor_sections.recurrence import mf_outer
from cantor_sections.tower import ClopenSet, PreconditionError, Status


def center(system, depth, pred):
    return [c for c in range(system.size(depth)) if pred(system.label(depth, c))]


def test_shift_center0_plus_11_is_complete(shift2):
    U = ClopenSet.of(1, center(shift2, 1, lambda w: w[1] == "0" or w[1:] == "11"))
    v = is_complete_section(shift2, U, 4)
    assert v.status is Status.TRUE and v.exact


def test_shift_center0_misses_fixed_point(shift2):
    U = ClopenSet.of(1, center(shift2, 1, lambda w: w[1] == "0"))
    v = is_complete_section(shift2, U, 6)
    assert v.status is Status.FALSE
    top = v.certificate["cycle"]
    assert len(top) == 1 and set(shift2.label(6, top[0])) == {"1"}


def test_whole_space_has_horizon_zero(shift2, hetero):
    for system in (shift2, hetero):
        v = is_complete_section(system, ClopenSet.of(2, range(system.size(2))), 3)
        assert v.status is Status.TRUE and v.certificate["horizon"] == 0


def test_empty_set_is_false(odo2):
    assert is_complete_section(odo2, ClopenSet.of(1, []), 2).is_false


def test_budget_below_depth(odo2):
    with pytest.raises(ValueError):
        is_complete_section(odo2, ClopenSet.of(3, [0]), 2)


def test_fixed_point_loop_is_realized(hetero):
    U = ClopenSet.of(2, [c for c in range(hetero.size(2)) if hetero.label(2, c) != "P2"])
    v = is_complete_section(hetero, U, 4)
    assert v.status is Status.FALSE and v.certificate["realized"]


def test_unrealized_cycle_stays_unknown(shift2, monkeypatch):
    monkeypatch.setattr(type(shift2), "cycle_realized", lambda self, depth, cycle: False)
    U = ClopenSet.of(1, center(shift2, 1, lambda w: w[1] == "0"))
    v = is_complete_section(shift2, U, 3)
    assert v.status is Status.UNKNOWN and v.certificate["kind"] == "cycle"


@pytest.mark.parametrize("cells,expected", [([0, 3, 5], "True"), ([0, 1], "False")])
def test_six_characterizations_permutation(perm635, cells, expected):
    rep = cross_check_characterizations(perm635, ClopenSet.of(0, cells), 2)
    assert set(rep["verdicts"].values()) == {expected}
    assert rep["ok"]


def test_six_characterizations_whole_shift(shift2):
    rep = cross_check_characterizations(shift2, ClopenSet.of(1, range(8)), 2)
    assert set(rep["verdicts"].values()) == {"True"}


def test_conflict_raises(perm635, monkeypatch):
    from cantor_sections import sections
    real = sections.is_complete_section

    def liar(system, U, budget):
        v = real(system, U, budget)
        v.status = Status.FALSE if v.status is Status.TRUE else Status.TRUE
        return v
    monkeypatch.setattr(sections, "is_complete_section", liar)
    with pytest.raises(CharacterizationConflict):
        cross_check_characterizations(perm635, ClopenSet.of(0, [0, 3, 5]), 1)


def test_monotone_in_supersets(golden):
    rng = np.random.default_rng(3)
    n = golden.size(2)
    for _ in range(15):
        cells = set(rng.choice(n, size=rng.integers(1, n), replace=False).tolist())
        if is_complete_section(golden, ClopenSet.of(2, cells), 4).status is Status.TRUE:
            bigger = cells | {int(rng.integers(n))}
            assert is_complete_section(golden, ClopenSet.of(2, bigger), 4).status \
                is Status.TRUE


def test_odometer_singleton_quasi_section(odo2):
    A = ClosedTower.from_points(odo2, ["0"])
    v = is_quasi_section(odo2, A, 6)
    assert v.label == "True-at-budget"
    # the avoiding cells at depth n form a path of 2**n - 1 cells
    assert [c["horizon"] for c in v.certificate["covers"]] == [2 ** n - 1 for n in range(7)]


def test_permutation_quasi_sections(perm635):
    assert is_quasi_section(perm635, ClosedTower.from_cells(perm635, 0, [0, 3, 5]), 3).label \
        == "True"
    assert is_quasi_section(perm635, ClosedTower.from_cells(perm635, 0, [0]), 3).is_false


def test_interior_examples(compact, odo2, shift2):
    B = ClosedTower.from_points(compact, ["-inf", "0", "+inf"])
    v = interior_status(compact, B, 5)
    assert v.status is Status.TRUE and compact.label(v.certificate["depth"],
                                                     v.certificate["cell"]) == "0"
    for budget in range(9):
        assert interior_status(odo2, ClosedTower.from_points(odo2, ["0"]), budget).label \
            == "EmptyAtBudget"
    assert interior_status(shift2, ClosedTower.whole(shift2), 2).status is Status.TRUE


def test_minimize_permutation(perm635):
    m = minimize_quasi_section(perm635, ClosedTower.whole(perm635), 2)
    assert m.hull(0).sorted() == [0, 3, 5]
    assert m.clopen_depth(2) == 0
    again = minimize_quasi_section(perm635, ClosedTower.from_cells(perm635, 0, [0, 3, 5]), 2)
    assert again.hull(0).sorted() == [0, 3, 5]


def test_minimize_odometer_gives_lowest_branch(odo2):
    m = minimize_quasi_section(odo2, ClosedTower.whole(odo2), 6)
    assert [m.hull(n).sorted() for n in range(7)] == [[0]] * 7
    for budget in range(7):
        assert interior_status(odo2, m, budget).label == "EmptyAtBudget"


def test_minimize_stays_inside_mf(prod_odo, compact):
    for system in (prod_odo, compact):
        m = minimize_quasi_section(system, ClosedTower.whole(system), 3)
        for n in range(4):
            assert set(m.hull(n).sorted()) <= mf_outer(system, n).members
        assert is_quasi_section(system, m, 3).status is Status.TRUE


def test_minimize_rejects_non_quasi(perm635):
    with pytest.raises(PreconditionError):
        minimize_quasi_section(perm635, ClosedTower.from_cells(perm635, 0, [0]), 2)
