import copy

import pytest

from cantor_sections.basicset import is_basic_set
from cantor_sections.certificates import replay, replay_certificate
from cantor_sections.closedset import ClosedTower
from cantor_sections.sections import (cross_check_characterizations, interior_status,
                                      is_complete_section, is_quasi_section)
from cantor_sections.tower import ClopenSet


def centre(system, depth, pred):
    return ClopenSet.of(depth, [c for c in range(system.size(depth))
                                if pred(system.label(depth, c))])


def test_cover_replays_and_tampering_fails(shift2):
    U = centre(shift2, 1, lambda w: w[1] == "0" or w[1:] == "11")
    v = is_complete_section(shift2, U, 4).to_json()
    assert replay(shift2, v, U)
    short = copy.deepcopy(v)
    short["certificate"]["horizon"] -= 1
    assert not replay(shift2, short, U)
    other = centre(shift2, 1, lambda w: w[1] == "0")
    assert not replay(shift2, v, other)


def test_cycle_replays_and_tampering_fails(shift2):
    U = centre(shift2, 1, lambda w: w[1] == "0")
    v = is_complete_section(shift2, U, 5).to_json()
    assert replay(shift2, v, U)
    moved = copy.deepcopy(v)
    top = moved["certificate"]["projections"][str(moved["certificate"]["depth"])]
    top[0] = 0
    assert not replay(shift2, moved, U)
    unreal = copy.deepcopy(v)
    unreal["certificate"]["realized"] = False
    assert not replay(shift2, unreal, U)


def test_six_way_certificates_replay(perm635):
    for cells in ([0, 3, 5], [0, 1]):
        U = ClopenSet.of(0, cells)
        rep = cross_check_characterizations(perm635, U, 2)
        for name, status in rep["statuses"].items():
            v = {"status": status, "certificate": rep["certificates"][name]}
            assert replay(perm635, v, U), name


def test_quasi_and_basic_replay(odo2, perm635):
    A = ClosedTower.from_points(odo2, ["0"])
    v = is_quasi_section(odo2, A, 5).to_json()
    assert replay(odo2, v, A)
    cover = copy.deepcopy(v)
    cover["certificate"]["covers"][3]["horizon"] = 2
    assert not replay(odo2, cover, A)
    B = ClosedTower.from_cells(perm635, 0, [0, 3, 5])
    w = is_basic_set(perm635, B, 2).to_json()
    assert replay(perm635, w, B)
    # the same certificate cannot vouch for a set with a double hit
    assert not replay(perm635, w, ClosedTower.from_cells(perm635, 0, [0, 1, 3, 5]))


def test_double_hit_tampering(perm635):
    B = ClosedTower.from_cells(perm635, 0, [0, 1, 3, 5])
    v = is_basic_set(perm635, B, 2).to_json()
    assert replay(perm635, v, B)
    bad = copy.deepcopy(v)
    bad["certificate"]["cell"] = 3
    assert not replay(perm635, bad, B)


def test_interior_witness(compact):
    B = ClosedTower.from_points(compact, ["-inf", "0", "+inf"])
    v = interior_status(compact, B, 4).to_json()
    assert replay(compact, v, B)
    bad = copy.deepcopy(v)
    bad["certificate"]["cell"] = 0
    assert not replay(compact, bad, B)


def test_unknown_verdicts_and_kinds_rejected(odo2):
    assert not replay(odo2, {"status": "Unknown", "certificate": {}})
    assert not replay_certificate(odo2, {"kind": "made_up"})


@pytest.mark.parametrize("cells", [[], [0]])
def test_empty_certificate(odo2, cells):
    r = replay_certificate(odo2, {"kind": "empty", "u_depth": 0, "cells": cells})
    assert bool(r) == (not cells)
