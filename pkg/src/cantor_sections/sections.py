"""Complete sections, quasi-sections, interiors and greedy minimization."""
from __future__ import annotations

import numpy as np

from . import graphs
from .closedset import ClosedTower
from .recurrence import limit_outer_from_cell, restricted_relation
from .tower import (ClopenSet, PreconditionError, Status, TowerSystem, Verdict,
                    relation_arrays)


class CharacterizationConflict(AssertionError):
    def __init__(self, report: dict):
        super().__init__(f"inconsistent characterizations: {report['conflicts']}")
        self.report = report


def _avoid_mask(system: TowerSystem, U: ClopenSet, m: int) -> np.ndarray:
    return ~U.refine(system, m).mask(system)


def _cycle_evidence(system: TowerSystem, U: ClopenSet, depth: int,
                    on: np.ndarray, direction: str = "forward") -> dict:
    """Shortest cycle through the lowest cell of ``on`` plus its projections."""
    n = system.size(depth)
    src, dst = relation_arrays(system, depth, direction)
    adj = graphs.adjacency(n, src, dst)
    start = int(np.flatnonzero(on)[0])
    cyc = graphs.shortest_cycle(adj, start, on)
    if direction == "backward":
        cyc = [cyc[0]] + cyc[:0:-1]
    walks = {str(depth): cyc}
    for k in range(depth - 1, U.depth - 1, -1):
        anc = system.ancestor_map(depth, k)
        walks[str(k)] = [int(anc[c]) for c in cyc]
    return {"kind": "cycle", "u_depth": U.depth, "cells": U.sorted(),
            "depth": depth, "cycle": cyc, "projections": walks,
            "realized": system.cycle_realized(depth, cyc)}


def _cycle_verdict(system, U, depth, on, budget, direction="forward") -> Verdict:
    cert = _cycle_evidence(system, U, depth, on, direction)
    if cert["realized"]:
        return Verdict(Status.FALSE, cert, budget=budget)
    return Verdict(Status.UNKNOWN, cert, exact=False, budget=budget)


def _check_args(U: ClopenSet, budget: int) -> None:
    if budget < U.depth:
        raise ValueError(f"budget {budget} is below the depth {U.depth} of U")


def is_complete_section(system: TowerSystem, U: ClopenSet, budget: int) -> Verdict:
    """Does every orbit meet the clopen set ``U``?

    Depth by depth, keep the cells lying on overlap cycles that avoid ``U``
    and sit below the previous depth's survivors.  Once none survive, the
    avoiding cells carry no cycle at all and the longest avoiding path bounds
    the number of iterates needed: ``X = U ∪ f^-1(U) ∪ ... ∪ f^-k(U)``.
    """
    _check_args(U, budget)
    if not U.members:
        return Verdict(Status.FALSE, {"kind": "empty", "u_depth": U.depth, "cells": []},
                       budget=budget)
    Z = None
    for m in range(U.depth, budget + 1):
        n = system.size(m)
        avoid = _avoid_mask(system, U, m)
        mask = avoid if Z is None else avoid & Z[system.parent(m - 1)]
        src, dst = relation_arrays(system, m)
        Z = graphs.cycle_mask(n, src, dst, mask)
        if not Z.any():
            k = graphs.longest_path_vertices(n, src, dst, avoid)
            return Verdict(Status.TRUE, {"kind": "cover", "u_depth": U.depth,
                                         "cells": U.sorted(), "depth": m,
                                         "horizon": k}, budget=budget)
    return _cycle_verdict(system, U, budget, Z, budget)


# -- independent characterizations ------------------------------------------

def _peel(system: TowerSystem, m: int, alive: np.ndarray, direction: str) -> int | None:
    """Rounds until no cell of ``alive`` keeps a neighbor inside (None if never)."""
    src, dst = relation_arrays(system, m, direction)
    alive = alive.copy()
    rounds = 0
    while alive.any():
        keep = np.zeros_like(alive)
        ok = alive[src] & alive[dst]
        keep[src[ok]] = True
        if (keep == alive).all():
            return None
        alive = keep
        rounds += 1
    return rounds


def _orbit_cover(system, U, budget, direction) -> Verdict:
    """Forward (``backward`` relation peel) or backward orbit of ``U`` covers X."""
    for m in range(U.depth, budget + 1):
        avoid = _avoid_mask(system, U, m)
        k = _peel(system, m, avoid, direction)
        if k is not None:
            return Verdict(Status.TRUE, {"kind": "peel", "depth": m, "horizon": k,
                                         "direction": direction}, budget=budget)
    m = budget
    src, dst = relation_arrays(system, m, direction)
    on = graphs.cycle_mask(system.size(m), src, dst, _avoid_mask(system, U, m))
    return _cycle_verdict(system, U, m, on, budget, direction)


def _restricted_avoid_cycles(system, U, m, cells=None) -> np.ndarray:
    n = system.size(m)
    mask = _avoid_mask(system, U, m)
    if cells is not None:
        mask &= cells
    src, dst = restricted_relation(system, m)
    return graphs.cycle_mask(n, src, dst, mask)


def _meets_minimal_sets(system, U, budget) -> Verdict:
    from .recurrence import minimal_set_reps
    for m in range(U.depth, budget + 1):
        reps = np.zeros(system.size(m), bool)
        for rep in minimal_set_reps(system, m):
            reps[list(rep.cells)] = True
        on = _restricted_avoid_cycles(system, U, m, reps)
        if not on.any():
            return Verdict(Status.TRUE, {"kind": "reps_meet", "depth": m},
                           budget=budget)
    return _cycle_verdict(system, U, budget, on, budget)


def _meets_limit_sets(system, U, budget, direction, max_cells=512) -> Verdict:
    rel = "forward" if direction == "omega" else "backward"
    for m in range(U.depth, budget + 1):
        n = system.size(m)
        if n > max_cells:
            break
        bad = None
        for c in range(n):
            lim = limit_outer_from_cell(system, m, c, direction).mask(system)
            on = _restricted_avoid_cycles(system, U, m, lim)
            if on.any():
                bad = on
                break
        if bad is None:
            return Verdict(Status.TRUE, {"kind": f"{direction}_meet", "depth": m},
                           budget=budget)
    m = min(budget, m)
    on = _restricted_avoid_cycles(system, U, m)
    if not on.any():
        return Verdict(Status.UNKNOWN, {"kind": f"{direction}_meet"}, exact=False,
                       budget=budget)
    return _cycle_verdict(system, U, m, on, budget, rel)


CHARACTERIZATIONS = ("complete_section", "forward_orbit", "backward_orbit",
                     "minimal_sets", "omega_limits", "alpha_limits")


def cross_check_characterizations(system: TowerSystem, U: ClopenSet, budget: int,
                                  strict: bool = True) -> dict:
    """Evaluate six equivalent descriptions of a complete section separately.

    Returns ``{"verdicts", "statuses", "certificates", "conflicts", "ok"}``; a True/False disagreement
    raises :class:`CharacterizationConflict` when ``strict``.
    """
    _check_args(U, budget)
    verdicts = {
        "complete_section": is_complete_section(system, U, budget),
        "forward_orbit": _orbit_cover(system, U, budget, "backward"),
        "backward_orbit": _orbit_cover(system, U, budget, "forward"),
        "minimal_sets": _meets_minimal_sets(system, U, budget),
        "omega_limits": _meets_limit_sets(system, U, budget, "omega"),
        "alpha_limits": _meets_limit_sets(system, U, budget, "alpha"),
    }
    decided = {k: v.status for k, v in verdicts.items() if v.status is not Status.UNKNOWN}
    names = sorted(decided)
    conflicts = [[a, b] for i, a in enumerate(names) for b in names[i + 1:]
                 if decided[a] is not decided[b]]
    report = {"verdicts": {k: v.label for k, v in verdicts.items()},
              "statuses": {k: v.status.value for k, v in verdicts.items()},
              "certificates": {k: v.certificate for k, v in verdicts.items()},
              "conflicts": conflicts, "ok": not conflicts}
    if conflicts and strict:
        raise CharacterizationConflict(report)
    return report


# -- closed sets ----------------------------------------------------------

def is_quasi_section(system: TowerSystem, A: ClosedTower, budget: int) -> Verdict:
    """Every hull of ``A`` up to ``budget`` must be a complete section."""
    covers = []
    for n in range(budget + 1):
        v = is_complete_section(system, A.hull(n), budget)
        if v.status is not Status.TRUE:
            cert = {"kind": "hull", "hull_depth": n, "hull": v.certificate}
            return Verdict(v.status, cert, exact=v.exact, budget=budget)
        covers.append(v.certificate)
    exact = A.clopen_depth(budget) is not None
    return Verdict(Status.TRUE, {"kind": "hull_covers", "covers": covers},
                   exact=exact, budget=budget)


def interior_status(system: TowerSystem, A: ClosedTower, budget: int) -> Verdict:
    """NonemptyInterior (True) with an IN cell, else EmptyAtBudget."""
    for n in range(budget + 1):
        cells = A.in_cells(n)
        if cells:
            return Verdict(Status.TRUE, {"kind": "interior_witness", "depth": n,
                                         "cell": cells[0]}, budget=budget)
    return Verdict(Status.UNKNOWN, {"kind": "no_in_cell", "depth": budget},
                   exact=False, flavor="empty_so_far", budget=budget)


def minimize_quasi_section(system: TowerSystem, A: ClosedTower,
                           budget: int) -> ClosedTower:
    """Greedily shrink ``A`` to a quasi-section that is minimal at ``budget``.

    Depth by depth, cells below the survivors of the previous depth are
    dropped (highest id first, so low ids survive) whenever the remaining
    hull is still a complete section.
    """
    if is_quasi_section(system, A, budget).is_false:
        raise PreconditionError("not a quasi-section")
    kept = None
    for n in range(budget + 1):
        live = A.hull_mask(n)
        if kept is not None:
            live &= kept[system.parent(n - 1)]
        cells = set(np.flatnonzero(live).tolist())
        for c in sorted(cells, reverse=True):
            trial = cells - {c}
            if trial and is_complete_section(system, ClopenSet.of(n, trial),
                                             budget).status is Status.TRUE:
                cells = trial
        kept = np.zeros(system.size(n), bool)
        kept[sorted(cells)] = True
    return ClosedTower.from_paths(system, budget, np.flatnonzero(kept))
