"""Basic sets: quasi-sections met at most once by every orbit."""
from __future__ import annotations

import numpy as np

from .closedset import IN, OUT, PARTIAL, ClosedTower
from .recurrence import is_densely_aperiodic, minimal_set_reps
from .sections import is_quasi_section
from .tower import PreconditionError, Status, TowerSystem, Verdict, image_chain


def find_double_hit(system: TowerSystem, A: ClosedTower, max_depth: int,
                    min_depth: int = 1) -> dict | None:
    """Smallest ``(depth, j, cell)`` witnessing two distinct points of one orbit in A.

    A depth-D cell ``s`` counts when it is certified inside ``A`` (IN, or a
    non-OUT atom), its ``j``-step image cell at depth ``D - j`` is certified
    as well, and that image cell differs from the depth ``D - j`` ancestor of
    ``s``: the two points then lie in disjoint cells.
    """
    for D in range(max(1, min_depth), max_depth + 1):
        here = A.certified_members(D)
        if not here.any():
            continue
        anc = np.arange(system.size(D))
        for j in range(1, D + 1):
            anc = system.parent(D - j)[anc]
            img = image_chain(system, D, j)
            there = A.certified_members(D - j)
            hit = np.flatnonzero(here & there[img] & (img != anc))
            if hit.size:
                s = int(hit[0])
                return {"kind": "double_hit", "depth": D, "cell": s, "j": j,
                        "image": int(img[s]), "ancestor": int(anc[s])}
    return None


def is_basic_set(system: TowerSystem, A: ClosedTower, budget: int) -> Verdict:
    """Quasi-section check plus a search for orbits hitting ``A`` twice."""
    q = is_quasi_section(system, A, budget)
    if q.is_false:
        return Verdict(Status.FALSE, {"kind": "not_quasi_section", "quasi": q.certificate},
                       budget=budget)
    finite = system.finite_size
    horizon = max(budget, finite) if finite else budget
    hit = find_double_hit(system, A, horizon)
    if hit is not None:
        return Verdict(Status.FALSE, hit, budget=budget)
    if q.status is Status.UNKNOWN:
        return Verdict(Status.UNKNOWN, {"kind": "quasi_unknown", "quasi": q.certificate},
                       exact=False, budget=budget)
    cert = {"kind": "basic", "quasi": q.certificate, "double_hit_horizon": horizon}
    return Verdict(Status.TRUE, cert, exact=bool(finite) and q.exact, budget=budget)


def strip_interior(system: TowerSystem, A: ClosedTower, budget: int) -> ClosedTower:
    """Remove the cell-visible interior of a basic set.

    IN cells become OUT and PARTIAL ancestors left without a non-OUT child
    follow them.  Known only up to ``budget``.
    """
    if is_basic_set(system, A, budget).is_false:
        raise PreconditionError("not a basic set")
    if is_densely_aperiodic(system, budget).is_false:
        raise PreconditionError("aperiodic points are not dense")
    levels = [A.status(n).copy() for n in range(budget + 1)]
    if not any((st == IN).any() for st in levels):
        return A
    for st in levels:
        st[st == IN] = OUT
    for n in range(budget - 1, -1, -1):
        live = np.zeros(system.size(n), bool)
        live[system.parent(n)[levels[n + 1] != OUT]] = True
        levels[n][(levels[n] == PARTIAL) & ~live] = OUT
    if any(not (st != OUT).any() for st in levels):
        raise PreconditionError("the set has no boundary left after stripping")
    out = ClosedTower.explicit(system, levels)
    out.description = {"generator": "strip_interior", "of": A.description,
                       "depth": budget}
    return out


def transversal_from_minimal_sets(system: TowerSystem, B: ClosedTower,
                                  budget: int) -> ClosedTower:
    """Keep one branch of ``B`` per minimal-set candidate at depth ``budget``.

    Each representative contributes its lowest-id cell among the non-OUT
    cells of ``B``; representatives that ``B`` misses are skipped.
    """
    if is_basic_set(system, B, budget).is_false:
        raise PreconditionError("not a basic set")
    hull = B.hull_mask(budget)
    chosen = []
    for rep in minimal_set_reps(system, budget):
        hits = [c for c in rep.cells if hull[c]]
        if hits:
            chosen.append(hits[0])
    if not chosen:
        raise PreconditionError("no minimal-set candidate meets the set")
    out = ClosedTower.from_paths(system, budget, chosen)
    out.description = {"generator": "branches", "depth": budget,
                       "cells": sorted(chosen)}
    return out
