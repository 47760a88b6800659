"""Outer approximations of minimal sets, M_f, the non-wandering set and limit sets.

All results are unions of cells guaranteed to contain the true (generally
uncomputable) set.  Cells flagged ``wandering`` by the builder never meet a
minimal set or the non-wandering set and are dropped up front.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import graphs
from .tower import (ClopenSet, PointApprox, Status, TowerSystem, Verdict,
                    image_cells, relation_arrays)


@dataclass(frozen=True)
class MinimalSetRep:
    """A strongly connected, cycle-carrying block of non-wandering cells."""

    depth: int
    cells: tuple[int, ...]
    parent: int | None = None

    def to_json(self) -> dict:
        return {"depth": self.depth, "cells": list(self.cells), "parent": self.parent}


def restricted_relation(system: TowerSystem, depth: int, direction: str = "forward"):
    src, dst = relation_arrays(system, depth, direction)
    keep = ~system.wandering(depth)
    return graphs.induced(src, dst, keep)


def _reps_at(system: TowerSystem, depth: int) -> list[tuple[int, ...]]:
    n = system.size(depth)
    src, dst = restricted_relation(system, depth)
    on = graphs.cycle_mask(n, src, dst)
    labels = graphs.scc_labels(n, src, dst)
    blocks: dict[int, list[int]] = {}
    for c in np.flatnonzero(on).tolist():
        blocks.setdefault(int(labels[c]), []).append(c)
    return sorted(tuple(b) for b in blocks.values())


def minimal_set_reps(system: TowerSystem, depth: int) -> list[MinimalSetRep]:
    """Candidate covers of minimal sets at ``depth``, lowest cell first.

    Every minimal set lies inside exactly one returned block; ``parent`` is the
    index of the block at ``depth - 1`` containing this block's projection.
    """
    blocks = _reps_at(system, depth)
    if depth == 0:
        return [MinimalSetRep(0, b) for b in blocks]
    above = _reps_at(system, depth - 1)
    where = {c: i for i, b in enumerate(above) for c in b}
    par = system.level(depth).parent
    return [MinimalSetRep(depth, b, where.get(int(par[b[0]]))) for b in blocks]


def mf_outer(system: TowerSystem, depth: int) -> ClopenSet:
    cells = [c for rep in _reps_at(system, depth) for c in rep]
    return ClopenSet.of(depth, cells)


def nonwandering_outer(system: TowerSystem, depth: int) -> ClopenSet:
    """Cells that support a return path of length >= 1.

    Return paths may pass through wandering cells; only the cell itself must
    not be flagged wandering.
    """
    n = system.size(depth)
    src, dst = relation_arrays(system, depth)
    on = graphs.cycle_mask(n, src, dst) & ~system.wandering(depth)
    return ClopenSet.of(depth, np.flatnonzero(on))


def limit_set_outer(system: TowerSystem, x: PointApprox, depth: int, horizon: int,
                    direction: str = "omega") -> ClopenSet:
    """Outer approximation of the omega- (or alpha-) limit set of ``x``."""
    if direction not in ("omega", "alpha"):
        raise ValueError("direction must be 'omega' or 'alpha'")
    j = horizon if direction == "omega" else -horizon
    img_depth = x.depth - horizon
    if img_depth < depth:
        from .tower import BudgetError
        raise BudgetError(f"point depth {x.depth} < depth {depth} + horizon {horizon}")
    start_cell = system.ancestor(img_depth, image_cells(system, x, j), depth)
    return limit_outer_from_cell(system, depth, start_cell, direction)


def limit_outer_from_cell(system: TowerSystem, depth: int, cell: int,
                          direction: str = "omega") -> ClopenSet:
    rel = "forward" if direction == "omega" else "backward"
    n = system.size(depth)
    src, dst = relation_arrays(system, depth, rel)
    start = np.zeros(n, bool)
    start[cell] = True
    reach = graphs.reachable(n, src, dst, start)
    rsrc, rdst = restricted_relation(system, depth, rel)
    recurrent = graphs.cycle_mask(n, rsrc, rdst)
    return ClopenSet.of(depth, np.flatnonzero(reach & recurrent))


def min_return_times(system: TowerSystem, depth: int) -> int | None:
    """Length of the shortest cell cycle at ``depth`` (None when acyclic)."""
    n = system.size(depth)
    src, dst = relation_arrays(system, depth)
    adj = graphs.adjacency(n, src, dst)
    best = None
    for c in np.flatnonzero(graphs.cycle_mask(n, src, dst)).tolist():
        cyc = graphs.shortest_cycle(adj, c)
        if cyc is not None and (best is None or len(cyc) < best):
            best = len(cyc)
            if best == 1:
                break
    return best


def periodic_atom_cycle(system: TowerSystem, depth: int) -> list[int] | None:
    """A cycle of atoms at ``depth`` (an isolated periodic orbit), lowest id first."""
    n = system.size(depth)
    atoms = system.atoms(depth)
    src, dst = relation_arrays(system, depth)
    on = graphs.cycle_mask(n, src, dst, atoms)
    if not on.any():
        return None
    adj = graphs.adjacency(n, src, dst)
    start = int(np.flatnonzero(on)[0])
    return graphs.shortest_cycle(adj, start, atoms)


def _witness_kind(system: TowerSystem, m: int, cache: dict):
    if m not in cache:
        n_m = system.size(m)
        src, dst = relation_arrays(system, m)
        cache[m] = (graphs.cycle_mask(n_m, src, dst), graphs.adjacency(n_m, src, dst),
                    system.wandering(m))
    on_cycle, adj, wand = cache[m]

    def kind(d: int) -> str | None:
        if wand[d]:
            return "wandering"
        if not on_cycle[d]:
            return "no_return"
        if graphs.girth_at_least(adj, d, m):
            return "return_time"
        return None
    return kind


def is_densely_aperiodic(system: TowerSystem, budget: int, slack: int | None = None) -> Verdict:
    """Decide density of aperiodic points as far as the budget allows.

    False needs an isolated periodic orbit (a cycle of atoms).  True-at-budget
    needs, below every depth-``budget`` cell, a descendant at some depth
    ``m`` in ``budget + 1 .. 2 * budget + 1`` that is wandering, lies on no
    cell cycle, or has no cell cycle of length <= ``m``.
    """
    for n in range(budget + 1):
        cyc = periodic_atom_cycle(system, n)
        if cyc is not None:
            return Verdict(Status.FALSE, {"kind": "periodic_atom_cycle",
                                          "depth": n, "cycle": cyc},
                           budget=budget)
    slack = budget if slack is None else slack
    cache: dict = {}
    pending = {c: [c] for c in range(system.size(budget))}
    witnesses: dict[int, list] = {}
    for m in range(budget + 1, budget + 2 + slack):
        kind = _witness_kind(system, m, cache)
        kids = system.children(m - 1)
        nxt = {}
        for c, frontier in pending.items():
            below = [d for f in frontier for d in kids[f]]
            for d in below:
                k = kind(d)
                if k:
                    witnesses[c] = [m, d, k]
                    break
            else:
                nxt[c] = below
        pending = nxt
        if not pending:
            break
    if pending:
        return Verdict(Status.UNKNOWN, {"kind": "aperiodic_witnesses",
                                        "missing": min(pending)},
                       exact=False, budget=budget)
    bounds = {}
    for n in range(1, budget + 2):
        if system.size(n) <= 1024:
            bounds[n] = min_return_times(system, n)
    return Verdict(Status.TRUE, {"kind": "aperiodic_witnesses", "depth": budget,
                                 "witnesses": [witnesses[c] for c in sorted(witnesses)],
                                 "min_return_times": bounds},
                   exact=False, budget=budget)
