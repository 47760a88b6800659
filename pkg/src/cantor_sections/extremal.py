"""Cell orders, infimum bounds and outer approximations of the extremal set inf_f."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import graphs
from .basicset import is_basic_set, transversal_from_minimal_sets
from .closedset import ClosedTower
from .recurrence import is_densely_aperiodic, minimal_set_reps
from .sections import interior_status, is_quasi_section
from .tower import (BudgetError, ClopenSet, PointApprox, TowerSystem, image_cells,
                    image_chain, relation_arrays)


class OrderError(ValueError):
    pass


class CellOrder:
    """Refinement-coherent total orders on the cells of every depth.

    Explicit levels list cell ids from smallest to largest; deeper levels
    are derived by ordering children by parent rank, then by the builder's
    sibling key.  Comparing paths depth by depth gives the lexicographic
    order on points.
    """

    def __init__(self, system: TowerSystem, levels: list[list[int]] | None = None):
        self.system = system
        self._ranks: list[np.ndarray] = []
        for n, ids in enumerate(levels or []):
            ids = [int(c) for c in ids]
            if sorted(ids) != list(range(system.size(n))):
                raise OrderError(f"level {n} is not a permutation of the cells")
            rank = np.empty(len(ids), np.int64)
            rank[ids] = np.arange(len(ids))
            self._ranks.append(rank)
        self.explicit_depth = len(self._ranks) - 1
        bad = self.incoherence(self.explicit_depth)
        if bad is not None:
            raise OrderError(f"level {bad} is not refinement-coherent")

    @classmethod
    def default(cls, system: TowerSystem) -> "CellOrder":
        return cls(system)

    def rank(self, n: int) -> np.ndarray:
        while len(self._ranks) <= n:
            m = len(self._ranks)
            lev = self.system.level(m)
            keys = ((lev.sibling_key,) if m == 0
                    else (lev.sibling_key, self._ranks[m - 1][lev.parent]))
            order = np.lexsort(keys)
            rank = np.empty(lev.size, np.int64)
            rank[order] = np.arange(lev.size)
            self._ranks.append(rank)
        return self._ranks[n]

    def incoherence(self, depth: int) -> int | None:
        """First depth <= ``depth`` whose order breaks parent order (None if coherent)."""
        for n in range(1, depth + 1):
            order = np.argsort(self.rank(n))
            pr = self.rank(n - 1)[self.system.level(n).parent[order]]
            if (np.diff(pr) < 0).any():
                return n
        return None

    def cells(self, n: int) -> list[int]:
        return np.argsort(self.rank(n)).tolist()

    def to_json(self, depth: int) -> dict:
        return {"format": "cantor-sections/1", "type": "cell_order",
                "levels": [self.cells(n) for n in range(depth + 1)]}

    @classmethod
    def from_json(cls, system: TowerSystem, obj: dict) -> "CellOrder":
        return cls(system, obj["levels"])


@dataclass(frozen=True)
class InfBounds:
    """Cells at ``depth`` bracketing the cell of ``inf_f(x)`` in the order."""

    depth: int
    lower: int
    upper: int
    upper_shift: int

    def to_json(self) -> dict:
        return {"depth": self.depth, "lower": self.lower, "upper": self.upper,
                "upper_shift": self.upper_shift}


def inf_point(system: TowerSystem, order: CellOrder, x: PointApprox, depth: int,
              horizon: int) -> InfBounds:
    """Sound lower and upper cells for ``inf_f(x)``.

    The lower bound minimizes over every cell reachable from x's cell through
    the overlap relation in either direction, which covers the orbit closure.
    The upper bound minimizes over the exactly known cells of ``f^j(x)``,
    ``|j| <= horizon``.
    """
    if x.depth < depth + horizon:
        raise BudgetError(f"point known to depth {x.depth} < {depth} + {horizon}")
    rank = order.rank(depth)
    n = system.size(depth)
    start = np.zeros(n, bool)
    start[x.cell(depth)] = True
    reach = start.copy()
    for direction in ("forward", "backward"):
        src, dst = relation_arrays(system, depth, direction)
        reach |= graphs.reachable(n, src, dst, start)
    cand = np.flatnonzero(reach)
    lower = int(cand[np.argmin(rank[cand])])
    best = None
    for j in range(-horizon, horizon + 1):
        img = image_cells(system, x, j)
        cell = system.ancestor(x.depth - abs(j), img, depth)
        key = (int(rank[cell]), abs(j), j)
        if best is None or key < best[0]:
            best = (key, cell, j)
    return InfBounds(depth, lower, best[1], best[2])


def excluded_cells(system: TowerSystem, order: CellOrder, depth: int,
                   horizon: int) -> np.ndarray:
    """Mask of depth ``depth + horizon`` cells whose points all have a smaller orbit point.

    A cell is excluded when some image cell ``f^j`` (``1 <= |j| <= horizon``)
    lies strictly below the cell's ancestor at the image's depth.
    """
    D = depth + horizon
    out = np.zeros(system.size(D), bool)
    anc = np.arange(system.size(D))
    for j in range(1, horizon + 1):
        anc = system.parent(D - j)[anc]
        rank = order.rank(D - j)
        for sign in (1, -1):
            img = image_chain(system, D, sign * j)
            out |= rank[img] < rank[anc]
    return out


def extremal_outer(system: TowerSystem, order: CellOrder, depth: int,
                   horizon: int) -> ClopenSet:
    """Depth-``depth`` cells with a descendant that survives every exclusion."""
    D = depth + horizon
    alive = ~excluded_cells(system, order, depth, horizon)
    anc = system.ancestor_map(D, depth)
    return ClopenSet.of(depth, np.unique(anc[alive]))


def extremal_tower(system: TowerSystem, order: CellOrder, depth: int,
                   horizon: int) -> ClosedTower:
    """Closed-set form of the outer approximation, known to ``depth``.

    Atoms are marked IN only on finite systems whose orbits are fully
    scanned by the horizon.
    """
    cells = extremal_outer(system, order, depth, horizon).sorted()
    exact = system.is_finite() and horizon >= system.finite_size
    tower = ClosedTower.from_paths(system, depth, cells, atoms_in=exact)
    tower.description = {"generator": "extremal", "depth": depth, "horizon": horizon}
    return tower


def extremal_theorem_checks(system: TowerSystem, order: CellOrder, budget: int,
                            depth: int | None = None,
                            horizon: int | None = None) -> dict:
    """Run the extremal construction and report how it meets the minimal sets."""
    depth = budget if depth is None else depth
    horizon = budget if horizon is None else horizon
    reps = minimal_set_reps(system, depth)
    counts = []
    for h in range(1, horizon + 1):
        mask = extremal_outer(system, order, depth, h).mask(system)
        counts.append([int(mask[list(r.cells)].sum()) for r in reps])
    E = extremal_tower(system, order, depth, horizon)
    report = {
        "depth": depth, "horizon": horizon,
        "extremal_cells": E.hull(depth).sorted(),
        "reps": [r.to_json() for r in reps],
        "counts_by_horizon": counts,
        "extremal_basic": is_basic_set(system, E, depth).to_json(),
    }
    try:
        T = transversal_from_minimal_sets(system, E, depth)
    except ValueError as exc:
        report["transversal_error"] = str(exc)
        return report
    t_cells = T.hull(depth).sorted()
    report.update({
        "transversal_cells": t_cells,
        "strict_containment": set(t_cells) < set(report["extremal_cells"]),
        "transversal_quasi_section": is_quasi_section(system, T, depth).to_json(),
        "transversal_basic": is_basic_set(system, T, depth).to_json(),
        "rep_hits": [[int(T.hull_mask(n)[list(r.cells)].sum())
                      for r in minimal_set_reps(system, n)] for n in range(depth + 1)],
    })
    aperiodic = is_densely_aperiodic(system, min(depth, 6))
    report["densely_aperiodic"] = aperiodic.label
    if not aperiodic.is_false:
        report["transversal_interior"] = interior_status(system, T, depth).to_json()
    return report
