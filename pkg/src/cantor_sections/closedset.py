"""Closed subsets of a tower, given as per-depth cell statuses."""
from __future__ import annotations

from typing import Callable, Iterable

import numpy as np

from .tower import BudgetError, ClopenSet, TowerSystem

OUT, PARTIAL, IN = 0, 1, 2
STATUS_NAMES = {OUT: "OUT", PARTIAL: "PARTIAL", IN: "IN"}
STATUS_CODES = {v: k for k, v in STATUS_NAMES.items()}


class ClosedTower:
    """A closed set ``A`` described by ``status(n) : S_n -> {OUT, PARTIAL, IN}``.

    IN means the cell lies inside ``A``, OUT means it misses ``A`` and PARTIAL
    means it meets ``A`` without asserting containment.  ``A`` is the
    intersection of the hulls (non-OUT cells) over all depths.  Towers with a
    finite ``max_depth`` can only be extended past it when they are already
    clopen there.
    """

    def __init__(self, system: TowerSystem, source: Callable[[int], np.ndarray],
                 max_depth: int | None = None, description: dict | None = None):
        self.system = system
        self._source = source
        self.max_depth = max_depth
        self.description = description or {"generator": "custom"}
        self._cache: dict[int, np.ndarray] = {}

    def __repr__(self) -> str:
        return f"ClosedTower({self.description})"

    def status(self, n: int) -> np.ndarray:
        if n not in self._cache:
            if self.max_depth is not None and n > self.max_depth:
                top = self.status(self.max_depth)
                if (top == PARTIAL).any():
                    raise BudgetError(
                        f"closed set is only known to depth {self.max_depth}")
                anc = self.system.ancestor_map(n, self.max_depth)
                self._cache[n] = top[anc]
            else:
                arr = np.asarray(self._source(n), dtype=np.int8)
                if arr.shape != (self.system.size(n),):
                    raise ValueError(f"status array at depth {n} has wrong shape")
                self._cache[n] = arr
        return self._cache[n]

    def hull(self, n: int) -> ClopenSet:
        return ClopenSet.of(n, np.flatnonzero(self.status(n) != OUT))

    def hull_mask(self, n: int) -> np.ndarray:
        return self.status(n) != OUT

    def in_cells(self, n: int) -> list[int]:
        return np.flatnonzero(self.status(n) == IN).tolist()

    def certified_members(self, n: int) -> np.ndarray:
        """Cells known to carry points of ``A``: IN cells and non-OUT atoms."""
        st = self.status(n)
        return (st == IN) | ((st != OUT) & self.system.atoms(n))

    def clopen_depth(self, budget: int) -> int | None:
        """First depth <= budget with no PARTIAL cell (then ``A`` is clopen)."""
        for n in range(budget + 1):
            if not (self.status(n) == PARTIAL).any():
                return n
        return None

    def levels(self, budget: int) -> list[np.ndarray]:
        return [self.status(n) for n in range(budget + 1)]

    def check(self, budget: int) -> list[str]:
        """Invariant violations up to ``budget`` (empty list when valid)."""
        problems = []
        for n in range(budget + 1):
            st = self.status(n)
            if not (st != OUT).any():
                problems.append(f"depth {n}: every cell is OUT")
            if n == 0:
                continue
            par = self.system.level(n).parent
            pst = self.status(n - 1)[par]
            bad_out = np.flatnonzero((pst == OUT) & (st != OUT))
            bad_in = np.flatnonzero((pst == IN) & (st != IN))
            problems += [f"depth {n}: cell {c} under an OUT parent is not OUT"
                         for c in bad_out.tolist()]
            problems += [f"depth {n}: cell {c} under an IN parent is not IN"
                         for c in bad_in.tolist()]
            live = np.zeros(self.system.size(n - 1), bool)
            live[par[st != OUT]] = True
            dead = np.flatnonzero((self.status(n - 1) == PARTIAL) & ~live)
            problems += [f"depth {n - 1}: PARTIAL cell {c} has no non-OUT child"
                         for c in dead.tolist()]
        return problems

    def to_json(self, budget: int) -> dict:
        return {
            "format": "cantor-sections/1",
            "type": "closed_set",
            "levels": [[[int(c), STATUS_NAMES[int(s)]]
                        for c, s in enumerate(self.status(n).tolist()) if s != OUT]
                       for n in range(budget + 1)],
        }

    # -- constructors ----------------------------------------------------
    @classmethod
    def explicit(cls, system: TowerSystem, levels: list) -> "ClosedTower":
        """From per-depth status arrays (or ``{cell: code}`` dicts, unlisted = OUT)."""
        arrays = []
        for n, lev in enumerate(levels):
            if isinstance(lev, dict):
                arr = np.zeros(system.size(n), np.int8)
                for c, s in lev.items():
                    arr[int(c)] = s
            else:
                arr = np.asarray(lev, np.int8)
            arrays.append(arr)
        return cls(system, lambda n: arrays[n], max_depth=len(arrays) - 1,
                   description={"generator": "explicit", "depth": len(arrays) - 1})

    @classmethod
    def whole(cls, system: TowerSystem) -> "ClosedTower":
        return cls(system, lambda n: np.full(system.size(n), IN, np.int8),
                   description={"generator": "all"})

    @classmethod
    def from_cells(cls, system: TowerSystem, depth: int,
                   cells: Iterable[int]) -> "ClosedTower":
        """The clopen set given by a union of depth-``depth`` cells."""
        U = ClopenSet.of(depth, cells)
        if not U.members:
            raise ValueError("empty cell union")

        def source(n):
            if n >= depth:
                return np.where(U.refine(system, n).mask(system), IN, OUT)
            anc = system.ancestor_map(depth, n)
            inside = np.zeros(system.size(n), int)
            total = np.bincount(anc, minlength=system.size(n))
            np.add.at(inside, anc, U.mask(system).astype(int))
            return np.where(inside == 0, OUT, np.where(inside == total, IN, PARTIAL))

        return cls(system, source,
                   description={"generator": "cells", "depth": depth,
                                "cells": U.sorted()})

    @classmethod
    def from_points(cls, system: TowerSystem, names: Iterable[str]) -> "ClosedTower":
        """Finite set of named points; atoms holding a point are IN."""
        names = list(names)
        if not names:
            raise ValueError("empty point set")

        def source(n):
            st = np.zeros(system.size(n), np.int8)
            atoms = system.atoms(n)
            for name in names:
                c = system.point(name, n).path[n]
                st[c] = IN if atoms[c] else max(st[c], PARTIAL)
            return st

        return cls(system, source, description={"generator": "points",
                                                "points": names})

    @classmethod
    def from_paths(cls, system: TowerSystem, depth: int,
                   cells: Iterable[int], atoms_in: bool = True) -> "ClosedTower":
        """Closure of chosen depth-``depth`` branches, known only to ``depth``.

        Ancestors of chosen cells are PARTIAL (IN when they are atoms and
        ``atoms_in``), everything else OUT.
        """
        chosen = sorted(set(int(c) for c in cells))
        if not chosen:
            raise ValueError("no branch chosen")
        arrays = []
        for n in range(depth + 1):
            anc = system.ancestor_map(depth, n)
            st = np.zeros(system.size(n), np.int8)
            st[anc[chosen]] = PARTIAL
            if atoms_in:
                st[(st == PARTIAL) & system.atoms(n)] = IN
            arrays.append(st)
        tower = cls.explicit(system, arrays)
        tower.description = {"generator": "branches", "depth": depth,
                             "cells": chosen}
        return tower

    @classmethod
    def union(cls, *parts: "ClosedTower") -> "ClosedTower":
        system = parts[0].system
        depths = [p.max_depth for p in parts if p.max_depth is not None]

        def source(n):
            return np.maximum.reduce([p.status(n) for p in parts])

        return cls(system, source, max_depth=min(depths) if depths else None,
                   description={"generator": "union",
                                "parts": [p.description for p in parts]})
