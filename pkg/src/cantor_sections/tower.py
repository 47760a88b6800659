"""Clopen refinement towers.

A zero-dimensional system is presented as a sequence of finite partitions
``S_0, S_1, ...`` of the phase space into nonempty clopen cells.  Depth
``n + 1`` refines depth ``n`` and the dynamics is known one resolution level
at a time::

    parent : S_{n+1} -> S_n     (cell is contained in its parent)
    fwd    : S_{n+1} -> S_n     (f(cell) is contained in fwd(cell))
    bwd    : S_{n+1} -> S_n     (f^-1(cell) is contained in bwd(cell))

The space itself is the inverse limit of parent-compatible paths of cells and
the homeomorphism is the map induced by ``fwd`` on paths.  Cell identifiers at
every depth are the integers ``0 .. size - 1``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Any, Protocol

import numpy as np

#: hard ceiling on the number of cells materialized at a single depth
MAX_CELLS = 4_000_000


class BudgetError(RuntimeError):
    """A requested depth or horizon cannot be materialized."""


class PreconditionError(ValueError):
    """An operation was called on inputs outside its contract."""


class Status(str, enum.Enum):
    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "UnknownAtBudget"


@dataclass
class Verdict:
    """Three-valued answer with replayable evidence.

    ``exact`` distinguishes a proved ``True`` from one that only holds at the
    inspected budget.  ``flavor`` qualifies unknown answers (``"empty_so_far"``).
    """

    status: Status
    certificate: dict[str, Any]
    exact: bool = True
    flavor: str | None = None
    budget: int | None = None

    def __bool__(self) -> bool:
        return self.status is Status.TRUE

    @property
    def is_false(self) -> bool:
        return self.status is Status.FALSE

    @property
    def label(self) -> str:
        if self.status is Status.TRUE and not self.exact:
            return "True-at-budget"
        if self.status is Status.UNKNOWN and self.flavor == "empty_so_far":
            return "EmptyAtBudget"
        return self.status.value

    def to_json(self) -> dict[str, Any]:
        return {
            "status": self.status.value,
            "label": self.label,
            "exact": self.exact,
            "flavor": self.flavor,
            "budget": self.budget,
            "certificate": self.certificate,
        }


@dataclass
class Level:
    """Materialized data of one depth.

    ``parent``/``fwd``/``bwd`` map this depth to the previous one and are
    ``None`` at depth 0.  ``sibling_key`` orders the children of a common
    parent in the builder's default cell order.
    """

    size: int
    parent: np.ndarray | None
    fwd: np.ndarray | None
    bwd: np.ndarray | None
    atom: np.ndarray
    wandering: np.ndarray
    sibling_key: np.ndarray
    labels: list[str] | None = None


class LevelSource(Protocol):
    def level(self, n: int) -> Level: ...

    def label(self, n: int, cell: int) -> str: ...

    def point(self, name: str, depth: int) -> list[int]: ...


class TowerSystem:
    """Immutable lazily materialized clopen tower.

    ``atom`` flags cells known to be a single (isolated) point.  ``wandering``
    flags cells known to consist of wandering, non-periodic points; recurrence
    approximations drop them.  Both are builder-certified hints.
    """

    def __init__(self, source: LevelSource, *, kind: str = "custom",
                 spec: dict | None = None, finite_size: int | None = None,
                 max_cells: int = MAX_CELLS):
        self.source = source
        self.kind = kind
        self.spec = spec or {"kind": kind}
        self.finite_size = finite_size
        self.max_cells = max_cells
        self._levels: list[Level] = []
        self._overrides: dict[tuple[int, str], np.ndarray] = {}
        self._ranks: list[np.ndarray] = []
        self._relations: dict[tuple[int, str], tuple[np.ndarray, np.ndarray]] = {}

    def __repr__(self) -> str:
        return f"TowerSystem({self.kind}, materialized={len(self._levels)})"

    # -- materialization -------------------------------------------------
    def level(self, n: int) -> Level:
        if n < 0:
            raise BudgetError(f"negative depth {n}")
        while len(self._levels) <= n:
            m = len(self._levels)
            guess = self.predicted_size(m)
            if guess is not None and guess > self.max_cells:
                raise BudgetError(f"depth {m} needs {guess} cells (limit {self.max_cells})")
            lev = self.source.level(m)
            if lev.size > self.max_cells:
                raise BudgetError(
                    f"depth {m} needs {lev.size} cells (limit {self.max_cells})")
            for name in ("parent", "fwd", "bwd"):
                if (m, name) in self._overrides:
                    lev = replace(lev, **{name: self._overrides[(m, name)]})
            self._levels.append(lev)
        return self._levels[n]

    def size(self, n: int) -> int:
        return self.level(n).size

    def predicted_size(self, n: int) -> int | None:
        """Cell count at depth ``n`` without building it, when the source knows."""
        if n < len(self._levels):
            return self._levels[n].size
        fn = getattr(self.source, "predicted_size", None)
        return None if fn is None else fn(n)

    def cells(self, n: int) -> range:
        return range(self.size(n))

    def parent(self, n: int) -> np.ndarray:
        """Parent map ``S_{n+1} -> S_n``."""
        return self.level(n + 1).parent

    def fwd(self, n: int) -> np.ndarray:
        """Forward map ``S_{n+1} -> S_n``."""
        return self.level(n + 1).fwd

    def bwd(self, n: int) -> np.ndarray:
        """Backward map ``S_{n+1} -> S_n``."""
        return self.level(n + 1).bwd

    def atoms(self, n: int) -> np.ndarray:
        return self.level(n).atom

    def wandering(self, n: int) -> np.ndarray:
        return self.level(n).wandering

    def label(self, n: int, cell: int) -> str:
        lev = self.level(n)
        if lev.labels is not None:
            return lev.labels[cell]
        return self.source.label(n, cell)

    def is_finite(self) -> bool:
        return self.finite_size is not None

    def cycle_realized(self, depth: int, cycle) -> bool:
        """Whether some orbit stays inside the cells of this overlap cycle forever."""
        cycle = list(cycle)
        if self.atoms(depth)[cycle].all():
            return True
        if self._overrides:
            return False
        hook = getattr(self.source, "realized", None)
        return bool(hook(depth, cycle)) if hook else False

    # -- derived maps ----------------------------------------------------
    def ancestor_map(self, n_from: int, n_to: int) -> np.ndarray:
        """Array sending each cell of depth ``n_from`` to its depth-``n_to`` ancestor."""
        if n_to > n_from:
            raise ValueError("ancestor depth must not exceed source depth")
        out = np.arange(self.size(n_from))
        for m in range(n_from, n_to, -1):
            out = self.level(m).parent[out]
        return out

    def ancestor(self, n_from: int, cell: int, n_to: int) -> int:
        for m in range(n_from, n_to, -1):
            cell = int(self.level(m).parent[cell])
        return cell

    def children(self, n: int) -> list[list[int]]:
        """Children of every depth-``n`` cell, in id order."""
        par = self.parent(n)
        out: list[list[int]] = [[] for _ in range(self.size(n))]
        for s, p in enumerate(par.tolist()):
            out[p].append(s)
        return out

    def descendants(self, n: int, cells, m: int) -> np.ndarray:
        """Sorted depth-``m`` cells below the given depth-``n`` cells."""
        mask = np.zeros(self.size(n), dtype=bool)
        mask[list(cells)] = True
        anc = self.ancestor_map(m, n)
        return np.flatnonzero(mask[anc])

    def default_rank(self, n: int) -> np.ndarray:
        """Rank of each cell in the builder's refinement-coherent order."""
        while len(self._ranks) <= n:
            m = len(self._ranks)
            lev = self.level(m)
            if m == 0:
                keys = (lev.sibling_key,)
            else:
                keys = (lev.sibling_key, self._ranks[m - 1][lev.parent])
            order = np.lexsort(keys)
            rank = np.empty(lev.size, dtype=np.int64)
            rank[order] = np.arange(lev.size)
            self._ranks.append(rank)
        return self._ranks[n]

    def point(self, name: str, depth: int) -> "PointApprox":
        return PointApprox(tuple(self.source.point(name, depth)))

    # -- mutation (test harness) -----------------------------------------
    def with_override(self, depth: int, map_name: str, cell: int,
                      value: int) -> "TowerSystem":
        """Copy of this system with one map entry of ``depth`` replaced."""
        if depth < 1 or map_name not in ("parent", "fwd", "bwd"):
            raise ValueError("override needs depth >= 1 and a map name")
        clone = TowerSystem(self.source, kind=self.kind, spec=self.spec,
                            finite_size=self.finite_size, max_cells=self.max_cells)
        clone._overrides = dict(self._overrides)
        arr = getattr(self.level(depth), map_name).copy()
        arr[cell] = value
        clone._overrides[(depth, map_name)] = arr
        return clone


@dataclass(frozen=True)
class ClopenSet:
    depth: int
    members: frozenset[int]

    @classmethod
    def of(cls, depth: int, members) -> "ClopenSet":
        return cls(depth, frozenset(int(c) for c in members))

    def mask(self, system: TowerSystem) -> np.ndarray:
        m = np.zeros(system.size(self.depth), dtype=bool)
        if self.members:
            m[sorted(self.members)] = True
        return m

    def refine(self, system: TowerSystem, depth: int) -> "ClopenSet":
        if depth < self.depth:
            raise ValueError("can only refine to a deeper depth")
        anc = system.ancestor_map(depth, self.depth)
        return ClopenSet.of(depth, np.flatnonzero(self.mask(system)[anc]))

    def sorted(self) -> list[int]:
        return sorted(self.members)


@dataclass(frozen=True)
class PointApprox:
    """Parent-compatible path ``(s_0, ..., s_d)`` approximating one point."""

    path: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.path) - 1

    def cell(self, n: int) -> int:
        return self.path[n]


@dataclass
class Violation:
    law: str
    depth: int
    cell: int
    detail: str
    via: list[int] = field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        """``via`` lists the cells one depth up that the failing compositions pass through."""
        return {"law": self.law, "depth": self.depth, "cell": self.cell,
                "detail": self.detail, "via": self.via}


@dataclass
class ValidationReport:
    max_depth: int
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict[str, Any]:
        return {"max_depth": self.max_depth, "ok": self.ok,
                "violations": [v.to_json() for v in self.violations]}


def validate_tower(system: TowerSystem, max_depth: int,
                   limit: int | None = None) -> ValidationReport:
    """Check surjectivity, coherence and round-trip laws up to ``max_depth``.

    Violations are listed per offending cell, at the depth of that cell.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    report = ValidationReport(max_depth)
    for n in range(max_depth + 1):
        system.level(n)

    def add(law, depth, bad, detail, via=()):
        for c in np.flatnonzero(bad).tolist():
            mids = sorted({int(arr[c]) for arr in via})
            report.violations.append(Violation(law, depth, int(c), detail, mids))

    for m in range(1, max_depth + 1):
        lev, prev = system.level(m), system.level(m - 1)
        for name in ("parent", "fwd", "bwd"):
            arr = getattr(lev, name)
            if arr is None or arr.shape != (lev.size,):
                raise ValueError(f"depth {m}: {name} map missing or misshapen")
            add("range", m, (arr < 0) | (arr >= prev.size),
                f"{name} value outside S_{m - 1}")
        hit = np.zeros(prev.size, dtype=bool)
        hit[np.clip(lev.parent, 0, prev.size - 1)] = True
        add("surjectivity", m - 1, ~hit, "cell has no child")
    for m in range(2, max_depth + 1):
        lev, mid = system.level(m), system.level(m - 1)

        def up(arr, idx):
            return arr[np.clip(idx, 0, arr.shape[0] - 1)]

        pp = up(mid.parent, lev.parent)
        add("coherence-fwd", m, up(mid.parent, lev.fwd) != up(mid.fwd, lev.parent),
            "parent.fwd != fwd.parent", (lev.fwd, lev.parent))
        add("coherence-bwd", m, up(mid.parent, lev.bwd) != up(mid.bwd, lev.parent),
            "parent.bwd != bwd.parent", (lev.bwd, lev.parent))
        add("round-trip-fwd", m, up(mid.bwd, lev.fwd) != pp,
            "bwd.fwd != parent.parent", (lev.fwd, lev.parent))
        add("round-trip-bwd", m, up(mid.fwd, lev.bwd) != pp,
            "fwd.bwd != parent.parent", (lev.bwd, lev.parent))
    if limit is not None:
        report.violations = report.violations[:limit]
    return report


def overlap_relation(system: TowerSystem, depth: int,
                     direction: str = "forward") -> set[tuple[int, int]]:
    """Exact cell overlap relation at ``depth``.

    ``(a, b)`` is present iff ``f(a)`` meets ``b`` (``f^-1`` for backward).
    """
    src, dst = relation_arrays(system, depth, direction)
    return set(zip(src.tolist(), dst.tolist()))


def relation_arrays(system: TowerSystem, depth: int,
                    direction: str = "forward") -> tuple[np.ndarray, np.ndarray]:
    """Deduplicated edge arrays ``(src, dst)`` of the overlap relation."""
    if direction not in ("forward", "backward"):
        raise ValueError(direction)
    key = (depth, direction)
    if key not in system._relations:
        lev = system.level(depth + 1)
        step = lev.fwd if direction == "forward" else lev.bwd
        n = system.size(depth)
        codes = np.unique(lev.parent.astype(np.int64) * n + step)
        system._relations[key] = (codes // n, codes % n)
    return system._relations[key]


def image_cells(system: TowerSystem, x: PointApprox, j: int) -> int:
    """Cell at depth ``x.depth - |j|`` guaranteed to contain ``f^j(x)``."""
    d = x.depth
    if abs(j) > d:
        raise BudgetError(f"|j|={abs(j)} exceeds point depth {d}")
    cell = x.path[d]
    for m in range(d, d - abs(j), -1):
        lev = system.level(m)
        cell = int((lev.fwd if j > 0 else lev.bwd)[cell])
    return cell


def image_chain(system: TowerSystem, depth: int, j: int) -> np.ndarray:
    """For every cell at ``depth``, its ``j``-step image cell at ``depth - |j|``."""
    if abs(j) > depth:
        raise BudgetError(f"|j|={abs(j)} exceeds depth {depth}")
    out = np.arange(system.size(depth))
    for m in range(depth, depth - abs(j), -1):
        lev = system.level(m)
        out = (lev.fwd if j > 0 else lev.bwd)[out]
    return out


def make_level(size: int, parent=None, fwd=None, bwd=None, *, atom=None,
               wandering=None, sibling_key=None, labels=None) -> Level:
    def arr(a):
        return None if a is None else np.asarray(a, dtype=np.int64)

    return Level(
        size=size,
        parent=arr(parent), fwd=arr(fwd), bwd=arr(bwd),
        atom=np.zeros(size, bool) if atom is None else np.asarray(atom, bool),
        wandering=(np.zeros(size, bool) if wandering is None
                   else np.asarray(wandering, bool)),
        sibling_key=(np.zeros(size, np.int64) if sibling_key is None
                     else np.asarray(sibling_key, np.int64)),
        labels=labels,
    )


