"""Independent re-verification of verdict certificates.

The checks here walk the raw level maps with plain Python sets; they do not
reuse the graph kernels that produced the certificates.
"""
from __future__ import annotations

from dataclasses import dataclass

from .closedset import IN, OUT, ClosedTower
from .tower import ClopenSet, TowerSystem


@dataclass
class Replay:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _fail(reason: str) -> Replay:
    return Replay(False, reason)


def _anc(system: TowerSystem, cell: int, frm: int, to: int) -> int:
    for m in range(frm, to, -1):
        cell = int(system.level(m).parent[cell])
    return cell


def _edges(system: TowerSystem, depth: int, direction: str = "forward") -> dict[int, set]:
    lev = system.level(depth + 1)
    step = lev.fwd if direction == "forward" else lev.bwd
    succ: dict[int, set] = {c: set() for c in range(system.size(depth))}
    for a, b in zip(lev.parent.tolist(), step.tolist()):
        succ[a].add(b)
    return succ


def _avoid(system: TowerSystem, u_depth: int, cells, depth: int) -> set[int]:
    inside = set(cells)
    return {c for c in range(system.size(depth))
            if _anc(system, c, depth, u_depth) not in inside}


def _peels_out(succ: dict[int, set], alive: set[int], rounds: int) -> bool:
    for _ in range(rounds):
        alive = {c for c in alive if succ[c] & alive}
    return not alive


def _subject_cells(subject, depth: int) -> list[int] | None:
    if isinstance(subject, ClopenSet):
        return subject.sorted()
    if isinstance(subject, ClosedTower):
        return subject.hull(depth).sorted()
    return None


def _replay_cover(system, cert, subject, direction="forward") -> Replay:
    if subject is not None and _subject_cells(subject, cert["u_depth"]) != cert["cells"]:
        return _fail("certificate is about a different set")
    avoid = _avoid(system, cert["u_depth"], cert["cells"], cert["depth"])
    if not _peels_out(_edges(system, cert["depth"], direction), avoid, cert["horizon"]):
        return _fail("an avoiding path outlives the horizon")
    return Replay(True)


def _replay_cycle(system, cert, subject) -> Replay:
    if subject is not None and _subject_cells(subject, cert["u_depth"]) != cert["cells"]:
        return _fail("certificate is about a different set")
    if not cert.get("realized"):
        return _fail("cycle is not realized by an orbit")
    inside = set(cert["cells"])
    for key, walk in cert["projections"].items():
        k = int(key)
        succ = _edges(system, k)
        for i, c in enumerate(walk):
            if not walk or walk[(i + 1) % len(walk)] not in succ[c]:
                return _fail(f"depth {k}: step {i} is not an overlap")
            if _anc(system, c, k, cert["u_depth"]) in inside:
                return _fail(f"depth {k}: cell {c} meets the set")
            if k < cert["depth"]:
                top = cert["projections"][str(cert["depth"])][i]
                if _anc(system, top, cert["depth"], k) != c:
                    return _fail(f"depth {k}: projection mismatch at step {i}")
    if not system.cycle_realized(cert["depth"], cert["cycle"]):
        return _fail("cycle is not realized by an orbit")
    return Replay(True)


def _certified(subject: ClosedTower, system, depth: int, cell: int) -> bool:
    st = int(subject.status(depth)[cell])
    return st == IN or (st != OUT and bool(system.atoms(depth)[cell]))


def _replay_double_hit(system, cert, subject) -> Replay:
    if not isinstance(subject, ClosedTower):
        return _fail("double hits need the closed set")
    D, s, j = cert["depth"], cert["cell"], cert["j"]
    img = s
    for m in range(D, D - j, -1):
        img = int(system.level(m).fwd[img])
    anc = _anc(system, s, D, D - j)
    if img == anc:
        return _fail("the two points are not separated")
    if not (_certified(subject, system, D, s) and _certified(subject, system, D - j, img)):
        return _fail("a hit is not certified inside the set")
    return Replay(True)


def _replay_no_double_hit(system, subject: ClosedTower, horizon: int) -> Replay:
    for D in range(1, horizon + 1):
        here = [s for s in range(system.size(D)) if _certified(subject, system, D, s)]
        for s in here:
            img = s
            for m in range(D, 0, -1):
                img = int(system.level(m).fwd[img])
                k = m - 1
                if img != _anc(system, s, D, k) and _certified(subject, system, k, img):
                    return _fail(f"double hit at depth {D}, cell {s}")
    return Replay(True)


def _replay_restricted_acyclic(system, cert, subject) -> Replay:
    if subject is None:
        return _fail("needs the set")
    depth = cert["depth"]
    cells = _subject_cells(subject, depth) if isinstance(subject, ClosedTower) \
        else subject.sorted()
    u_depth = depth if isinstance(subject, ClosedTower) else subject.depth
    wand = system.wandering(depth)
    alive = {c for c in _avoid(system, u_depth, cells, depth) if not wand[c]}
    succ = _edges(system, depth, cert.get("direction", "forward"))
    if not _peels_out(succ, alive, len(alive)):
        return _fail("non-wandering avoiding cells still carry a cycle")
    return Replay(True)


def _no_short_return(succ, start: int, bound: int) -> bool:
    frontier, seen = {start}, {start}
    for _ in range(bound):
        nxt = set()
        for v in frontier:
            if start in succ[v]:
                return False
            nxt |= succ[v] - seen
        seen |= nxt
        frontier = nxt
    return True


def _replay_aperiodic(system, cert) -> Replay:
    budget = cert["depth"]
    if len(cert["witnesses"]) != system.size(budget):
        return _fail("a cell has no witness")
    succs: dict[int, dict] = {}
    for c, (m, d, kind) in enumerate(cert["witnesses"]):
        if _anc(system, d, m, budget) != c:
            return _fail(f"witness {d} is not below cell {c}")
        if kind == "wandering":
            if not system.wandering(m)[d]:
                return _fail(f"cell {d} is not flagged wandering")
            continue
        if m not in succs:
            succs[m] = _edges(system, m)
        bound = system.size(m) if kind == "no_return" else m
        if not _no_short_return(succs[m], d, bound):
            return _fail(f"cell {d} returns too soon")
    return Replay(True)


def _replay_periodic(system, cert) -> Replay:
    depth, cyc = cert["depth"], cert["cycle"]
    succ = _edges(system, depth)
    atoms = system.atoms(depth)
    for i, c in enumerate(cyc):
        if not atoms[c] or cyc[(i + 1) % len(cyc)] not in succ[c]:
            return _fail("not a cycle of atoms")
    return Replay(True)


def replay(system: TowerSystem, verdict: dict, subject=None) -> Replay:
    """Re-verify a True/False verdict (as produced by ``Verdict.to_json``)."""
    status, cert = verdict["status"], verdict["certificate"]
    if status not in ("True", "False"):
        return _fail("only decided verdicts carry certificates")
    return replay_certificate(system, cert, subject)


def replay_certificate(system: TowerSystem, cert: dict, subject=None) -> Replay:
    kind = cert.get("kind")
    if kind == "cover":
        return _replay_cover(system, cert, subject)
    if kind == "peel":
        sub = {**cert, "u_depth": subject.depth, "cells": subject.sorted()}
        return _replay_cover(system, sub, None, cert["direction"])
    if kind == "cycle":
        return _replay_cycle(system, cert, subject)
    if kind == "empty":
        return Replay(not cert["cells"], "set is not empty")
    if kind in ("reps_meet", "omega_meet", "alpha_meet"):
        return _replay_restricted_acyclic(
            system, {**cert, "direction": "backward" if kind == "alpha_meet" else "forward"},
            subject)
    if kind == "hull_covers":
        for n, cov in enumerate(cert["covers"]):
            hull = ClopenSet.of(n, subject.hull(n).sorted()) if subject is not None else None
            r = _replay_cover(system, cov, hull)
            if not r:
                return _fail(f"hull {n}: {r.reason}")
        return Replay(True)
    if kind == "hull":
        n = cert["hull_depth"]
        hull = ClopenSet.of(n, subject.hull(n).sorted()) if subject is not None else None
        return replay_certificate(system, cert["hull"], hull)
    if kind == "not_quasi_section":
        return replay_certificate(system, cert["quasi"], subject)
    if kind == "double_hit":
        return _replay_double_hit(system, cert, subject)
    if kind == "basic":
        r = replay_certificate(system, cert["quasi"], subject)
        if not r:
            return r
        return _replay_no_double_hit(system, subject, cert["double_hit_horizon"])
    if kind == "interior_witness":
        ok = isinstance(subject, ClosedTower) and \
            int(subject.status(cert["depth"])[cert["cell"]]) == IN
        return Replay(ok, "" if ok else "witness cell is not IN")
    if kind == "periodic_atom_cycle":
        return _replay_periodic(system, cert)
    if kind == "aperiodic_witnesses":
        return _replay_aperiodic(system, cert)
    return _fail(f"unknown certificate kind {kind!r}")
