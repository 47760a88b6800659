"""Brute-force reference answers for finite permutation systems.

Everything here is computed straight from the definitions by enumerating
orbits and subsets; nothing is shared with the tower-based checkers.
"""
from __future__ import annotations

import csv
import io
import itertools
import json

MAX_SINGLE = 20
MAX_SWEEP = 12

FLAGS = ("complete_section", "quasi_section", "basic_set",
         "minimal_quasi_section", "minimal_basic_set")


def _check_perm(n: int, perm, limit: int) -> list[int]:
    perm = [int(p) for p in perm]
    if n > limit:
        raise ValueError(f"oracle limited to N <= {limit}")
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise ValueError("perm must be a bijection of 0..N-1")
    return perm


def orbits(perm: list[int]) -> list[frozenset[int]]:
    seen, out = set(), []
    for x in range(len(perm)):
        if x in seen:
            continue
        orb, y = [], x
        while y not in orb:
            orb.append(y)
            y = perm[y]
        seen.update(orb)
        out.append(frozenset(orb))
    return out


def _meets_all(orbs, A) -> bool:
    return all(o & A for o in orbs)


def _at_most_once(orbs, A) -> bool:
    return all(len(o & A) <= 1 for o in orbs)


def _proper_subsets(A):
    items = sorted(A)
    for r in range(len(items)):
        for sub in itertools.combinations(items, r):
            yield frozenset(sub)


def brute_classify(n: int, perm, subset, limit: int = MAX_SINGLE) -> dict[str, bool]:
    perm = _check_perm(n, perm, limit)
    A = frozenset(int(a) for a in subset)
    if not A <= set(range(n)):
        raise ValueError("subset out of range")
    orbs = orbits(perm)
    # every subset of a finite space is clopen, so the two notions coincide
    quasi = _meets_all(orbs, A)
    basic = quasi and _at_most_once(orbs, A)
    min_quasi = quasi and not any(_meets_all(orbs, B) for B in _proper_subsets(A))
    min_basic = basic and not any(_meets_all(orbs, B) and _at_most_once(orbs, B)
                                  for B in _proper_subsets(A) if B)
    return {"complete_section": quasi, "quasi_section": quasi, "basic_set": basic,
            "minimal_quasi_section": min_quasi, "minimal_basic_set": min_basic}


def brute_inf(n: int, perm, order=None, limit: int = MAX_SINGLE) -> frozenset[int]:
    """Orbit minima under ``order`` (points listed from smallest to largest)."""
    perm = _check_perm(n, perm, limit)
    order = list(range(n)) if order is None else [int(c) for c in order]
    if sorted(order) != list(range(n)):
        raise ValueError("order must list every point once")
    pos = {c: i for i, c in enumerate(order)}
    return frozenset(min(o, key=pos.__getitem__) for o in orbits(perm))


def sweep(perms, limit: int = MAX_SWEEP) -> list[dict]:
    """Classify every subset of every permutation."""
    rows = []
    for perm in perms:
        n = len(perm)
        _check_perm(n, perm, limit)
        for mask in range(1 << n):
            A = [i for i in range(n) if mask >> i & 1]
            flags = brute_classify(n, perm, A, limit)
            rows.append({"perm": list(perm), "subset": A, **flags})
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["perm", "subset", *FLAGS])
    for r in rows:
        w.writerow([" ".join(map(str, r["perm"])), " ".join(map(str, r["subset"])),
                    *(int(r[f]) for f in FLAGS)])
    return buf.getvalue()


def rows_to_json(rows: list[dict]) -> str:
    return json.dumps(rows, sort_keys=True)


def generator_perms(count: int = 60, max_n: int = 7, seed: int = 20240601) -> list[list[int]]:
    """A fixed, reproducible list: all permutations up to size 3, then random ones."""
    import random
    rng = random.Random(seed)
    out = [list(p) for n in range(1, 4) for p in itertools.permutations(range(n))]
    seen = {tuple(p) for p in out}
    while len(out) < count:
        n = rng.randint(4, max_n)
        p = list(range(n))
        rng.shuffle(p)
        if tuple(p) not in seen:
            seen.add(tuple(p))
            out.append(p)
    return out
