"""Constructors for the concrete towers used throughout the package.

Every builder returns a :class:`~cantor_sections.tower.TowerSystem` whose
cell ids at each depth are already listed in the default cell order, so that
"lowest id first" and "order-minimal first" agree (odometers and products
excepted: there the default order is carried by ``sibling_key``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .tower import Level, TowerSystem, make_level

KINDS = ("finite_permutation", "full_shift", "sft", "odometer",
         "compactified_translation", "heteroclinic_cycle",
         "product_cantor_identity", "disjoint_union")


class SpecError(ValueError):
    """Malformed system parameters; ``path`` is a JSON-pointer-style location."""

    def __init__(self, message: str, path: str = "", certificate: Any = None):
        super().__init__(f"{path or '/'}: {message}")
        self.path = path
        self.certificate = certificate


class EmptyShiftError(SpecError):
    pass


@dataclass
class SystemSpec:
    kind: str
    permutation: list[int] | None = None
    alphabet: list[str] | None = None
    forbidden: list[str] | None = None
    bases: list[int] | None = None
    inner: "SystemSpec | None" = None
    parts: list["SystemSpec"] = field(default_factory=list)

    @classmethod
    def from_json(cls, obj: dict[str, Any], path: str = "") -> "SystemSpec":
        kind = obj.get("kind")
        if kind not in KINDS:
            raise SpecError(f"unknown kind {kind!r}", path + "/kind")
        inner = obj.get("inner")
        return cls(
            kind=kind,
            permutation=obj.get("permutation"),
            alphabet=obj.get("alphabet"),
            forbidden=obj.get("forbidden"),
            bases=obj.get("bases"),
            inner=None if inner is None else cls.from_json(inner, path + "/inner"),
            parts=[cls.from_json(p, f"{path}/parts/{i}")
                   for i, p in enumerate(obj.get("parts", []))],
        )

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind}
        for key in ("permutation", "alphabet", "forbidden", "bases"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.inner is not None:
            out["inner"] = self.inner.to_json()
        if self.parts:
            out["parts"] = [p.to_json() for p in self.parts]
        return out


def build(spec: SystemSpec | dict[str, Any], path: str = "") -> TowerSystem:
    if isinstance(spec, dict):
        spec = SystemSpec.from_json(spec, path)
    kind = spec.kind
    if kind == "finite_permutation":
        perm = spec.permutation
        if not isinstance(perm, list) or sorted(perm) != list(range(len(perm))) or not perm:
            raise SpecError("permutation must be a bijection of 0..N-1",
                            path + "/permutation")
        return TowerSystem(PermutationSource(perm), kind=kind,
                           spec=spec.to_json(), finite_size=len(perm))
    if kind in ("full_shift", "sft"):
        alphabet = spec.alphabet or ["0", "1"]
        if len(set(alphabet)) != len(alphabet):
            raise SpecError("alphabet symbols must be distinct", path + "/alphabet")
        forbidden = (spec.forbidden or []) if kind == "sft" else []
        for i, word in enumerate(forbidden):
            if not word or any(ch not in alphabet for ch in _split(word, alphabet)):
                raise SpecError(f"bad forbidden word {word!r}",
                                f"{path}/forbidden/{i}")
        return TowerSystem(ShiftSource(alphabet, forbidden), kind=kind,
                           spec=spec.to_json())
    if kind == "odometer":
        bases = spec.bases or [2]
        if any(not isinstance(b, int) or b < 2 for b in bases):
            raise SpecError("odometer bases must be integers >= 2", path + "/bases")
        return TowerSystem(OdometerSource(bases), kind=kind, spec=spec.to_json())
    if kind == "compactified_translation":
        return TowerSystem(CompactifiedTranslationSource(), kind=kind,
                           spec=spec.to_json())
    if kind == "heteroclinic_cycle":
        return TowerSystem(HeteroclinicSource(), kind=kind, spec=spec.to_json())
    if kind == "product_cantor_identity":
        if spec.inner is None:
            raise SpecError("missing inner system", path + "/inner")
        inner = build(spec.inner, path + "/inner")
        return TowerSystem(ProductSource(inner), kind=kind, spec=spec.to_json())
    if kind == "disjoint_union":
        if not spec.parts:
            raise SpecError("disjoint union needs parts", path + "/parts")
        parts = [build(p, f"{path}/parts/{i}") for i, p in enumerate(spec.parts)]
        finite = (sum(p.finite_size for p in parts)
                  if all(p.is_finite() for p in parts) else None)
        return TowerSystem(UnionSource(parts), kind=kind, spec=spec.to_json(),
                           finite_size=finite)
    raise SpecError(f"unknown kind {kind!r}", path + "/kind")


# -- convenience constructors ---------------------------------------------

def finite_permutation(perm) -> TowerSystem:
    return build(SystemSpec("finite_permutation", permutation=list(perm)))


def full_shift(alphabet=("0", "1")) -> TowerSystem:
    return build(SystemSpec("full_shift", alphabet=list(alphabet)))


def sft(alphabet, forbidden) -> TowerSystem:
    return build(SystemSpec("sft", alphabet=list(alphabet), forbidden=list(forbidden)))


def odometer(bases=(2,)) -> TowerSystem:
    return build(SystemSpec("odometer", bases=list(bases)))


def compactified_translation() -> TowerSystem:
    return build(SystemSpec("compactified_translation"))


def heteroclinic_cycle() -> TowerSystem:
    return build(SystemSpec("heteroclinic_cycle"))


def product_cantor_identity(inner: SystemSpec) -> TowerSystem:
    return build(SystemSpec("product_cantor_identity", inner=inner))


def disjoint_union(*parts: SystemSpec) -> TowerSystem:
    return build(SystemSpec("disjoint_union", parts=list(parts)))


# -- sources ---------------------------------------------------------------

class PermutationSource:
    """Constant tower: every cell is one point of ``{0..N-1}``."""

    def __init__(self, perm):
        self.perm = np.asarray(perm, dtype=np.int64)
        self.inv = np.argsort(self.perm)

    def level(self, n: int) -> Level:
        size = len(self.perm)
        ids = np.arange(size)
        if n == 0:
            return make_level(size, atom=np.ones(size, bool), sibling_key=ids)
        return make_level(size, ids, self.perm, self.inv, atom=np.ones(size, bool))

    def label(self, n: int, cell: int) -> str:
        return str(cell)

    def point(self, name: str, depth: int) -> list[int]:
        x = int(name)
        if not 0 <= x < len(self.perm):
            raise KeyError(name)
        return [x] * (depth + 1)

    def realized(self, depth: int, cycle: list[int]) -> bool:
        return True


def _split(word: str, alphabet) -> list[str]:
    if all(len(a) == 1 for a in alphabet):
        return list(word)
    return word.split(".")


class ShiftSource:
    """Subshift of finite type; depth-n cells are admissible windows x[-n..n].

    Ids follow the reading order ``x_0, x_1, x_-1, x_2, x_-2, ...`` so that the
    cell order is prefix order on that sequence.
    """

    def __init__(self, alphabet, forbidden):
        self.alphabet = list(alphabet)
        self.q = len(self.alphabet)
        sym = {a: i for i, a in enumerate(self.alphabet)}
        self.forbidden = [tuple(sym[c] for c in _split(w, self.alphabet))
                          for w in forbidden]
        self.k = max([1] + [len(w) - 1 for w in self.forbidden])
        self._words: list[list[tuple[int, ...]]] = []
        self._index: list[dict[tuple[int, ...], int]] = []
        self._graph()

    def _clean(self, word: tuple[int, ...]) -> bool:
        for f in self.forbidden:
            L = len(f)
            for i in range(len(word) - L + 1):
                if word[i:i + L] == f:
                    return False
        return True

    def _graph(self):
        from itertools import product

        k = self.k
        nodes = {w for w in product(range(self.q), repeat=k) if self._clean(w)}
        edges = {u + (b,) for u in nodes for b in range(self.q)
                 if u[1:] + (b,) in nodes and self._clean(u + (b,))}
        removed: list[list[str]] = []
        while True:
            has_out = {e[:-1] for e in edges}
            has_in = {e[1:] for e in edges}
            dead = sorted(v for v in nodes if v not in has_out or v not in has_in)
            if not dead:
                break
            removed.append([self._fmt(v) for v in dead])
            nodes -= set(dead)
            edges = {e for e in edges if e[:-1] in nodes and e[1:] in nodes}
        if not nodes:
            raise EmptyShiftError(
                "shift is empty: no bi-infinite admissible sequence",
                "/forbidden",
                certificate={"kind": "empty_shift", "block_length": k,
                             "pruning_rounds": removed})
        self.nodes = nodes
        self.edges = edges
        self.short = {v[i:j] for v in nodes for i in range(k) for j in range(i, k + 1)}

    def predicted_size(self, n: int) -> int:
        L, k = 2 * n + 1, self.k
        if L <= k:
            return sum(1 for w in self.short if len(w) == L)
        # walks of L - k steps on the essential block graph
        counts = dict.fromkeys(self.nodes, 1)
        for _ in range(L - k):
            nxt = dict.fromkeys(self.nodes, 0)
            for e in self.edges:
                nxt[e[1:]] += counts[e[:-1]]
            counts = nxt
        return sum(counts.values())

    def _fmt(self, word) -> str:
        sep = "" if all(len(a) == 1 for a in self.alphabet) else "."
        return sep.join(self.alphabet[s] for s in word)

    def admissible(self, word: tuple[int, ...]) -> bool:
        k = self.k
        if len(word) <= k:
            return word in self.short
        return all(word[i:i + k + 1] in self.edges for i in range(len(word) - k))

    @staticmethod
    def reading_key(word: tuple[int, ...]) -> tuple[int, ...]:
        c = len(word) // 2
        key = [word[c]]
        for i in range(1, c + 1):
            key.append(word[c + i])
            key.append(word[c - i])
        return tuple(key)

    def words(self, n: int) -> list[tuple[int, ...]]:
        self.level(n)
        return self._words[n]

    def level(self, n: int) -> Level:
        while len(self._words) <= n:
            m = len(self._words)
            if m == 0:
                cand = [(a,) for a in range(self.q)]
            else:
                k = self.k
                cand = []
                for w in self._words[m - 1]:
                    for a in range(self.q):
                        for b in range(self.q):
                            v = (a,) + w + (b,)
                            if len(w) > k:
                                ok = v[:k + 1] in self.edges and v[-k - 1:] in self.edges
                            else:
                                ok = self.admissible(v)
                            if ok:
                                cand.append(v)
            cand.sort(key=self.reading_key)
            self._words.append(cand)
            self._index.append({w: i for i, w in enumerate(cand)})
        words = self._words[n]
        labels = [self._fmt(w) for w in words]
        if n == 0:
            return make_level(len(words), sibling_key=[w[0] for w in words],
                              labels=labels)
        idx = self._index[n - 1]
        parent = [idx[w[1:-1]] for w in words]
        fwd = [idx[w[2:]] for w in words]
        bwd = [idx[w[:-2]] for w in words]
        key = [w[-1] * self.q + w[0] for w in words]
        return make_level(len(words), parent, fwd, bwd, sibling_key=key,
                          labels=labels)

    def label(self, n: int, cell: int) -> str:
        return self._fmt(self.words(n)[cell])

    def window_id(self, n: int, word: str | tuple[int, ...]) -> int:
        if isinstance(word, str):
            sym = {a: i for i, a in enumerate(self.alphabet)}
            word = tuple(sym[c] for c in _split(word, self.alphabet))
        self.level(n)
        return self._index[n][word]

    def point(self, name: str, depth: int) -> list[int]:
        """``per:w`` is the periodic point with ``x_i = w[i mod |w|]``;
        ``pulse:a:b`` has ``x_0 = a`` and ``b`` everywhere else."""
        sym = {a: i for i, a in enumerate(self.alphabet)}
        kind, _, rest = name.partition(":")
        if kind == "per":
            w = [sym[c] for c in _split(rest, self.alphabet)]

            def x(i):
                return w[i % len(w)]
        elif kind == "pulse":
            a, b = rest.split(":")

            def x(i):
                return sym[a] if i == 0 else sym[b]
        else:
            raise KeyError(name)
        return [self.window_id(n, tuple(x(i) for i in range(-n, n + 1)))
                for n in range(depth + 1)]

    def realized(self, depth: int, cycle: list[int]) -> bool:
        # edge windows are longer than every forbidden word, so the periodic
        # sequence spelled by a window cycle is admissible
        return True


class OdometerSource:
    """Adding machine on prod Z/k_i; depth-n cells are residues mod k_1...k_n."""

    def __init__(self, bases):
        self.bases = list(bases)

    def base(self, i: int) -> int:
        return self.bases[min(i, len(self.bases) - 1)]

    def modulus(self, n: int) -> int:
        p = 1
        for i in range(n):
            p *= self.base(i)
        return p

    def predicted_size(self, n: int) -> int:
        return self.modulus(n)

    def level(self, n: int) -> Level:
        size = self.modulus(n)
        s = np.arange(size, dtype=np.int64)
        if n == 0:
            return make_level(size)
        prev = self.modulus(n - 1)
        return make_level(size, s % prev, (s + 1) % prev, (s - 1) % prev,
                          sibling_key=s // prev)

    def label(self, n: int, cell: int) -> str:
        return f"{cell} mod {self.modulus(n)}"

    def point(self, name: str, depth: int) -> list[int]:
        x = int(name)
        return [x % self.modulus(n) for n in range(depth + 1)]

    def realized(self, depth: int, cycle: list[int]) -> bool:
        # the only cell cycle is the full rotation, visited by every orbit
        return True


class _PointModel:
    """Countable spaces whose cells are described by representative points."""

    def cells_at(self, n: int) -> list:
        raise NotImplementedError

    def cell_of(self, p, n: int) -> int:
        raise NotImplementedError

    def f(self, p, sign: int):
        raise NotImplementedError

    def singleton(self, p, n: int) -> bool:
        raise NotImplementedError

    def parse(self, name: str):
        raise NotImplementedError

    def fmt(self, p, n: int) -> str:
        raise NotImplementedError

    def level(self, n: int) -> Level:
        reps = self.cells_at(n)
        size = len(reps)
        atom = [self.singleton(p, n) for p in reps]
        ids = np.arange(size)
        labels = [self.fmt(p, n) for p in reps]
        if n == 0:
            return make_level(size, atom=atom, wandering=atom, sibling_key=ids,
                              labels=labels)
        parent = [self.cell_of(p, n - 1) for p in reps]
        fwd = [self.cell_of(self.f(p, 1), n - 1) for p in reps]
        bwd = [self.cell_of(self.f(p, -1), n - 1) for p in reps]
        return make_level(size, parent, fwd, bwd, atom=atom, wandering=atom,
                          sibling_key=ids, labels=labels)

    def label(self, n: int, cell: int) -> str:
        return self.fmt(self.cells_at(n)[cell], n)

    def realized(self, depth: int, cycle: list[int]) -> bool:
        """Only self-loops on a cell holding a fixed point are orbit-realized."""
        if len(cycle) != 1:
            return False
        p = self.cells_at(depth)[cycle[0]]
        return self.f(p, 1) == p

    def point(self, name: str, depth: int) -> list[int]:
        p = self.parse(name)
        return [self.cell_of(p, n) for n in range(depth + 1)]


class CompactifiedTranslationSource(_PointModel):
    """``Z`` plus two fixed points at -inf/+inf under ``x -> x + 1``.

    Depth 0 is the trivial partition; depth n >= 1 has cells
    ``L_n = [-inf, -n]``, singletons ``-n+1 .. n-1`` and ``R_n = [n, +inf]``.
    """

    NEG, POS = "-inf", "+inf"

    def cells_at(self, n):
        if n == 0:
            return [self.NEG]
        return [self.NEG] + list(range(-n + 1, n)) + [self.POS]

    def cell_of(self, p, n):
        if n == 0 or p == self.NEG:
            return 0
        if p == self.POS:
            return 2 * n
        if abs(p) <= n - 1:
            return p + n
        return 2 * n if p > 0 else 0

    def f(self, p, sign):
        return p if isinstance(p, str) else p + sign

    def singleton(self, p, n):
        return n > 0 and not isinstance(p, str)

    def parse(self, name):
        return name if name in (self.NEG, self.POS) else int(name)

    def fmt(self, p, n):
        if n == 0:
            return "X"
        if isinstance(p, str):
            return "L" if p == self.NEG else "R"
        return str(p)


class HeteroclinicSource(_PointModel):
    """Fixed points p1, p2 joined by two orbits ``a`` (p2 -> p1) and ``b`` (p1 -> p2).

    Points are ``("p", 1)``, ``("p", 2)``, ``("a", k)``, ``("b", k)``.  At depth
    n >= 1 orbit points with ``|k| <= n - 1`` are singleton cells, the rest
    merge into the neighborhoods P1_n / P2_n.  Cells are listed by their
    position in a fixed embedding into the line: ``b_0 < P2 < ... < a_0 < P1 < ...``.
    """

    P1, P2 = ("p", 1), ("p", 2)

    @staticmethod
    def position(p) -> Fraction:
        kind, k = p
        if kind == "p":
            return Fraction(20 if k == 1 else 10)
        if kind == "a":
            if k == 0:
                return Fraction(15)
            return (Fraction(20) if k > 0 else Fraction(10)) + Fraction(1, 2 * abs(k))
        if k == 0:
            return Fraction(0)
        return (Fraction(10) if k > 0 else Fraction(20)) + Fraction(1, 2 * abs(k) + 1)

    def cells_at(self, n):
        if n == 0:
            return [self.P2]
        reps = [self.P1, self.P2]
        reps += [(o, k) for o in "ab" for k in range(-n + 1, n)]
        return sorted(reps, key=self.position)

    def _region(self, p, n):
        """The neighborhood (P1 or P2) holding a non-singleton point."""
        kind, k = p
        if kind == "p":
            return p
        if kind == "a":
            return self.P1 if k > 0 else self.P2
        return self.P2 if k > 0 else self.P1

    def cell_of(self, p, n):
        if n == 0:
            return 0
        reps = self.cells_at(n)
        if p[0] != "p" and abs(p[1]) <= n - 1:
            return reps.index(p)
        return reps.index(self._region(p, n))

    def f(self, p, sign):
        return p if p[0] == "p" else (p[0], p[1] + sign)

    def singleton(self, p, n):
        return n > 0 and p[0] != "p"

    def parse(self, name):
        if name in ("p1", "p2"):
            return ("p", int(name[1]))
        return (name[0], int(name[1:]))

    def fmt(self, p, n):
        if n == 0:
            return "X"
        if p[0] == "p":
            return f"P{p[1]}"
        return f"{p[0]}{p[1]}"


class ProductSource:
    """``inner x C`` with the identity on the Cantor factor ``C = {0,1}^N``.

    Depth-n cell ``(i, w)`` has id ``i * 2**n + w`` where ``w`` encodes the
    first n bits of the second coordinate, oldest bit most significant.
    """

    def __init__(self, inner: TowerSystem):
        self.inner = inner

    def predicted_size(self, n: int) -> int | None:
        m = self.inner.predicted_size(n)
        return None if m is None else m << n

    def level(self, n: int) -> Level:
        lev = self.inner.level(n)
        m, W = lev.size, 1 << n
        i = np.repeat(np.arange(m), W)
        w = np.tile(np.arange(W), m)
        key = lev.sibling_key[i] * 2 + (w & 1 if n else 0)
        wand = lev.wandering[i]
        if n == 0:
            return make_level(m * W, wandering=wand, sibling_key=key)
        half = W >> 1
        return make_level(m * W, lev.parent[i] * half + (w >> 1),
                          lev.fwd[i] * half + (w >> 1), lev.bwd[i] * half + (w >> 1),
                          wandering=wand, sibling_key=key)

    def label(self, n: int, cell: int) -> str:
        i, w = divmod(cell, 1 << n)
        bits = format(w, f"0{n}b") if n else ""
        return f"({self.inner.label(n, i)}, [{bits}])"

    def realized(self, depth: int, cycle: list[int]) -> bool:
        return self.inner.cycle_realized(depth, [c >> depth for c in cycle])

    def point(self, name: str, depth: int) -> list[int]:
        inner_name, _, bits = name.partition("|")
        ip = self.inner.source.point(inner_name, depth)
        out = []
        for n in range(depth + 1):
            word = (bits + "0" * n)[:n]
            out.append(ip[n] * (1 << n) + (int(word, 2) if n else 0))
        return out


class UnionSource:
    """Tagged sum; part ``t`` occupies a contiguous id block at every depth."""

    def __init__(self, parts: list[TowerSystem]):
        self.parts = parts

    def predicted_size(self, n: int) -> int | None:
        sizes = [p.predicted_size(n) for p in self.parts]
        return None if None in sizes else sum(sizes)

    def offsets(self, n: int) -> list[int]:
        sizes = [p.size(n) for p in self.parts]
        return [sum(sizes[:t]) for t in range(len(sizes))]

    def level(self, n: int) -> Level:
        levs = [p.level(n) for p in self.parts]
        size = sum(l.size for l in levs)
        atom = np.concatenate([l.atom for l in levs])
        wand = np.concatenate([l.wandering for l in levs])
        if n == 0:
            key = np.concatenate([np.full(l.size, t) for t, l in enumerate(levs)])
            big = max(int(l.sibling_key.max()) + 1 for l in levs)
            key = key * big + np.concatenate([l.sibling_key for l in levs])
            return make_level(size, atom=atom, wandering=wand, sibling_key=key)
        poff = self.offsets(n - 1)
        maps = {name: np.concatenate([getattr(l, name) + poff[t]
                                      for t, l in enumerate(levs)])
                for name in ("parent", "fwd", "bwd")}
        return make_level(size, maps["parent"], maps["fwd"], maps["bwd"], atom=atom,
                          wandering=wand,
                          sibling_key=np.concatenate([l.sibling_key for l in levs]))

    def label(self, n: int, cell: int) -> str:
        off = self.offsets(n)
        t = max(i for i, o in enumerate(off) if o <= cell)
        return f"{t}:{self.parts[t].label(n, cell - off[t])}"

    def realized(self, depth: int, cycle: list[int]) -> bool:
        off = self.offsets(depth)
        t = max(i for i, o in enumerate(off) if o <= cycle[0])
        return self.parts[t].cycle_realized(depth, [c - off[t] for c in cycle])

    def point(self, name: str, depth: int) -> list[int]:
        t, _, inner = name.partition(":")
        t = int(t)
        path = self.parts[t].source.point(inner, depth)
        return [c + self.offsets(n)[t] for n, c in enumerate(path)]
