"""Level-truncated simplicial sets with explicit face and degeneracy tables."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, product
from pathlib import Path
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .simplex import SimplexMap, _raw


class TruncationError(ValueError):
    """A level above the truncation was requested."""


class SimplicialIdentityError(ValueError):
    """The face and degeneracy tables violate a simplicial identity."""


class FixtureFormatError(ValueError):
    pass


@dataclass(eq=False)
class FiniteSimplicialSet:
    """Levels ``0..N`` of a simplicial set.

    ``d[k][i]`` is an integer array sending level ``k`` to level ``k - 1``
    (``d[0]`` is empty) and ``s[k][i]`` sends level ``k`` to ``k + 1`` for
    ``k < N``.  Cells are addressed by position; ``cells[k]`` holds their ids.
    """

    N: int
    cells: list
    d: list
    s: list
    name: str = ""
    _memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.N < 0 or len(self.cells) != self.N + 1:
            raise FixtureFormatError("need cells for every level 0..N")
        self.cells = [list(map(str, c)) for c in self.cells]
        self.index = [{c: i for i, c in enumerate(level)} for level in self.cells]
        for k, level in enumerate(self.cells):
            if len(self.index[k]) != len(level):
                raise FixtureFormatError(f"duplicate cell ids at level {k}")
        self.d = [[np.asarray(a, dtype=np.int64) for a in row] for row in self.d]
        self.s = [[np.asarray(a, dtype=np.int64) for a in row] for row in self.s]
        self._check_tables()
        self._check_identities()

    # ------------------------------------------------------------------ checks

    def _check_tables(self) -> None:
        if len(self.d) != self.N + 1 or len(self.s) != self.N:
            raise FixtureFormatError("face tables for levels 0..N and degeneracy tables for 0..N-1 required")
        for k in range(self.N + 1):
            want = 0 if k == 0 else k + 1
            if len(self.d[k]) != want:
                raise FixtureFormatError(f"level {k} needs {want} face maps")
            for i, a in enumerate(self.d[k]):
                self._check_map(a, k, k - 1, f"d_{i} on level {k}")
        for k in range(self.N):
            if len(self.s[k]) != k + 1:
                raise FixtureFormatError(f"level {k} needs {k + 1} degeneracy maps")
            for i, a in enumerate(self.s[k]):
                self._check_map(a, k, k + 1, f"s_{i} on level {k}")

    def _check_map(self, a: np.ndarray, src: int, dst: int, what: str) -> None:
        if a.shape != (len(self.cells[src]),):
            raise FixtureFormatError(f"{what} is not total on its level")
        if len(a) and (a.min() < 0 or a.max() >= len(self.cells[dst])):
            raise FixtureFormatError(f"{what} points outside level {dst}")

    def _fail(self, lhs: str, rhs: str, k: int, diff: np.ndarray) -> None:
        x = self.cells[k][int(np.flatnonzero(diff)[0])]
        raise SimplicialIdentityError(f"{lhs} = {rhs} fails on level {k} at cell {x!r}")

    def _check_identities(self) -> None:
        d, s = self.d, self.s
        for k in range(2, self.N + 1):
            for j in range(k + 1):
                for i in range(j):
                    lhs, rhs = d[k - 1][i][d[k][j]], d[k - 1][j - 1][d[k][i]]
                    if (lhs != rhs).any():
                        self._fail(f"d_{i} d_{j}", f"d_{j - 1} d_{i}", k, lhs != rhs)
        for k in range(self.N):
            ident = np.arange(len(self.cells[k]))
            for j in range(k + 1):
                for i in range(k + 2):
                    lhs = d[k + 1][i][s[k][j]]
                    if i < j:
                        rhs, name = s[k - 1][j - 1][d[k][i]], f"s_{j - 1} d_{i}"
                    elif i in (j, j + 1):
                        rhs, name = ident, "id"
                    else:
                        rhs, name = s[k - 1][j][d[k][i - 1]], f"s_{j} d_{i - 1}"
                    if (lhs != rhs).any():
                        self._fail(f"d_{i} s_{j}", name, k, lhs != rhs)
        for k in range(self.N - 1):
            for j in range(k + 1):
                for i in range(j + 1):
                    lhs, rhs = s[k + 1][i][s[k][j]], s[k + 1][j + 1][s[k][i]]
                    if (lhs != rhs).any():
                        self._fail(f"s_{i} s_{j}", f"s_{j + 1} s_{i}", k, lhs != rhs)

    # ------------------------------------------------------------------ access

    def size(self, k: int) -> int:
        if k < 0:
            return 1  # the empty ordinal is sent to a point
        if k > self.N:
            raise TruncationError(f"level {k} exceeds truncation {self.N}")
        return len(self.cells[k])

    def sizes(self) -> list[int]:
        return [len(c) for c in self.cells]

    def act_array(self, f: SimplexMap) -> np.ndarray:
        """``X(f) : X_n → X_m`` as an index array, for ``f : [m] → [n]``."""
        key = (f.images, f.cod_n)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        m, n = f.dom_n, f.cod_n
        if max(m, n) > self.N:
            raise TruncationError(f"{f!r} leaves the truncation {self.N}")
        imgs = f.images
        if m < 0:
            out = np.zeros(self.size(n), dtype=np.int64)
        elif n < 0:
            raise ValueError("no map from a nonempty ordinal to the empty one")
        elif f.is_identity():
            out = np.arange(len(self.cells[n]))
        else:
            y = next((y for y in range(m) if imgs[y] == imgs[y + 1]), None)
            if y is not None:
                rest = _raw(imgs[: y + 1] + imgs[y + 2:], n)
                out = self.s[m - 1][y][self.act_array(rest)]
            else:
                i = max(v for v in range(n + 1) if v not in set(imgs))
                rest = _raw(tuple(v if v < i else v - 1 for v in imgs), n - 1)
                out = self.act_array(rest)[self.d[n][i]]
        out.setflags(write=False)
        self._memo[key] = out
        return out

    def act(self, f: SimplexMap, cell):
        """Apply ``X(f)`` to a cell given by id (returns an id) or position."""
        if isinstance(cell, str):
            pos = self.index[f.cod_n][cell]
            return self.cells[f.dom_n][int(self.act_array(f)[pos])]
        return int(self.act_array(f)[cell])

    # ------------------------------------------------------------------ io

    def to_dict(self) -> dict:
        d = [[[self.cells[k - 1][v] for v in a] for a in row] for k, row in enumerate(self.d)]
        s = [[[self.cells[k + 1][v] for v in a] for a in row] for k, row in enumerate(self.s)]
        return {"truncation": self.N, "cells": self.cells, "d": d, "s": s, "name": self.name}

    @classmethod
    def from_dict(cls, data: dict) -> "FiniteSimplicialSet":
        try:
            N = int(data["truncation"])
            cells = [list(map(str, level)) for level in data["cells"]]
            if len(cells) != N + 1:
                raise FixtureFormatError("cells must list every level 0..truncation")
            index = [{c: i for i, c in enumerate(level)} for level in cells]

            def lookup(level: int, ids) -> list[int]:
                try:
                    return [index[level][str(x)] for x in ids]
                except KeyError as exc:
                    raise FixtureFormatError(f"unknown cell {exc.args[0]!r} at level {level}") from None

            d = [[lookup(k - 1, a) for a in row] if k else [] for k, row in enumerate(data["d"])]
            s = [[lookup(k + 1, a) for a in row] for k, row in enumerate(data["s"])]
        except (KeyError, TypeError, IndexError) as exc:
            raise FixtureFormatError(f"malformed simplicial set: {exc}") from None
        return cls(N, cells, d, s, str(data.get("name", "")))

    @classmethod
    def load(cls, path) -> "FiniteSimplicialSet":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise FixtureFormatError(f"{path}: not valid JSON ({exc})") from None
        return cls.from_dict(data)

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()))

    def truncate(self, N: int) -> "FiniteSimplicialSet":
        if N > self.N:
            raise TruncationError(f"cannot extend truncation {self.N} to {N}")
        return FiniteSimplicialSet(N, self.cells[: N + 1], self.d[: N + 1], self.s[:N], self.name)

    def __repr__(self) -> str:
        return f"FiniteSimplicialSet({self.name or '?'}, N={self.N}, sizes={self.sizes()})"


# ---------------------------------------------------------------------- builders


def from_functor(
    N: int,
    level: Callable[[int], Sequence[Hashable]],
    face: Callable[[int, object], object],
    degen: Callable[[int, object], object],
    label: Callable[[object], str] = str,
    name: str = "",
) -> FiniteSimplicialSet:
    """Tabulate a simplicial set given by formulas on explicit cells."""
    levels = [list(level(k)) for k in range(N + 1)]
    pos = [{c: i for i, c in enumerate(lv)} for lv in levels]
    d = [[] if k == 0 else [[pos[k - 1][face(i, c)] for c in levels[k]] for i in range(k + 1)] for k in range(N + 1)]
    s = [[[pos[k + 1][degen(i, c)] for c in levels[k]] for i in range(k + 1)] for k in range(N)]
    cells = [[label(c) for c in lv] for lv in levels]
    return FiniteSimplicialSet(N, cells, d, s, name)


def _delete(i: int, t: tuple) -> tuple:
    return t[:i] + t[i + 1:]


def _repeat(i: int, t: tuple) -> tuple:
    return t[: i + 1] + t[i:]


def nerve_poset(elements: Sequence, leq: Iterable[tuple], N: int, name: str = "") -> FiniteSimplicialSet:
    """Nerve of a finite poset given by generating relations ``a ≤ b``."""
    elements = list(elements)
    rel = {(a, a) for a in elements} | {tuple(p) for p in leq}
    changed = True
    while changed:
        extra = {(a, c) for a, b in rel for b2, c in rel if b == b2} - rel
        changed = bool(extra)
        rel |= extra
    if any((b, a) in rel and a != b for a, b in rel):
        raise ValueError("relation is not antisymmetric")

    def level(k):
        return [ch for ch in product(elements, repeat=k + 1) if all((a, b) in rel for a, b in zip(ch, ch[1:]))]

    return from_functor(N, level, _delete, _repeat, lambda c: "-".join(map(str, c)), name)


def nerve_monoid(table: Sequence[Sequence[int]], N: int, names: Sequence[str] | None = None, name: str = "") -> FiniteSimplicialSet:
    """Nerve of a finite monoid given by its multiplication table."""
    M = len(table)
    names = list(names) if names is not None else [str(a) for a in range(M)]
    mul = [list(map(int, row)) for row in table]
    if any(len(row) != M or min(row) < 0 or max(row) >= M for row in mul):
        raise ValueError("multiplication table must be square with entries in range")
    for a, b, c in product(range(M), repeat=3):
        if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
            raise ValueError(f"table is not associative at ({names[a]}, {names[b]}, {names[c]})")
    units = [e for e in range(M) if all(mul[e][a] == a == mul[a][e] for a in range(M))]
    if not units:
        raise ValueError("table has no two-sided unit")
    e = units[0]

    def face(i, t):
        k = len(t)
        if i == 0:
            return t[1:]
        if i == k:
            return t[:-1]
        return t[: i - 1] + (mul[t[i - 1]][t[i]],) + t[i + 1:]

    def degen(i, t):
        return t[:i] + (e,) + t[i:]

    def label(t):
        return "(" + ",".join(names[a] for a in t) + ")"

    return from_functor(N, lambda k: list(product(range(M), repeat=k)), face, degen, label, name)


def simplex_subset(m: int, generators: Iterable[Iterable[int]], N: int, name: str = "") -> FiniteSimplicialSet:
    """The simplicial subset of ``Δ^m`` generated by the given vertex sets."""
    gens = [frozenset(g) for g in generators]

    def level(k):
        return [f for f in combinations_with_replacement(range(m + 1), k + 1) if any(set(f) <= g for g in gens)]

    label = (lambda f: "".join(map(str, f))) if m < 10 else (lambda f: "-".join(map(str, f)))
    return from_functor(N, level, _delete, _repeat, label, name)


def point(N: int) -> FiniteSimplicialSet:
    return nerve_monoid([[0]], N, ["e"], name="point")


def boundary_simplex(m: int, N: int) -> FiniteSimplicialSet:
    full = range(m + 1)
    return simplex_subset(m, [set(full) - {x} for x in full], N, name=f"boundary-{m}")


def random_fixture(seed: int, N: int, m: int = 3) -> FiniteSimplicialSet:
    """A seeded random simplicial subset of ``Δ^m`` generated by random faces.

    Draws are repeated (deterministically) until the result is not the nerve
    of a category, i.e. some path ``ab, bc`` has no filling triangle.
    """
    rng = np.random.default_rng(seed)
    faces = [set(c) for r in (2, 3) for c in combinations(range(m + 1), r)]
    while True:
        pick = rng.random(len(faces)) < 0.45
        gens = [f for f, p in zip(faces, pick) if p] + [{v} for v in range(m + 1)]
        edges = {frozenset(e) for g in gens for e in combinations(sorted(g), 2)}
        tris = {frozenset(t) for g in gens if len(g) == 3 for t in [g]}
        open_path = any(
            frozenset({a, b}) in edges and frozenset({b, c}) in edges and frozenset({a, b, c}) not in tris
            for a, b, c in combinations(range(m + 1), 3)
        )
        if open_path:
            return simplex_subset(m, gens, N, name=f"random-{seed}")


Z2_TABLE = [[0, 1], [1, 0]]


def fixture_corpus(N: int = 10, seed: int = 7) -> dict[str, FiniteSimplicialSet]:
    """The six reference simplicial sets used by the equivalence checks."""
    return {
        "nerve-chain": nerve_poset([0, 1], [(0, 1)], N, name="nerve-chain"),
        "nerve-chain-2": nerve_poset([0, 1, 2], [(0, 1), (1, 2)], N, name="nerve-chain-2"),
        "nerve-z2": nerve_monoid(Z2_TABLE, N, ["e", "g"], name="nerve-z2"),
        "point": point(N),
        "boundary-2": boundary_simplex(2, N),
        "random": random_fixture(seed, N),
    }


def path_object(X: FiniteSimplicialSet, side: str = "left") -> FiniteSimplicialSet:
    """``X ∘ ([0] ⋆ −)`` (left) or ``X ∘ (− ⋆ [0])`` (right), truncated at ``N - 1``."""
    if X.N < 1:
        raise TruncationError("a path object needs truncation at least 1")
    if side not in ("left", "right"):
        raise ValueError(f"unknown side {side!r}")
    shift = 1 if side == "left" else 0
    N = X.N - 1
    cells = X.cells[1:]
    d = [[]] + [[X.d[m + 1][i + shift] for i in range(m + 1)] for m in range(1, N + 1)]
    s = [[X.s[m + 1][i + shift] for i in range(m + 1)] for m in range(N)]
    return FiniteSimplicialSet(N, cells, d, s, name=f"P{'◁' if side == 'left' else '▷'}{X.name}")
