"""Precovers of ``[n]``: families of subsets viewed as claws of inclusions.

A precover is compared as an unordered family.  Its claw view (one inclusion
prong per member, in stored order) is rebuilt when a cube is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx

from .claws import Claw, Cube, _subsets, classify_claw
from .simplex import PreconditionError, _raw, inclusion


def _member(x) -> tuple[int, ...]:
    # "013" is shorthand for (0, 1, 3); labels above 9 need a sequence
    if isinstance(x, str):
        return tuple(sorted({int(ch) for ch in x}))
    return tuple(sorted({int(v) for v in x}))


def format_subset(I: Sequence[int]) -> str:
    if all(v < 10 for v in I):
        return "".join(map(str, I))
    return "{" + ",".join(map(str, I)) + "}"


@dataclass(frozen=True)
class Precover:
    n: int
    subsets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("a precover lives on a nonempty ordinal")
        members = tuple(sorted(_member(I) for I in self.subsets))
        for I in members:
            if not I:
                raise ValueError("precover members must be nonempty")
            if I[0] < 0 or I[-1] > self.n:
                raise ValueError(f"member {I} is not a subset of [{self.n}]")
        object.__setattr__(self, "subsets", members)

    @classmethod
    def of(cls, n: int, members: Iterable) -> "Precover":
        return cls(n, tuple(members))

    def claw(self) -> Claw:
        return Claw(self.n, tuple(inclusion(I, self.n) for I in self.subsets))

    def is_compatible(self) -> bool:
        return classify_claw(self.claw()).compatible

    def is_nondegenerate(self) -> bool:
        full = tuple(range(self.n + 1))
        return full not in self.subsets

    def labels(self) -> list[str]:
        return [format_subset(I) for I in self.subsets]

    def __repr__(self) -> str:
        return f"Precover([{self.n}]; {', '.join(self.labels())})"


@dataclass(frozen=True)
class SubsetComplex:
    """A downward closed family of nonempty subsets of ``[n]``."""

    n: int
    faces: frozenset

    def maximal_faces(self) -> tuple[tuple[int, ...], ...]:
        fs = self.faces
        return tuple(sorted(F for F in fs if not any(len(G) > len(F) and set(F) <= set(G) for G in fs)))

    def __contains__(self, face) -> bool:
        return _member(face) in self.faces

    def __le__(self, other: "SubsetComplex") -> bool:
        return self.n == other.n and self.faces <= other.faces

    def is_full(self) -> bool:
        return tuple(range(self.n + 1)) in self.faces


def subset_complex(p: Precover) -> SubsetComplex:
    faces = set()
    for I in p.subsets:
        for r in range(1, len(I) + 1):
            faces.update(combinations(I, r))
    return SubsetComplex(p.n, frozenset(faces))


def intersection_cube(p: Precover) -> Cube:
    """Corners ``⋂_{t∈T} I_t`` (``[n]`` for ``T = ∅``) with inclusions as edges."""
    S = tuple(range(len(p.subsets)))
    full = frozenset(range(p.n + 1))
    sets = {}
    for T in _subsets(S):
        inter = full
        for t in T:
            inter = inter & set(p.subsets[t])
        sets[T] = tuple(sorted(inter))
    corners = {T: len(v) - 1 for T, v in sets.items()}
    edges = {}
    for T2, elems in sets.items():
        for s in T2:
            T = T2 - {s}
            pos = {x: k for k, x in enumerate(sets[T])}
            edges[(T, T2)] = _raw(tuple(pos[x] for x in elems), corners[T])
    return Cube(S, corners, edges, sets)


def reduce(p: Precover) -> Precover:
    """Keep only the inclusion-maximal members (each once)."""
    uniq = sorted(set(p.subsets))
    keep = [I for I in uniq if not any(J != I and set(I) <= set(J) for J in uniq)]
    return Precover(p.n, tuple(keep))


@dataclass(frozen=True)
class RefinementResult:
    refines: bool
    degenerate: bool

    def __bool__(self) -> bool:
        return self.refines


def is_refinement(p2: Precover, p: Precover) -> RefinementResult:
    """Whether ``p2 ⪯ p``; degenerate when both complexes coincide."""
    if p2.n != p.n:
        raise PreconditionError(f"precovers on [{p2.n}] and [{p.n}] cannot be compared")
    refines = all(any(set(I2) <= set(I) for I in p.subsets) for I2 in p2.subsets)
    back = all(any(set(I) <= set(I2) for I2 in p2.subsets) for I in p.subsets)
    return RefinementResult(refines, refines and back)


def restrict(p: Precover, I: Iterable[int]) -> Precover:
    """``(J ∩ I)_J`` relabeled along ``I ≅ [|I| - 1]``; empty intersections are dropped."""
    I = _member(I)
    if not I:
        raise PreconditionError("cannot restrict to the empty subset")
    if I[-1] > p.n:
        raise PreconditionError(f"{I} is not a subset of [{p.n}]")
    pos = {x: k for k, x in enumerate(I)}
    members = []
    for J in p.subsets:
        cut = [pos[x] for x in J if x in pos]
        if cut:
            members.append(cut)
    return Precover(len(I) - 1, tuple(members))


def _points(A: int, n: int) -> int:
    """Bitmask of the points ``(x-1, x)`` touched by the vertex set ``A``."""
    out = 0
    for x in range(1, n + 1):
        if (A >> (x - 1)) & 1 or (A >> x) & 1:
            out |= 1 << (x - 1)
    return out


def enumerate_covers(n: int, k: int, compatible: bool = True, nondegenerate: bool = True) -> list[Precover]:
    """Families of ``k + 1`` subsets of ``[n]``, as unordered multisets.

    With ``compatible`` the members are ``[n] \\ A_s`` for sets ``A_s`` whose
    touched points are pairwise disjoint.  Without ``nondegenerate`` the
    member ``[n]`` (that is ``A_s = ∅``) is admitted.
    """
    if n < 0 or k < 0:
        raise ValueError("need n >= 0 and k >= 0")
    top = (1 << (n + 1)) - 1
    low = 0 if not nondegenerate else 1
    # A ranges over removed vertex sets; the member is its complement
    if compatible:
        cands = [A for A in range(low, top)]
    else:
        cands = [top ^ M for M in range(1, top + 1) if not (nondegenerate and M == top)]
    cands.sort()
    pts = [_points(A, n) for A in cands] if compatible else [0] * len(cands)
    found: list[tuple[int, ...]] = []

    def grow(start: int, used: int, chosen: list[int]) -> None:
        if len(chosen) == k + 1:
            found.append(tuple(chosen))
            return
        for j in range(start, len(cands)):
            if pts[j] & used:
                continue
            chosen.append(j)
            grow(j, used | pts[j], chosen)
            chosen.pop()

    grow(0, 0, [])
    out = set()
    for combo in found:
        members = []
        for j in combo:
            M = top ^ cands[j]
            members.append(tuple(x for x in range(n + 1) if (M >> x) & 1))
        out.add(Precover(n, tuple(members)))
    return sorted(out, key=lambda p: p.subsets)


@dataclass
class RefinementGraph:
    graph: nx.DiGraph
    connected: bool
    edges_checked: int
    failures: list


def refinement_graph(n: int, k: int) -> RefinementGraph:
    """Grow-one-member moves between nondegenerate compatible ``[k]``-covers.

    Every arrow ``F → F'`` is checked to be a refinement into another vertex
    whose restriction to the grown member is again compatible.
    """
    g = nx.DiGraph()
    if n < 2 * k:
        return RefinementGraph(g, True, 0, [])
    vertices = enumerate_covers(n, k)
    g.add_nodes_from(vertices)
    vset = set(vertices)
    full = set(range(n + 1))
    failures = []
    checked = 0
    for F in vertices:
        for I in set(F.subsets):
            for x in sorted(full - set(I)):
                grown = tuple(sorted(set(I) | {x}))
                if len(grown) == n + 1:
                    continue
                F2 = reduce(Precover(n, F.subsets + (grown,)))
                checked += 1
                ok = F2 in vset and bool(is_refinement(F, F2)) and restrict(F, grown).is_compatible()
                if not ok:
                    failures.append((F, grown, F2))
                g.add_edge(F, F2, member=I, added=x)
    connected = nx.is_weakly_connected(g) if len(g) else True
    return RefinementGraph(g, connected, checked, failures)
