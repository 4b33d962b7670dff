"""Claws on ``[n]``, their compatibility classes and their Čech cubes.

A claw is a tuple of monotone maps ``f_s : I_s → [n]`` indexed by
``S = {0, ..., k}``.  Cubes are stored contravariantly: ``corner(T)`` is an
ordinal and for ``T ⊂ T'`` with one extra element there is an edge map
``corner(T') → corner(T)``.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Literal, Sequence

import numpy as np

from . import cyclic as cyc
from .simplex import (
    PreconditionError,
    SimplexMap,
    _raw,
    classify_map,
    compose,
    enumerate_maps,
)

Category = Literal["delta", "lambda"]
_CATEGORY_ALIASES = {"delta": "delta", "Δ": "delta", "lambda": "lambda", "Λ": "lambda"}


def _category(name: str) -> str:
    try:
        return _CATEGORY_ALIASES[name]
    except KeyError:
        raise ValueError(f"unknown category {name!r}; use 'delta' or 'lambda'") from None


class NoCubeError(ValueError):
    """The claw is not backwards compatible, so no Čech cube exists."""


class ConsistencyError(AssertionError):
    """Criterion and oracle disagree."""


@dataclass(frozen=True)
class Claw:
    n: int
    prongs: tuple[SimplexMap, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "prongs", tuple(self.prongs))
        for f in self.prongs:
            if f.cod_n != self.n:
                raise ValueError(f"prong {f!r} does not land in [{self.n}]")

    @classmethod
    def from_fibers(cls, rows: Sequence[Sequence[int]]) -> "Claw":
        prongs = tuple(SimplexMap.from_fibers(r) for r in rows)
        return cls(len(rows[0]) - 1, prongs)

    @classmethod
    def from_images(cls, n: int, rows: Sequence[Sequence[int]]) -> "Claw":
        return cls(n, tuple(SimplexMap(tuple(r), n) for r in rows))

    @property
    def S(self) -> tuple[int, ...]:
        return tuple(range(len(self.prongs)))

    def fiber_table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(f.fibers() for f in self.prongs)

    def subclaw(self, T: Sequence[int]) -> "Claw":
        return Claw(self.n, tuple(self.prongs[t] for t in T))

    def is_left_active(self) -> bool:
        return all(f.images and f.images[0] == 0 for f in self.prongs)

    def is_right_active(self) -> bool:
        return all(f.images and f.images[-1] == self.n for f in self.prongs)

    def is_injective(self) -> bool:
        return all(max(f.fibers(), default=0) <= 1 for f in self.prongs)

    def is_nondegenerate(self) -> bool:
        return not any(f.is_identity() for f in self.prongs)

    def in_delta(self) -> bool:
        return self.n >= 0 and all(f.dom_n >= 0 for f in self.prongs)

    def __repr__(self) -> str:
        return f"Claw([{self.n}]; " + ", ".join(map(repr, self.prongs)) + ")"


@dataclass(frozen=True)
class CompatibilityReport:
    backwards_compatible: bool
    compatible: bool
    cyclically_compatible: bool
    bc1: bool
    bc2: bool
    witnesses: dict = field(default_factory=dict)


def classify_claw(c: Claw) -> CompatibilityReport:
    fib = c.fiber_table()
    S = range(len(fib))
    wit: dict[str, tuple] = {}
    for i in range(c.n + 1):
        big = [s for s in S if fib[s][i] > 1]
        if len(big) > 1 and "backwards" not in wit:
            wit["backwards"] = (i, big[0], big[1])
        special = [s for s in S if fib[s][i] != 1]
        if len(special) > 1 and "bc1" not in wit:
            wit["bc1"] = (i, special[0], special[1])
    for i in range(1, c.n + 1):
        missing = [s for s in S if fib[s][i - 1] == 0 or fib[s][i] == 0]
        if len(missing) > 1 and "bc2" not in wit:
            wit["bc2"] = (i, missing[0], missing[1])
    bw = "backwards" not in wit
    bc1 = "bc1" not in wit
    bc2 = "bc2" not in wit
    compatible = bc1 and bc2
    cyclic_ok = compatible
    if compatible and c.n >= 0:
        off = [s for s in S if fib[s][0] == 0 or fib[s][c.n] == 0]
        if len(off) > 1:
            wit["cyclic"] = (off[0], off[1])
            cyclic_ok = False
    elif not compatible:
        cyclic_ok = False
    return CompatibilityReport(bw, compatible, cyclic_ok, bc1, bc2, wit)


def render_claw(c: Claw) -> str:
    rows = []
    for fib in c.fiber_table():
        rows.append(" ".join("*" if v == 1 else "∅" if v == 0 else str(v) for v in fib))
    return "\n".join(rows)


# --------------------------------------------------------------------------- cubes


def _subsets(S: Sequence[int]) -> list[frozenset]:
    out = []
    for r in range(len(S) + 1):
        out.extend(frozenset(T) for T in combinations(S, r))
    return out


@dataclass
class Cube:
    """A cube ``P(S)^op → Δ₊`` stored cornerwise."""

    S: tuple
    corners: dict
    edges: dict
    labels: dict | None = None

    def __post_init__(self) -> None:
        self.S = tuple(self.S)
        for T in _subsets(self.S):
            if T not in self.corners:
                raise ValueError(f"missing corner {set(T)}")
            for s in T:
                e = self.edges[(T - {s}, T)]
                if e.dom_n != self.corners[T] or e.cod_n != self.corners[T - {s}]:
                    raise ValueError("edge does not match its corners")
        for T in _subsets(self.S):
            rest = [s for s in self.S if s not in T]
            for a, b in combinations(rest, 2):
                top = T | {a, b}
                lhs = compose(self.edges[(T, T | {a})], self.edges[(T | {a}, top)])
                rhs = compose(self.edges[(T, T | {b})], self.edges[(T | {b}, top)])
                if lhs != rhs:
                    raise ValueError(f"2-face over {set(T)} in directions {a},{b} does not commute")

    def corner(self, T) -> int:
        return self.corners[frozenset(T)]

    def edge(self, T, T2) -> SimplexMap:
        return self.edges[(frozenset(T), frozenset(T2))]

    def max_corner_size(self) -> int:
        return max(v + 1 for v in self.corners.values())

    def has_empty_corner(self) -> bool:
        return any(v < 0 for v in self.corners.values())

    def faces(self) -> Iterator[tuple[frozenset, object, object, "Cube"]]:
        """Every 2-dimensional face, re-indexed over ``{0, 1}``."""
        for T in _subsets(self.S):
            rest = [s for s in self.S if s not in T]
            for a, b in combinations(rest, 2):
                yield T, a, b, square(
                    self.edges[(T | {a}, T | {a, b})],
                    self.edges[(T | {b}, T | {a, b})],
                    self.edges[(T, T | {a})],
                    self.edges[(T, T | {b})],
                )

    def is_degenerate(self) -> bool:
        """Some direction consists of isomorphisms only."""
        for s in self.S:
            if all(self.edges[(T, T | {s})].is_identity() for T in _subsets(self.S) if s not in T):
                return True
        return False


def square(g: SimplexMap, g2: SimplexMap, h: SimplexMap, h2: SimplexMap) -> Cube:
    """The square ``h∘g = h2∘g2`` with ``g : A → B``, ``h : B → N`` and so on."""
    e, a, b, ab = frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})
    corners = {e: h.cod_n, a: h.dom_n, b: h2.dom_n, ab: g.dom_n}
    edges = {(e, a): h, (e, b): h2, (a, ab): g, (b, ab): g2}
    return Cube((0, 1), corners, edges)


def cech_cube(c: Claw) -> Cube:
    """The Čech cube ``T ↦ ⋆_i ∏_{t∈T} f_t⁻¹{i}``."""
    rep = classify_claw(c)
    if not rep.backwards_compatible:
        i, s, s2 = rep.witnesses["backwards"]
        raise NoCubeError(f"not backwards compatible: column {i} has large fibers in prongs {s} and {s2}")
    fibs = [[f.preimage(i) for i in range(c.n + 1)] for f in c.prongs]
    S = c.S
    labels: dict[frozenset, list] = {}
    index: dict[frozenset, dict] = {}
    for T in _subsets(S):
        Ts = sorted(T)
        elems = []
        for i in range(c.n + 1):
            for xs in product(*(fibs[t][i] for t in Ts)):
                elems.append((i, xs))
        labels[T] = elems
        index[T] = {el: k for k, el in enumerate(elems)}
    corners = {T: len(labels[T]) - 1 for T in labels}
    edges = {}
    for T2 in labels:
        Ts = sorted(T2)
        for pos, s in enumerate(Ts):
            T = T2 - {s}
            idx = index[T]
            imgs = tuple(idx[(i, xs[:pos] + xs[pos + 1:])] for i, xs in labels[T2])
            edges[(T, T2)] = _raw(imgs, corners[T])
    return Cube(S, corners, edges, labels)


def limit_size(prongs: Sequence[SimplexMap]) -> int:
    """Brute-force size of the limit of a claw: tuples with equal images."""
    if not prongs:
        return 1
    return sum(
        1
        for xs in product(*(range(f.dom_n + 1) for f in prongs))
        if len({f.images[x] for f, x in zip(prongs, xs)}) == 1
    )


# --------------------------------------------------------------------------- pushout oracle


@dataclass(frozen=True)
class OracleResult:
    is_pushout: bool
    failing_apex: int | None
    apex_bound: int
    degraded: bool
    method: str

    def __bool__(self) -> bool:
        return self.is_pushout


def _restrict_threshold(images: tuple[int, ...], k: int) -> int:
    # u_k sends the first k elements to 0; its pullback is u_{k'}
    return bisect.bisect_left(images, k)


def _multichain_counts(order: np.ndarray, apex_bound: int) -> list[int]:
    """``counts[p]`` = number of weakly increasing p-chains in a finite poset."""
    size = order.shape[0]
    counts = [1]
    if size == 0:
        return counts + [0] * apex_bound
    if math.comb(size + apex_bound, apex_bound) < 2**62:
        z = order.astype(np.int64)
        v = np.ones(size, dtype=np.int64)
    else:
        z = order.astype(object)
        v = np.ones(size, dtype=object)
    for p in range(1, apex_bound + 1):
        if p > 1:
            v = z.T @ v
        counts.append(int(v.sum()))
    return counts


def _delta_square_profile(g: tuple, g2: tuple, h: tuple, h2: tuple, sizes: tuple, apex_bound: int) -> int | None:
    """First apex ``p`` at which the comparison map fails to be bijective.

    ``Hom(X, [p])`` is identified with weakly increasing p-chains in
    ``Hom(X, [1])`` through the threshold sets ``γ⁻¹{j, ..., p}``, and a cocone
    with apex ``[p]`` is a p-chain of cocones with apex ``[1]``.
    """
    nA, nB, nB2, nN = sizes
    cocones = [
        (kb, kb2)
        for kb in range(nB + 1)
        for kb2 in range(nB2 + 1)
        if _restrict_threshold(g, kb) == _restrict_threshold(g2, kb2)
    ]
    images = {(_restrict_threshold(h, kn), _restrict_threshold(h2, kn)) for kn in range(nN + 1)}
    injective = len(images) == nN + 1
    if apex_bound < 1:
        return None
    if not injective:
        return 1
    arr = np.array(cocones, dtype=np.int64).reshape(-1, 2)
    # pointwise order of maps to [1] reverses the threshold order
    order = (arr[:, None, 0] >= arr[None, :, 0]) & (arr[:, None, 1] >= arr[None, :, 1])
    chain = np.arange(nN + 1)
    n_order = chain[:, None] >= chain[None, :]
    lhs = _multichain_counts(n_order, apex_bound)
    rhs = _multichain_counts(order, apex_bound)
    for p in range(1, apex_bound + 1):
        if lhs[p] != rhs[p]:
            return p
    return None


def _pull_cut(images: tuple[int, ...], cut: int, size: int) -> int:
    # a map X -> <0> is a cut c: the order on X starts at element c
    return bisect.bisect_left(images, cut or size) % len(images)


def _lambda_square_profile(g: tuple, g2: tuple, h: tuple, h2: tuple, sizes: tuple, apex_bound: int) -> int | None:
    """Same question in Λ, fibred over the linear orders ``Λ(X, ⟨0⟩)``.

    ``Λ(X, ⟨p⟩)`` splits over ``Λ(X, ⟨0⟩)`` into copies of ``Δ(X_ℓ, [p])``,
    where ``X_ℓ`` is ``X`` with the rotated order ``ℓ``.  The comparison map is
    bijective at ``⟨p⟩`` exactly when it is bijective at ``⟨0⟩`` and each
    rotated square is a bijection at ``[p]`` in Δ.
    """
    nA, nB, nB2, nN = sizes
    level0 = {
        (b, b2)
        for b in range(nB)
        for b2 in range(nB2)
        if _pull_cut(g, b, nB) == _pull_cut(g2, b2, nB2)
    }
    hits = [(_pull_cut(h, c, nN), _pull_cut(h2, c, nN)) for c in range(nN)]
    if len(set(hits)) != len(hits) or set(hits) != level0:
        return 0
    worst: int | None = None
    for cN, (cB, cB2) in enumerate(hits):
        cA = _pull_cut(g, cB, nB)
        ht = tuple((h[(cB + j) % nB] - cN) % nN for j in range(nB))
        ht2 = tuple((h2[(cB2 + j) % nB2] - cN) % nN for j in range(nB2))
        gt = tuple((g[(cA + j) % nA] - cB) % nB for j in range(nA))
        gt2 = tuple((g2[(cA + j) % nA] - cB2) % nB2 for j in range(nA))
        for seq in (ht, ht2, gt, gt2):
            if any(b < a for a, b in zip(seq, seq[1:])):
                raise ConsistencyError("rotated square is not monotone")
        p = _delta_cached(gt, gt2, ht, ht2, sizes, apex_bound)
        if p is not None and (worst is None or p < worst):
            worst = p
    return worst


@lru_cache(maxsize=None)
def _delta_cached(g, g2, h, h2, sizes, apex_bound):
    return _delta_square_profile(g, g2, h, h2, sizes, apex_bound)


@lru_cache(maxsize=None)
def _lambda_cached(g, g2, h, h2, sizes, apex_bound):
    return _lambda_square_profile(g, g2, h, h2, sizes, apex_bound)


def _square_maps(sq: Cube) -> tuple[SimplexMap, SimplexMap, SimplexMap, SimplexMap]:
    e = frozenset()
    if len(sq.S) != 2:
        raise ValueError("colimit_oracle needs a square")
    s0, s1 = sq.S
    a, b, ab = frozenset({s0}), frozenset({s1}), frozenset({s0, s1})
    return sq.edges[(a, ab)], sq.edges[(b, ab)], sq.edges[(e, a)], sq.edges[(e, b)]


def _brute_force_profile(sq: Cube, category: str, apex_bound: int) -> int | None:
    g, g2, h, h2 = _square_maps(sq)
    for p in range(apex_bound + 1):
        if category == "delta":
            hom = lambda k: enumerate_maps(k, p)  # noqa: E731
            comp = compose
            lift = lambda f: f  # noqa: E731
        else:
            hom = lambda k: cyc.enumerate_cyclic_maps(k, p)  # noqa: E731
            comp = cyc.compose_cyclic
            lift = cyc.project_from_delta
        G, G2, H, H2 = (lift(x) for x in (g, g2, h, h2))
        cocones = {
            (b, b2)
            for b in hom(g.cod_n)
            for b2 in hom(g2.cod_n)
            if comp(b, G) == comp(b2, G2)
        }
        images = [(comp(y, H), comp(y, H2)) for y in hom(h.cod_n)]
        if len(set(images)) != len(images) or set(images) != cocones:
            return p
    return None


def colimit_oracle(
    sq: Cube,
    category: str = "delta",
    apex_bound: int | None = None,
    method: str = "thresholds",
) -> OracleResult:
    """Test the pushout property of a commuting square against apexes ``≤ apex_bound``.

    ``method="thresholds"`` counts cocones exactly through maps to ``[1]``
    (and, in Λ, through the linear orders ``Λ(X, ⟨0⟩)``); ``method="enumerate"``
    lists every cocone literally and is only practical for small squares.
    """
    category = _category(category)
    need = sq.max_corner_size() + 2
    if apex_bound is None:
        apex_bound = need
    degraded = apex_bound < need
    if sq.has_empty_corner():
        raise PreconditionError("squares with an empty corner are outside Δ")
    g, g2, h, h2 = _square_maps(sq)
    if method == "enumerate":
        fail = _brute_force_profile(sq, category, apex_bound)
    else:
        sizes = (g.dom_n + 1, g.cod_n + 1, g2.cod_n + 1, h.cod_n + 1)
        cached = _delta_cached if category == "delta" else _lambda_cached
        fail = cached(g.images, g2.images, h.images, h2.images, sizes, apex_bound)
    return OracleResult(fail is None, fail, apex_bound, degraded, method)


def is_strongly_bicartesian(
    c: Claw,
    category: str = "delta",
    mode: str = "criterion",
    apex_bound: int | None = None,
) -> bool:
    category = _category(category)
    if mode == "criterion":
        rep = classify_claw(c)
        return rep.compatible if category == "delta" else rep.cyclically_compatible
    if mode == "oracle":
        return _oracle_verdict(c, category, apex_bound)
    if mode == "both":
        a = is_strongly_bicartesian(c, category, "criterion")
        b = _oracle_verdict(c, category, apex_bound)
        if a != b:
            raise ConsistencyError(f"criterion says {a}, oracle says {b} for {c!r} in {category}")
        return a
    raise ValueError(f"unknown mode {mode!r}")


def _oracle_verdict(c: Claw, category: str, apex_bound: int | None) -> bool:
    if not classify_claw(c).backwards_compatible:
        return False
    cube = cech_cube(c)
    if cube.has_empty_corner():
        return False
    bound = apex_bound if apex_bound is not None else c.n + 4
    return all(colimit_oracle(face, category, bound) for *_, face in cube.faces())


# --------------------------------------------------------------------------- rotation, factorization


def rotate_claw(c: Claw, m: int) -> Claw:
    """The rotation ``F^{+m}``; the fiber over ``j`` moves to ``j + m``."""
    size = c.n + 1
    rows = []
    for fib in c.fiber_table():
        rows.append([fib[(j - m) % size] for j in range(size)])
    return Claw.from_fibers(rows)


def primitive_factorize(f: SimplexMap, drop_identities: bool = False) -> list[SimplexMap]:
    """Chain ``[f̄_n, ..., f̄_0]`` through ``I_i = f⁻¹[i] ⋆ [n∖i]`` with ``f = f̄_0 ∘ ... ∘ f̄_n``."""
    if f.dom_n < 0 or f.cod_n < 0:
        raise PreconditionError("primitive_factorize needs a map in Δ")
    n = f.cod_n
    fib = f.fibers()
    below = [0]
    for c in fib:
        below.append(below[-1] + c)
    chain = []
    for i in range(n, -1, -1):
        a = below[i]
        imgs = tuple(range(a)) + (a,) * fib[i] + tuple(range(a + 1, a + 1 + n - i))
        step = _raw(imgs, a + n - i)
        if drop_identities and step.is_identity():
            continue
        chain.append(step)
    return chain


def _pullback_prong(phi: SimplexMap, f: SimplexMap) -> SimplexMap:
    """The base change of ``f`` along ``phi``, as a map into ``dom(phi)``."""
    cube = cech_cube(Claw(phi.cod_n, (phi, f)))
    return cube.edge({0}, {0, 1})


@dataclass
class Pasting:
    """A decomposition tree: either a leaf claw or a pasting along one direction."""

    claw: Claw
    direction: int | None = None
    parts: list["Pasting"] = field(default_factory=list)

    def leaves(self) -> list[Claw]:
        if self.direction is None:
            return [self.claw]
        out = []
        for p in self.parts:
            out.extend(p.leaves())
        return out

    def cube(self) -> Cube:
        if self.direction is None:
            return cech_cube(self.claw)
        return paste([p.cube() for p in self.parts], self.direction)


def paste(cubes: Sequence[Cube], s) -> Cube:
    """Paste cubes along direction ``s``; ``cubes[0]`` is the top piece."""
    S = cubes[0].S
    subs = _subsets(S)
    for upper, lower in zip(cubes, cubes[1:]):
        for T in subs:
            if s in T:
                continue
            if upper.corners[T] != lower.corners[T | {s}]:
                raise ValueError("cubes do not share a face")
            for t in T:
                if upper.edges[(T - {t}, T)] != lower.edges[(T - {t} | {s}, T | {s})]:
                    raise ValueError("cubes disagree on the shared face")
    top, bottom = cubes[0], cubes[-1]
    corners, edges = {}, {}
    for T in subs:
        corners[T] = (top if s in T else bottom).corners[T]
    for (T, T2), _ in bottom.edges.items():
        if s in T2 and s not in T:
            e = top.edges[(T, T2)]
            for piece in cubes[1:]:
                e = compose(piece.edges[(T, T2)], e)
            edges[(T, T2)] = e
        elif s in T2:
            edges[(T, T2)] = top.edges[(T, T2)]
        else:
            edges[(T, T2)] = bottom.edges[(T, T2)]
    return Cube(S, corners, edges)


def decompose_tree(c: Claw, category: str = "delta", primitive_only: bool = False) -> Pasting:
    category = _category(category)
    if not is_strongly_bicartesian(c, category, "criterion"):
        raise PreconditionError(f"{c!r} is not strongly biCartesian in {category}")
    return _split(c, list(c.S), primitive_only)


def _split(c: Claw, directions: list[int], primitive_only: bool) -> Pasting:
    if not directions:
        return Pasting(c)
    s, rest = directions[0], directions[1:]
    f = c.prongs[s]
    if classify_map(f).preprimitive:
        return _split(c, rest, primitive_only)
    chain = primitive_factorize(f, drop_identities=primitive_only)
    parts = []
    # composite of the factors below the current one, as a map into [n]
    below = [None] * len(chain)
    acc = None
    for j in range(len(chain) - 1, -1, -1):
        below[j] = acc
        acc = chain[j] if acc is None else compose(acc, chain[j])
    for j, step in enumerate(chain):
        phi = below[j]
        prongs = []
        for t, g in enumerate(c.prongs):
            if t == s:
                prongs.append(step)
            else:
                prongs.append(g if phi is None else _pullback_prong(phi, g))
        parts.append(_split(Claw(step.cod_n, tuple(prongs)), rest, primitive_only))
    return Pasting(c, s, parts)


def decompose_cube(c: Claw, category: str = "delta", primitive_only: bool = False) -> list[Claw]:
    """Preprimitive claws whose Čech cubes paste to ``cech_cube(c)``.

    Prongs are split in ascending order; inside one prong the factors follow
    ``primitive_factorize``.  Preprimitive prongs are left alone.
    """
    return decompose_tree(c, category, primitive_only).leaves()
